//! The module file format: a JSON object with unbounded integer entries.
//!
//! ```json
//! {
//!   "group": {"cyclic_orders": [2, 4]},
//!   "ring_exponent": 4,
//!   "diag": [2, 8],
//!   "generator_actions": [[[1, 0], [0, 1]], [[3, 0], [0, 5]]],
//!   "zeta_action": [[1, 0], [0, 1]]
//! }
//! ```
//!
//! Matrices are row-major. `ring_exponent` defaults to the group exponent.
//! `zeta_action` may be omitted only when φ(e) = 1 (e ≤ 2), where the ring
//! is Z and ζ_e acts canonically as +1 (e = 1) or −1 (e = 2). Parsing uses
//! arbitrary-precision JSON numbers, so entries of any size round-trip
//! exactly.

use num_bigint::BigInt;
use serde_json::Value;

use crate::cyclotomic::CycloRing;
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::matrix::IntMatrix;
use crate::module::GModule;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn as_object<'v>(v: &'v Value, what: &str) -> Result<&'v serde_json::Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| parse_err(format!("{what} must be a JSON object")))
}

fn as_array<'v>(v: &'v Value, what: &str) -> Result<&'v Vec<Value>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be a JSON array")))
}

fn as_bigint(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<BigInt>()
            .map_err(|_| parse_err(format!("{what} must be an integer, got {n}"))),
        _ => Err(parse_err(format!("{what} must be an integer"))),
    }
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    let b = as_bigint(v, what)?;
    b.to_string()
        .parse::<u64>()
        .map_err(|_| parse_err(format!("{what} out of range: {b}")))
}

fn parse_matrix(v: &Value, k: usize, what: &str) -> Result<IntMatrix> {
    let rows = as_array(v, what)?;
    if rows.len() != k {
        return Err(parse_err(format!(
            "{what} must have {k} rows, got {}",
            rows.len()
        )));
    }
    let mut m = IntMatrix::zeros(k, k);
    for (i, row) in rows.iter().enumerate() {
        let entries = as_array(row, &format!("{what} row {i}"))?;
        if entries.len() != k {
            return Err(parse_err(format!(
                "{what} row {i} must have {k} entries, got {}",
                entries.len()
            )));
        }
        for (j, e) in entries.iter().enumerate() {
            m.set(i, j, as_bigint(e, &format!("{what}[{i}][{j}]"))?);
        }
    }
    Ok(m)
}

/// Parse a module file. Structural errors (malformed JSON, wrong shapes,
/// unknown keys) are `Error::Parse`; the result is *not* validated against
/// the module axioms; run [`GModule::validate`] for that.
pub fn parse_module(text: &str) -> Result<GModule> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| parse_err(format!("malformed JSON: {e}")))?;
    let obj = as_object(&value, "module file")?;
    for key in obj.keys() {
        if !matches!(
            key.as_str(),
            "group" | "ring_exponent" | "diag" | "generator_actions" | "zeta_action"
        ) {
            return Err(parse_err(format!("unknown key `{key}`")));
        }
    }
    let group_obj = as_object(
        obj.get("group")
            .ok_or_else(|| parse_err("missing `group`"))?,
        "`group`",
    )?;
    for key in group_obj.keys() {
        if key != "cyclic_orders" {
            return Err(parse_err(format!("unknown key `group.{key}`")));
        }
    }
    let orders_val = group_obj
        .get("cyclic_orders")
        .ok_or_else(|| parse_err("missing `group.cyclic_orders`"))?;
    let orders: Vec<u64> = as_array(orders_val, "`group.cyclic_orders`")?
        .iter()
        .enumerate()
        .map(|(i, v)| as_u64(v, &format!("cyclic order {i}")))
        .collect::<Result<_>>()?;
    let group = FiniteAbelianGroup::new(orders)?;

    let ring_exponent = match obj.get("ring_exponent") {
        Some(v) => as_u64(v, "`ring_exponent`")?,
        None => group.exponent(),
    };
    if ring_exponent == 0 {
        return Err(parse_err("`ring_exponent` must be >= 1"));
    }
    let ring = CycloRing::new(ring_exponent);

    let diag: Vec<BigInt> = as_array(
        obj.get("diag").ok_or_else(|| parse_err("missing `diag`"))?,
        "`diag`",
    )?
    .iter()
    .enumerate()
    .map(|(i, v)| as_bigint(v, &format!("diag[{i}]")))
    .collect::<Result<_>>()?;
    let k = diag.len();

    let actions_val = obj
        .get("generator_actions")
        .ok_or_else(|| parse_err("missing `generator_actions`"))?;
    let actions_arr = as_array(actions_val, "`generator_actions`")?;
    if actions_arr.len() != group.factor_count() {
        return Err(parse_err(format!(
            "`generator_actions` must have {} matrices, got {}",
            group.factor_count(),
            actions_arr.len()
        )));
    }
    let generator_actions: Vec<IntMatrix> = actions_arr
        .iter()
        .enumerate()
        .map(|(i, v)| parse_matrix(v, k, &format!("generator action {i}")))
        .collect::<Result<_>>()?;

    let zeta_action = match obj.get("zeta_action") {
        Some(v) => parse_matrix(v, k, "zeta action")?,
        None => {
            // Omission is allowed only when the ring is Z, i.e. φ(e) = 1;
            // ζ acts canonically as the image of ζ_e in Z.
            match ring_exponent {
                1 => IntMatrix::identity(k),
                2 => IntMatrix::identity(k).scale(&BigInt::from(-1)),
                e => {
                    return Err(parse_err(format!(
                        "`zeta_action` may only be omitted for ring_exponent <= 2, got {e}"
                    )))
                }
            }
        }
    };

    GModule::new(group, ring, diag, generator_actions, zeta_action)
}

fn matrix_json(m: &IntMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let entries: Vec<String> = (0..m.cols()).map(|j| m.at(i, j).to_string()).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Serialize a module in the file format, deterministically.
pub fn module_to_json(m: &GModule) -> String {
    let orders: Vec<String> = m
        .group()
        .cyclic_orders()
        .iter()
        .map(|n| n.to_string())
        .collect();
    let diag: Vec<String> = m.diag().iter().map(|d| d.to_string()).collect();
    let actions: Vec<String> = m.generator_actions().iter().map(matrix_json).collect();
    format!(
        "{{\n  \"group\": {{\"cyclic_orders\": [{}]}},\n  \"ring_exponent\": {},\n  \"diag\": [{}],\n  \"generator_actions\": [{}],\n  \"zeta_action\": {}\n}}\n",
        orders.join(", "),
        m.ring().exponent(),
        diag.join(", "),
        actions.join(", "),
        matrix_json(m.zeta_action()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_module, RandomModuleSpec};

    #[test]
    fn round_trip_preserves_everything() {
        let spec = RandomModuleSpec::new(FiniteAbelianGroup::new(vec![2, 4]).unwrap(), 1, 3, 2, 17);
        let m = random_module(&spec, &BigInt::from(1_000_000)).unwrap();
        let text = module_to_json(&m);
        let back = parse_module(&text).unwrap();
        assert_eq!(m, back);
        // serialization is deterministic
        assert_eq!(text, module_to_json(&back));
    }

    #[test]
    fn huge_integers_round_trip() {
        let big_diag = BigInt::parse_bytes(b"123456789012345678901234567890137", 10).unwrap();
        let m = GModule::plain(
            FiniteAbelianGroup::cyclic(1),
            vec![big_diag.clone()],
            vec![IntMatrix::identity(1)],
        )
        .unwrap();
        let text = module_to_json(&m);
        assert!(text.contains("123456789012345678901234567890137"));
        let back = parse_module(&text).unwrap();
        assert_eq!(back.diag()[0], big_diag);
    }

    #[test]
    fn zeta_omission_rules() {
        // e = 2: omitted zeta means ζ₂ = −1
        let text = r#"{"group": {"cyclic_orders": [2]}, "ring_exponent": 2,
                       "diag": [4], "generator_actions": [[[3]]]}"#;
        let m = parse_module(text).unwrap();
        assert_eq!(m.zeta_action(), &IntMatrix::from_rows(&[vec![3]]));
        assert!(m.is_valid());
        // e = 4: zeta is required
        let text = r#"{"group": {"cyclic_orders": [4]}, "ring_exponent": 4,
                       "diag": [5], "generator_actions": [[[1]]]}"#;
        assert!(matches!(parse_module(text), Err(Error::Parse(_))));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_module("not json"), Err(Error::Parse(_))));
        assert!(matches!(parse_module("{}"), Err(Error::Parse(_))));
        let unknown = r#"{"group": {"cyclic_orders": [2]}, "diag": [2],
                          "generator_actions": [[[1]]], "surprise": 1}"#;
        assert!(matches!(parse_module(unknown), Err(Error::Parse(_))));
        let ragged = r#"{"group": {"cyclic_orders": [2]}, "diag": [2, 2],
                         "generator_actions": [[[1, 0]]]}"#;
        assert!(matches!(parse_module(ragged), Err(Error::Parse(_))));
        // structural endomorphism failure is caught at construction
        let bad_endo = r#"{"group": {"cyclic_orders": [2]}, "diag": [2, 4],
                           "generator_actions": [[[0, 0], [1, 0]]]}"#;
        assert!(matches!(
            parse_module(bad_endo),
            Err(Error::NotEndomorphism { .. })
        ));
    }

    #[test]
    fn default_ring_exponent_is_group_exponent() {
        let text = r#"{"group": {"cyclic_orders": [2]}, "diag": [3],
                       "generator_actions": [[[2]]]}"#;
        let m = parse_module(text).unwrap();
        assert_eq!(m.ring().exponent(), 2);
        assert!(m.is_valid());
    }
}
