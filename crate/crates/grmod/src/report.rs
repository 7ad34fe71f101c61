//! Rendering of reports as plain-text tables, JSON and CSV.
//!
//! The JSON writer is hand-rolled: orders are unbounded integers and must be
//! emitted as raw number tokens without truncation, and byte-identical output
//! for identical runs is part of the CLI contract.

use num_bigint::BigInt;

use crate::module::{CohomologyReport, ValidationReport};
use crate::verify::{AbelianReport, DecompositionReport, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "table" => Some(Format::Table),
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

pub(crate) fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn json_int_list(xs: &[BigInt]) -> String {
    let items: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(","))
}

fn json_u64_list(xs: &[u64]) -> String {
    let items: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(","))
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",")
}

fn semis(xs: &[BigInt]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn u64_semis(xs: &[u64]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        let items: Vec<String> = self.violations.iter().map(|v| json_string(v)).collect();
        format!(
            "{{\"kind\":\"validation\",\"valid\":{},\"violations\":[{}]}}",
            self.is_valid(),
            items.join(",")
        )
    }

    pub fn to_table(&self) -> String {
        if self.is_valid() {
            "module is valid\n".to_string()
        } else {
            let mut out = String::from("module is INVALID\n");
            for v in &self.violations {
                out.push_str("  - ");
                out.push_str(v);
                out.push('\n');
            }
            out
        }
    }
}

impl DecompositionReport {
    pub fn to_json(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                format!(
                    "{{\"chi_index\":{},\"chi_exps\":{},\"isotypic\":{},\"idempotent_image\":{},\"h0\":{},\"h0_invariants\":{},\"correction\":{},\"correction_invariants\":{}}}",
                    r.chi_index,
                    json_u64_list(&r.chi_exps),
                    r.isotypic_order,
                    r.idempotent_order,
                    r.h0_order,
                    json_int_list(&r.h0_invariants),
                    r.correction_order,
                    json_int_list(&r.correction_invariants),
                )
            })
            .collect();
        let violations: Vec<String> = self.violations.iter().map(|v| json_string(v)).collect();
        format!(
            "{{\"kind\":\"cyclic-decomposition\",\"generator\":{},\"module_order\":{},\"rows\":[{}],\"isotypic_product\":{},\"idempotent_product\":{},\"h0_product\":{},\"correction_product\":{},\"telescope\":{},\"product_formula_holds\":{},\"factor_formula_holds\":{},\"violations\":[{}]}}",
            json_u64_list(&self.generator),
            self.module_order,
            rows.join(","),
            self.isotypic_product,
            self.idempotent_product,
            self.h0_product,
            self.correction_product,
            json_int_list(&self.telescope),
            self.product_formula_holds,
            self.factor_formula_holds,
            violations.join(","),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "row,chi_index,chi_exps,isotypic,idempotent_image,h0,h0_invariants,correction,correction_invariants\n",
        );
        for r in &self.rows {
            out.push_str(&csv_row(&[
                "character".into(),
                r.chi_index.to_string(),
                u64_semis(&r.chi_exps),
                r.isotypic_order.to_string(),
                r.idempotent_order.to_string(),
                r.h0_order.to_string(),
                semis(&r.h0_invariants),
                r.correction_order.to_string(),
                semis(&r.correction_invariants),
            ]));
            out.push('\n');
        }
        out.push_str(&csv_row(&[
            "totals".into(),
            String::new(),
            format!("module_order={}", self.module_order),
            self.isotypic_product.to_string(),
            self.idempotent_product.to_string(),
            self.h0_product.to_string(),
            format!("product_formula={}", self.product_formula_holds),
            self.correction_product.to_string(),
            format!("factor_formula={}", self.factor_formula_holds),
        ]));
        out.push('\n');
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "decomposition over cyclic group, generator {:?}, [M] = {}\n",
            self.generator, self.module_order
        ));
        out.push_str("  i  chi        [M^chi]      [epsM]       [H0]  H0 inv      [S]   S inv\n");
        for r in &self.rows {
            out.push_str(&format!(
                "  {:<2} {:<10} {:<12} {:<12} {:<5} {:<11} {:<5} {}\n",
                r.chi_index,
                format!("{:?}", r.chi_exps),
                r.isotypic_order,
                r.idempotent_order,
                r.h0_order,
                format!("[{}]", semis(&r.h0_invariants)),
                r.correction_order,
                format!("[{}]", semis(&r.correction_invariants)),
            ));
        }
        out.push_str(&format!(
            "totals: prod[M^chi] = {}, prod[epsM] = {}, prod[H0] = {}, prod[S] = {}\n",
            self.isotypic_product,
            self.idempotent_product,
            self.h0_product,
            self.correction_product
        ));
        out.push_str(&format!(
            "telescope [ker prod_(j>=i)(tau - zeta^j)]: {}\n",
            semis(&self.telescope)
        ));
        out.push_str(&format!(
            "[M]·prod[H0/S] = prod[M^chi]: {}\n[M] = prod[epsM]·prod[S]: {}\n",
            verdict(self.product_formula_holds),
            verdict(self.factor_formula_holds)
        ));
        for v in &self.violations {
            out.push_str(&format!("violation: {v}\n"));
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.to_table(),
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn all_holds(&self) -> bool {
        self.product_formula_holds && self.factor_formula_holds && self.violations.is_empty()
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

impl AbelianReport {
    pub fn to_json(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                format!(
                    "{{\"stage\":{},\"factor_index\":{},\"psi_exps\":{},\"chi_index\":{},\"submodule_order\":{},\"h0\":{},\"correction\":{}}}",
                    r.stage,
                    r.factor_index,
                    json_u64_list(&r.psi_exps),
                    r.chi_index,
                    r.submodule_order,
                    r.h0_order,
                    r.correction_order,
                )
            })
            .collect();
        let violations: Vec<String> = self.violations.iter().map(|v| json_string(v)).collect();
        let order: Vec<String> = self.factor_order.iter().map(|x| x.to_string()).collect();
        format!(
            "{{\"kind\":\"abelian-decomposition\",\"factor_order\":[{}],\"module_order\":{},\"rows\":[{}],\"correction_total\":{},\"isotypic_product\":{},\"formula_holds\":{},\"per_character_consistent\":{},\"leaf_orders_match\":{},\"violations\":[{}]}}",
            order.join(","),
            self.module_order,
            rows.join(","),
            self.correction_total,
            self.isotypic_product,
            self.formula_holds,
            self.per_character_consistent,
            self.leaf_orders_match,
            violations.join(","),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "row,stage,factor_index,psi_exps,chi_index,submodule_order,h0,correction\n",
        );
        for r in &self.rows {
            out.push_str(&csv_row(&[
                "stage".into(),
                r.stage.to_string(),
                r.factor_index.to_string(),
                u64_semis(&r.psi_exps),
                r.chi_index.to_string(),
                r.submodule_order.to_string(),
                r.h0_order.to_string(),
                r.correction_order.to_string(),
            ]));
            out.push('\n');
        }
        out.push_str(&csv_row(&[
            "totals".into(),
            format!("module_order={}", self.module_order),
            String::new(),
            String::new(),
            String::new(),
            self.isotypic_product.to_string(),
            self.correction_total.to_string(),
            format!("formula={}", self.formula_holds),
        ]));
        out.push('\n');
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "staged decomposition, factor order {:?}, [M] = {}\n",
            self.factor_order, self.module_order
        ));
        out.push_str("  stage factor psi          chi  [Mpsi]       [H0]  [S]\n");
        for r in &self.rows {
            out.push_str(&format!(
                "  {:<5} {:<6} {:<12} {:<4} {:<12} {:<5} {}\n",
                r.stage,
                r.factor_index,
                format!("{:?}", r.psi_exps),
                r.chi_index,
                r.submodule_order,
                r.h0_order,
                r.correction_order,
            ));
        }
        out.push_str(&format!(
            "totals: [M]·corr = {}·{}, prod[M^chi] = {}\n",
            self.module_order, self.correction_total, self.isotypic_product
        ));
        out.push_str(&format!(
            "[M]·prod[H0/S] = prod[M^chi]: {}\nstaged = direct components: {}\nper-character consistency: {}\n",
            verdict(self.formula_holds),
            verdict(self.leaf_orders_match),
            verdict(self.per_character_consistent)
        ));
        for v in &self.violations {
            out.push_str(&format!("violation: {v}\n"));
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.to_table(),
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn all_holds(&self) -> bool {
        self.formula_holds
            && self.per_character_consistent
            && self.leaf_orders_match
            && self.violations.is_empty()
    }
}

/// Tate cohomology of one subgroup, for the `tate` subcommand.
pub struct TateReport {
    pub subgroup_elements: Vec<Vec<u64>>,
    pub report: CohomologyReport,
}

impl TateReport {
    pub fn to_json(&self) -> String {
        let elems: Vec<String> = self
            .subgroup_elements
            .iter()
            .map(|e| json_u64_list(e))
            .collect();
        format!(
            "{{\"kind\":\"tate\",\"subgroup\":[{}],\"h0\":{},\"h0_invariants\":{},\"h_minus1\":{},\"h_minus1_invariants\":{},\"herbrand\":{}}}",
            elems.join(","),
            self.report.h0.order,
            json_int_list(&self.report.h0.invariants),
            self.report.h_minus1.order,
            json_int_list(&self.report.h_minus1.invariants),
            json_string(&self.report.herbrand.to_string()),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("subgroup,h0,h0_invariants,h_minus1,h_minus1_invariants,herbrand\n");
        let elems: Vec<String> = self
            .subgroup_elements
            .iter()
            .map(|e| u64_semis(e))
            .collect();
        out.push_str(&csv_row(&[
            elems.join("|"),
            self.report.h0.order.to_string(),
            semis(&self.report.h0.invariants),
            self.report.h_minus1.order.to_string(),
            semis(&self.report.h_minus1.invariants),
            self.report.herbrand.to_string(),
        ]));
        out.push('\n');
        out
    }

    pub fn to_table(&self) -> String {
        format!(
            "subgroup {:?} ({} elements)\n  [H0]  = {:<12} invariants [{}]\n  [H-1] = {:<12} invariants [{}]\n  herbrand = {}\n",
            self.subgroup_elements,
            self.subgroup_elements.len(),
            self.report.h0.order,
            semis(&self.report.h0.invariants),
            self.report.h_minus1.order,
            semis(&self.report.h_minus1.invariants),
            self.report.herbrand,
        )
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.to_table(),
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let instances: Vec<String> = self
            .instances
            .iter()
            .map(|i| {
                let checks: Vec<String> = i
                    .checks
                    .iter()
                    .map(|c| {
                        format!(
                            "{{\"name\":{},\"left\":{},\"right\":{},\"pass\":{}}}",
                            json_string(&c.name),
                            json_string(&c.left),
                            json_string(&c.right),
                            c.pass
                        )
                    })
                    .collect();
                let violations: Vec<String> = i.violations.iter().map(|v| json_string(v)).collect();
                format!(
                    "{{\"index\":{},\"seed\":{},\"descriptor\":{},\"hypothesis\":{},\"pass\":{},\"checks\":[{}],\"violations\":[{}]}}",
                    i.index,
                    i.seed,
                    json_string(&i.descriptor),
                    match i.hypothesis {
                        None => "null".to_string(),
                        Some(b) => b.to_string(),
                    },
                    i.pass(),
                    checks.join(","),
                    violations.join(","),
                )
            })
            .collect();
        format!(
            "{{\"kind\":\"verification\",\"theorem\":{},\"seed\":{},\"count\":{},\"hypothesis_true\":{},\"vacuous\":{},\"violation_count\":{},\"instances\":[{}]}}",
            json_string(&self.theorem),
            self.seed,
            self.count,
            self.hypothesis_true,
            self.vacuous,
            self.violation_count,
            instances.join(","),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("row,instance,seed,descriptor,hypothesis,check,left,right,pass\n");
        for i in &self.instances {
            let hyp = match i.hypothesis {
                None => String::new(),
                Some(b) => b.to_string(),
            };
            for c in &i.checks {
                out.push_str(&csv_row(&[
                    "check".into(),
                    i.index.to_string(),
                    i.seed.to_string(),
                    i.descriptor.clone(),
                    hyp.clone(),
                    c.name.clone(),
                    c.left.clone(),
                    c.right.clone(),
                    c.pass.to_string(),
                ]));
                out.push('\n');
            }
            out.push_str(&csv_row(&[
                "instance".into(),
                i.index.to_string(),
                i.seed.to_string(),
                i.descriptor.clone(),
                hyp,
                format!("{} checks", i.checks.len()),
                String::new(),
                String::new(),
                i.pass().to_string(),
            ]));
            out.push('\n');
        }
        out.push_str(&csv_row(&[
            "totals".into(),
            self.count.to_string(),
            self.seed.to_string(),
            self.theorem.clone(),
            format!("hypothesis_true={}", self.hypothesis_true),
            format!("vacuous={}", self.vacuous),
            String::new(),
            String::new(),
            format!("violations={}", self.violation_count),
        ]));
        out.push('\n');
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "verification `{}`: {} instances, seed {}\n",
            self.theorem, self.count, self.seed
        );
        for i in &self.instances {
            let hyp = match i.hypothesis {
                None => "-".to_string(),
                Some(true) => "true".to_string(),
                Some(false) => "vacuous".to_string(),
            };
            out.push_str(&format!(
                "  [{:>4}] {:<44} hyp={:<8} checks={:<4} {}\n",
                i.index,
                i.descriptor,
                hyp,
                i.checks.len(),
                verdict(i.pass())
            ));
            for c in i.checks.iter().filter(|c| !c.pass) {
                out.push_str(&format!(
                    "      FAIL {}: {} != {}\n",
                    c.name, c.left, c.right
                ));
            }
            for v in &i.violations {
                out.push_str(&format!("      violation: {v}\n"));
            }
        }
        out.push_str(&format!(
            "summary: hypothesis_true = {}, vacuous = {}, violations = {}\n",
            self.hypothesis_true, self.vacuous, self.violation_count
        ));
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.to_table(),
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}
