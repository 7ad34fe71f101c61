//! Seeded random module generation.
//!
//! Modules are built as quotients of free modules `(R[G])^s` by relation
//! lattices that contain c·F and are closed under every action matrix, so the
//! quotient is a valid `R[G]`-module by construction. Random commuting matrices
//! would almost never satisfy the commutation and Φ_e constraints.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::cyclotomic::CycloRing;
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::lattice::hermite_lattice;
use crate::matrix::IntMatrix;
use crate::module::{quotient_presentation, GModule};

/// SplitMix64. Hand-rolled so that seeded campaigns reproduce byte-for-byte
/// on every platform and across dependency upgrades.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        if n <= 1 {
            0
        } else {
            self.next_u64() % n
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomModuleSpec {
    pub seed: u64,
    pub group: FiniteAbelianGroup,
    /// Ring conductor; `None` means the group exponent.
    pub ring_exponent: Option<u64>,
    /// Free-module rank s.
    pub rank: u32,
    /// Finiteness bound c: the quotient is killed by c.
    pub modulus: u64,
    pub extra_relations: u32,
}

impl RandomModuleSpec {
    pub fn new(
        group: FiniteAbelianGroup,
        rank: u32,
        modulus: u64,
        extra_relations: u32,
        seed: u64,
    ) -> Self {
        RandomModuleSpec {
            seed,
            group,
            ring_exponent: None,
            rank,
            modulus,
            extra_relations,
        }
    }

    pub fn descriptor(&self) -> String {
        let orders: Vec<String> = self
            .group
            .cyclic_orders()
            .iter()
            .map(|n| n.to_string())
            .collect();
        format!(
            "group={} e={} s={} c={} extra={} seed={}",
            if orders.is_empty() {
                "1".to_string()
            } else {
                orders.join("x")
            },
            self.ring_exponent.unwrap_or_else(|| self.group.exponent()),
            self.rank,
            self.modulus,
            self.extra_relations,
            self.seed
        )
    }
}

/// Deterministically build the module described by `spec`.
///
/// The free module `(R[G])^s` has Z-rank s·|G|·φ(e) with basis vectors indexed
/// by (copy, group element, ζ-power). The relation lattice starts from c·F
/// plus `extra_relations` random vectors and is closed under all action
/// matrices before the quotient is presented through Smith normal form.
pub fn random_module(spec: &RandomModuleSpec, max_order: &BigInt) -> Result<GModule> {
    if spec.rank == 0 {
        return Err(Error::Parse("random module rank must be >= 1".into()));
    }
    if spec.modulus == 0 {
        return Err(Error::Parse("random module modulus must be >= 1".into()));
    }
    let group = &spec.group;
    let er = spec.ring_exponent.unwrap_or_else(|| group.exponent());
    if er % group.exponent() != 0 {
        return Err(Error::RingMismatch(format!(
            "ring conductor {er} must be a multiple of the group exponent {}",
            group.exponent()
        )));
    }
    let ring = CycloRing::new(er);
    let phi = ring.degree();
    let n_g = group.order() as usize;
    let s = spec.rank as usize;
    let rank_total = s * n_g * phi;

    let elements = group.elements();
    let index_of: BTreeMap<Vec<u64>, usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let idx = |copy: usize, sigma: usize, pow: usize| (copy * n_g + sigma) * phi + pow;

    // Free actions: generators permute the group-element slots, ζ acts on the
    // power slots through the companion matrix of Φ_e.
    let mut gen_actions = Vec::with_capacity(group.factor_count());
    for j in 0..group.factor_count() {
        let tau = group.canonical_generator(j);
        let mut m = IntMatrix::zeros(rank_total, rank_total);
        for (sig_idx, sigma) in elements.iter().enumerate() {
            let target = index_of[&group.add(&tau, sigma)];
            for copy in 0..s {
                for pow in 0..phi {
                    m.set(
                        idx(copy, target, pow),
                        idx(copy, sig_idx, pow),
                        BigInt::from(1),
                    );
                }
            }
        }
        gen_actions.push(m);
    }
    let comp = ring.companion();
    let mut zeta = IntMatrix::zeros(rank_total, rank_total);
    for copy in 0..s {
        for sig in 0..n_g {
            for col_pow in 0..phi {
                for row_pow in 0..phi {
                    let v = comp.at(row_pow, col_pow).clone();
                    if !num_traits::Zero::is_zero(&v) {
                        zeta.set(idx(copy, sig, row_pow), idx(copy, sig, col_pow), v);
                    }
                }
            }
        }
    }

    // Relation lattice: c·Zʳ plus random vectors, closed under the actions.
    let mut rng = SplitMix64::new(spec.seed);
    let moduli = vec![BigInt::from(spec.modulus); rank_total];
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for _ in 0..spec.extra_relations {
        gens.push(
            (0..rank_total)
                .map(|_| BigInt::from(rng.below(spec.modulus)))
                .collect(),
        );
    }
    let mut lat = hermite_lattice(&gens, &moduli)?;
    let all_actions: Vec<&IntMatrix> = gen_actions.iter().chain(std::iter::once(&zeta)).collect();
    loop {
        let mut cols = lat.basis_columns();
        for a in &all_actions {
            for c in lat.basis_columns() {
                cols.push(a.mul_vec(&c));
            }
        }
        let next = hermite_lattice(&cols, &moduli)?;
        if next == lat {
            break;
        }
        lat = next;
    }

    let owned_actions: Vec<IntMatrix> = gen_actions
        .iter()
        .cloned()
        .chain(std::iter::once(zeta))
        .collect();
    let (diag, actions) = quotient_presentation(lat.basis(), &owned_actions)?;
    let order: BigInt = diag.iter().product();
    if &order > max_order {
        return Err(Error::CapExceeded {
            what: "module order",
            limit: max_order.to_string(),
            requested: order.to_string(),
        });
    }
    let mut it = actions.into_iter();
    let gens_out: Vec<IntMatrix> = (&mut it).take(group.factor_count()).collect();
    let zeta_out = it.next().unwrap_or_else(|| IntMatrix::identity(0));
    let module = GModule::new(group.clone(), ring, diag, gens_out, zeta_out)?;
    debug_assert!(
        module.is_valid(),
        "random module must be valid by construction"
    );
    Ok(module)
}

/// `random_module`, escalating the relation count deterministically until the
/// order fits under the cap.
pub fn random_module_within(spec: &RandomModuleSpec, max_order: &BigInt) -> Result<GModule> {
    let mut attempt = spec.clone();
    for round in 0..24u32 {
        match random_module(&attempt, max_order) {
            Ok(m) => return Ok(m),
            Err(Error::CapExceeded { .. }) => {
                attempt.extra_relations += 1 + round;
            }
            Err(e) => return Err(e),
        }
    }
    random_module(&attempt, max_order)
}
