//! Brute-force enumeration oracle.
//!
//! Every order the lattice machinery produces is recomputed here by direct
//! set arithmetic on the elements of ⊕ Z/dᵢ: eigenspaces by filtering, images
//! by mapping every element, subgroup closures by breadth-first addition.
//! Nothing in this module touches Hermite or Smith forms, so agreement with
//! the lattice path is meaningful evidence of correctness.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::group::{enumerate_subgroups, Subgroup};
use crate::module::{enumerate_torsion_elements, GModule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCharRow {
    pub chi: Vec<u64>,
    pub isotypic: u64,
    pub idempotent_image: u64,
    pub h0: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCorrectionRow {
    pub index: u64,
    pub numerator: u64,
    pub denominator: u64,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSubgroupRow {
    pub elements: Vec<Vec<u64>>,
    pub fixed: u64,
    pub norm_image: u64,
    pub norm_kernel: u64,
    pub augmentation_image: u64,
    pub h0: u64,
    pub h_minus1: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleTable {
    pub module_order: u64,
    pub characters: Vec<OracleCharRow>,
    /// Correction-module data over the generator (1, …, 1); present only for
    /// cyclic groups.
    pub corrections: Option<Vec<OracleCorrectionRow>>,
    pub subgroups: Vec<OracleSubgroupRow>,
}

struct Enumerated {
    diag: Vec<u64>,
    elements: Vec<Vec<u64>>,
    /// index map per group element, in group-element enumeration order
    elem_maps: Vec<Vec<usize>>,
    /// index map for each power of ζ
    zeta_maps: Vec<Vec<usize>>,
}

impl Enumerated {
    fn index_of(&self, v: &[u64]) -> usize {
        let mut idx = 0usize;
        for (&x, &d) in v.iter().zip(&self.diag).rev() {
            idx = idx * d as usize + x as usize;
        }
        idx
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.diag)
            .map(|((&x, &y), &d)| (x + y) % d)
            .collect()
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.diag)
            .map(|((&x, &y), &d)| (x + d - y % d) % d)
            .collect()
    }

    fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Order of the subgroup generated by a set of elements, by closure.
    fn closure_order(&self, gens: &BTreeSet<Vec<u64>>) -> u64 {
        let zero = vec![0u64; self.diag.len()];
        let mut set: BTreeSet<Vec<u64>> = BTreeSet::new();
        set.insert(zero.clone());
        let mut frontier = vec![zero];
        while let Some(cur) = frontier.pop() {
            for g in gens {
                let nxt = self.add(&cur, g);
                if set.insert(nxt.clone()) {
                    frontier.push(nxt);
                }
            }
        }
        set.len() as u64
    }
}

fn matrix_to_u64(m: &crate::matrix::IntMatrix, diag: &[u64]) -> Vec<Vec<u64>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    use num_integer::Integer;
                    let md = m.at(i, j).mod_floor(&num_bigint::BigInt::from(diag[i]));
                    md.to_u64().unwrap()
                })
                .collect()
        })
        .collect()
}

fn apply(mat: &[Vec<u64>], diag: &[u64], x: &[u64]) -> Vec<u64> {
    (0..diag.len())
        .map(|i| {
            let mut acc: u128 = 0;
            for (j, &xj) in x.iter().enumerate() {
                acc += mat[i][j] as u128 * xj as u128;
            }
            (acc % diag[i] as u128) as u64
        })
        .collect()
}

fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&x| outer[x]).collect()
}

/// Enumerate the module and tabulate every order the theorems mention:
/// `[M^χ]`, `[ε_χM]`, `[Ĥ⁰_χ]` for all characters, the correction numerators
/// and denominators over cyclic groups, and `[M^H]`, `[N_H M]`, `[ker N_H]`,
/// `[I_H M]`, `[Ĥ⁰(H)]`, `[Ĥ⁻¹(H)]` for all subgroups H.
pub fn oracle(m: &GModule, order_cap: u64, subgroup_cap: u64) -> Result<OracleTable> {
    let total = m
        .order()
        .to_u64()
        .filter(|&t| t <= order_cap)
        .ok_or_else(|| Error::CapExceeded {
            what: "oracle enumeration size",
            limit: order_cap.to_string(),
            requested: m.order().to_string(),
        })?;
    let group = m.group();
    let eg = group.exponent();
    let er = m.ring().exponent();
    if er % eg != 0 {
        return Err(Error::RingMismatch(format!(
            "ring conductor {er} does not contain the {eg}-th roots of unity"
        )));
    }
    let scale = er / eg;
    let diag: Vec<u64> = m.diag().iter().map(|d| d.to_u64().unwrap()).collect();
    let elements = enumerate_torsion_elements(&diag);
    debug_assert_eq!(elements.len() as u64, total);

    // Per-generator and ζ index maps by direct matrix application.
    let gen_mats: Vec<Vec<Vec<u64>>> = m
        .generator_actions()
        .iter()
        .map(|t| matrix_to_u64(t, &diag))
        .collect();
    let zeta_mat = matrix_to_u64(m.zeta_action(), &diag);
    let en_partial = Enumerated {
        diag: diag.clone(),
        elements: elements.clone(),
        elem_maps: Vec::new(),
        zeta_maps: Vec::new(),
    };
    let gen_maps: Vec<Vec<usize>> = gen_mats
        .iter()
        .map(|mat| {
            elements
                .iter()
                .map(|x| en_partial.index_of(&apply(mat, &diag, x)))
                .collect()
        })
        .collect();
    let zeta_map: Vec<usize> = elements
        .iter()
        .map(|x| en_partial.index_of(&apply(&zeta_mat, &diag, x)))
        .collect();

    let identity_map: Vec<usize> = (0..elements.len()).collect();
    let mut zeta_maps = Vec::with_capacity(er as usize);
    let mut acc = identity_map.clone();
    for _ in 0..er {
        zeta_maps.push(acc.clone());
        acc = compose(&zeta_map, &acc);
    }
    let group_elements = group.elements();
    let mut elem_maps = Vec::with_capacity(group_elements.len());
    for sigma in &group_elements {
        let mut map = identity_map.clone();
        for (j, &gj) in sigma.iter().enumerate() {
            for _ in 0..gj {
                map = compose(&gen_maps[j], &map);
            }
        }
        elem_maps.push(map);
    }
    let en = Enumerated {
        diag,
        elements,
        elem_maps,
        zeta_maps,
    };

    // Character table.
    let chars = crate::group::enumerate_characters(group);
    let mut char_rows = Vec::with_capacity(chars.len());
    for chi in &chars {
        let mut eigen: BTreeSet<usize> = BTreeSet::new();
        'elem: for (i, _x) in en.elements.iter().enumerate() {
            for (j, &aj) in chi.exps().iter().enumerate() {
                let lhs = en.elem_maps[index_of_generator(group, j)][i];
                let rhs = en.zeta_maps[((aj as u128 * scale as u128) % er as u128) as usize][i];
                if lhs != rhs {
                    continue 'elem;
                }
            }
            eigen.insert(i);
        }
        let mut image: BTreeSet<usize> = BTreeSet::new();
        for i in 0..en.elements.len() {
            image.insert(quasi_idempotent_apply(&en, group, chi, scale, er, i));
        }
        let iso = eigen.len() as u64;
        let eps = image.len() as u64;
        debug_assert_eq!(iso % eps, 0);
        char_rows.push(OracleCharRow {
            chi: chi.exps().to_vec(),
            isotypic: iso,
            idempotent_image: eps,
            h0: iso / eps,
        });
    }

    // Correction modules over the diagonal generator for cyclic groups.
    let corrections = if group.is_cyclic() {
        let tau = group.diagonal_generator();
        let n = group.order();
        let step = er / n.max(1);
        // index maps for τ⁰ … τ^{n−1}
        let tau_pow_maps: Vec<&Vec<usize>> = (0..n)
            .map(|k| {
                let elem = group.scalar_mul(&tau, k);
                let pos = group_elements.iter().position(|g| g == &elem).unwrap();
                &en.elem_maps[pos]
            })
            .collect();
        let tau_map = tau_pow_maps[1.min(n as usize - 1)];
        let factor = |j: u64, i: usize| -> usize {
            // (τ − ζ_n^j) applied to element i
            let a = &en.elements[tau_map[i]];
            let b = &en.elements[en.zeta_maps[((j % n) * step % er) as usize][i]];
            en.index_of(&en.sub(a, b))
        };
        let mut rows = Vec::with_capacity(n as usize);
        for i in 0..n {
            // eigenspace of χⁱ: τ·x = ζ_nⁱ·x
            let zi = &en.zeta_maps[(i * step % er) as usize];
            let eigen: BTreeSet<usize> = (0..en.elements.len())
                .filter(|&x| tau_map[x] == zi[x])
                .collect();
            // image of P_i = ∏_{j=i+1}^{n−1}(τ − ζ^j)
            let mut tail_image: BTreeSet<usize> = BTreeSet::new();
            for x in 0..en.elements.len() {
                let mut cur = x;
                for j in i + 1..n {
                    cur = factor(j, cur);
                }
                tail_image.insert(cur);
            }
            let numerator = eigen.intersection(&tail_image).count() as u64;
            // ε_{χⁱ} = Σ_k ζ^{−ik} τ^k applied elementwise
            let mut denom_set: BTreeSet<usize> = BTreeSet::new();
            for x in 0..en.elements.len() {
                let mut sum = vec![0u64; en.diag.len()];
                for k in 0..n {
                    let c = ((n - (i as u128 * k as u128 % n as u128) as u64) % n) * step % er;
                    let cur = en.zeta_maps[c as usize][tau_pow_maps[k as usize][x]];
                    sum = en.add(&sum, &en.elements[cur]);
                }
                denom_set.insert(en.index_of(&sum));
            }
            let denominator = denom_set.len() as u64;
            debug_assert_eq!(numerator % denominator, 0);
            rows.push(OracleCorrectionRow {
                index: i,
                numerator,
                denominator,
                order: numerator / denominator,
            });
        }
        Some(rows)
    } else {
        None
    };

    // Subgroup table.
    let subs = enumerate_subgroups(group, false, subgroup_cap)?;
    let mut sub_rows = Vec::with_capacity(subs.len());
    for h in &subs {
        sub_rows.push(subgroup_row(&en, &group_elements, h));
    }

    Ok(OracleTable {
        module_order: total,
        characters: char_rows,
        corrections,
        subgroups: sub_rows,
    })
}

fn index_of_generator(group: &crate::group::FiniteAbelianGroup, j: usize) -> usize {
    // position of the canonical generator of factor j in enumeration order:
    // mixed-radix with coordinate 0 fastest
    let mut idx = 0usize;
    let gen = group.canonical_generator(j);
    for (&x, &n) in gen.iter().zip(group.cyclic_orders()).rev() {
        idx = idx * n as usize + x as usize;
    }
    idx
}

fn quasi_idempotent_apply(
    en: &Enumerated,
    group: &crate::group::FiniteAbelianGroup,
    chi: &crate::group::Character,
    scale: u64,
    er: u64,
    x: usize,
) -> usize {
    let mut sum = vec![0u64; en.diag.len()];
    for (sig_idx, sigma) in group.elements().iter().enumerate() {
        let c = chi.inverse_value_exponent(sigma).unwrap();
        let cur = en.zeta_maps[((c as u128 * scale as u128) % er as u128) as usize]
            [en.elem_maps[sig_idx][x]];
        sum = en.add(&sum, &en.elements[cur]);
    }
    en.index_of(&sum)
}

fn subgroup_row(en: &Enumerated, group_elements: &[Vec<u64>], h: &Subgroup) -> OracleSubgroupRow {
    let member_maps: Vec<&Vec<usize>> = h
        .elements()
        .iter()
        .map(|g| {
            let pos = group_elements.iter().position(|e| e == g).unwrap();
            &en.elem_maps[pos]
        })
        .collect();
    let fixed: Vec<usize> = (0..en.elements.len())
        .filter(|&x| member_maps.iter().all(|m| m[x] == x))
        .collect();
    let mut norm_image: BTreeSet<usize> = BTreeSet::new();
    let mut norm_kernel = 0u64;
    for x in 0..en.elements.len() {
        let mut sum = vec![0u64; en.diag.len()];
        for m in &member_maps {
            sum = en.add(&sum, &en.elements[m[x]]);
        }
        if en.is_zero(&sum) {
            norm_kernel += 1;
        }
        norm_image.insert(en.index_of(&sum));
    }
    let mut aug_gens: BTreeSet<Vec<u64>> = BTreeSet::new();
    for m in &member_maps {
        for x in 0..en.elements.len() {
            let diff = en.sub(&en.elements[m[x]], &en.elements[x]);
            if !en.is_zero(&diff) {
                aug_gens.insert(diff);
            }
        }
    }
    let aug_order = en.closure_order(&aug_gens);
    let fixed_count = fixed.len() as u64;
    let norm_image_count = norm_image.len() as u64;
    debug_assert_eq!(fixed_count % norm_image_count, 0);
    debug_assert_eq!(norm_kernel % aug_order, 0);
    OracleSubgroupRow {
        elements: h.elements().to_vec(),
        fixed: fixed_count,
        norm_image: norm_image_count,
        norm_kernel,
        augmentation_image: aug_order,
        h0: fixed_count / norm_image_count,
        h_minus1: norm_kernel / aug_order,
    }
}
