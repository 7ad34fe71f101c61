//! Finite modules over `R[G]` for a finite abelian group G and `R = Z[ζ_e]`,
//! presented as ⊕ Z/dᵢ with one commuting action matrix per cyclic factor of
//! G plus a matrix realizing multiplication by ζ_e.
//!
//! All submodule computations go through full-rank lattices in Zᵏ containing
//! diag(d)·Zᵏ, so orders and quotient structures are exact integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclotomic::{CycloElement, CycloRing};
use crate::error::{Error, Result};
use crate::group::{is_prime, Character, FiniteAbelianGroup, Subgroup};
use crate::lattice::{
    hermite_lattice, image_mod, kernel_mod, lattice_index, lattice_intersection,
    quotient_invariants, LatticeBasis,
};
use crate::matrix::{column_hermite, kernel_basis, smith_with_inverses, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GModule {
    group: FiniteAbelianGroup,
    ring: CycloRing,
    diag: Vec<BigInt>,
    generator_actions: Vec<IntMatrix>,
    zeta_action: IntMatrix,
}

/// A G- and ζ-stable (or plain) subgroup of a module, as the lattice of its
/// preimages in Zᵏ together with its exact order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModSubgroup {
    lattice: LatticeBasis,
    order: BigInt,
}

impl ModSubgroup {
    pub fn lattice(&self) -> &LatticeBasis {
        &self.lattice
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn contains(&self, other: &ModSubgroup) -> bool {
        self.lattice.contains(&other.lattice)
    }
}

/// Order and invariant factors of a quotient of module subgroups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientStructure {
    pub order: BigInt,
    pub invariants: Vec<BigInt>,
}

/// Ĥ⁰(H, M) = M^H / N_H·M and Ĥ⁻¹(H, M) = ker N_H / I_H·M for a subgroup H,
/// with the Herbrand quotient `[Ĥ⁰]/[Ĥ⁻¹]` as an exact rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyReport {
    pub h0: QuotientStructure,
    pub h_minus1: QuotientStructure,
    pub herbrand: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

use crate::lattice::check_endomorphism;

impl GModule {
    /// Structural constructor: checks dimensions and the endomorphism
    /// condition, and stores all action matrices reduced modulo the diagonal.
    /// The module axioms (commutation, Tⁿ = 1, Φ_e(Z) = 0) are checked by
    /// [`GModule::validate`], not here.
    pub fn new(
        group: FiniteAbelianGroup,
        ring: CycloRing,
        diag: Vec<BigInt>,
        generator_actions: Vec<IntMatrix>,
        zeta_action: IntMatrix,
    ) -> Result<Self> {
        if diag.iter().any(|x| !x.is_positive()) {
            return Err(Error::InvalidDiagonal);
        }
        if generator_actions.len() != group.factor_count() {
            return Err(Error::GroupMismatch(format!(
                "{} action matrices for {} cyclic factors",
                generator_actions.len(),
                group.factor_count()
            )));
        }
        for t in &generator_actions {
            check_endomorphism(t, &diag)?;
        }
        check_endomorphism(&zeta_action, &diag)?;
        let generator_actions = generator_actions
            .into_iter()
            .map(|t| t.reduced_rows_mod(&diag))
            .collect();
        let zeta_action = zeta_action.reduced_rows_mod(&diag);
        Ok(GModule {
            group,
            ring,
            diag,
            generator_actions,
            zeta_action,
        })
    }

    /// A plain `Z[G]`-module: ring Z (conductor 1), ζ acting as the identity.
    pub fn plain(
        group: FiniteAbelianGroup,
        diag: Vec<BigInt>,
        generator_actions: Vec<IntMatrix>,
    ) -> Result<Self> {
        let k = diag.len();
        Self::new(
            group,
            CycloRing::new(1),
            diag,
            generator_actions,
            IntMatrix::identity(k),
        )
    }

    /// The zero module over the given group and ring.
    pub fn zero(group: FiniteAbelianGroup, ring: CycloRing) -> Self {
        let r = group.factor_count();
        GModule {
            group,
            ring,
            diag: Vec::new(),
            generator_actions: vec![IntMatrix::identity(0); r],
            zeta_action: IntMatrix::identity(0),
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn ring(&self) -> &CycloRing {
        &self.ring
    }

    pub fn diag(&self) -> &[BigInt] {
        &self.diag
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn generator_actions(&self) -> &[IntMatrix] {
        &self.generator_actions
    }

    pub fn zeta_action(&self) -> &IntMatrix {
        &self.zeta_action
    }

    pub fn order(&self) -> BigInt {
        self.diag.iter().product()
    }

    /// Canonical representative of an endomorphism modulo the diagonal:
    /// entry (i, j) reduced into `[0, dᵢ)`.
    pub fn reduce(&self, m: IntMatrix) -> IntMatrix {
        m.reduced_rows_mod(&self.diag)
    }

    fn reduced_identity(&self) -> IntMatrix {
        self.reduce(IntMatrix::identity(self.rank()))
    }

    /// ζ_e multiplied out to the power k (taken mod e), as a matrix mod d.
    pub fn zeta_power_action(&self, k: u64) -> IntMatrix {
        let e = self.ring.exponent();
        let k = (k % e) as usize;
        let mut acc = IntMatrix::identity(self.rank());
        for _ in 0..k {
            acc = self.reduce(acc.mul(&self.zeta_action));
        }
        acc
    }

    /// All powers Z⁰ … Z^{e−1}, reduced.
    fn zeta_power_table(&self) -> Vec<IntMatrix> {
        let e = self.ring.exponent() as usize;
        let mut out = Vec::with_capacity(e);
        let mut acc = IntMatrix::identity(self.rank());
        for _ in 0..e {
            out.push(acc.clone());
            acc = self.reduce(acc.mul(&self.zeta_action));
        }
        out
    }

    fn generator_power_tables(&self) -> Vec<Vec<IntMatrix>> {
        self.group
            .cyclic_orders()
            .iter()
            .zip(&self.generator_actions)
            .map(|(&n, t)| {
                let mut pows = Vec::with_capacity(n as usize);
                let mut acc = IntMatrix::identity(self.rank());
                for _ in 0..n {
                    pows.push(acc.clone());
                    acc = self.reduce(acc.mul(t));
                }
                pows
            })
            .collect()
    }

    /// Action of a group element g = (g₁, …, g_r): ∏ⱼ Tⱼ^{gⱼ}.
    pub fn element_action(&self, g: &[u64]) -> Result<IntMatrix> {
        self.group.check_element(g)?;
        let mut acc = IntMatrix::identity(self.rank());
        for (j, &gj) in g.iter().enumerate() {
            for _ in 0..gj {
                acc = self.reduce(acc.mul(&self.generator_actions[j]));
            }
        }
        Ok(acc)
    }

    /// c = Σ cᵢ ζ^i acting through Z.
    pub fn ring_element_action(&self, c: &CycloElement) -> Result<IntMatrix> {
        if c.exponent() != self.ring.exponent() {
            return Err(Error::RingMismatch(format!(
                "coefficient lives in Z[zeta_{}], module ring is Z[zeta_{}]",
                c.exponent(),
                self.ring.exponent()
            )));
        }
        let k = self.rank();
        let mut acc = IntMatrix::zeros(k, k);
        let mut zpow = IntMatrix::identity(k);
        for coef in c.coeffs() {
            if !coef.is_zero() {
                acc = acc.add(&zpow.scale(coef));
            }
            zpow = self.reduce(zpow.mul(&self.zeta_action));
        }
        Ok(self.reduce(acc))
    }

    /// Matrix of a group-ring element Σ c_σ·σ with cyclotomic coefficients.
    pub fn group_ring_action(&self, terms: &[(CycloElement, Vec<u64>)]) -> Result<IntMatrix> {
        let k = self.rank();
        let mut acc = IntMatrix::zeros(k, k);
        for (c, sigma) in terms {
            let coeff = self.ring_element_action(c)?;
            let act = self.element_action(sigma)?;
            acc = acc.add(&coeff.mul(&act));
        }
        Ok(self.reduce(acc))
    }

    /// e_ring / e_group; character-indexed operations need the group's roots
    /// of unity inside the ring.
    fn character_scale(&self) -> Result<u64> {
        let eg = self.group.exponent();
        let er = self.ring.exponent();
        if er % eg != 0 {
            return Err(Error::RingMismatch(format!(
                "ring conductor {er} does not contain the {eg}-th roots of unity"
            )));
        }
        Ok(er / eg)
    }

    fn check_character(&self, chi: &Character) -> Result<u64> {
        if chi.group() != &self.group {
            return Err(Error::GroupMismatch(
                "character belongs to a different group".into(),
            ));
        }
        self.character_scale()
    }

    pub fn subgroup_from_lattice(&self, lattice: LatticeBasis) -> ModSubgroup {
        let index = lattice.determinant();
        let total = self.order();
        let order = &total / &index;
        debug_assert!((&total % &index).is_zero());
        ModSubgroup { lattice, order }
    }

    pub fn whole_subgroup(&self) -> ModSubgroup {
        self.subgroup_from_lattice(LatticeBasis::full(self.rank()))
    }

    pub fn trivial_subgroup(&self) -> ModSubgroup {
        self.subgroup_from_lattice(LatticeBasis::from_diagonal(&self.diag))
    }

    pub fn kernel_subgroup(&self, m: &IntMatrix) -> Result<ModSubgroup> {
        Ok(self.subgroup_from_lattice(kernel_mod(m, &self.diag)?))
    }

    pub fn image_subgroup(&self, m: &IntMatrix) -> Result<ModSubgroup> {
        Ok(self.subgroup_from_lattice(image_mod(m, &self.diag)?))
    }

    pub fn quotient_structure(
        &self,
        top: &ModSubgroup,
        bottom: &ModSubgroup,
    ) -> Result<QuotientStructure> {
        let order = lattice_index(&top.lattice, &bottom.lattice)?;
        let invariants = quotient_invariants(&top.lattice, &bottom.lattice)?;
        Ok(QuotientStructure { order, invariants })
    }

    /// Check every module axiom, reporting each violated identity with the
    /// offending matrix.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let id = self.reduced_identity();
        for (j, (&n, t)) in self
            .group
            .cyclic_orders()
            .iter()
            .zip(&self.generator_actions)
            .enumerate()
        {
            if check_endomorphism(t, &self.diag).is_err() {
                violations.push(format!(
                    "generator {j} action is not an endomorphism: {}",
                    t.render()
                ));
                continue;
            }
            let mut pow = IntMatrix::identity(self.rank());
            for _ in 0..n {
                pow = self.reduce(pow.mul(t));
            }
            if pow != id {
                violations.push(format!(
                    "generator {j} action T fails T^{n} = 1: T^{n} = {}",
                    pow.render()
                ));
            }
        }
        for i in 0..self.generator_actions.len() {
            for j in i + 1..self.generator_actions.len() {
                let ab = self.reduce(self.generator_actions[i].mul(&self.generator_actions[j]));
                let ba = self.reduce(self.generator_actions[j].mul(&self.generator_actions[i]));
                if ab != ba {
                    violations.push(format!(
                        "generator actions {i} and {j} do not commute: {} vs {}",
                        ab.render(),
                        ba.render()
                    ));
                }
            }
        }
        if check_endomorphism(&self.zeta_action, &self.diag).is_err() {
            violations.push(format!(
                "zeta action is not an endomorphism: {}",
                self.zeta_action.render()
            ));
        } else {
            for (j, t) in self.generator_actions.iter().enumerate() {
                let az = self.reduce(t.mul(&self.zeta_action));
                let za = self.reduce(self.zeta_action.mul(t));
                if az != za {
                    violations.push(format!(
                        "zeta action does not commute with generator {j}: {} vs {}",
                        az.render(),
                        za.render()
                    ));
                }
            }
            // Φ_e(Z) = 0
            let k = self.rank();
            let mut acc = IntMatrix::zeros(k, k);
            let mut pow = IntMatrix::identity(k);
            for coef in self.ring.phi_coeffs() {
                if !coef.is_zero() {
                    acc = acc.add(&pow.scale(coef));
                }
                pow = self.reduce(pow.mul(&self.zeta_action));
            }
            let acc = self.reduce(acc);
            if !acc.is_zero() {
                violations.push(format!(
                    "zeta action does not satisfy Phi_{}(Z) = 0: got {}",
                    self.ring.exponent(),
                    acc.render()
                ));
            }
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// M^χ = {m : σm = χ(σ)m for all σ}, computed as ∩ⱼ ker(Tⱼ − Z^{aⱼ}).
    pub fn isotypic_component(&self, chi: &Character) -> Result<ModSubgroup> {
        let scale = self.check_character(chi)?;
        let er = self.ring.exponent();
        let mut lat: Option<LatticeBasis> = None;
        for (j, &aj) in chi.exps().iter().enumerate() {
            let zpow = self.zeta_power_action(((aj as u128 * scale as u128) % er as u128) as u64);
            let m = self.reduce(self.generator_actions[j].sub(&zpow));
            let ker = kernel_mod(&m, &self.diag)?;
            lat = Some(match lat {
                None => ker,
                Some(l) => lattice_intersection(&l, &ker)?,
            });
        }
        let lat = lat.unwrap_or_else(|| LatticeBasis::full(self.rank()));
        Ok(self.subgroup_from_lattice(lat))
    }

    /// The quasi-idempotent ε_χ = Σ_σ χ̄(σ)·σ as a matrix mod d.
    pub fn quasi_idempotent_matrix(&self, chi: &Character) -> Result<IntMatrix> {
        let scale = self.check_character(chi)?;
        let er = self.ring.exponent();
        let zp = self.zeta_power_table();
        let pows = self.generator_power_tables();
        let k = self.rank();
        let mut acc = IntMatrix::zeros(k, k);
        for sigma in self.group.elements() {
            let c = chi.inverse_value_exponent(&sigma)?;
            let z = &zp[(c as u128 * scale as u128 % er as u128) as usize];
            let mut t = z.clone();
            for (j, &gj) in sigma.iter().enumerate() {
                if gj != 0 {
                    t = self.reduce(t.mul(&pows[j][gj as usize]));
                }
            }
            acc = acc.add(&t);
        }
        Ok(self.reduce(acc))
    }

    /// ε_χ·M, always contained in M^χ.
    pub fn quasi_idempotent_image(&self, chi: &Character) -> Result<ModSubgroup> {
        let eps = self.quasi_idempotent_matrix(chi)?;
        self.image_subgroup(&eps)
    }

    /// Ĥ⁰_χ(G, M) = M^χ / ε_χ·M.
    pub fn twisted_h0(&self, chi: &Character) -> Result<QuotientStructure> {
        let top = self.isotypic_component(chi)?;
        let bottom = self.quasi_idempotent_image(chi)?;
        self.quotient_structure(&top, &bottom)
    }

    /// The χ̄-twist: same underlying group and ζ-action, generators act as
    /// χ̄(τⱼ)·Tⱼ. Twisting by the trivial character is the identity and
    /// twisting by χ then χ̄ returns the module entrywise.
    pub fn twist(&self, chi: &Character) -> Result<GModule> {
        let scale = self.check_character(chi)?;
        let er = self.ring.exponent();
        let eg = self.group.exponent();
        let mut actions = Vec::with_capacity(self.generator_actions.len());
        for (j, t) in self.generator_actions.iter().enumerate() {
            let a = chi.exps()[j];
            let inv = (eg - a % eg) % eg;
            let z = self.zeta_power_action(((inv as u128 * scale as u128) % er as u128) as u64);
            actions.push(self.reduce(z.mul(t)));
        }
        GModule::new(
            self.group.clone(),
            self.ring.clone(),
            self.diag.clone(),
            actions,
            self.zeta_action.clone(),
        )
    }

    /// Norm element N_H = Σ_{h ∈ H} h as a matrix mod d.
    pub fn norm_matrix(&self, h: &Subgroup) -> Result<IntMatrix> {
        if h.group() != &self.group {
            return Err(Error::GroupMismatch(
                "subgroup belongs to a different group".into(),
            ));
        }
        let k = self.rank();
        let mut acc = IntMatrix::zeros(k, k);
        for elem in h.elements() {
            acc = acc.add(&self.element_action(elem)?);
        }
        Ok(self.reduce(acc))
    }

    /// M^H as a lattice: common fixed points of the subgroup generators.
    pub fn fixed_points(&self, h: &Subgroup) -> Result<ModSubgroup> {
        if h.group() != &self.group {
            return Err(Error::GroupMismatch(
                "subgroup belongs to a different group".into(),
            ));
        }
        let (_, gens) = h.presentation()?;
        let id = IntMatrix::identity(self.rank());
        let mut lat = LatticeBasis::full(self.rank());
        for g in &gens {
            let m = self.reduce(self.element_action(g)?.sub(&id));
            lat = lattice_intersection(&lat, &kernel_mod(&m, &self.diag)?)?;
        }
        Ok(self.subgroup_from_lattice(lat))
    }

    /// I_H·M = Σ_{h ∈ H} (h − 1)·M; generated by the chosen generators of H
    /// since (gh − 1) = g(h − 1) + (g − 1).
    pub fn augmentation_image(&self, h: &Subgroup) -> Result<ModSubgroup> {
        if h.group() != &self.group {
            return Err(Error::GroupMismatch(
                "subgroup belongs to a different group".into(),
            ));
        }
        let (_, gens) = h.presentation()?;
        let id = IntMatrix::identity(self.rank());
        let mut cols = Vec::new();
        for g in &gens {
            let m = self.reduce(self.element_action(g)?.sub(&id));
            cols.extend(m.columns());
        }
        Ok(self.subgroup_from_lattice(hermite_lattice(&cols, &self.diag)?))
    }

    /// Ĥ⁰(H, M) = M^H / N_H·M and Ĥ⁻¹(H, M) = ker N_H / I_H·M.
    pub fn tate_cohomology(&self, h: &Subgroup) -> Result<CohomologyReport> {
        let fixed = self.fixed_points(h)?;
        let norm = self.norm_matrix(h)?;
        let norm_image = self.image_subgroup(&norm)?;
        let norm_kernel = self.kernel_subgroup(&norm)?;
        let aug = self.augmentation_image(h)?;
        let h0 = self.quotient_structure(&fixed, &norm_image)?;
        let h_minus1 = self.quotient_structure(&norm_kernel, &aug)?;
        let herbrand = BigRational::new(h0.order.clone(), h_minus1.order.clone());
        Ok(CohomologyReport {
            h0,
            h_minus1,
            herbrand,
        })
    }

    /// `[Ĥ⁰(H,M)] / [Ĥ⁻¹(H,M)]` for cyclic H; equals 1 for every finite module,
    /// which makes it a self-test of the whole lattice machinery.
    pub fn herbrand_quotient(&self, h: &Subgroup) -> Result<BigRational> {
        if !h.is_cyclic() {
            return Err(Error::NotCyclic);
        }
        Ok(self.tate_cohomology(h)?.herbrand)
    }

    /// Pontryagin dual: same diagonal, every action matrix replaced by the
    /// d-conjugated transpose of its inverse mod d (the contragredient in the
    /// coordinates ⊕ Z/dᵢ ≅ Hom(⊕ Z/dᵢ, Q/Z)).
    pub fn pontryagin_dual(&self) -> Result<GModule> {
        let k = self.rank();
        let dual_of = |a: &IntMatrix, ord: u64| -> IntMatrix {
            let mut w = IntMatrix::identity(k);
            for _ in 0..ord.saturating_sub(1) {
                w = self.reduce(w.mul(a));
            }
            IntMatrix::from_fn(k, k, |i, j| {
                let num = &self.diag[i] * w.at(j, i);
                let (q, r) = num_integer::Integer::div_rem(&num, &self.diag[j]);
                debug_assert!(r.is_zero(), "dual entry must be integral");
                q
            })
        };
        let actions: Vec<IntMatrix> = self
            .group
            .cyclic_orders()
            .iter()
            .zip(&self.generator_actions)
            .map(|(&n, t)| dual_of(t, n))
            .collect();
        let zeta = dual_of(&self.zeta_action, self.ring.exponent());
        GModule::new(
            self.group.clone(),
            self.ring.clone(),
            self.diag.clone(),
            actions,
            zeta,
        )
    }

    /// Present a stable subgroup as a module in its own right: new diagonal
    /// from the invariant factors of lattice / diag(d)·Zᵏ, actions transported
    /// through the change of coordinates.
    pub fn restrict_to_submodule(&self, s: &ModSubgroup) -> Result<GModule> {
        let k = self.rank();
        if s.lattice.dim() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: s.lattice.dim(),
            });
        }
        let mut all_actions: Vec<&IntMatrix> = self.generator_actions.iter().collect();
        all_actions.push(&self.zeta_action);
        let mut conjugated = Vec::with_capacity(all_actions.len());
        for a in &all_actions {
            let mut cols = Vec::with_capacity(k);
            for col in s.lattice.basis_columns() {
                let img = a.mul_vec(&col);
                let x = s.lattice.coordinates_of(&img).ok_or(Error::NotStable)?;
                cols.push(x);
            }
            conjugated.push(IntMatrix::from_columns(k, &cols));
        }
        let mut rel_cols = Vec::with_capacity(k);
        for j in 0..k {
            let mut col = vec![BigInt::zero(); k];
            col[j] = self.diag[j].clone();
            let x = s.lattice.coordinates_of(&col).ok_or(Error::NotContained)?;
            rel_cols.push(x);
        }
        let rel = IntMatrix::from_columns(k, &rel_cols);
        let (new_diag, new_actions) = quotient_presentation(&rel, &conjugated)?;
        let r = self.generator_actions.len();
        let mut it = new_actions.into_iter();
        let gens: Vec<IntMatrix> = (&mut it).take(r).collect();
        let zeta = it.next().unwrap_or_else(|| IntMatrix::identity(0));
        let out = GModule::new(self.group.clone(), self.ring.clone(), new_diag, gens, zeta)?;
        debug_assert_eq!(out.order(), s.order);
        Ok(out)
    }

    /// Re-present with the diagonal in invariant-factor form.
    pub fn canonicalize(&self) -> Result<GModule> {
        let rel = IntMatrix::diagonal(&self.diag);
        let mut all_actions: Vec<IntMatrix> = self.generator_actions.clone();
        all_actions.push(self.zeta_action.clone());
        let (new_diag, new_actions) = quotient_presentation(&rel, &all_actions)?;
        let r = self.generator_actions.len();
        let mut it = new_actions.into_iter();
        let gens: Vec<IntMatrix> = (&mut it).take(r).collect();
        let zeta = it.next().unwrap_or_else(|| IntMatrix::identity(0));
        GModule::new(self.group.clone(), self.ring.clone(), new_diag, gens, zeta)
    }
}

/// Present Zᵏ / Λ·Zᵏ as ⊕ Z/dᵢ' (invariant factors > 1 only) and transport
/// endomorphisms that stabilize Λ.
pub(crate) fn quotient_presentation(
    rel: &IntMatrix,
    actions: &[IntMatrix],
) -> Result<(Vec<BigInt>, Vec<IntMatrix>)> {
    let k = rel.rows();
    let full = smith_with_inverses(rel);
    let s_diag: Vec<BigInt> = (0..k).map(|i| full.s.at(i, i).clone()).collect();
    if s_diag.iter().any(|x| x.is_zero()) {
        return Err(Error::RankDeficient {
            dim: k,
            rank: s_diag.iter().filter(|x| !x.is_zero()).count(),
        });
    }
    let keep: Vec<usize> = (0..k).filter(|&i| !s_diag[i].is_one()).collect();
    let new_diag: Vec<BigInt> = keep.iter().map(|&i| s_diag[i].clone()).collect();
    let mut new_actions = Vec::with_capacity(actions.len());
    for a in actions {
        let ay = full.u.mul(a).mul(&full.u_inv).reduced_rows_mod(&s_diag);
        let sub = IntMatrix::from_fn(keep.len(), keep.len(), |i, j| {
            ay.at(keep[i], keep[j]).clone()
        });
        new_actions.push(sub);
    }
    Ok((new_diag, new_actions))
}

/// Scalar extension `M ⊗_Z Z[ζ_e]` of a plain module: φ(e) block copies of the
/// diagonal, G acting blockwise, ζ acting through the companion matrix of Φ_e.
/// The order is `[M]^{φ(e)}`.
pub fn extend_scalars(m0: &GModule, conductor: u64) -> Result<GModule> {
    if m0.ring().exponent() != 1 {
        return Err(Error::RingMismatch(
            "scalar extension starts from a plain module (ring conductor 1)".into(),
        ));
    }
    let ring = CycloRing::new(conductor);
    let phi = ring.degree();
    let k = m0.rank();
    let n = phi * k;
    let mut diag = Vec::with_capacity(n);
    for _ in 0..phi {
        diag.extend_from_slice(m0.diag());
    }
    let block = |t: &IntMatrix| {
        IntMatrix::from_fn(n, n, |i, j| {
            let (bi, si) = (i / k, i % k);
            let (bj, sj) = (j / k, j % k);
            if bi == bj {
                t.at(si, sj).clone()
            } else {
                BigInt::zero()
            }
        })
    };
    let gens: Vec<IntMatrix> = m0.generator_actions().iter().map(block).collect();
    let comp = ring.companion();
    let zeta = IntMatrix::from_fn(n, n, |i, j| {
        let (bi, si) = (i / k, i % k);
        let (bj, sj) = (j / k, j % k);
        if si == sj {
            comp.at(bi, bj).clone()
        } else {
            BigInt::zero()
        }
    });
    GModule::new(m0.group().clone(), ring, diag, gens, zeta)
}

/// Result of checking `Z[M]^H = Z[M^H] + N_H·Z[M]` inside the permutation
/// module `Z[M]` (free of rank |M|, H permuting the basis through its action
/// on M). Both sides are returned in canonical Hermite form.
#[derive(Debug, Clone)]
pub struct FixedPointCheck {
    pub holds: bool,
    pub fixed_lattice: IntMatrix,
    pub combined_lattice: IntMatrix,
    pub module_size: u64,
    pub fixed_elements: u64,
}

/// Lattice identity for the fixed points of a prime-order permutation action
/// on a group ring of a module.
pub fn permutation_fixed_points_check(
    m: &GModule,
    h: &Subgroup,
    cap: u64,
) -> Result<FixedPointCheck> {
    if h.group() != m.group() {
        return Err(Error::GroupMismatch(
            "subgroup belongs to a different group".into(),
        ));
    }
    if !is_prime(h.order()) {
        return Err(Error::NotPrimeOrder(h.order()));
    }
    let size = m.order().to_u64().ok_or_else(|| Error::CapExceeded {
        what: "permutation module rank",
        limit: cap.to_string(),
        requested: m.order().to_string(),
    })?;
    if size > cap {
        return Err(Error::CapExceeded {
            what: "permutation module rank",
            limit: cap.to_string(),
            requested: size.to_string(),
        });
    }
    let n = size as usize;
    let diag: Vec<u64> = m.diag().iter().map(|d| d.to_u64().unwrap()).collect();
    let elements = enumerate_torsion_elements(&diag);
    let index_of = |v: &[u64]| -> usize {
        let mut idx = 0usize;
        for (&x, &d) in v.iter().zip(&diag).rev() {
            idx = idx * d as usize + x as usize;
        }
        idx
    };
    // permutation of basis indices for each element of H
    let mut perms: Vec<Vec<usize>> = Vec::new();
    for elem in h.elements() {
        let act = m.element_action(elem)?;
        let act_u64: Vec<Vec<u64>> = (0..m.rank())
            .map(|i| {
                (0..m.rank())
                    .map(|j| act.at(i, j).to_u64().unwrap())
                    .collect()
            })
            .collect();
        let perm: Vec<usize> = elements
            .iter()
            .map(|x| {
                let img: Vec<u64> = (0..m.rank())
                    .map(|i| {
                        let mut acc: u128 = 0;
                        for j in 0..m.rank() {
                            acc += act_u64[i][j] as u128 * x[j] as u128;
                        }
                        (acc % diag[i] as u128) as u64
                    })
                    .collect();
                index_of(&img)
            })
            .collect();
        perms.push(perm);
    }
    let identity_pos = h
        .elements()
        .iter()
        .position(|e| e == &m.group().identity())
        .unwrap();

    // Z[M]^H: kernel of the stacked (P_h − 1) for h ≠ identity.
    let nontrivial: Vec<&Vec<usize>> = perms
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != identity_pos)
        .map(|(_, p)| p)
        .collect();
    let stacked = IntMatrix::from_fn(nontrivial.len() * n, n, |row, col| {
        let (block, i) = (row / n, row % n);
        let p = nontrivial[block];
        let mut v = BigInt::zero();
        if p[col] == i {
            v += 1;
        }
        if col == i {
            v -= 1;
        }
        v
    });
    let fixed_basis = kernel_basis(&stacked);
    let fixed_lattice = column_hermite(n, &fixed_basis, None);

    // Z[M^H] + N_H·Z[M]
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    let mut fixed_elements = 0u64;
    for (idx, _x) in elements.iter().enumerate() {
        if nontrivial.iter().all(|p| p[idx] == idx) {
            let mut e = vec![BigInt::zero(); n];
            e[idx] = BigInt::one();
            gens.push(e);
            fixed_elements += 1;
        }
    }
    for idx in 0..n {
        let mut v = vec![BigInt::zero(); n];
        for p in &perms {
            v[p[idx]] += 1;
        }
        gens.push(v);
    }
    let combined_lattice = column_hermite(n, &gens, None);
    Ok(FixedPointCheck {
        holds: fixed_lattice == combined_lattice,
        fixed_lattice,
        combined_lattice,
        module_size: size,
        fixed_elements,
    })
}

/// All elements of ⊕ Z/dᵢ in mixed-radix order (first coordinate fastest).
pub(crate) fn enumerate_torsion_elements(diag: &[u64]) -> Vec<Vec<u64>> {
    let total: u64 = diag.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut cur = vec![0u64; diag.len()];
    loop {
        out.push(cur.clone());
        let mut j = 0;
        loop {
            if j == diag.len() {
                return out;
            }
            cur[j] += 1;
            if cur[j] < diag[j] {
                break;
            }
            cur[j] = 0;
            j += 1;
        }
    }
}

/// Character-indexed data over a cyclic subgroup ⟨τ⟩ of order m, with
/// χ(τ) = ζ_m realized as Z^{e/m}. Everything the order formulas need for a
/// single cyclic layer lives here: eigenspaces, quasi-idempotent images, the
/// partial products ∏_{j>i}(τ − ζ_m^j), and the correction modules.
pub struct CyclicCharContext<'a> {
    module: &'a GModule,
    pub order: u64,
    tau_powers: Vec<IntMatrix>,
    zeta_m_powers: Vec<IntMatrix>,
}

/// The pieces of the correction module S_i: numerator M^{χⁱ} ∩ P_i·M over
/// denominator ε_{χⁱ}·M, together with the eigenspace and Ĥ⁰ data.
#[derive(Debug, Clone)]
pub struct CorrectionParts {
    pub eigenspace: ModSubgroup,
    pub idempotent_image: ModSubgroup,
    pub h0: QuotientStructure,
    pub numerator: ModSubgroup,
    pub correction: QuotientStructure,
}

impl GModule {
    /// Context for character computations over the cyclic subgroup generated
    /// by `tau`; requires the ring to contain the m-th roots of unity.
    pub fn cyclic_context(&self, tau: &[u64]) -> Result<CyclicCharContext<'_>> {
        self.group.check_element(tau)?;
        let m = self.group.element_order(tau);
        let er = self.ring.exponent();
        if er % m != 0 {
            return Err(Error::RingMismatch(format!(
                "ring conductor {er} does not contain the {m}-th roots of unity"
            )));
        }
        let step = er / m;
        let t = self.element_action(tau)?;
        let mut tau_powers = Vec::with_capacity(m as usize);
        let mut acc = IntMatrix::identity(self.rank());
        for _ in 0..m {
            tau_powers.push(acc.clone());
            acc = self.reduce(acc.mul(&t));
        }
        let zstep = self.zeta_power_action(step);
        let mut zeta_m_powers = Vec::with_capacity(m as usize);
        let mut zacc = IntMatrix::identity(self.rank());
        for _ in 0..m {
            zeta_m_powers.push(zacc.clone());
            zacc = self.reduce(zacc.mul(&zstep));
        }
        Ok(CyclicCharContext {
            module: self,
            order: m,
            tau_powers,
            zeta_m_powers,
        })
    }

    /// S_i(M) over a cyclic group with chosen generator τ: the correction
    /// module (M^{χⁱ} ∩ ∏_{j>i}(τ − ζ^j)M) / ε_{χⁱ}M. S₀ is always trivial
    /// and S_{n−1} equals Ĥ⁰_{χ^{n−1}}.
    pub fn correction_module(&self, i: u64, tau: &[u64]) -> Result<CorrectionParts> {
        if !self.group.is_cyclic() {
            return Err(Error::NotCyclic);
        }
        if self.group.element_order(tau) != self.group.order().max(1) {
            return Err(Error::NotGenerator);
        }
        self.cyclic_context(tau)?.correction(i)
    }
}

impl<'a> CyclicCharContext<'a> {
    pub fn module(&self) -> &'a GModule {
        self.module
    }

    fn tau_pow(&self, k: u64) -> &IntMatrix {
        &self.tau_powers[(k % self.order) as usize]
    }

    fn zeta_m(&self, k: u64) -> &IntMatrix {
        &self.zeta_m_powers[(k % self.order) as usize]
    }

    /// ker(τ − ζ_m^i), the χⁱ-eigenspace for the subgroup ⟨τ⟩.
    pub fn eigenspace(&self, i: u64) -> Result<ModSubgroup> {
        let m = self.module.reduce(self.tau_pow(1).sub(self.zeta_m(i)));
        self.module.kernel_subgroup(&m)
    }

    /// ε_{χⁱ} = Σ_k ζ_m^{−ik} τ^k as a matrix.
    pub fn quasi_idempotent(&self, i: u64) -> IntMatrix {
        let k = self.module.rank();
        let mut acc = IntMatrix::zeros(k, k);
        for t in 0..self.order {
            let c = (self.order - (i as u128 * t as u128 % self.order as u128) as u64) % self.order;
            acc = acc.add(&self.zeta_m(c).mul(self.tau_pow(t)));
        }
        self.module.reduce(acc)
    }

    /// ∏_{j=i+1}^{m−1} (τ − ζ_m^j); the empty product (i = m−1) is 1.
    pub fn tail_product(&self, i: u64) -> IntMatrix {
        let k = self.module.rank();
        let mut acc = IntMatrix::identity(k);
        for j in i + 1..self.order {
            let f = self.tau_pow(1).sub(self.zeta_m(j));
            acc = self.module.reduce(acc.mul(&f));
        }
        acc
    }

    /// ker ∏_{j=i}^{m−1}(τ − ζ_m^j); i = m gives the zero subgroup, i = 0 the
    /// whole module (the product is then τ^m − 1 = 0).
    pub fn head_kernel(&self, i: u64) -> Result<ModSubgroup> {
        if i >= self.order {
            return Ok(self.module.trivial_subgroup());
        }
        let f = self.tau_pow(1).sub(self.zeta_m(i));
        let m = self.module.reduce(f.mul(&self.tail_product(i)));
        self.module.kernel_subgroup(&m)
    }

    /// Ĥ⁰_{χⁱ}(⟨τ⟩, M) = eigenspace / quasi-idempotent image.
    pub fn h0(&self, i: u64) -> Result<QuotientStructure> {
        let top = self.eigenspace(i)?;
        let bottom = self.module.image_subgroup(&self.quasi_idempotent(i))?;
        self.module.quotient_structure(&top, &bottom)
    }

    pub fn correction(&self, i: u64) -> Result<CorrectionParts> {
        let eigenspace = self.eigenspace(i)?;
        let idempotent_image = self.module.image_subgroup(&self.quasi_idempotent(i))?;
        let h0 = self
            .module
            .quotient_structure(&eigenspace, &idempotent_image)?;
        let tail_image = self.module.image_subgroup(&self.tail_product(i))?;
        let numerator_lattice = lattice_intersection(&eigenspace.lattice, &tail_image.lattice)?;
        let numerator = self.module.subgroup_from_lattice(numerator_lattice);
        let correction = self
            .module
            .quotient_structure(&numerator, &idempotent_image)?;
        Ok(CorrectionParts {
            eigenspace,
            idempotent_image,
            h0,
            numerator,
            correction,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_characters, enumerate_subgroups};

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    /// G = Z/2 acting on Z/4 by negation, over Z[ζ₂] (ζ₂ = −1).
    fn negation_module() -> GModule {
        GModule::new(
            FiniteAbelianGroup::cyclic(2),
            CycloRing::new(2),
            vec![big(4)],
            vec![IntMatrix::from_rows(&[vec![-1]])],
            IntMatrix::from_rows(&[vec![-1]]),
        )
        .unwrap()
    }

    /// Enumeration mini-oracle for 1×1 modules: order of {m : a·m ≡ b·m (mod d)}.
    fn eigencount_1d(d: i64, a: i64, b: i64) -> u64 {
        (0..d)
            .filter(|m| (a * m).rem_euclid(d) == (b * m).rem_euclid(d))
            .count() as u64
    }

    /// Enumeration mini-oracle for 1×1 modules: order of the image of mult-by-a.
    fn image_count_1d(d: i64, a: i64) -> u64 {
        let set: std::collections::BTreeSet<i64> = (0..d).map(|m| (a * m).rem_euclid(d)).collect();
        set.len() as u64
    }

    #[test]
    fn validate_trivial_action_examples() {
        // Trivial action on Z/4 over the plain ring (conductor 1).
        let m = GModule::plain(
            FiniteAbelianGroup::cyclic(2),
            vec![big(4)],
            vec![IntMatrix::identity(1)],
        )
        .unwrap();
        assert!(m.is_valid());

        // Negation module: T² = 1 mod 4.
        assert!(negation_module().is_valid());

        // T = (2) on Z/4 is not even invertible: T² = 0 ≠ 1.
        let bad = GModule::new(
            FiniteAbelianGroup::cyclic(2),
            CycloRing::new(2),
            vec![big(4)],
            vec![IntMatrix::from_rows(&[vec![2]])],
            IntMatrix::from_rows(&[vec![-1]]),
        )
        .unwrap();
        let report = bad.validate();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.contains("T^2 = 1")));
    }

    #[test]
    fn zeta_axiom_is_checked() {
        // Z = identity with conductor 2 on Z/4 violates Phi_2(Z) = Z + 1 = 0.
        let m = GModule::new(
            FiniteAbelianGroup::cyclic(2),
            CycloRing::new(2),
            vec![big(4)],
            vec![IntMatrix::from_rows(&[vec![-1]])],
            IntMatrix::identity(1),
        )
        .unwrap();
        let report = m.validate();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.contains("Phi_2")));
    }

    #[test]
    fn group_ring_action_examples() {
        let m = negation_module();
        let ring = m.ring().clone();
        let one = ring.one();
        // identity element acts as the identity matrix
        let id = m.group_ring_action(&[(one.clone(), vec![0])]).unwrap();
        assert_eq!(id, m.reduced_identity());
        // norm element 1 + τ acts as 0
        let norm = m
            .group_ring_action(&[(one.clone(), vec![0]), (one.clone(), vec![1])])
            .unwrap();
        assert!(norm.is_zero());
        // quasi-idempotent of the faithful character: 1 − τ acts as 2
        let chi = Character::new(m.group().clone(), vec![1]).unwrap();
        let eps = m.quasi_idempotent_matrix(&chi).unwrap();
        assert_eq!(eps, IntMatrix::from_rows(&[vec![2]]));
    }

    #[test]
    fn isotypic_components_match_enumeration() {
        let m = negation_module();
        let chars = enumerate_characters(m.group());
        // trivial χ: fixed points of negation are the 2-torsion
        let triv = m.isotypic_component(&chars[0]).unwrap();
        assert_eq!(triv.order(), &big(eigencount_1d(4, -1, 1) as i64));
        assert_eq!(triv.order(), &big(2));
        // faithful χ: −m = −m always
        let faith = m.isotypic_component(&chars[1]).unwrap();
        assert_eq!(faith.order(), &big(eigencount_1d(4, -1, -1) as i64));
        assert_eq!(faith.order(), &big(4));
        // trivial action: χ⁰ component is everything
        let t = GModule::new(
            FiniteAbelianGroup::cyclic(2),
            CycloRing::new(2),
            vec![big(6)],
            vec![IntMatrix::identity(1)],
            IntMatrix::from_rows(&[vec![-1]]),
        )
        .unwrap();
        let whole = t
            .isotypic_component(&Character::trivial(t.group()))
            .unwrap();
        assert_eq!(whole.order(), &big(6));
    }

    #[test]
    fn quasi_idempotent_images_match_enumeration() {
        let m = negation_module();
        let chars = enumerate_characters(m.group());
        let e0 = m.quasi_idempotent_image(&chars[0]).unwrap();
        assert_eq!(e0.order(), &big(image_count_1d(4, 0) as i64)); // 1 + (−1) = 0
        assert_eq!(e0.order(), &big(1));
        let e1 = m.quasi_idempotent_image(&chars[1]).unwrap();
        assert_eq!(e1.order(), &big(image_count_1d(4, 2) as i64)); // 1 − (−1) = 2
        assert_eq!(e1.order(), &big(2));
        // ε_{χ⁰} on a trivial-action module is multiplication by |G|
        let t = GModule::new(
            FiniteAbelianGroup::cyclic(2),
            CycloRing::new(2),
            vec![big(6)],
            vec![IntMatrix::identity(1)],
            IntMatrix::from_rows(&[vec![-1]]),
        )
        .unwrap();
        let img = t
            .quasi_idempotent_image(&Character::trivial(t.group()))
            .unwrap();
        assert_eq!(img.order(), &big(image_count_1d(6, 2) as i64));
        assert_eq!(img.order(), &big(3)); // 2·(Z/6) = {0,2,4}
    }

    #[test]
    fn twisted_h0_examples() {
        let m = negation_module();
        let chars = enumerate_characters(m.group());
        assert_eq!(m.twisted_h0(&chars[0]).unwrap().order, big(2)); // {0,2}/{0}
        assert_eq!(m.twisted_h0(&chars[1]).unwrap().order, big(2)); // Z/4 / {0,2}
                                                                    // n-divisible module: order coprime to |G| kills the quotient
        let nd = GModule::new(
            FiniteAbelianGroup::cyclic(2),
            CycloRing::new(2),
            vec![big(9)],
            vec![IntMatrix::from_rows(&[vec![-1]])],
            IntMatrix::from_rows(&[vec![-1]]),
        )
        .unwrap();
        for chi in enumerate_characters(nd.group()) {
            assert_eq!(nd.twisted_h0(&chi).unwrap().order, big(1));
        }
    }

    #[test]
    fn correction_modules_on_negation_module() {
        let m = negation_module();
        let tau = vec![1];
        let s0 = m.correction_module(0, &tau).unwrap();
        assert_eq!(s0.correction.order, big(1)); // S₀ is always trivial
        let s1 = m.correction_module(1, &tau).unwrap();
        // S_{n−1} = Ĥ⁰_{χ^{n−1}}: the tail product is empty
        assert_eq!(s1.correction.order, big(2));
        assert_eq!(s1.correction.order, s1.h0.order);
    }

    #[test]
    fn correction_module_rejects_non_generator() {
        let m = GModule::new(
            FiniteAbelianGroup::cyclic(4),
            CycloRing::new(4),
            vec![big(3)],
            vec![IntMatrix::identity(1)],
            IntMatrix::identity(1),
        )
        .unwrap();
        assert!(matches!(
            m.correction_module(0, &[2]),
            Err(Error::NotGenerator)
        ));
        let klein = GModule::plain(
            FiniteAbelianGroup::new(vec![2, 2]).unwrap(),
            vec![big(3)],
            vec![IntMatrix::identity(1), IntMatrix::identity(1)],
        )
        .unwrap();
        assert!(matches!(
            klein.correction_module(0, &[1, 0]),
            Err(Error::NotCyclic)
        ));
    }

    #[test]
    fn twist_examples() {
        let m = negation_module();
        let chars = enumerate_characters(m.group());
        assert_eq!(m.twist(&chars[0]).unwrap(), m); // trivial twist is the identity
                                                    // twisting the trivial action by the sign character flips the sign
        let t = GModule::new(
            FiniteAbelianGroup::cyclic(2),
            CycloRing::new(2),
            vec![big(4)],
            vec![IntMatrix::identity(1)],
            IntMatrix::from_rows(&[vec![-1]]),
        )
        .unwrap();
        let tw = t.twist(&chars[1]).unwrap();
        assert_eq!(tw.generator_actions()[0], IntMatrix::from_rows(&[vec![3]]));
        // twist then untwist is the identity, entrywise
        let back = tw.twist(&chars[1].inverse()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn twist_h0_compatibility() {
        // [Ĥ⁰_χ(G, M)] = [Ĥ⁰(G, M_χ̄)]
        let m = negation_module();
        let whole = Subgroup::whole(m.group());
        for chi in enumerate_characters(m.group()) {
            let lhs = m.twisted_h0(&chi).unwrap().order;
            let rhs = m
                .twist(&chi)
                .unwrap()
                .tate_cohomology(&whole)
                .unwrap()
                .h0
                .order;
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn tate_cohomology_examples() {
        // trivial subgroup: both groups vanish
        let m = negation_module();
        let trivial = Subgroup::trivial(m.group());
        let rep = m.tate_cohomology(&trivial).unwrap();
        assert_eq!(
            (rep.h0.order.clone(), rep.h_minus1.order.clone()),
            (big(1), big(1))
        );

        // G = Z/2 acting trivially on Z/2
        let t = GModule::new(
            FiniteAbelianGroup::cyclic(2),
            CycloRing::new(2),
            vec![big(2)],
            vec![IntMatrix::identity(1)],
            IntMatrix::from_rows(&[vec![-1]]),
        )
        .unwrap();
        let whole = Subgroup::whole(t.group());
        let rep = t.tate_cohomology(&whole).unwrap();
        assert_eq!(
            (rep.h0.order.clone(), rep.h_minus1.order.clone()),
            (big(2), big(2))
        );

        // negation on Z/4
        let rep = m.tate_cohomology(&Subgroup::whole(m.group())).unwrap();
        assert_eq!(
            (rep.h0.order.clone(), rep.h_minus1.order.clone()),
            (big(2), big(2))
        );
        assert_eq!(rep.herbrand, BigRational::from_integer(big(1)));
    }

    #[test]
    fn herbrand_quotient_is_one() {
        let m = negation_module();
        for h in enumerate_subgroups(m.group(), false, 512).unwrap() {
            assert_eq!(
                m.herbrand_quotient(&h).unwrap(),
                BigRational::from_integer(big(1))
            );
        }
    }

    #[test]
    fn pontryagin_dual_examples() {
        // trivial action is self-dual
        let t = GModule::plain(
            FiniteAbelianGroup::cyclic(2),
            vec![big(5)],
            vec![IntMatrix::identity(1)],
        )
        .unwrap();
        assert_eq!(t.pontryagin_dual().unwrap(), t);
        // negation is self-inverse, so its dual is itself
        let m = negation_module();
        let dual = m.pontryagin_dual().unwrap();
        assert_eq!(
            dual.generator_actions()[0],
            IntMatrix::from_rows(&[vec![3]])
        );
        // double dual returns the original entrywise
        assert_eq!(dual.pontryagin_dual().unwrap(), m);
    }

    #[test]
    fn duality_swaps_h0_and_h_minus1() {
        let m = negation_module();
        let dual = m.pontryagin_dual().unwrap();
        for h in enumerate_subgroups(m.group(), false, 512).unwrap() {
            let dual_rep = dual.tate_cohomology(&h).unwrap();
            let rep = m.tate_cohomology(&h).unwrap();
            assert_eq!(dual_rep.h0.order, rep.h_minus1.order);
            assert_eq!(dual_rep.h_minus1.order, rep.h0.order);
        }
    }

    #[test]
    fn dual_with_mixed_diagonal_is_valid() {
        // Unequal moduli exercise the d-conjugation in the dual.
        let g = FiniteAbelianGroup::cyclic(2);
        // T on Z/2 ⊕ Z/4: swap-like endomorphism t(x, y) = (x + 2y ... ) keep simple:
        // T = [[1, 2], [0, -1]] satisfies T² = I mod (2,4) and the column condition.
        let t = IntMatrix::from_rows(&[vec![1, 2], vec![0, -1]]);
        let m = GModule::new(
            g,
            CycloRing::new(2),
            vec![big(2), big(4)],
            vec![t],
            IntMatrix::from_rows(&[vec![-1, 0], vec![0, -1]]),
        )
        .unwrap();
        assert!(m.is_valid(), "{:?}", m.validate().violations);
        let dual = m.pontryagin_dual().unwrap();
        assert!(dual.is_valid(), "{:?}", dual.validate().violations);
        assert_eq!(dual.pontryagin_dual().unwrap(), m);
        for h in enumerate_subgroups(m.group(), false, 512).unwrap() {
            assert_eq!(
                dual.tate_cohomology(&h).unwrap().h0.order,
                m.tate_cohomology(&h).unwrap().h_minus1.order
            );
        }
    }

    #[test]
    fn restriction_examples() {
        let m = negation_module();
        // whole module restricts to a module of the same order
        let whole = m.whole_subgroup();
        let r = m.restrict_to_submodule(&whole).unwrap();
        assert_eq!(r.order(), m.order());
        assert!(r.is_valid());
        // trivial subgroup restricts to the zero module
        let zero = m.restrict_to_submodule(&m.trivial_subgroup()).unwrap();
        assert_eq!(zero.rank(), 0);
        assert_eq!(zero.order(), big(1));
        // Klein group swapping two Z/2 coordinates; diagonal is fixed pointwise
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        let m2 =
            GModule::plain(g, vec![big(2), big(2)], vec![swap, IntMatrix::identity(2)]).unwrap();
        let diag_lattice = hermite_lattice(&[vec![big(1), big(1)]], m2.diag()).unwrap();
        let sub = m2.subgroup_from_lattice(diag_lattice);
        assert_eq!(sub.order(), &big(2));
        let restricted = m2.restrict_to_submodule(&sub).unwrap();
        assert_eq!(restricted.order(), big(2));
        assert_eq!(restricted.diag(), &[big(2)]);
        // the swap acts trivially on the diagonal
        assert_eq!(restricted.generator_actions()[0], IntMatrix::identity(1));
        assert!(restricted.is_valid());
    }

    #[test]
    fn restriction_rejects_unstable_subgroups() {
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        let m =
            GModule::plain(g, vec![big(2), big(2)], vec![swap, IntMatrix::identity(2)]).unwrap();
        // {(0,0),(1,0)} is not swap-stable
        let line = hermite_lattice(&[vec![big(1), big(0)]], m.diag()).unwrap();
        let sub = m.subgroup_from_lattice(line);
        assert!(matches!(
            m.restrict_to_submodule(&sub),
            Err(Error::NotStable)
        ));
    }

    #[test]
    fn extend_scalars_examples() {
        // conductor 1: nothing changes
        let m0 = GModule::plain(
            FiniteAbelianGroup::cyclic(2),
            vec![big(4)],
            vec![IntMatrix::from_rows(&[vec![-1]])],
        )
        .unwrap();
        let same = extend_scalars(&m0, 1).unwrap();
        assert_eq!(same.order(), m0.order());
        assert_eq!(same.diag(), m0.diag());
        // conductor 2: underlying group unchanged, ζ₂ acts as −1
        let e2 = extend_scalars(&m0, 2).unwrap();
        assert_eq!(e2.order(), m0.order());
        assert_eq!(e2.zeta_action(), &IntMatrix::from_rows(&[vec![3]]));
        assert!(e2.is_valid());

        // Z/3 with trivial Z/3-action extended to Z[ζ₃]: order 9 = 3^φ(3)
        let z3 = GModule::plain(
            FiniteAbelianGroup::cyclic(3),
            vec![big(3)],
            vec![IntMatrix::identity(1)],
        )
        .unwrap();
        let ext = extend_scalars(&z3, 3).unwrap();
        assert_eq!(ext.order(), big(9));
        assert_eq!(ext.diag(), &[big(3), big(3)]);
        assert!(ext.is_valid(), "{:?}", ext.validate().violations);

        // order law [M]^φ(e) for φ(5) = 4
        let m4 = GModule::plain(FiniteAbelianGroup::trivial(), vec![big(4)], vec![]).unwrap();
        let e5 = extend_scalars(&m4, 5).unwrap();
        assert_eq!(e5.order(), big(256));
        assert!(e5.is_valid());
    }

    #[test]
    fn extended_scalars_z3_table() {
        // the 9-element worked example, checked against the lattice path
        let z3 = GModule::plain(
            FiniteAbelianGroup::cyclic(3),
            vec![big(3)],
            vec![IntMatrix::identity(1)],
        )
        .unwrap();
        let m = extend_scalars(&z3, 3).unwrap();
        let chars = enumerate_characters(m.group());
        let orders: Vec<BigInt> = chars
            .iter()
            .map(|c| m.isotypic_component(c).unwrap().order().clone())
            .collect();
        assert_eq!(orders, vec![big(9), big(3), big(3)]);
        let tau = vec![1];
        let s1 = m.correction_module(1, &tau).unwrap();
        assert_eq!(s1.correction.order, big(3));
        let s0 = m.correction_module(0, &tau).unwrap();
        assert_eq!(s0.correction.order, big(1));
    }

    #[test]
    fn permutation_fixed_points_examples() {
        // trivial action: every basis vector is fixed, both sides are Z[M]
        let t = GModule::plain(
            FiniteAbelianGroup::cyclic(2),
            vec![big(3)],
            vec![IntMatrix::identity(1)],
        )
        .unwrap();
        let h = Subgroup::whole(t.group());
        let chk = permutation_fixed_points_check(&t, &h, 64).unwrap();
        assert!(chk.holds);
        assert_eq!(chk.fixed_elements, 3);

        // negation on Z/4: rank-4 lattice identity
        let m = negation_module();
        let chk = permutation_fixed_points_check(&m, &Subgroup::whole(m.group()), 64).unwrap();
        assert!(chk.holds);
        assert_eq!(chk.module_size, 4);
        assert_eq!(chk.fixed_elements, 2);

        // Z/3 acting on (Z/3)² through the companion matrix of Φ₃
        let g3 = FiniteAbelianGroup::cyclic(3);
        let comp = CycloRing::new(3).companion();
        let m3 = GModule::plain(g3, vec![big(3), big(3)], vec![comp]).unwrap();
        assert!(m3.is_valid());
        let chk = permutation_fixed_points_check(&m3, &Subgroup::whole(m3.group()), 64).unwrap();
        assert!(chk.holds);
        assert_eq!(chk.module_size, 9);
    }

    #[test]
    fn permutation_check_requires_prime_order() {
        let m = GModule::plain(
            FiniteAbelianGroup::cyclic(4),
            vec![big(2)],
            vec![IntMatrix::identity(1)],
        )
        .unwrap();
        let whole = Subgroup::whole(m.group());
        assert!(matches!(
            permutation_fixed_points_check(&m, &whole, 64),
            Err(Error::NotPrimeOrder(4))
        ));
        let trivial = Subgroup::trivial(m.group());
        assert!(matches!(
            permutation_fixed_points_check(&m, &trivial, 64),
            Err(Error::NotPrimeOrder(1))
        ));
    }

    #[test]
    fn quasi_idempotent_squares_to_n_times_itself() {
        let m = negation_module();
        let n = big(m.group().order() as i64);
        for chi in enumerate_characters(m.group()) {
            let eps = m.quasi_idempotent_matrix(&chi).unwrap();
            let sq = m.reduce(eps.mul(&eps));
            assert_eq!(sq, m.reduce(eps.scale(&n)));
        }
    }

    #[test]
    fn norm_factorization_over_cyclic_group() {
        // ε_{χ⁰} = ∏_{j=1}^{n−1}(τ − ζⁿ^j) and ε_{χⁱ} = ζⁱ·∏_{j≠i}(τ − ζ^j)
        let z3 = GModule::plain(
            FiniteAbelianGroup::cyclic(3),
            vec![big(3)],
            vec![IntMatrix::identity(1)],
        )
        .unwrap();
        let m = extend_scalars(&z3, 3).unwrap();
        let ctx = m.cyclic_context(&[1]).unwrap();
        for i in 0..3u64 {
            let eps = ctx.quasi_idempotent(i);
            let mut prod = m.zeta_power_action(i * (m.ring().exponent() / 3));
            for j in 0..3u64 {
                if j != i {
                    let f = ctx.tau_pow(1).sub(ctx.zeta_m(j));
                    prod = m.reduce(prod.mul(&f));
                }
            }
            assert_eq!(eps, prod, "factorization fails at i = {i}");
        }
    }

    #[test]
    fn canonicalize_preserves_everything_observable() {
        let g = FiniteAbelianGroup::cyclic(2);
        let m = GModule::new(
            g,
            CycloRing::new(2),
            vec![big(4), big(2)],
            vec![IntMatrix::from_rows(&[vec![-1, 0], vec![0, 1]])],
            IntMatrix::from_rows(&[vec![-1, 0], vec![0, -1]]),
        )
        .unwrap();
        let c = m.canonicalize().unwrap();
        assert_eq!(c.order(), m.order());
        assert_eq!(c.diag(), &[big(2), big(4)]);
        assert!(c.is_valid());
        for chi in enumerate_characters(m.group()) {
            assert_eq!(
                m.twisted_h0(&chi).unwrap().order,
                c.twisted_h0(&chi).unwrap().order
            );
        }
    }
}
