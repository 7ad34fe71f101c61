//! Finite abelian groups as products of cyclic factors, their subgroups, and
//! their characters with values in the roots of unity of a cyclotomic ring.
//!
//! Elements are exponent vectors (g₁, …, g_r) with 0 ≤ gⱼ < nⱼ. A character
//! is stored as a vector (a₁, …, a_r) of integers mod e (the group exponent)
//! with χ(genⱼ) = ζ_e^{aⱼ}; the constraint nⱼ·aⱼ ≡ 0 (mod e) makes the value
//! on generator j an nⱼ-th root of unity.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::cyclotomic::{CycloElement, CycloRing};
use crate::error::{Error, Result};
use crate::lattice::hermite_lattice;
use crate::matrix::{smith_with_inverses, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::GroupMismatch(
                "cyclic factor orders must be >= 1".into(),
            ));
        }
        let mut total: u64 = 1;
        for &n in &orders {
            total = total.checked_mul(n).ok_or(Error::Overflow("group order"))?;
        }
        Ok(FiniteAbelianGroup { orders })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { orders: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n]).unwrap()
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn factor_count(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.orders
            .iter()
            .fold(1, |acc, &n| num_integer::lcm(acc, n))
    }

    pub fn is_cyclic(&self) -> bool {
        self.exponent() == self.order()
    }

    pub fn identity(&self) -> Vec<u64> {
        vec![0; self.orders.len()]
    }

    pub fn check_element(&self, g: &[u64]) -> Result<()> {
        if g.len() != self.orders.len() {
            return Err(Error::GroupMismatch(format!(
                "element has {} coordinates, group has {} factors",
                g.len(),
                self.orders.len()
            )));
        }
        for (j, (&x, &n)) in g.iter().zip(&self.orders).enumerate() {
            if x >= n {
                return Err(Error::GroupMismatch(format!(
                    "coordinate {j} out of range: {x} >= {n}"
                )));
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &n)| (n - x % n) % n)
            .collect()
    }

    pub fn scalar_mul(&self, a: &[u64], k: u64) -> Vec<u64> {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &n)| (x as u128 * k as u128 % n as u128) as u64)
            .collect()
    }

    pub fn element_order(&self, a: &[u64]) -> u64 {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &n)| n / num_integer::gcd(n, x))
            .fold(1, num_integer::lcm)
    }

    /// Exponent vector with 1 in factor j; the distinguished generator of
    /// that cyclic factor (or the identity when nⱼ = 1).
    pub fn canonical_generator(&self, j: usize) -> Vec<u64> {
        let mut g = self.identity();
        if self.orders[j] > 1 {
            g[j] = 1;
        }
        g
    }

    /// The element (1, 1, …, 1); a generator whenever the group is cyclic.
    pub fn diagonal_generator(&self) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&n| if n > 1 { 1 } else { 0 })
            .collect()
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut cur = self.identity();
        loop {
            out.push(cur.clone());
            let mut j = 0;
            loop {
                if j == self.orders.len() {
                    return out;
                }
                cur[j] += 1;
                if cur[j] < self.orders[j] {
                    break;
                }
                cur[j] = 0;
                j += 1;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    group: FiniteAbelianGroup,
    exps: Vec<u64>, // aⱼ mod e with χ(genⱼ) = ζ_e^{aⱼ}
}

impl Character {
    pub fn new(group: FiniteAbelianGroup, exps: Vec<u64>) -> Result<Self> {
        if exps.len() != group.factor_count() {
            return Err(Error::GroupMismatch(
                "character vector length mismatch".into(),
            ));
        }
        let e = group.exponent();
        for (&a, &n) in exps.iter().zip(group.cyclic_orders()) {
            if a >= e.max(1) || (n as u128 * a as u128) % e as u128 != 0 {
                return Err(Error::GroupMismatch(format!(
                    "character exponent {a} invalid for factor of order {n} (group exponent {e})"
                )));
            }
        }
        Ok(Character { group, exps })
    }

    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        Character {
            group: group.clone(),
            exps: vec![0; group.factor_count()],
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&a| a == 0)
    }

    /// c with χ(g) = ζ_e^c.
    pub fn value_exponent(&self, g: &[u64]) -> Result<u64> {
        self.group.check_element(g)?;
        let e = self.group.exponent() as u128;
        let mut acc: u128 = 0;
        for (&a, &x) in self.exps.iter().zip(g) {
            acc = (acc + a as u128 * x as u128) % e;
        }
        Ok(acc as u64)
    }

    /// c with χ̄(g) = χ(g)⁻¹ = ζ_e^c.
    pub fn inverse_value_exponent(&self, g: &[u64]) -> Result<u64> {
        let e = self.group.exponent();
        Ok((e - self.value_exponent(g)?) % e)
    }

    /// χ(g) as an element of a ring whose conductor is a multiple of the
    /// group exponent.
    pub fn value(&self, g: &[u64], ring: &CycloRing) -> Result<CycloElement> {
        let e = self.group.exponent();
        if ring.exponent() % e != 0 {
            return Err(Error::RingMismatch(format!(
                "ring conductor {} does not contain the {e}-th roots of unity",
                ring.exponent()
            )));
        }
        let scale = ring.exponent() / e;
        Ok(ring.zeta_power((self.value_exponent(g)? * scale) as i64))
    }

    pub fn mul(&self, other: &Character) -> Result<Character> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(
                "characters of different groups".into(),
            ));
        }
        let e = self.group.exponent();
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| (a + b) % e)
            .collect();
        Ok(Character {
            group: self.group.clone(),
            exps,
        })
    }

    pub fn pow(&self, k: u64) -> Character {
        let e = self.group.exponent() as u128;
        let exps = self
            .exps
            .iter()
            .map(|&a| (a as u128 * k as u128 % e) as u64)
            .collect();
        Character {
            group: self.group.clone(),
            exps,
        }
    }

    pub fn inverse(&self) -> Character {
        let e = self.group.exponent();
        let exps = self.exps.iter().map(|&a| (e - a) % e).collect();
        Character {
            group: self.group.clone(),
            exps,
        }
    }

    /// Multiplicative order inside the character group.
    pub fn order(&self) -> u64 {
        let e = self.group.exponent();
        self.exps
            .iter()
            .map(|&a| e / num_integer::gcd(e, a))
            .fold(1, num_integer::lcm)
    }
}

/// All |G| characters, in lexicographic order of their exponent vectors.
pub fn enumerate_characters(group: &FiniteAbelianGroup) -> Vec<Character> {
    let e = group.exponent();
    let mut out: Vec<Character> = group
        .elements()
        .into_iter()
        .map(|idx| {
            let exps: Vec<u64> = idx
                .iter()
                .zip(group.cyclic_orders())
                .map(|(&b, &n)| b * (e / n))
                .collect();
            Character {
                group: group.clone(),
                exps,
            }
        })
        .collect();
    out.sort_by(|a, b| a.exps.cmp(&b.exps));
    out
}

/// A subgroup stored as its full, sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    group: FiniteAbelianGroup,
    elements: Vec<Vec<u64>>,
}

impl Subgroup {
    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        Subgroup {
            group: group.clone(),
            elements: vec![group.identity()],
        }
    }

    pub fn whole(group: &FiniteAbelianGroup) -> Self {
        let mut elements = group.elements();
        elements.sort();
        Subgroup {
            group: group.clone(),
            elements,
        }
    }

    pub fn generated_by(group: &FiniteAbelianGroup, gens: &[Vec<u64>]) -> Result<Self> {
        for g in gens {
            group.check_element(g)?;
        }
        let mut set: BTreeSet<Vec<u64>> = BTreeSet::new();
        set.insert(group.identity());
        let mut frontier: Vec<Vec<u64>> = vec![group.identity()];
        while let Some(cur) = frontier.pop() {
            for g in gens {
                let nxt = group.add(&cur, g);
                if set.insert(nxt.clone()) {
                    frontier.push(nxt);
                }
            }
        }
        Ok(Subgroup {
            group: group.clone(),
            elements: set.into_iter().collect(),
        })
    }

    pub fn from_elements(group: &FiniteAbelianGroup, elements: Vec<Vec<u64>>) -> Result<Self> {
        let sub = Self::generated_by(group, &elements)?;
        if sub.elements.len() != {
            let mut e = elements.clone();
            e.sort();
            e.dedup();
            e.len()
        } {
            return Err(Error::NotSubgroup);
        }
        Ok(sub)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn elements(&self) -> &[Vec<u64>] {
        &self.elements
    }

    pub fn contains(&self, g: &[u64]) -> bool {
        self.elements
            .binary_search_by(|e| e.as_slice().cmp(g))
            .is_ok()
    }

    pub fn exponent(&self) -> u64 {
        self.elements
            .iter()
            .map(|g| self.group.element_order(g))
            .fold(1, num_integer::lcm)
    }

    pub fn is_cyclic(&self) -> bool {
        self.exponent() == self.order()
    }

    /// Some generator of a cyclic subgroup (an element of maximal order).
    pub fn cyclic_generator(&self) -> Option<Vec<u64>> {
        let n = self.order();
        self.elements
            .iter()
            .find(|g| self.group.element_order(g) == n)
            .cloned()
    }

    /// Present this subgroup abstractly as a product of cyclic groups,
    /// returning the abstract group together with one element of the ambient
    /// group per cyclic factor generating it.
    ///
    /// Uses the lattice of exponent vectors: H ≅ L_H / diag(n)·Zʳ, then Smith
    /// form of the relation matrix gives both the invariant factors and the
    /// change of basis picking out the generators.
    pub fn presentation(&self) -> Result<(FiniteAbelianGroup, Vec<Vec<u64>>)> {
        if self.order() == 1 {
            return Ok((FiniteAbelianGroup::trivial(), Vec::new()));
        }
        let r = self.group.factor_count();
        let n: Vec<BigInt> = self
            .group
            .cyclic_orders()
            .iter()
            .map(|&x| BigInt::from(x))
            .collect();
        let gens: Vec<Vec<BigInt>> = self
            .elements
            .iter()
            .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let basis = hermite_lattice(&gens, &n)?;
        // relation matrix Λ = B⁻¹·diag(n)
        let mut rel_cols = Vec::with_capacity(r);
        for j in 0..r {
            let mut col = vec![BigInt::from(0); r];
            col[j] = n[j].clone();
            rel_cols.push(
                basis
                    .coordinates_of(&col)
                    .expect("diag(n) lies in the subgroup lattice"),
            );
        }
        let rel = IntMatrix::from_columns(r, &rel_cols);
        let full = smith_with_inverses(&rel);
        let mut orders = Vec::new();
        let mut generators = Vec::new();
        for i in 0..r {
            let s = full.s.at(i, i);
            let s_u64: u64 = s
                .to_string()
                .parse()
                .map_err(|_| Error::Overflow("subgroup order"))?;
            if s_u64 > 1 {
                orders.push(s_u64);
                // generator = B·U⁻¹·eᵢ reduced modulo the cyclic orders
                let e_i: Vec<BigInt> = (0..r).map(|t| full.u_inv.at(t, i).clone()).collect();
                let vec = basis.basis().mul_vec(&e_i);
                let elem: Vec<u64> = vec
                    .iter()
                    .zip(self.group.cyclic_orders())
                    .map(|(x, &m)| {
                        use num_integer::Integer;
                        let md = x.mod_floor(&BigInt::from(m));
                        md.to_string().parse::<u64>().unwrap()
                    })
                    .collect();
                generators.push(elem);
            }
        }
        let abstract_group = FiniteAbelianGroup::new(orders)?;
        Ok((abstract_group, generators))
    }
}

/// Restrict a character of G to a subgroup H, re-presented on H's own cyclic
/// decomposition.
pub fn restrict_character(chi: &Character, h: &Subgroup) -> Result<Character> {
    if chi.group() != h.group() {
        return Err(Error::GroupMismatch(
            "character and subgroup live in different groups".into(),
        ));
    }
    let (hg, gens) = h.presentation()?;
    let e_g = chi.group().exponent();
    let e_h = hg.exponent();
    let mut exps = Vec::with_capacity(gens.len());
    for g in &gens {
        let c = chi.value_exponent(g)?;
        let num = c as u128 * e_h as u128;
        debug_assert_eq!(
            num % e_g as u128,
            0,
            "character value must restrict to an e_H-th root"
        );
        exps.push(((num / e_g as u128) % e_h.max(1) as u128) as u64);
    }
    Character::new(hg, exps)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Enumerate subgroups. With `prime_only` the result is exactly the subgroups
/// of prime order; otherwise all subgroups, obtained by closing the cyclic
/// subgroups under pairwise join. The cap bounds |G| for the full enumeration.
pub fn enumerate_subgroups(
    group: &FiniteAbelianGroup,
    prime_only: bool,
    cap: u64,
) -> Result<Vec<Subgroup>> {
    if !prime_only && group.order() > cap {
        return Err(Error::CapExceeded {
            what: "subgroup enumeration group order",
            limit: cap.to_string(),
            requested: group.order().to_string(),
        });
    }
    let elements = group.elements();
    if prime_only {
        let mut seen: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
        let mut out = Vec::new();
        for g in &elements {
            if is_prime(group.element_order(g)) {
                let sub = Subgroup::generated_by(group, std::slice::from_ref(g))?;
                if seen.insert(sub.elements.clone()) {
                    out.push(sub);
                }
            }
        }
        out.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
        return Ok(out);
    }
    let mut pool: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
    for g in &elements {
        let sub = Subgroup::generated_by(group, std::slice::from_ref(g))?;
        pool.insert(sub.elements);
    }
    loop {
        let snapshot: Vec<Vec<Vec<u64>>> = pool.iter().cloned().collect();
        let before = pool.len();
        for i in 0..snapshot.len() {
            for j in i + 1..snapshot.len() {
                let mut gens = snapshot[i].clone();
                gens.extend_from_slice(&snapshot[j]);
                let join = Subgroup::generated_by(group, &gens)?;
                pool.insert(join.elements);
            }
        }
        if pool.len() == before {
            break;
        }
    }
    let mut out: Vec<Subgroup> = pool
        .into_iter()
        .map(|elements| Subgroup {
            group: group.clone(),
            elements,
        })
        .collect();
    out.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_count_matches_group_order() {
        for orders in [
            vec![1],
            vec![2],
            vec![2, 2],
            vec![2, 4],
            vec![3, 3],
            vec![6],
        ] {
            let g = FiniteAbelianGroup::new(orders).unwrap();
            let chars = enumerate_characters(&g);
            assert_eq!(chars.len() as u64, g.order());
            let set: BTreeSet<Vec<u64>> = chars.iter().map(|c| c.exps().to_vec()).collect();
            assert_eq!(
                set.len(),
                chars.len(),
                "characters must be pairwise distinct"
            );
            assert!(chars.iter().any(|c| c.is_trivial()));
            // closed under multiplication
            for a in &chars {
                for b in &chars {
                    let p = a.mul(b).unwrap();
                    assert!(set.contains(p.exps()));
                }
            }
        }
    }

    #[test]
    fn character_group_has_same_invariant_type() {
        let g = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
        let chars = enumerate_characters(&g);
        let mut orders: Vec<u64> = chars.iter().map(|c| c.order()).collect();
        orders.sort_unstable();
        let mut elem_orders: Vec<u64> = g.elements().iter().map(|x| g.element_order(x)).collect();
        elem_orders.sort_unstable();
        assert_eq!(orders, elem_orders);
    }

    #[test]
    fn klein_group_characters() {
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let chars = enumerate_characters(&g);
        let exps: Vec<Vec<u64>> = chars.iter().map(|c| c.exps().to_vec()).collect();
        assert_eq!(exps, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn character_values_on_cyclic_groups() {
        let g = FiniteAbelianGroup::cyclic(3);
        let chi = Character::new(g.clone(), vec![1]).unwrap();
        let ring = CycloRing::new(3);
        // χ(τ²) = ζ₃² = −1 − ζ
        let v = chi.value(&[2], &ring).unwrap();
        assert_eq!(v, ring.zeta_power(2));
        let trivial = Character::trivial(&g);
        assert_eq!(trivial.value(&[2], &ring).unwrap(), ring.one());
        let g2 = FiniteAbelianGroup::cyclic(2);
        let chi2 = Character::new(g2, vec![1]).unwrap();
        let r2 = CycloRing::new(2);
        assert_eq!(chi2.value(&[1], &r2).unwrap(), r2.zeta_power(1));
    }

    #[test]
    fn character_multiplicativity() {
        let g = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
        let chars = enumerate_characters(&g);
        for chi in &chars {
            for a in g.elements() {
                for b in g.elements() {
                    let lhs = chi.value_exponent(&g.add(&a, &b)).unwrap();
                    let rhs = (chi.value_exponent(&a).unwrap() + chi.value_exponent(&b).unwrap())
                        % g.exponent();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn subgroups_of_z4() {
        let g = FiniteAbelianGroup::cyclic(4);
        let primes = enumerate_subgroups(&g, true, 512).unwrap();
        assert_eq!(primes.len(), 1);
        assert_eq!(primes[0].elements(), &[vec![0], vec![2]]);
        let all = enumerate_subgroups(&g, false, 512).unwrap();
        assert_eq!(all.len(), 3); // orders 1, 2, 4
    }

    #[test]
    fn subgroups_of_klein_group() {
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let primes = enumerate_subgroups(&g, true, 512).unwrap();
        assert_eq!(primes.len(), 3);
        for sub in &primes {
            assert_eq!(sub.order(), 2);
        }
        let all = enumerate_subgroups(&g, false, 512).unwrap();
        assert_eq!(all.len(), 5);
    }

    #[test]
    fn subgroups_of_z6_by_divisor_count() {
        let g = FiniteAbelianGroup::cyclic(6);
        let all = enumerate_subgroups(&g, false, 512).unwrap();
        assert_eq!(all.len(), 4);
        let mut orders: Vec<u64> = all.iter().map(|s| s.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        for s in &all {
            assert_eq!(g.order() % s.order(), 0, "Lagrange violated");
        }
    }

    #[test]
    fn restriction_examples() {
        let g = FiniteAbelianGroup::cyclic(4);
        let h = Subgroup::generated_by(&g, &[vec![2]]).unwrap();

        // χ(τ) = ζ₄ restricts to the nontrivial character of {0, 2}.
        let chi = Character::new(g.clone(), vec![1]).unwrap();
        let res = restrict_character(&chi, &h).unwrap();
        assert_eq!(res.group().cyclic_orders(), &[2]);
        assert_eq!(res.exps(), &[1]);

        // χ(τ) = −1 = ζ₄² restricts trivially.
        let chi2 = Character::new(g.clone(), vec![2]).unwrap();
        let res2 = restrict_character(&chi2, &h).unwrap();
        assert!(res2.is_trivial());

        let trivial = Character::trivial(&g);
        assert!(restrict_character(&trivial, &h).unwrap().is_trivial());
    }

    #[test]
    fn presentation_of_diagonal_subgroup() {
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let h = Subgroup::generated_by(&g, &[vec![1, 1]]).unwrap();
        let (hg, gens) = h.presentation().unwrap();
        assert_eq!(hg.cyclic_orders(), &[2]);
        assert_eq!(gens, vec![vec![1, 1]]);
    }

    #[test]
    fn cyclic_character_powers_cover_dual_group() {
        let g = FiniteAbelianGroup::cyclic(6);
        let chi = Character::new(g.clone(), vec![1]).unwrap();
        let all = enumerate_characters(&g);
        let mut powers: Vec<Vec<u64>> = (0..6).map(|i| chi.pow(i).exps().to_vec()).collect();
        powers.sort();
        let mut exps: Vec<Vec<u64>> = all.iter().map(|c| c.exps().to_vec()).collect();
        exps.sort();
        assert_eq!(powers, exps);
    }
}
