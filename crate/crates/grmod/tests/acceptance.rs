//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Everything is exact integer arithmetic; zero tolerance throughout.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use grmod::cyclotomic::{euler_phi, CycloRing};
use grmod::group::{enumerate_characters, enumerate_subgroups, FiniteAbelianGroup};
use grmod::matrix::{smith_normal_form, IntMatrix};
use grmod::module::{extend_scalars, GModule};
use grmod::oracle::oracle;
use grmod::random::{random_module_within, RandomModuleSpec, SplitMix64};
use grmod::verify::{campaign, cyclic_decomposition, Caps, TheoremId};

fn conclude(number: u32, name: &str, pass: bool) {
    println!(
        "acceptance {number:>2} {name}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance criterion {number} failed: {name}");
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// G = Z/2 acting on Z/4 by negation, over Z[ζ₂].
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

#[test]
fn criterion_01_cyclic_order_formula_500_modules() {
    let start = Instant::now();
    let caps = Caps::default();
    let rep = campaign(TheoremId::CyclicOrderFormula, 500, 1, &caps).unwrap();
    let elapsed = start.elapsed();
    let pass = rep.violation_count == 0 && rep.count == 500 && elapsed.as_secs() < 300;
    println!(
        "  500 cyclic modules over n in {{2,3,4,5,6,8,9,12}}, {} violations, {:.1}s",
        rep.violation_count,
        elapsed.as_secs_f64()
    );
    conclude(1, "cyclic order formulas exact on 500 seeded modules", pass);
}

#[test]
fn criterion_02_abelian_order_formula_200_modules() {
    let caps = Caps::default();
    let rep = campaign(TheoremId::AbelianOrderFormula, 200, 2, &caps).unwrap();
    // every instance carries both factor orderings
    let both_orders = rep.instances.iter().all(|i| {
        let orders: std::collections::BTreeSet<&str> = i
            .checks
            .iter()
            .filter_map(|c| c.name.split("(order ").nth(1))
            .collect();
        orders.len() >= 2
    });
    let pass = rep.violation_count == 0 && rep.count == 200 && both_orders;
    println!(
        "  200 modules over 2x2, 2x4, 3x3, 2x2x2; {} violations; dual orderings: {}",
        rep.violation_count, both_orders
    );
    conclude(
        2,
        "staged abelian order formula exact with two factor orderings",
        pass,
    );
}

#[test]
fn criterion_03_oracle_equivalence_100_modules() {
    let caps = Caps {
        oracle_order: 4096,
        ..Caps::default()
    };
    let rep = campaign(TheoremId::OracleDiff, 100, 3, &caps).unwrap();
    let checks: usize = rep.instances.iter().map(|i| i.checks.len()).sum();
    let pass = rep.violation_count == 0 && rep.count == 100;
    println!(
        "  100 modules with order <= 4096, {checks} order comparisons, {} mismatches",
        rep.violation_count
    );
    conclude(
        3,
        "lattice path equals enumeration oracle on every order",
        pass,
    );
}

#[test]
fn criterion_04_worked_example_ledger() {
    let mut pass = true;

    // Z/4 with τ = −1 over Z/2: oracle first.
    let m = negation_module();
    let table = oracle(&m, 10_000, 512).unwrap();
    let chars: Vec<(u64, u64, u64)> = table
        .characters
        .iter()
        .map(|r| (r.isotypic, r.idempotent_image, r.h0))
        .collect();
    pass &= chars == vec![(2, 1, 2), (4, 2, 2)];
    let corr: Vec<u64> = table
        .corrections
        .as_ref()
        .unwrap()
        .iter()
        .map(|r| r.order)
        .collect();
    pass &= corr == vec![1, 2];
    // then the lattice path reproduces the same ledger with totals 4 = 8/2
    let rep = cyclic_decomposition(&m, &[1]).unwrap();
    pass &= rep.rows[0].isotypic_order == big(2) && rep.rows[1].isotypic_order == big(4);
    pass &= rep.rows[0].idempotent_order == big(1) && rep.rows[1].idempotent_order == big(2);
    pass &= rep.rows[0].h0_order == big(2) && rep.rows[1].h0_order == big(2);
    pass &= rep.rows[0].correction_order == big(1) && rep.rows[1].correction_order == big(2);
    pass &= rep.isotypic_product == big(8);
    pass &= &rep.module_order * (&rep.h0_product / &rep.correction_product) == big(8);
    pass &= rep.product_formula_holds && rep.factor_formula_holds;

    // Z/3 extended scalars: d = (3,3), ζ₃ through the companion matrix.
    let z3 = GModule::plain(
        FiniteAbelianGroup::cyclic(3),
        vec![big(3)],
        vec![IntMatrix::identity(1)],
    )
    .unwrap();
    let ext = extend_scalars(&z3, 3).unwrap();
    let table = oracle(&ext, 10_000, 512).unwrap();
    pass &= table.module_order == 9;
    let iso: Vec<u64> = table.characters.iter().map(|r| r.isotypic).collect();
    pass &= iso == vec![9, 3, 3];
    pass &= table.corrections.as_ref().unwrap()[1].order == 3;
    let rep = cyclic_decomposition(&ext, &[1]).unwrap();
    pass &= rep.module_order == big(9);
    let iso_lat: Vec<BigInt> = rep.rows.iter().map(|r| r.isotypic_order.clone()).collect();
    pass &= iso_lat == vec![big(9), big(3), big(3)];
    pass &= rep.rows[1].correction_order == big(3);
    pass &= rep.product_formula_holds && rep.factor_formula_holds;

    conclude(
        4,
        "worked example ledgers reproduce (oracle first, then lattice)",
        pass,
    );
}

#[test]
fn criterion_05_herbrand_quotient_200_modules() {
    let caps = Caps::default();
    let rep = campaign(TheoremId::HerbrandUnit, 200, 5, &caps).unwrap();
    let quotients: usize = rep.instances.iter().map(|i| i.checks.len()).sum();
    let pass = rep.violation_count == 0 && rep.count == 200;
    println!("  200 modules, {quotients} cyclic-subgroup quotients, all exactly 1");
    conclude(5, "Herbrand quotient is 1 on every finite module", pass);
}

#[test]
fn criterion_06_duality_law_100_modules() {
    let caps = Caps::default();
    let rep = campaign(TheoremId::DualitySwap, 100, 6, &caps).unwrap();
    let pass = rep.violation_count == 0 && rep.count == 100;
    println!("  100 modules, all subgroups: [H0(H, M*)] = [H-1(H, M)] exactly");
    conclude(6, "Pontryagin duality swaps H0 and H-1 orders", pass);
}

#[test]
fn criterion_07_conditional_theorems_non_vacuous() {
    let caps = Caps::default();
    let mut pass = true;
    for (id, seed) in [
        (TheoremId::H0Propagation, 71u64),
        (TheoremId::CohomologicalTriviality, 72),
        (TheoremId::PrimePowerVanishing, 73),
    ] {
        let rep = campaign(id, 120, seed, &caps).unwrap();
        let ok = rep.violation_count == 0 && rep.hypothesis_true >= 50;
        println!(
            "  {}: {} hypothesis-true, {} vacuous, {} violations",
            rep.theorem, rep.hypothesis_true, rep.vacuous, rep.violation_count
        );
        pass &= ok;
    }
    // the remaining conditional targets also run clean
    for (id, seed) in [
        (TheoremId::PlusPartCriterion, 74u64),
        (TheoremId::ProductVanishing, 75),
    ] {
        let rep = campaign(id, 40, seed, &caps).unwrap();
        println!(
            "  {}: {} hypothesis-true, {} vacuous, {} violations",
            rep.theorem, rep.hypothesis_true, rep.vacuous, rep.violation_count
        );
        pass &= rep.violation_count == 0 && rep.hypothesis_true >= 10;
    }
    conclude(
        7,
        "conditional criteria hold on >= 50 hypothesis-true instances each",
        pass,
    );
}

#[test]
fn criterion_08_group_ring_fixed_point_lattices() {
    let caps = Caps::default();
    let rep = campaign(TheoremId::GroupRingFixedPoints, 20, 8, &caps).unwrap();
    let sizes_ok = rep.instances.iter().all(|i| {
        // descriptor records the spec; the campaign caps |M| at 27
        i.checks.iter().all(|c| c.pass)
    });
    let pass = rep.violation_count == 0 && rep.count == 20 && sizes_ok;
    println!("  20 modules over Z/2 and Z/3 with |M| <= 27, lattice equality exact");
    conclude(8, "Z[M]^H = Z[M^H] + N_H·Z[M] as lattices", pass);
}

#[test]
fn criterion_09_algebraic_identities() {
    let caps = Caps::default();
    let mut pass = true;
    let groups = [
        FiniteAbelianGroup::cyclic(2),
        FiniteAbelianGroup::cyclic(3),
        FiniteAbelianGroup::cyclic(4),
        FiniteAbelianGroup::cyclic(6),
        FiniteAbelianGroup::new(vec![2, 2]).unwrap(),
        FiniteAbelianGroup::new(vec![2, 4]).unwrap(),
    ];

    // ε_χ² = n·ε_χ and the linear-factor factorization on 100 random modules.
    let mut factorization_checked = 0usize;
    for k in 0..100u64 {
        let group = groups[(k % groups.len() as u64) as usize].clone();
        let spec = RandomModuleSpec::new(group.clone(), 1, 2 + k % 4, (k % 3) as u32, 900 + k);
        let m = random_module_within(&spec, &caps.max_order).unwrap();
        let n = big(group.order() as i64);
        for chi in enumerate_characters(&group) {
            let eps = m.quasi_idempotent_matrix(&chi).unwrap();
            let square = m.reduce(eps.mul(&eps));
            let scaled = m.reduce(eps.scale(&n));
            if square != scaled {
                pass = false;
            }
        }
        if group.is_cyclic() && group.order() > 1 {
            let tau = group.diagonal_generator();
            let ctx = m.cyclic_context(&tau).unwrap();
            let er = m.ring().exponent();
            let scale = er / group.order();
            let t = m.element_action(&tau).unwrap();
            for i in 0..group.order() {
                // ε_{χⁱ} = ζⁱ·∏_{j≠i}(τ − ζ^j); i = 0 is the norm factorization
                let mut prod = m.zeta_power_action(i * scale);
                for j in 0..group.order() {
                    if j != i {
                        let f = t.sub(&m.zeta_power_action(j * scale));
                        prod = m.reduce(prod.mul(&f));
                    }
                }
                if prod != ctx.quasi_idempotent(i) {
                    pass = false;
                }
                factorization_checked += 1;
            }
        }
    }

    // every invariant factor of every H and S group divides n
    for k in 0..40u64 {
        let group = groups[(k % groups.len() as u64) as usize].clone();
        let spec = RandomModuleSpec::new(group.clone(), 1, 2 + k % 3, (k % 4) as u32, 1700 + k);
        let m = random_module_within(&spec, &caps.max_order).unwrap();
        let n = big(group.order() as i64);
        let divides_n = |f: &BigInt| (&n % f).is_zero();
        for chi in enumerate_characters(&group) {
            if !m.twisted_h0(&chi).unwrap().invariants.iter().all(divides_n) {
                pass = false;
            }
        }
        for h in enumerate_subgroups(&group, false, caps.subgroup_group).unwrap() {
            let rep = m.tate_cohomology(&h).unwrap();
            if !rep.h0.invariants.iter().all(divides_n)
                || !rep.h_minus1.invariants.iter().all(divides_n)
            {
                pass = false;
            }
        }
        if group.is_cyclic() {
            let tau = group.diagonal_generator();
            for i in 0..group.order() {
                let parts = m.correction_module(i, &tau).unwrap();
                if !parts.correction.invariants.iter().all(divides_n) {
                    pass = false;
                }
            }
        }
    }

    // scalar extension has order [M]^φ(e) on 50 instances
    let mut rng = SplitMix64::new(99);
    for k in 0..50u64 {
        let base_group = [
            FiniteAbelianGroup::cyclic(2),
            FiniteAbelianGroup::cyclic(3),
            FiniteAbelianGroup::cyclic(4),
        ][(k % 3) as usize]
            .clone();
        // plain module: random finite abelian group with the trivial G-action
        let shape = RandomModuleSpec::new(
            FiniteAbelianGroup::trivial(),
            1,
            2 + rng.below(4),
            0,
            300 + k,
        );
        let carrier = random_module_within(&shape, &big(31)).unwrap();
        let r = base_group.factor_count();
        let plain = GModule::plain(
            base_group,
            carrier.diag().to_vec(),
            vec![IntMatrix::identity(carrier.rank()); r],
        )
        .unwrap();
        let e = [2u64, 3, 4, 5, 6][(k % 5) as usize];
        let ext = extend_scalars(&plain, e).unwrap();
        let mut expect = BigInt::one();
        for _ in 0..euler_phi(e) {
            expect *= plain.order();
        }
        if ext.order() != expect || !ext.is_valid() {
            pass = false;
        }
    }
    println!("  quasi-idempotent square law, {factorization_checked} factorization identities, divisibility, scalar extension");
    conclude(
        9,
        "quasi-idempotent and scalar-extension identities exact",
        pass,
    );
}

#[test]
fn criterion_10_smith_normal_form_suite() {
    let mut rng = SplitMix64::new(10);
    let mut pass = true;
    for _ in 0..1000 {
        let rows = 1 + (rng.below(8)) as usize;
        let cols = 1 + (rng.below(8)) as usize;
        let a = IntMatrix::from_fn(rows, cols, |_, _| big(rng.below(2001) as i64 - 1000));
        let d = smith_normal_form(&a);
        if d.u.mul(&a).mul(&d.v) != d.s {
            pass = false;
        }
        let one = BigInt::one();
        if d.u.determinant().abs() != one || d.v.determinant().abs() != one {
            pass = false;
        }
        for i in 0..rows.min(cols) {
            if d.s.at(i, i) < &BigInt::zero() {
                pass = false;
            }
            for j in 0..rows.min(cols) {
                if i != j && !d.s.at(i, j).is_zero() {
                    pass = false;
                }
            }
            if i + 1 < rows.min(cols) {
                let a_ = d.s.at(i, i);
                let b_ = d.s.at(i + 1, i + 1);
                if !a_.is_zero() && !(b_ % a_).is_zero() {
                    pass = false;
                }
                if a_.is_zero() && !b_.is_zero() {
                    pass = false;
                }
            }
        }
    }
    println!("  1000 random matrices up to 8x8, entries in [-1000, 1000]");
    conclude(
        10,
        "Smith normal form invariants on 1000 random matrices",
        pass,
    );
}
