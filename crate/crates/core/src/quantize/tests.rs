use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::diffpoly::{parse_diffpoly, LocalFunctional, VarNames};
use crate::reconstruct::rspin_eta;

fn p(n: usize, w: i32, a: u16, k: i32) -> WeylElement {
    WeylElement::var(n, w, a, k).unwrap()
}

fn ihbar(n: usize, w: i32, c: AlgScalar) -> WeylElement {
    let mut e = WeylElement::zero(n, w);
    e.add_term(PMonomial::new(0, []), 1, &AlgScalar::i() * &c).unwrap();
    e
}

#[test]
fn one_reordering_step() {
    let rule = CommRule::standard(rspin_eta(2));
    let a = weyl_star(&p(1, 2, 0, 1), &p(1, 2, 0, -1), &rule).unwrap();
    let normal = p(1, 2, 0, -1).symbol_mul(&p(1, 2, 0, 1)).unwrap();
    assert_eq!(a, normal.add(&ihbar(1, 2, AlgScalar::one())).unwrap());
    assert_eq!(a.to_text(), "p1_-1*p1_1 + i*hbar");
    assert_eq!(weyl_star(&p(1, 2, 0, -1), &p(1, 2, 0, 1), &rule).unwrap(), normal);
}

#[test]
fn standard_rule_instance() {
    let rule = CommRule::standard(rspin_eta(3));
    let c = weyl_commutator(&p(2, 2, 0, 1), &p(2, 2, 1, -1), &rule).unwrap();
    assert_eq!(c, ihbar(2, 2, AlgScalar::one()));
}

#[test]
fn deformed_rule_from_operator() {
    let rule = CommRule::deformed(4).unwrap();
    for m in 1..=3i32 {
        let c = weyl_commutator(&p(3, 3, 0, m), &p(3, 3, 2, -m), &rule).unwrap();
        assert_eq!(c, ihbar(3, 3, AlgScalar::from_int(m as i64)));
        // ħ(im)^3 ε²/48
        let c11 = weyl_commutator(&p(3, 3, 0, m), &p(3, 3, 0, -m), &rule).unwrap();
        let mut expect = WeylElement::zero(3, 3);
        let im3 = (AlgScalar::i() * AlgScalar::from_int(m as i64)).pow(3);
        expect.add_term(PMonomial::new(2, []), 1, &im3 * &AlgScalar::frac(1, 48)).unwrap();
        assert_eq!(c11, expect);
    }
    let rule5 = CommRule::deformed(5).unwrap();
    let c = weyl_commutator(&p(4, 2, 0, 2), &p(4, 2, 1, -2), &rule5).unwrap();
    let mut expect = WeylElement::zero(4, 2);
    expect.add_term(PMonomial::new(2, []), 1, &AlgScalar::i().pow(3) * &AlgScalar::frac(8, 30)).unwrap();
    assert_eq!(c, expect);
}

#[test]
fn f4_images() {
    let img = f_r_map(4, &p(3, 2, 0, 2)).unwrap();
    let mut expect = p(3, 2, 0, 2);
    expect.add_term(PMonomial::new(2, [(2, 2, 1)]), 0, AlgScalar::frac(-4, 96)).unwrap();
    assert_eq!(img, expect);
    assert_eq!(f_r_map(5, &p(4, 2, 2, 1)).unwrap(), p(4, 2, 2, 1));
    let img = f_r_map(5, &p(4, 2, 1, -1)).unwrap();
    let mut expect = p(4, 2, 1, -1);
    expect.add_term(PMonomial::new(2, [(3, -1, 1)]), 0, AlgScalar::frac(-1, 60)).unwrap();
    assert_eq!(img, expect);
    assert!(f_r_map(3, &p(2, 1, 0, 1)).is_err());
}

#[test]
fn f4_preserves_the_deformed_commutator() {
    let std = CommRule::standard(rspin_eta(4));
    let def = CommRule::deformed(4).unwrap();
    let (a, b) = (p(3, 2, 0, 2), p(3, 2, 0, -2));
    let lhs = f_r_map(4, &weyl_commutator(&a, &b, &def).unwrap()).unwrap();
    let rhs = weyl_commutator(&f_r_map(4, &a).unwrap(), &f_r_map(4, &b).unwrap(), &std).unwrap();
    assert_eq!(lhs, rhs);
    assert_eq!(lhs.hbar_order(), Some(1));
}

#[test]
fn window_and_rule_checks() {
    assert!(WeylElement::var(1, 2, 0, 3).is_err());
    let rule = CommRule::standard(rspin_eta(2));
    assert!(weyl_star(&p(1, 2, 0, 1), &p(1, 3, 0, 1), &rule).is_err());
    let u_dx = crate::hamops::DiffOperator::monomial(1, 1, crate::diffpoly::DiffPoly::var(1, 0, 0));
    let bad = HamiltonianOperator::from_entries(1, alloc::vec![u_dx]).unwrap();
    assert!(CommRule::from_operator(&bad).is_err());
}

#[test]
fn classical_limit_and_lift() {
    let g = LocalFunctional::new(parse_diffpoly(crate::drspin::builtin_g11_text(3).unwrap(), &VarNames::u(2)).unwrap());
    let ps = PSeries::from_functional(&g, 2);
    let lifted = WeylElement::from_pseries(&ps);
    assert_eq!(lifted.classical_limit(), ps);
    let rule = CommRule::standard(rspin_eta(2));
    let prod = weyl_star(&p(1, 2, 0, 1), &p(1, 2, 0, -1), &rule).unwrap();
    assert_eq!(prod.classical_limit(), p(1, 2, 0, -1).symbol_mul(&p(1, 2, 0, 1)).unwrap().classical_limit());
}

/// Random element from a seed list: up to three terms of degree ≤ 3, modes in `[-w, w]`.
fn element(n: usize, w: i32, items: &[(Vec<(u16, i32)>, i64)]) -> WeylElement {
    let mut e = WeylElement::zero(n, w);
    for (vars, c) in items {
        let m = PMonomial::new(0, vars.iter().map(|(a, k)| (*a % n as u16, *k, 1)));
        e.add_term(m, 0, AlgScalar::from_int(*c)).unwrap();
    }
    e
}

fn spec_strategy() -> impl Strategy<Value = Vec<(Vec<(u16, i32)>, i64)>> {
    prop::collection::vec((prop::collection::vec((0u16..4, -3i32..=3), 0..=3), -3i64..=3), 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn star_is_associative(a in spec_strategy(), b in spec_strategy(), c in spec_strategy(), deformed in any::<bool>()) {
        let (n, rule) = if deformed { (3, CommRule::deformed(4).unwrap()) } else { (2, CommRule::standard(rspin_eta(3))) };
        let (a, b, c) = (element(n, 3, &a), element(n, 3, &b), element(n, 3, &c));
        let l = weyl_star(&weyl_star(&a, &b, &rule).unwrap(), &c, &rule).unwrap();
        let r = weyl_star(&a, &weyl_star(&b, &c, &rule).unwrap(), &rule).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn commutator_antisymmetry_jacobi(a in spec_strategy(), b in spec_strategy(), c in spec_strategy()) {
        let rule = CommRule::deformed(4).unwrap();
        let (a, b, c) = (element(3, 3, &a), element(3, 3, &b), element(3, 3, &c));
        let ab = weyl_commutator(&a, &b, &rule).unwrap();
        prop_assert!(ab.add(&weyl_commutator(&b, &a, &rule).unwrap()).unwrap().is_zero());
        prop_assert!(ab.hbar_order().is_none_or(|h| h >= 1));
        let j1 = weyl_commutator(&a, &weyl_commutator(&b, &c, &rule).unwrap(), &rule).unwrap();
        let j2 = weyl_commutator(&b, &weyl_commutator(&c, &a, &rule).unwrap(), &rule).unwrap();
        let j3 = weyl_commutator(&c, &ab, &rule).unwrap();
        prop_assert!(j1.add(&j2).unwrap().add(&j3).unwrap().is_zero());
    }

    #[test]
    fn f_r_is_a_homomorphism(a in spec_strategy(), b in spec_strategy(), five in any::<bool>()) {
        let r = if five { 5 } else { 4 };
        let n = r as usize - 1;
        let def = CommRule::deformed(r).unwrap();
        let std = CommRule::standard(rspin_eta(r));
        let (a, b) = (element(n, 3, &a), element(n, 3, &b));
        let lhs = f_r_map(r, &weyl_star(&a, &b, &def).unwrap()).unwrap();
        let rhs = weyl_star(&f_r_map(r, &a).unwrap(), &f_r_map(r, &b).unwrap(), &std).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
