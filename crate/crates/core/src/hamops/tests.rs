use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::diffpoly::{parse_diffpoly, DiffPoly, JetVar, LocalFunctional, Monomial, VarNames};
use crate::scalars::AlgScalar;

fn p(s: &str, n: usize) -> DiffPoly {
    parse_diffpoly(s, &VarNames::u(n)).unwrap()
}

fn lf(s: &str, n: usize) -> LocalFunctional {
    LocalFunctional::new(p(s, n))
}

fn eta_antidiag(n: usize) -> HamiltonianOperator {
    let eta: Vec<Vec<AlgScalar>> = (0..n)
        .map(|a| (0..n).map(|b| if a + b + 2 == n + 1 { AlgScalar::from_int(1) } else { AlgScalar::from_int(0) }).collect())
        .collect();
    HamiltonianOperator::eta_dx(&eta)
}

#[test]
fn bracket_examples() {
    let k = HamiltonianOperator::dx();
    let b = bracket(&lf("1/2*u^2", 1), &lf("1/6*u^3", 1), &k).unwrap();
    assert!(b.is_zero());
    let h = lf("u^3*u_1 + u_2^2", 1);
    assert!(bracket(&h, &h, &k).unwrap().is_zero());
    assert!(bracket(&lf("u1", 2), &h, &k).is_err());
}

#[test]
fn flow_examples() {
    let f = flow(&lf("1/6*u^3 + 1/24*eps^2*u*u_2", 1), &HamiltonianOperator::dx()).unwrap();
    assert_eq!(f[0], p("u*u_1 + 1/12*eps^2*u_3", 1));
    let k = eta_antidiag(3);
    let f = flow(&lf("u1*u3 + 1/2*u2^2", 3), &k).unwrap();
    assert_eq!(f, vec![p("u1_1", 3), p("u2_1", 3), p("u3_1", 3)]);
    assert!(flow(&LocalFunctional::zero(2), &eta_antidiag(2)).unwrap().iter().all(|x| x.is_zero()));
}

#[test]
fn compose_and_adjoint() {
    let n = 1;
    let dx = DiffOperator::scalar_dx(n, 1, AlgScalar::from_int(1));
    let mul_u = DiffOperator::monomial(n, 0, p("u", 1));
    // ∂ ∘ u = u ∂ + u_1
    let c = dx.compose(&mul_u);
    assert_eq!(c, DiffOperator::from_coeffs(n, [(1, p("u", 1)), (0, p("u_1", 1))]));
    // (u ∂)† = −∂ ∘ u = −u∂ − u_1
    let a = DiffOperator::monomial(n, 1, p("u", 1)).adjoint();
    assert_eq!(a, DiffOperator::from_coeffs(n, [(1, p("-u", 1)), (0, p("-u_1", 1))]));
    // applying composition = composing applications
    let f = p("u^2*u_1", 1);
    assert_eq!(c.apply(&f), dx.apply(&mul_u.apply(&f)));
}

#[test]
fn skew_adjoint_operators() {
    assert!(HamiltonianOperator::dx().is_skew_adjoint());
    assert!(eta_antidiag(4).is_skew_adjoint());
    // 2u∂ + u_1 is skew-adjoint; u∂ alone is not.
    let mut k = HamiltonianOperator::zero(1);
    k.set(0, 0, DiffOperator::from_coeffs(1, [(1, p("2*u", 1)), (0, p("u_1", 1))]));
    assert!(k.is_skew_adjoint());
    k.set(0, 0, DiffOperator::monomial(1, 1, p("u", 1)));
    assert!(!k.is_skew_adjoint());
}

#[test]
fn miura_invert_examples() {
    let id = MiuraMap::identity(2);
    assert_eq!(id.invert(4), id);
    let m = MiuraMap::new(vec![p("u + 1/96*eps^2*u_2", 1)]).unwrap();
    assert_eq!(m.invert(4).images()[0], p("u - 1/96*eps^2*u_2 + 1/9216*eps^4*u_4", 1));
    let m5 = MiuraMap::new(vec![
        p("u1 + 1/60*eps^2*u3_2", 4),
        p("u2 + 1/60*eps^2*u4_2", 4),
        p("u3", 4),
        p("u4", 4),
    ])
    .unwrap();
    let inv = m5.invert(2);
    assert_eq!(inv.images()[0], p("u1 - 1/60*eps^2*u3_2", 4));
    assert_eq!(inv.images()[1], p("u2 - 1/60*eps^2*u4_2", 4));
    assert_eq!(inv.images()[2], p("u3", 4));
}

#[test]
fn miura_rejects_bad_maps() {
    assert!(MiuraMap::new(vec![p("u + u_1", 1)]).is_err());
    assert!(MiuraMap::new(vec![p("u + eps*u_2", 1)]).is_err());
}

#[test]
fn miura_push_examples() {
    let m = MiuraMap::new(vec![p("u + eps*u_1", 1)]).unwrap();
    let h = m.push_functional(&lf("1/2*u^2", 1), 4);
    assert!(LocalFunctional::new(h.density().eps_part(0)).local_eq(&lf("1/2*u^2", 1)).unwrap());
    let k = m.push_operator(&HamiltonianOperator::dx(), 4);
    assert_eq!(k.get(0, 0), &DiffOperator::from_coeffs(1, [(1, p("1", 1)), (3, p("-eps^2", 1))]));
    let id = MiuraMap::identity(1);
    assert_eq!(id.push_operator(&HamiltonianOperator::dx(), 4), HamiltonianOperator::dx());
    let f = p("u^2*u_3 + eps*u_1", 1);
    assert_eq!(id.push_poly(&f, 4), f);
}

#[test]
fn op_dress_weights() {
    let mut k = HamiltonianOperator::zero(1);
    k.set(0, 0, DiffOperator::scalar_dx(1, 1, AlgScalar::from_int(-2)));
    assert_eq!(k.op_dress().unwrap(), k);
    k.set(0, 0, DiffOperator::from_coeffs(1, [(3, p("1", 1)), (1, p("u", 1)), (0, p("1/2*u_1", 1))]));
    let d = k.op_dress().unwrap();
    assert_eq!(d.get(0, 0).coeff(3), p("eps^2", 1));
    assert_eq!(d.get(0, 0).coeff(1), p("u", 1));
    assert_eq!(d.get(0, 0).coeff(0), p("1/2*u_1", 1));
    // the (u_2 ∂) term has i + j − 1 = 2
    k.set(0, 0, DiffOperator::monomial(1, 1, p("u_2", 1)));
    assert_eq!(k.op_dress().unwrap().get(0, 0).coeff(1), p("eps^2*u_2", 1));
    k.set(0, 0, DiffOperator::monomial(1, 0, p("u", 1)));
    assert!(k.op_dress().is_err());
}

fn arb_poly(n: usize, max_order: u16) -> impl Strategy<Value = DiffPoly> {
    let term = (-4i64..=4, prop::collection::vec((0..n as u16, 0..=max_order), 1..=3));
    prop::collection::vec(term, 1..4).prop_map(move |ts| {
        let mut q = DiffPoly::zero(n);
        for (c, vars) in ts {
            q.add_term(Monomial::from_vars(0, vars.into_iter().map(|(f, o)| (JetVar::new(f, o), 1))), AlgScalar::from_int(c));
        }
        q
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bracket_antisymmetry(h in arb_poly(3, 2), g in arb_poly(3, 2)) {
        let k = eta_antidiag(3);
        let (h, g) = (LocalFunctional::new(h), LocalFunctional::new(g));
        let a = bracket(&h, &g, &k).unwrap();
        let b = bracket(&g, &h, &k).unwrap();
        prop_assert!((&a + &b).is_zero());
    }

    #[test]
    fn miura_invert_two_sided(c in -3i64..=3, d in -3i64..=3) {
        let m = MiuraMap::new(vec![
            &p("u1", 2) + &p("eps^2*u2_2", 2).scale(&AlgScalar::frac(c, 7)),
            &p("u2", 2) + &p("eps*u1_1 + eps^2*u1*u2_2", 2).scale(&AlgScalar::frac(d, 5)),
        ]).unwrap();
        let e = 5;
        let inv = m.invert(e);
        prop_assert_eq!(m.compose(&inv, e), MiuraMap::identity(2));
        prop_assert_eq!(inv.compose(&m, e), MiuraMap::identity(2));
    }

    #[test]
    fn miura_functoriality(h in arb_poly(2, 1), g in arb_poly(2, 1), c in -3i64..=3) {
        let e = 4;
        let m = MiuraMap::new(vec![
            &p("u1", 2) + &p("eps^2*u2_2", 2).scale(&AlgScalar::frac(c, 3)),
            p("u2 + eps*u1_1", 2),
        ]).unwrap();
        let k = eta_antidiag(2);
        let (h, g) = (LocalFunctional::new(h), LocalFunctional::new(g));
        let lhs = m.push_functional(&bracket(&h, &g, &k).unwrap(), e);
        let rhs = bracket(&m.push_functional(&h, e), &m.push_functional(&g, e), &m.push_operator(&k, e)).unwrap();
        prop_assert!((&lhs - &rhs).truncate_eps(e).is_zero());
    }

    #[test]
    fn dress_commutes_with_bracket(h in arb_poly(2, 2), g in arb_poly(2, 2)) {
        let k = eta_antidiag(2);
        let (h, g) = (LocalFunctional::new(h), LocalFunctional::new(g));
        let kd = k.op_dress().unwrap();
        let lhs = bracket(&h, &g, &k).unwrap().eps_dress();
        // The dressed bracket has degree one, so it lags the dressed result by one ε.
        let rhs = bracket(&h.eps_dress(), &g.eps_dress(), &kd).unwrap();
        let rhs = LocalFunctional::new(rhs.density().shift_eps(1));
        prop_assert!((&lhs - &rhs).is_zero());
    }
}
