use super::*;
use proptest::prelude::*;

fn u(n: usize, f: u16, o: u16) -> DiffPoly {
    DiffPoly::var(n, f, o)
}

fn parse(s: &str, n: usize) -> DiffPoly {
    parse_diffpoly(s, &VarNames::u(n)).unwrap()
}

#[test]
fn dx_examples() {
    let p = &u(2, 0, 0) * &u(2, 1, 0);
    assert_eq!(p.dx(), &(&u(2, 0, 1) * &u(2, 1, 0)) + &(&u(2, 0, 0) * &u(2, 1, 1)));
    assert!(DiffPoly::constant(1, AlgScalar::from_int(5)).dx().is_zero());
    assert_eq!(u(2, 0, 2).dx(), u(2, 0, 3));
}

#[test]
fn var_der_examples() {
    assert_eq!(parse("u*u_2", 1).var_der(0), parse("2*u_2", 1));
    assert_eq!(parse("1/6*u^3", 1).var_der(0), parse("1/2*u^2", 1));
    assert!(parse("u^2*u_3 + u_1*u_5", 1).dx().var_der(0).is_zero());
}

#[test]
fn local_eq_examples() {
    let a = LocalFunctional::new(parse("u*u_2", 1));
    let b = LocalFunctional::new(parse("-u_1^2", 1));
    assert!(a.local_eq(&b).unwrap());
    let c = LocalFunctional::new(parse("u^2", 1));
    let d = LocalFunctional::new(parse("u^2 + 7", 1));
    assert!(c.local_eq(&d).unwrap());
    assert!(!c.local_eq(&LocalFunctional::new(parse("u^3", 1))).unwrap());
    let e = LocalFunctional::new(parse("u1^2", 2));
    assert!(matches!(c.local_eq(&e), Err(crate::Error::ContextMismatch(_))));
}

#[test]
fn eps_dress_examples() {
    let f = LocalFunctional::new(parse("u^3 + u*u_2", 1)).eps_dress();
    assert_eq!(f.density(), &parse("u^3 + eps^2*u*u_2", 1));
    assert_eq!(parse("u^2", 1).eps_dress(), parse("u^2", 1));
    assert_eq!(parse("u*u_4", 1).eps_dress(), parse("eps^4*u*u_4", 1));
}

#[test]
fn substitution_maps_jets() {
    // u ↦ v + v_1 in one field: u_1 ↦ v_1 + v_2.
    let img = parse("u + u_1", 1);
    assert_eq!(parse("u_1*u", 1).substitute(&[img], 1, None), parse("(u_1 + u_2)*(u + u_1)", 1));
    let img = parse("u + eps*u_1", 1);
    assert_eq!(parse("u^2", 1).substitute(&[img], 1, Some(1)), parse("u^2 + 2*eps*u*u_1", 1));
}

#[test]
fn canonical_form_is_class_invariant() {
    let a = LocalFunctional::new(parse("u*u_2 + 3", 1));
    assert_eq!(a.canonical(), parse("-u_1^2", 1));
    let b = LocalFunctional::new(parse("u1*u2_4 + u1_1*u1", 2));
    let c = LocalFunctional::new(parse("u1_2*u2_2", 2));
    assert_eq!(b.canonical(), c.canonical());
}

#[test]
fn pseries_examples() {
    let h = LocalFunctional::new(parse("1/2*u^2", 1));
    let s = PSeries::from_functional(&h, 2);
    assert_eq!(s.len(), 3);
    assert_eq!(s.coeff(&PMonomial::new(0, [(0, 0, 2)])), AlgScalar::frac(1, 2));
    assert_eq!(s.coeff(&PMonomial::new(0, [(0, -2, 1), (0, 2, 1)])), AlgScalar::one());

    let h = LocalFunctional::new(parse("u*u_2", 1));
    let s = PSeries::from_functional(&h, 1);
    assert_eq!(s.len(), 1);
    assert_eq!(s.coeff(&PMonomial::new(0, [(0, -1, 1), (0, 1, 1)])), AlgScalar::from_int(-2));

    assert!(PSeries::from_functional(&LocalFunctional::new(parse("u_1", 1)), 3).is_empty());
}

#[test]
fn interpolation_recovers_polynomial() {
    let pts: alloc::vec::Vec<_> = (-2..=2)
        .map(|k| (Rational::from_integer(k), AlgScalar::from_int(3 * k * k - k + 4)))
        .collect();
    let c = pseries::interpolate(&pts);
    assert_eq!(c, alloc::vec![AlgScalar::from_int(4), AlgScalar::from_int(-1), AlgScalar::from_int(3)]);
}

fn arb_poly(n: usize, max_deg: u32, max_order: u16) -> impl Strategy<Value = DiffPoly> {
    let term = (
        -5i64..=5,
        prop::collection::vec((0..n as u16, 0..=max_order), 1..=max_deg as usize),
    );
    prop::collection::vec(term, 1..5).prop_map(move |ts| {
        let mut p = DiffPoly::zero(n);
        for (c, vars) in ts {
            let m = Monomial::from_vars(0, vars.into_iter().map(|(f, o)| (JetVar::new(f, o), 1)));
            p.add_term(m, AlgScalar::from_int(c));
        }
        p
    })
}

fn arb_ring() -> impl Strategy<Value = DiffPoly> {
    (1usize..=4).prop_flat_map(|n| arb_poly(n, 3, 3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn var_der_kills_total_derivatives(p in arb_ring()) {
        let d = p.dx();
        for a in 0..p.n_fields() as u16 {
            prop_assert!(d.var_der(a).is_zero());
        }
    }

    #[test]
    fn dx_raises_degree(p in arb_ring()) {
        for (w, piece) in p.by_jet_weight() {
            prop_assert!(piece.dx().is_homogeneous(w as i64 + 1));
        }
    }

    #[test]
    fn dx_is_leibniz(p in arb_poly(2, 2, 2), q in arb_poly(2, 2, 2)) {
        prop_assert_eq!((&p * &q).dx(), &(&p.dx() * &q) + &(&p * &q.dx()));
    }

    #[test]
    fn local_eq_ignores_total_derivatives(p in arb_poly(3, 3, 3), g in arb_poly(3, 3, 2)) {
        let a = LocalFunctional::new(p.clone());
        let b = LocalFunctional::new(&p + &g.dx());
        prop_assert!(a.local_eq(&b).unwrap());
        prop_assert_eq!(a.canonical(), b.canonical());
        prop_assert!(LocalFunctional::new(a.canonical()).local_eq(&a).unwrap());
    }

    #[test]
    fn pseries_round_trip(p in arb_poly(2, 2, 2)) {
        let h = LocalFunctional::new(p);
        let s = PSeries::from_functional(&h, 2);
        let back = s.to_functional().unwrap();
        prop_assert!(back.local_eq(&h).unwrap());
    }

    #[test]
    fn text_round_trip(p in arb_poly(3, 3, 3)) {
        let names = VarNames::u(3);
        let s = text::render_text(&p, &names);
        prop_assert_eq!(parse_diffpoly(&s, &names).unwrap(), p);
    }
}
