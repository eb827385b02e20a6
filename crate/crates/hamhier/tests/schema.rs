use hamhier::schema::{DiffPolyJson, OperatorJson, PSeriesJson, TableJson};
use hamhier_core::diffpoly::{PMonomial, PSeries};
use hamhier_core::drspin::{IntegralTable, TautMonomial};
use hamhier_core::gdhier::GDContext;
use hamhier_core::quantize::{weyl_star, CommRule, WeylElement};
use hamhier_core::{AlgScalar, DiffPoly, JetVar, Monomial, Rational};

fn roundtrip_text<T: serde::Serialize + serde::de::DeserializeOwned>(v: &T) -> T {
    let s = serde_json::to_string(v).unwrap();
    let back: T = serde_json::from_str(&s).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), s);
    back
}

#[test]
fn diffpoly_with_algebraic_coefficients() {
    let c = AlgScalar::new(Rational::new(1, 2), Rational::new(-3, 7), Rational::new(2, 1), Rational::new(0, 1), 5);
    let mut p = DiffPoly::zero(3);
    p.add_term(Monomial::from_vars(2, [(JetVar::new(0, 1), 2), (JetVar::new(2, 4), 1)]), c);
    p.add_term(Monomial::one(), AlgScalar::i());
    let j = roundtrip_text(&DiffPolyJson::from_poly(&p).unwrap());
    assert_eq!(j.d, 5);
    assert_eq!(j.to_poly().unwrap(), p);
}

#[test]
fn mixed_radicands_rejected() {
    let mut p = DiffPoly::zero(1);
    p.add_term(Monomial::one(), AlgScalar::sqrt_int(2));
    p.add_term(Monomial::var(JetVar::new(0, 0)), AlgScalar::sqrt_int(3));
    assert!(DiffPolyJson::from_poly(&p).is_err());
}

#[test]
fn functionals_and_operators() {
    for r in 2..=5 {
        let ctx = GDContext::new(r).unwrap();
        let (k, h) = ctx.rspin_system(1, 1).unwrap();
        let hj = roundtrip_text(&DiffPolyJson::from_functional(&h).unwrap());
        assert_eq!(hj.integrated, Some(true));
        assert_eq!(&hj.to_poly().unwrap(), h.density());
        let kj = roundtrip_text(&OperatorJson::from_operator(&k).unwrap());
        assert_eq!(kj.to_operator().unwrap(), k);
    }
    let gd = GDContext::new(3).unwrap().gd_operator().unwrap().clone();
    assert_eq!(roundtrip_text(&OperatorJson::from_operator(&gd).unwrap()).to_operator().unwrap(), gd);
}

#[test]
fn integral_tables() {
    let mut t = IntegralTable::new(2, vec![1, 2, 2], false);
    t.insert(TautMonomial::psi_only(vec![1, 2, 0]), Rational::new(-5, 12)).unwrap();
    t.insert(TautMonomial { psi: vec![0, 1, 0], boundary: vec![(0, vec![2, 3]), (1, vec![1])] }, Rational::new(3, 1))
        .unwrap();
    let j = roundtrip_text(&TableJson::from_table(&t));
    assert_eq!(j.to_table().unwrap(), t);
    let s = serde_json::to_value(&j).unwrap();
    let mut sizes: Vec<usize> =
        s["entries"].as_array().unwrap().iter().map(|e| e["boundary"].as_array().unwrap().len()).collect();
    sizes.sort();
    assert_eq!(sizes, vec![0, 2]);
}

#[test]
fn mode_series_and_weyl_elements() {
    let mut p = PSeries::zero(2, 2);
    p.add_term(PMonomial::new(0, [(0, -1, 1), (1, 2, 2)]), AlgScalar::frac(3, 4));
    p.add_term(PMonomial::new(2, [(1, 0, 1)]), AlgScalar::i());
    assert_eq!(roundtrip_text(&PSeriesJson::from_pseries(&p).unwrap()).to_pseries().unwrap(), p);

    let rule = CommRule::deformed(4).unwrap();
    let a = WeylElement::var(3, 2, 0, 1).unwrap();
    let b = WeylElement::var(3, 2, 0, -1).unwrap();
    let w = weyl_star(&a, &b, &rule).unwrap();
    assert!(w.hbar_order().is_some());
    let j = roundtrip_text(&PSeriesJson::from_weyl(&w, "deformed-r4").unwrap());
    assert_eq!(j.rule.as_deref(), Some("deformed-r4"));
    assert_eq!(j.to_weyl().unwrap(), w);
}

#[test]
fn malformed_input_is_rejected() {
    let j: DiffPolyJson =
        serde_json::from_str(r#"{"N": 1, "d": 1, "terms": [{"coeff": ["1","0","0","0"], "eps": 0, "jets": [[2, 0, 1]]}]}"#)
            .unwrap();
    assert!(j.to_poly().is_err());
    let j: DiffPolyJson =
        serde_json::from_str(r#"{"N": 1, "d": 1, "terms": [{"coeff": ["x","0","0","0"], "eps": 0, "jets": []}]}"#).unwrap();
    assert!(j.to_poly().is_err());
}
