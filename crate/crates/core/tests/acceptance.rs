//! Acceptance suite: ten criteria, one PASS/FAIL line each.

use std::time::Instant;

use hamhier_core::diffpoly::{parse_diffpoly, render_text, PMonomial, VarNames};
use hamhier_core::drspin::{
    assemble_hamiltonian, builtin_g11, enumerate_profiles, hain_expand, pair_with_table, APoly, IntegralTable,
    Pairing, Profile, TautMonomial,
};
use hamhier_core::gdhier::{reference, GDContext};
use hamhier_core::hamops::{bracket, flow, HamiltonianOperator, MiuraMap};
use hamhier_core::psido::PseudoDiffOp;
use hamhier_core::quantize::{f_r_map, weyl_commutator, weyl_star, CommRule, WeylElement};
use hamhier_core::reconstruct::{
    check_string_dilaton, integrate_flows, rspin_eta, special_solution, verify_theorem_main, Bounds, GenusZeroData,
};
use hamhier_core::{AlgScalar, DiffPoly, LocalFunctional, Rational};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn c1_two_spin() -> Outcome {
    let ctx = GDContext::new(2).map_err(e)?;
    let res = ctx.residue(5).map_err(e)?;
    ensure(res == reference::parse_f(2, reference::RES_L_5_2).map_err(e)?, "res L^{5/2} differs")?;
    let (k, h) = ctx.rspin_system(1, 1).map_err(e)?;
    ensure(k == HamiltonianOperator::dx(), "K^{2-spin} is not d/dx")?;
    let expect = LocalFunctional::new(reference::parse_w(2, "1/6*w^3 + 1/24*eps^2*w*w_2").map_err(e)?);
    ensure(h.local_eq(&expect).map_err(e)?, "h_{1,1} differs")?;
    Ok("res L^{5/2}, K = d/dx and h_{1,1} match".into())
}

fn c2_tables() -> Outcome {
    let mut notes = Vec::new();
    for r in 3..=5u32 {
        let ctx = GDContext::new(r).map_err(e)?;
        let k = ctx.rspin_operator().map_err(e)?;
        ensure(*k == reference::k_rspin(r).map_err(e)?, format!("K^{{{}-spin}} differs", r))?;
        let h = ctx.rspin_hamiltonian(1, 1).map_err(e)?;
        let tabulated = reference::h11(r).map_err(e)?;
        if r < 5 {
            ensure(h.local_eq(&tabulated).map_err(e)?, format!("h_{{1,1}} differs for r = {}", r))?;
            continue;
        }
        // r = 5: everything except the flagged eps^6 term, then report that term.
        let suspect = reference::parse_w(5, reference::SUSPECT_R5).map_err(e)?;
        let without = LocalFunctional::new(tabulated.density() - &suspect);
        let names = VarNames::w(4);
        let comp6 = LocalFunctional::new(h.density().eps_part(6).shift_eps(6)).canonical();
        let print6 = LocalFunctional::new(tabulated.density().eps_part(6).shift_eps(6)).canonical();
        let diff = LocalFunctional::new(h.density() - tabulated.density()).canonical();
        let rest_diff = LocalFunctional::new(&h.density().truncate_eps(5) + &h.density().eps_part(8).shift_eps(8))
            .local_eq(&LocalFunctional::new(
                &without.density().truncate_eps(5) + &without.density().eps_part(8).shift_eps(8),
            ))
            .map_err(e)?;
        ensure(rest_diff, "r = 5 differs outside the eps^6 part")?;
        println!("    r=5 computed eps^6 part (canonical): {}", render_text(&comp6, &names));
        println!("    r=5 tabulated eps^6 part (canonical): {}", render_text(&print6, &names));
        println!("    r=5 computed - tabulated (canonical):  {}", render_text(&diff, &names));
        notes.push(if diff.is_zero() {
            "flagged r=5 term agrees modulo total derivatives"
        } else {
            "flagged r=5 term differs (see diff above)"
        });
    }
    Ok(format!("K and h_{{1,1}} for r = 3, 4, 5 match; {}", notes.join("")))
}

fn c3_main_theorem() -> Outcome {
    let mut lines = Vec::new();
    for r in 3..=5u32 {
        let map = if r == 3 { MiuraMap::identity(2) } else { reference::theorem_miura(r).map_err(e)? };
        let eps = 2 * (r as u16 - 1);
        let v = verify_theorem_main(r, &map, eps, &builtin_g11(r).map_err(e)?).map_err(e)?;
        ensure(v.holds(), format!("r = {}: conditions {:?}", r, v.conditions))?;
        lines.push(format!("r={} {:?}", r, v.conditions));
    }
    Ok(lines.join(", "))
}

fn c4_enumeration() -> Outcome {
    let tabulated: [(u32, Vec<(u32, Vec<u32>)>); 3] = [
        (3, vec![(0, vec![0, 4]), (0, vec![2, 1]), (1, vec![0, 3]), (1, vec![2, 0]), (2, vec![0, 2])]),
        (
            4,
            vec![
                (0, vec![0, 0, 5]),
                (0, vec![0, 2, 2]),
                (0, vec![1, 0, 3]),
                (0, vec![1, 2, 0]),
                (0, vec![2, 0, 1]),
                (1, vec![0, 0, 4]),
                (1, vec![0, 2, 1]),
                (1, vec![1, 0, 2]),
                (1, vec![2, 0, 0]),
                (2, vec![0, 0, 3]),
                (2, vec![0, 2, 0]),
                (2, vec![1, 0, 1]),
                (3, vec![0, 0, 2]),
            ],
        ),
        (5, five_spin_listed()),
    ];
    let mut counts = Vec::new();
    for (r, list) in tabulated.iter() {
        let got: Vec<(u32, Vec<u32>)> =
            enumerate_profiles(*r, 1, 1).map_err(e)?.into_iter().map(|p| (p.g, p.counts)).collect();
        ensure(got == *list, format!("r = {} profile list differs", r))?;
        counts.push(format!("r={}: {}", r, got.len()));
    }
    Ok(format!("{} profiles, matching the reference lists", counts.join(", ")))
}

fn five_spin_listed() -> Vec<(u32, Vec<u32>)> {
    let rows: [(u32, [u32; 4]); 26] = [
        (0, [0, 0, 0, 6]),
        (0, [0, 0, 2, 3]),
        (0, [0, 0, 4, 0]),
        (0, [0, 1, 0, 4]),
        (0, [0, 1, 2, 1]),
        (0, [0, 2, 0, 2]),
        (0, [0, 3, 0, 0]),
        (0, [1, 0, 1, 2]),
        (0, [1, 1, 1, 0]),
        (0, [2, 0, 0, 1]),
        (1, [0, 0, 0, 5]),
        (1, [0, 0, 2, 2]),
        (1, [0, 1, 0, 3]),
        (1, [0, 1, 2, 0]),
        (1, [0, 2, 0, 1]),
        (1, [1, 0, 1, 1]),
        (1, [2, 0, 0, 0]),
        (2, [0, 0, 0, 4]),
        (2, [0, 0, 2, 1]),
        (2, [0, 1, 0, 2]),
        (2, [0, 2, 0, 0]),
        (2, [1, 0, 1, 0]),
        (3, [0, 0, 0, 3]),
        (3, [0, 0, 2, 0]),
        (3, [0, 1, 0, 1]),
        (4, [0, 0, 0, 2]),
    ];
    rows.iter().map(|(g, c)| (*g, c.to_vec())).collect()
}

fn c5_worked_example() -> Outcome {
    let mut table = IntegralTable::new(2, vec![2, 2], true);
    table.insert(TautMonomial::psi_only(vec![2, 0]), Rational::new(7, 4320)).map_err(e)?;
    table.insert(TautMonomial::psi_only(vec![1, 1]), Rational::new(13, 4320)).map_err(e)?;
    let poly = pair_with_table(&hain_expand(2, 2, None), &table, Pairing::Dilaton).map_err(e)?;
    let prof = Profile { g: 2, counts: vec![0, 2], alpha: 1, d: 1 };
    let t = assemble_hamiltonian(3, &[(prof, poly)]).map_err(e)?;
    let expect = LocalFunctional::new(parse_diffpoly("1/432*eps^4*u2*u2_4", &VarNames::u(2)).map_err(e)?);
    ensure(t.local_eq(&expect).map_err(e)?, "T differs from eps^4/432 u2 u2_4")?;
    let g11 = builtin_g11(3).map_err(e)?;
    let eps4 = LocalFunctional::new(g11.density().eps_part(4).shift_eps(4));
    ensure(t.local_eq(&eps4).map_err(e)?, "T differs from the eps^4 part of g_{1,1}")?;
    Ok(format!("T = {}", render_text(&t.canonical(), &VarNames::u(2))))
}

fn c6_commutativity() -> Outcome {
    for (r, ms) in [(2u32, [1u32, 3, 5]), (3, [1, 2, 4])] {
        let ctx = GDContext::new(r).map_err(e)?;
        let k = ctx.gd_operator().map_err(e)?.clone();
        let hs = ms.iter().map(|&m| ctx.gd_hamiltonian(m)).collect::<Result<Vec<_>, _>>().map_err(e)?;
        for (i, a) in hs.iter().enumerate() {
            for (j, b) in hs.iter().enumerate() {
                ensure(
                    bracket(a, b, &k).map_err(e)?.is_zero(),
                    format!("r = {}: bracket of h_{} and h_{} nonzero", r, ms[i], ms[j]),
                )?;
            }
        }
    }
    Ok("all brackets vanish".into())
}

fn c7_psido() -> Outcome {
    for r in 2..=5u32 {
        let n = r as usize - 1;
        let lower: Vec<DiffPoly> = (0..n as u16).map(|i| DiffPoly::var(n, i, 0)).collect();
        let l = PseudoDiffOp::monic(n, r as i64, &lower);
        let s = l.root(r, 8).map_err(e)?;
        let floor = r as i64 - 7;
        let p = s.pow(r, Some(floor)).map_err(e)?;
        for k in floor..=r as i64 {
            let want = if k >= 0 { l.coeff(k).map_err(e)? } else { DiffPoly::zero(n) };
            ensure(p.coeff(k).map_err(e)? == want, format!("r = {}: (L^(1/r))^r differs at order {}", r, k))?;
        }
    }
    for (r, ms) in [(2u32, [1u32, 3, 5]), (3, [1, 2, 4])] {
        let ctx = GDContext::new(r).map_err(e)?;
        let k = ctx.gd_operator().map_err(e)?.clone();
        for m in ms {
            let h = ctx.gd_hamiltonian(m).map_err(e)?;
            ensure(ctx.gd_flow(m).map_err(e)? == flow(&h, &k).map_err(e)?, format!("r = {} m = {}: flows differ", r, m))?;
        }
    }
    Ok("roots to depth 8 for r = 2..5; Lax and hamiltonian flows agree".into())
}

fn c8_reconstruction() -> Outcome {
    let b = Bounds { t_max: 3, degree: 4, eps: 4 };
    let ctx = GDContext::new(2).map_err(e)?;
    let g0 = GenusZeroData::from_gd(&ctx, b.t_max).map_err(e)?;
    let h11 = ctx.rspin_hamiltonian(1, 1).map_err(e)?;
    let sol = special_solution(&h11, &g0, b).map_err(e)?;
    let k = ctx.rspin_operator().map_err(e)?.clone();
    let flows = (0..=b.t_max as u32)
        .map(|q| ctx.rspin_hamiltonian(1, q).and_then(|h| flow(&h, &k)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(e)?;
    let direct = integrate_flows(1, &[flows], b).map_err(e)?;
    ensure(sol.u[0] == direct[0], "special solution differs from direct integration")?;
    let rep = check_string_dilaton(&sol).map_err(e)?;
    ensure(rep.is_zero(), format!("residuals: {:?}", rep.locations()))?;
    Ok(format!("{} coefficients agree; string and dilaton residuals vanish", sol.u[0].len()))
}

fn random_element(rng: &mut StdRng, n: usize, window: i32) -> WeylElement {
    let mut el = WeylElement::zero(n, window);
    for _ in 0..rng.gen_range(1..=3) {
        let deg = rng.gen_range(0..=3);
        let vars: Vec<(u16, i32, u16)> =
            (0..deg).map(|_| (rng.gen_range(0..n as u16), rng.gen_range(-window..=window), 1)).collect();
        let c = AlgScalar::from_int(rng.gen_range(-4..=4));
        el.add_term(PMonomial::new(0, vars), 0, c).expect("inside window");
    }
    el
}

fn c9_quantization() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let rules = [(2usize, CommRule::standard(rspin_eta(3))), (3, CommRule::deformed(4).map_err(e)?)];
    for t in 0..200 {
        let (n, rule) = &rules[t % 2];
        let (a, b, c) = (random_element(&mut rng, *n, 3), random_element(&mut rng, *n, 3), random_element(&mut rng, *n, 3));
        let l = weyl_star(&weyl_star(&a, &b, rule).map_err(e)?, &c, rule).map_err(e)?;
        let r = weyl_star(&a, &weyl_star(&b, &c, rule).map_err(e)?, rule).map_err(e)?;
        ensure(l == r, format!("associativity fails on triple {}", t))?;
    }
    for r in [4u32, 5] {
        let n = r as usize - 1;
        let def = CommRule::deformed(r).map_err(e)?;
        let std = CommRule::standard(rspin_eta(r));
        for t in 0..100 {
            let (a, b) = (random_element(&mut rng, n, 3), random_element(&mut rng, n, 3));
            let lhs = f_r_map(r, &weyl_star(&a, &b, &def).map_err(e)?).map_err(e)?;
            let rhs = weyl_star(&f_r_map(r, &a).map_err(e)?, &f_r_map(r, &b).map_err(e)?, &std).map_err(e)?;
            ensure(lhs == rhs, format!("f_{} is not multiplicative on pair {}", r, t))?;
        }
    }
    // [p~^a_m, p~^b_-m] = hbar (i m) eta^{ab} + hbar eps^2 (i m)^3 c for the eps^2 d^3 entries.
    for (r, third, c) in [(4u32, vec![(0u16, 0u16)], Rational::new(1, 48)), (5, vec![(0, 1), (1, 0)], Rational::new(1, 30))] {
        let n = r as usize - 1;
        let rule = CommRule::deformed(r).map_err(e)?;
        for m in 1..=3i32 {
            for a in 0..n as u16 {
                for b in 0..n as u16 {
                    let x = WeylElement::var(n, 3, a, m).map_err(e)?;
                    let y = WeylElement::var(n, 3, b, -m).map_err(e)?;
                    let got = weyl_commutator(&x, &y, &rule).map_err(e)?;
                    let im = AlgScalar::i() * AlgScalar::from_int(m as i64);
                    let mut want = WeylElement::zero(n, 3);
                    if a as usize + b as usize + 2 == r as usize {
                        want.add_term(PMonomial::new(0, []), 1, im.clone()).map_err(e)?;
                    }
                    if third.contains(&(a, b)) {
                        want.add_term(PMonomial::new(2, []), 1, &im.pow(3) * &AlgScalar::rational(c.clone())).map_err(e)?;
                    }
                    ensure(got == want, format!("r = {}: [p{}_{}, p{}_{}] = {}", r, a + 1, m, b + 1, -m, got.to_text()))?;
                }
            }
        }
    }
    Ok("200 associativity triples, 2 x 100 homomorphism pairs, commutator tables for r = 4, 5".into())
}

fn random_apoly(rng: &mut StdRng, n: usize, deg: u32) -> APoly {
    fn rec(rng: &mut StdRng, n: usize, left: u32, cur: &mut Vec<u32>, p: &mut APoly) {
        if cur.len() == n - 1 {
            cur.push(left);
            let c = rng.gen_range(-5i64..=5);
            p.add_term(cur.clone(), Rational::from_integer(c));
            cur.pop();
            return;
        }
        for d in 0..=left {
            cur.push(d);
            rec(rng, n, left - d, cur, p);
            cur.pop();
        }
    }
    let mut p = APoly::zero(n);
    rec(rng, n, deg, &mut Vec::new(), &mut p);
    p
}

fn c10_well_defined() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    for t in 0..100 {
        let g = rng.gen_range(1..=2u32);
        let n = rng.gen_range(2..=4usize);
        let mut counts = vec![0u32; 3];
        for _ in 0..n {
            counts[rng.gen_range(0..3)] += 1;
        }
        let prof = Profile { g, counts, alpha: 1, d: 1 };
        let p = random_apoly(&mut rng, n, 2 * g);
        let q = random_apoly(&mut rng, n, 2 * g - 1);
        let shifted = p.add(&q.mul(&APoly::sum_of_vars(n)));
        let a = assemble_hamiltonian(4, &[(prof.clone(), p)]).map_err(e)?;
        let b = assemble_hamiltonian(4, &[(prof, shifted)]).map_err(e)?;
        ensure(a.local_eq(&b).map_err(e)?, format!("sample {} changed under P -> P + (sum a) Q", t))?;
    }
    Ok("100 random samples invariant".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("two-spin reproduction", c1_two_spin),
        ("r-spin tables r=3,4,5", c2_tables),
        ("main theorem verdicts", c3_main_theorem),
        ("profile enumeration", c4_enumeration),
        ("worked example closure", c5_worked_example),
        ("GD commutativity", c6_commutativity),
        ("PsiDO oracle equivalence", c7_psido),
        ("reconstruction cross-check", c8_reconstruction),
        ("quantization properties", c9_quantization),
        ("DR well-definedness", c10_well_defined),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS [{:.2}s] {}: {}", i + 1, secs, name, msg),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{:.2}s] {}: {}", i + 1, secs, name, msg);
            }
        }
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
