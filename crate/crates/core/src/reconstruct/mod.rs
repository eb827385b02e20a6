//! Special solutions of the Dubrovin–Zhang hierarchy from `h̄_{1,1}` and genus-zero
//! data, string/dilaton residuals, jet rewriting and the Miura-equivalence verdict.
//!
//! A solution is stored at `x = 0`; `x` enters only through `t^1_0 ↦ t^1_0 + x`,
//! so `∂_x = ∂/∂t^1_0`.

mod tseries;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::diffpoly::{DiffPoly, JetVar, LocalFunctional, Monomial};
use crate::error::Error;
use crate::gdhier::{dispersionless_omega, GDContext};
use crate::hamops::{flow, DiffOperator, HamiltonianOperator, MiuraMap};
use crate::scalars::{AlgScalar, Rational};

pub use tseries::{compose, eval_diffpoly, Bounds, TKey, TSeries, MAX_DEGREE, MAX_VARS};

/// Metric, two-point functions `Ω_{β,q;μ,0}` and `Ω_{1,2;1,0}` in genus zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusZeroData {
    pub n: usize,
    /// `η_{αβ}`.
    pub eta: Vec<Vec<AlgScalar>>,
    /// `η^{αβ}`.
    pub eta_inv: Vec<Vec<AlgScalar>>,
    /// `omega[β][q][μ] = Ω_{β+1,q;μ+1,0}`.
    pub omega: Vec<Vec<Vec<DiffPoly>>>,
    /// `Ω_{1,2;1,0}`, the dispersionless density of `h̄_{1,1}`.
    pub potential_11: DiffPoly,
}

impl GenusZeroData {
    /// Builds from two-point functions; `η` is read off `Ω_{1,0;ν,0} = η_{νθ}u^θ`.
    pub fn new(omega: Vec<Vec<Vec<DiffPoly>>>, potential_11: DiffPoly) -> Result<Self, Error> {
        let n = omega.len();
        if n == 0 || omega.iter().any(|row| row.is_empty() || row.iter().any(|v| v.len() != n)) {
            return Err(Error::Precondition("two-point table must be N × (q_max+1) × N".into()));
        }
        let eta: Vec<Vec<AlgScalar>> = (0..n)
            .map(|nu| (0..n).map(|th| omega[0][0][nu].coeff(&Monomial::var(JetVar::new(th as u16, 0)))).collect())
            .collect();
        let eta_inv = invert_matrix(&eta).ok_or_else(|| Error::Precondition("metric η is degenerate".into()))?;
        Ok(GenusZeroData { n, eta, eta_inv, omega, potential_11 })
    }

    /// Genus-zero data of the r-spin theory with `q ≤ q_max`.
    pub fn from_gd(ctx: &GDContext, q_max: u16) -> Result<Self, Error> {
        let n = ctx.n_fields();
        let mut omega = Vec::with_capacity(n);
        for beta in 1..=n as u32 {
            let row = (0..=q_max as u32)
                .map(|q| dispersionless_omega(ctx, beta, q).map(|o| o.first))
                .collect::<Result<Vec<_>, _>>()?;
            omega.push(row);
        }
        let pot = dispersionless_omega(ctx, 1, 1)?.potential;
        Self::new(omega, pot)
    }

    pub fn q_max(&self) -> usize {
        self.omega[0].len() - 1
    }

    /// Dispersionless flow `∂u^α/∂t^β_q = η^{αμ} ∂_x Ω_{β,q;μ,0}` (`β` zero-based).
    pub fn flow(&self, beta: usize, q: usize) -> Vec<DiffPoly> {
        let grads: Vec<DiffPoly> = self.omega[beta][q].iter().map(|o| o.dx()).collect();
        (0..self.n)
            .map(|a| {
                let mut out = DiffPoly::zero(self.n);
                for (mu, g) in grads.iter().enumerate() {
                    if !self.eta_inv[a][mu].is_zero() {
                        out.add_scaled(g, &self.eta_inv[a][mu]);
                    }
                }
                out
            })
            .collect()
    }

    /// All flows with `q ≤ t_max`, indexed `[β][q][α]`.
    pub fn flows(&self, t_max: u16) -> Result<Vec<Vec<Vec<DiffPoly>>>, Error> {
        if t_max as usize > self.q_max() {
            return Err(Error::Truncation(format!(
                "two-point data known for q ≤ {}, t_max = {}",
                self.q_max(),
                t_max
            )));
        }
        Ok((0..self.n).map(|b| (0..=t_max as usize).map(|q| self.flow(b, q)).collect()).collect())
    }
}

fn invert_matrix(m: &[Vec<AlgScalar>]) -> Option<Vec<Vec<AlgScalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<AlgScalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { AlgScalar::one() } else { AlgScalar::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].inverse()?;
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &(&f * p);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `Σ_{γ,d} ∂g/∂u^γ_d ∂_x^d f^γ`, truncated at `ε^e`.
fn evolve(g: &DiffPoly, f: &[DiffPoly], dx_cache: &mut BTreeMap<JetVar, DiffPoly>, e: u16) -> DiffPoly {
    let mut vars: Vec<JetVar> = g.terms().flat_map(|(m, _)| m.vars().iter().map(|(v, _)| *v)).collect();
    vars.sort();
    vars.dedup();
    let mut out = DiffPoly::zero(g.n_fields());
    for v in vars {
        let df = dx_cache.entry(v).or_insert_with(|| f[v.field as usize].dx_n(v.order as u32).truncate_eps(e));
        if df.is_zero() {
            continue;
        }
        out += g.partial(v).mul_trunc(df, Some(e));
    }
    out
}

/// Value at `u^α_d = δ^{α,1}δ_{d,1}` (the jet of `u = δ^{α,1}x` at `x = 0`), by `ε`-order.
fn at_string_point(p: &DiffPoly) -> BTreeMap<u16, AlgScalar> {
    let target = JetVar::new(0, 1);
    let mut out: BTreeMap<u16, AlgScalar> = BTreeMap::new();
    for (m, c) in p.terms() {
        if m.vars().iter().all(|(v, _)| *v == target) {
            *out.entry(m.eps).or_insert_with(AlgScalar::zero) += c;
        }
    }
    out
}

/// Taylor coefficients of the solution with `u|_{t=0} = δ^{α,1}x`, obtained by applying the
/// commuting flows `flows[β][q]` (components indexed by `α`) to `u^α` and evaluating at `x = 0`.
pub fn integrate_flows(n: usize, flows: &[Vec<Vec<DiffPoly>>], bounds: Bounds) -> Result<Vec<TSeries>, Error> {
    TSeries::check_bounds(n, bounds)?;
    if flows.len() != n || flows.iter().any(|row| row.len() <= bounds.t_max as usize) {
        return Err(Error::Precondition("need flows for every β and q ≤ t_max".into()));
    }
    let width = bounds.t_max as usize + 1;
    let nv = n * width;
    let mut out: Vec<TSeries> = (0..n).map(|_| TSeries::zero(n, bounds)).collect();
    let mut caches: Vec<BTreeMap<JetVar, DiffPoly>> = (0..nv).map(|_| BTreeMap::new()).collect();
    let mut level: BTreeMap<TKey, Vec<DiffPoly>> = BTreeMap::new();
    level.insert(TKey::one(0), (0..n as u16).map(|a| DiffPoly::var(n, a, 0)).collect());
    for _deg in 1..=bounds.degree {
        let mut next: BTreeMap<TKey, Vec<DiffPoly>> = BTreeMap::new();
        for key in level.keys() {
            for idx in 0..nv {
                let child = key.bump(idx, 1);
                if next.contains_key(&child) {
                    continue;
                }
                let low = (0..nv).find(|&i| child.exp(i) > 0).expect("nonconstant");
                let parent = child.bump(low, -1);
                let f = &flows[low / width][low % width];
                let g: Vec<DiffPoly> =
                    level[&parent].iter().map(|p| evolve(p, f, &mut caches[low], bounds.eps)).collect();
                next.insert(child, g);
            }
        }
        for (key, gs) in &next {
            let fact: Rational = (0..nv).map(|i| Rational::factorial(key.exp(i) as u32)).product();
            let inv = AlgScalar::rational(fact.recip());
            for (a, g) in gs.iter().enumerate() {
                for (e, c) in at_string_point(g) {
                    out[a].add_term(TKey { eps: e, ..*key }, &c * &inv);
                }
            }
        }
        level = next;
    }
    Ok(out)
}

/// A truncated special solution `u^α(t, ε)` at `x = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialSolution {
    pub n: usize,
    pub bounds: Bounds,
    pub u: Vec<TSeries>,
}

impl SpecialSolution {
    /// `∂_x^d u^α − δ^{α,1}δ_{d,1}`, computed with `∂_x = Σ t^γ_{n+1}∂/∂t^γ_n` on the
    /// nonconstant part (valid once the string equation holds).
    pub fn shifted_jet(&self, alpha: usize, d: u16, bounds: Bounds) -> TSeries {
        let mut s = self.u[alpha].with_bounds(bounds);
        for _ in 0..d {
            s = s.string_shift();
        }
        s
    }

    /// `∂u^α/∂t^β_q`; exact up to t-degree `D − 1`.
    pub fn time_derivative(&self, beta: usize, q: u16) -> Vec<TSeries> {
        self.u
            .iter()
            .map(|s| s.diff_var(s.var_index(beta, q)).truncate_degree(self.bounds.degree.saturating_sub(1)))
            .collect()
    }

    /// Text listing of all nonzero coefficients.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (a, s) in self.u.iter().enumerate() {
            for (k, c) in s.terms() {
                out.push_str(&format!("u{}: {} * {}\n", a + 1, c.to_text(), s.key_text(k)));
            }
        }
        out
    }
}

/// Evaluates `P(u, u_x, …)` at a solution, using string-equation jets.
fn eval_on_solution(p: &[DiffPoly], sol: &SpecialSolution, bounds: Bounds) -> Vec<TSeries> {
    let n = sol.n;
    let mut jets: BTreeMap<JetVar, TSeries> = BTreeMap::new();
    p.iter()
        .map(|pa| {
            let mut get = |v: JetVar| {
                jets.entry(v)
                    .or_insert_with(|| {
                        let mut s = sol.shifted_jet(v.field as usize, v.order, bounds);
                        if v.field == 0 && v.order == 1 {
                            s.add_term(TKey::one(0), AlgScalar::one());
                        }
                        s
                    })
                    .clone()
            };
            eval_diffpoly(pa, &mut get, n, bounds)
        })
        .collect()
}

/// Right-hand side `η^{αμ}∂_x δh/δu^μ` of the `t^1_1` flow.
pub fn first_descendant_flow(h11: &LocalFunctional, eta_inv: &[Vec<AlgScalar>]) -> Result<Vec<DiffPoly>, Error> {
    flow(h11, &HamiltonianOperator::eta_dx(eta_inv))
}

/// Solves `(i + n)c = [P]_{n,i}` layer by layer for `i ≥ 1`, on top of the genus-zero
/// seed obtained by integrating the dispersionless flows.
pub fn special_solution(h11: &LocalFunctional, g0: &GenusZeroData, bounds: Bounds) -> Result<SpecialSolution, Error> {
    let n = g0.n;
    if h11.n_fields() != n {
        return Err(Error::ContextMismatch(format!("h̄_1,1 in {} fields, genus-zero data in {}", h11.n_fields(), n)));
    }
    TSeries::check_bounds(n, bounds)?;
    let lead = LocalFunctional::new(h11.density().eps_part(0));
    if !lead.local_eq(&LocalFunctional::new(g0.potential_11.clone()))? {
        return Err(Error::Precondition("ε^0 part of h̄_1,1 differs from Ω_1,2;1,0".into()));
    }
    let seed = integrate_flows(n, &g0.flows(bounds.t_max)?, Bounds { eps: 0, ..bounds })?;
    let mut sol = SpecialSolution { n, bounds, u: seed.iter().map(|s| s.with_bounds(bounds)).collect() };
    let p: Vec<DiffPoly> =
        first_descendant_flow(h11, &g0.eta_inv)?.iter().map(|q| q.truncate_eps(bounds.eps)).collect();
    for i in 1..=bounds.eps {
        for deg in 1..=bounds.degree {
            let b = Bounds { degree: deg, eps: i, ..bounds };
            let rhs = eval_on_solution(&p, &sol, b);
            // The unknown layer enters the right side only through `u^α` itself.
            let inv = AlgScalar::frac(1, (i + deg - 1) as i64);
            for (a, s) in rhs.iter().enumerate() {
                for (k, c) in s.layer(deg, i).terms() {
                    sol.u[a].add_term(*k, c * &inv);
                }
            }
        }
    }
    Ok(sol)
}

/// `(ε∂_ε + Σt∂_t)u − P(u)` for every layer; zero iff the recursion holds, including `i = 0`.
pub fn recursion_residual(h11: &LocalFunctional, g0: &GenusZeroData, sol: &SpecialSolution) -> Result<Vec<TSeries>, Error> {
    let p: Vec<DiffPoly> =
        first_descendant_flow(h11, &g0.eta_inv)?.iter().map(|q| q.truncate_eps(sol.bounds.eps)).collect();
    let rhs = eval_on_solution(&p, sol, sol.bounds);
    Ok(sol.u.iter().zip(&rhs).map(|(u, r)| u.euler().sub(r)).collect())
}

/// Residuals of the string and dilaton equations at `x = 0`, exact up to t-degree `valid_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringDilatonReport {
    pub string: Vec<TSeries>,
    pub dilaton: Vec<TSeries>,
    pub valid_degree: u16,
}

impl StringDilatonReport {
    pub fn is_zero(&self) -> bool {
        self.string.iter().chain(&self.dilaton).all(|s| s.is_zero())
    }

    /// Lines `equation u^α: monomial = value` for every nonzero residual coefficient.
    pub fn locations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, list) in [("string", &self.string), ("dilaton", &self.dilaton)] {
            for (a, s) in list.iter().enumerate() {
                for (k, c) in s.terms() {
                    out.push(format!("{} u{}: {} = {}", name, a + 1, s.key_text(k), c.to_text()));
                }
            }
        }
        out
    }
}

/// `∂u/∂t^1_0 − Σ t^γ_{n+1}∂u/∂t^γ_n − δ^{α,1}` and `∂u/∂t^1_1 − ε∂_εu − Σ t∂_t u`.
pub fn check_string_dilaton(sol: &SpecialSolution) -> Result<StringDilatonReport, Error> {
    if sol.bounds.t_max < 1 || sol.bounds.degree < 1 {
        return Err(Error::Truncation("string/dilaton check needs t_max ≥ 1 and D ≥ 1".into()));
    }
    let valid = sol.bounds.degree - 1;
    let mut string = Vec::new();
    let mut dilaton = Vec::new();
    for (a, u) in sol.u.iter().enumerate() {
        let mut s = u.diff_var(u.var_index(0, 0)).sub(&u.string_shift());
        if a == 0 {
            s.add_term(TKey::one(0), -AlgScalar::one());
        }
        string.push(s.truncate_degree(valid));
        let d = u.diff_var(u.var_index(0, 1)).sub(&u.euler());
        dilaton.push(d.truncate_degree(valid));
    }
    Ok(StringDilatonReport { string, dilaton, valid_degree: valid })
}

/// Writes a series (exact up to t-degree `valid_degree`) as a differential polynomial in the
/// jets of the solution, by inverting `∂_x^d u^α − δ^{α,1}δ_{d,1} = t^α_d + …`.
///
/// The answer is exact when the true polynomial has degree at most `valid_degree` in the jets
/// and uses derivatives of order at most `t_max`.
pub fn jet_rewrite(series: &TSeries, sol: &SpecialSolution, valid_degree: u16) -> Result<DiffPoly, Error> {
    let n = sol.n;
    let b = Bounds { degree: valid_degree.min(sol.bounds.degree), ..sol.bounds };
    let width = b.t_max as usize + 1;
    let nv = n * width;
    let mut shift: Vec<TSeries> = Vec::with_capacity(nv);
    for idx in 0..nv {
        let (a, d) = (idx / width, (idx % width) as u16);
        let v = sol.shifted_jet(a, d, b);
        if v.layer(1, 0) != TSeries::var(n, b, a, d).layer(1, 0) {
            return Err(Error::Precondition(format!(
                "linear part of ∂_x^{} u{} is not t{}_{}; jets do not form coordinates",
                d,
                a + 1,
                a + 1,
                d
            )));
        }
        if v.terms().any(|(k, _)| k.degree == 0) {
            return Err(Error::Precondition("shifted jets have a constant term".into()));
        }
        shift.push(v.sub(&TSeries::var(n, b, a, d)));
    }
    let ys: Vec<TSeries> = (0..nv).map(|i| TSeries::var(n, b, i / width, (i % width) as u16)).collect();
    let mut t = ys.clone();
    for _ in 0..=(b.degree + b.eps) {
        t = (0..nv).map(|i| ys[i].sub(&compose(&shift[i], &t, b))).collect();
    }
    let q = compose(&series.with_bounds(b), &t, b);
    let mut out = DiffPoly::zero(n);
    for (k, c) in q.terms() {
        let mut term = DiffPoly::term(n, Monomial::eps_only(k.eps), c.clone());
        for i in 0..nv {
            let e = k.exp(i);
            if e == 0 {
                continue;
            }
            let (a, d) = (i / width, (i % width) as u16);
            let mut jet = DiffPoly::var(n, a as u16, d);
            if a == 0 && d == 1 {
                jet -= &DiffPoly::one(n);
            }
            term = &term * &jet.pow(e as u32);
        }
        out += term;
    }
    Ok(out)
}

/// Outcome of checking that a Miura map carries the double ramification data to the
/// Dubrovin–Zhang data of the r-spin theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainVerdict {
    pub r: u32,
    pub eps_order: u16,
    /// `∂w^α/∂u^1 = δ^{α,1}`; pushed `η∂_x` equals `K^{r-spin}`; pushed `ḡ_{1,1}` equals `h̄^{r-spin}_{1,1}`.
    pub conditions: [bool; 3],
    /// `∂w^α/∂u^1 − δ^{α,1}`.
    pub derivative_diffs: Vec<DiffPoly>,
    /// Nonzero entries `(α, β, pushed − K^{r-spin})`.
    pub operator_diffs: Vec<(usize, usize, DiffOperator)>,
    /// Canonical density of the difference of Hamiltonians.
    pub hamiltonian_diff: DiffPoly,
}

impl MainVerdict {
    pub fn holds(&self) -> bool {
        self.conditions.iter().all(|c| *c)
    }
}

/// `η_{αβ} = δ_{α+β,r}`.
pub fn rspin_eta(r: u32) -> Vec<Vec<AlgScalar>> {
    let n = r as usize - 1;
    (0..n).map(|a| (0..n).map(|b| if a + b + 2 == r as usize { AlgScalar::one() } else { AlgScalar::zero() }).collect()).collect()
}

/// Checks a Miura map `w = w(u)` against the three conditions modulo `ε^{e+1}`.
pub fn verify_theorem_main(r: u32, map: &MiuraMap, e: u16, builtin_g11: &LocalFunctional) -> Result<MainVerdict, Error> {
    let ctx = GDContext::new(r)?;
    let n = ctx.n_fields();
    if map.n_fields() != n || builtin_g11.n_fields() != n {
        return Err(Error::ContextMismatch(format!("r = {} needs {} fields", r, n)));
    }
    let u1 = JetVar::new(0, 0);
    let derivative_diffs: Vec<DiffPoly> = map
        .images()
        .iter()
        .enumerate()
        .map(|(a, w)| {
            let mut d = w.partial(u1).truncate_eps(e);
            if a == 0 {
                d -= &DiffPoly::one(n);
            }
            d
        })
        .collect();
    let c1 = derivative_diffs.iter().all(|d| d.is_zero());

    let k = ctx.rspin_operator()?.truncate_eps(e);
    let pushed = map.push_operator(&HamiltonianOperator::eta_dx(&rspin_eta(r)), e).truncate_eps(e);
    let mut operator_diffs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let mut d = pushed.get(a, b).clone();
            for (ord, c) in k.get(a, b).coeffs() {
                d.add_coeff(ord, -c);
            }
            if !d.is_zero() {
                operator_diffs.push((a, b, d));
            }
        }
    }
    let c2 = operator_diffs.is_empty();

    let h = ctx.rspin_hamiltonian(1, 1)?.truncate_eps(e);
    let g = map.push_functional(builtin_g11, e).truncate_eps(e);
    let diff = LocalFunctional::new(g.density() - h.density());
    let c3 = diff.is_zero();
    Ok(MainVerdict {
        r,
        eps_order: e,
        conditions: [c1, c2, c3],
        derivative_diffs,
        operator_diffs,
        hamiltonian_diff: diff.canonical(),
    })
}
