//! The Fourier-mode dictionary `u^α_j = Σ_k (ik)^j p^α_k e^{ikx}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::{DiffPoly, JetVar, LocalFunctional, Monomial};
use crate::error::Error;
use crate::scalars::{AlgScalar, Rational};

/// A monomial `ε^eps · Π (p^α_k)^m`, sorted by `(α, k)`; `α` zero-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct PMonomial {
    pub eps: u16,
    vars: SmallVec<[(u16, i32, u16); 4]>,
}

impl PMonomial {
    pub fn new(eps: u16, items: impl IntoIterator<Item = (u16, i32, u16)>) -> Self {
        let mut vars: SmallVec<[(u16, i32, u16); 4]> = items.into_iter().filter(|x| x.2 > 0).collect();
        vars.sort_by_key(|x| (x.0, x.1));
        let mut merged: SmallVec<[(u16, i32, u16); 4]> = SmallVec::new();
        for (a, k, p) in vars {
            match merged.last_mut() {
                Some(last) if last.0 == a && last.1 == k => last.2 += p,
                _ => merged.push((a, k, p)),
            }
        }
        PMonomial { eps, vars: merged }
    }

    /// `(field, mode, power)` triples.
    pub fn vars(&self) -> &[(u16, i32, u16)] {
        &self.vars
    }

    /// The frequency `Σ k·power` this monomial carries.
    pub fn mode_sum(&self) -> i64 {
        self.vars.iter().map(|(_, k, p)| *k as i64 * *p as i64).sum()
    }

    pub fn degree(&self) -> u32 {
        self.vars.iter().map(|x| x.2 as u32).sum()
    }

    pub fn mul(&self, other: &PMonomial) -> PMonomial {
        PMonomial::new(self.eps + other.eps, self.vars.iter().chain(other.vars.iter()).copied())
    }

    pub fn max_mode(&self) -> i32 {
        self.vars.iter().map(|x| x.1.abs()).max().unwrap_or(0)
    }
}

/// A polynomial in the modes `p^α_k`, `|k| ≤ window`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PSeries {
    pub n: usize,
    pub window: i32,
    terms: BTreeMap<PMonomial, AlgScalar>,
}

impl PSeries {
    pub fn zero(n: usize, window: i32) -> Self {
        PSeries { n, window, terms: BTreeMap::new() }
    }

    pub fn from_terms(n: usize, window: i32, terms: impl IntoIterator<Item = (PMonomial, AlgScalar)>) -> Self {
        let mut s = Self::zero(n, window);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn add_term(&mut self, m: PMonomial, c: AlgScalar) {
        if c.is_zero() {
            return;
        }
        assert!(m.max_mode() <= self.window, "mode outside window");
        let e = self.terms.entry(m.clone()).or_insert_with(AlgScalar::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PMonomial, &AlgScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &PMonomial) -> AlgScalar {
        self.terms.get(m).cloned().unwrap_or_else(AlgScalar::zero)
    }

    pub fn mul(&self, other: &PSeries) -> PSeries {
        let mut out = Self::zero(self.n.max(other.n), self.window.max(other.window));
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }

    /// Keeps only frequency-zero monomials.
    pub fn mode_zero_part(&self) -> PSeries {
        PSeries {
            n: self.n,
            window: self.window,
            terms: self.terms.iter().filter(|(m, _)| m.mode_sum() == 0).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// The image of a local functional: substitute the mode expansion and keep frequency zero.
    ///
    /// Constant terms are dropped, as functionals are taken modulo constants.
    pub fn from_functional(h: &LocalFunctional, window: i32) -> PSeries {
        assert!(window >= 1);
        let n = h.n_fields();
        let mut out = Self::zero(n, window);
        let mut jet_cache: BTreeMap<JetVar, PSeries> = BTreeMap::new();
        for (m, c) in h.density().terms() {
            if m.is_constant() {
                continue;
            }
            let mut acc = Self::from_terms(n, window, [(PMonomial::new(m.eps, []), c.clone())]);
            for (v, p) in m.vars() {
                let jet = jet_cache.entry(*v).or_insert_with(|| jet_series(n, window, *v)).clone();
                for _ in 0..*p {
                    acc = acc.mul(&jet);
                }
            }
            for (pm, pc) in acc.terms {
                if pm.mode_sum() == 0 {
                    out.add_term(pm, pc);
                }
            }
        }
        out
    }

    /// Recovers a local functional from a frequency-zero series of arity at most two.
    ///
    /// Quadratic parts are matched as polynomials in the mode `k`, so derivative
    /// orders up to `2·window` are recovered exactly.
    pub fn to_functional(&self) -> Result<LocalFunctional, Error> {
        let n = self.n;
        let mut density = DiffPoly::zero(n);
        // (eps, α, β) → samples C(k)
        let mut quad: BTreeMap<(u16, u16, u16), BTreeMap<i32, AlgScalar>> = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.mode_sum() != 0 {
                return Err(Error::Precondition("series has nonzero frequency terms".into()));
            }
            match m.vars() {
                [] => {}
                [(a, 0, 1)] => density.add_term(Monomial::from_vars(m.eps, [(JetVar::new(*a, 0), 1)]), c.clone()),
                [(a, k, 2)] => {
                    debug_assert_eq!(*k, 0);
                    quad.entry((m.eps, *a, *a)).or_default().insert(0, c.clone());
                }
                [(a, k, 1), (b, l, 1)] => {
                    debug_assert_eq!(k + l, 0);
                    if a == b {
                        // p_k p_{−k} receives both orderings.
                        let half = c.scale(&Rational::new(1, 2));
                        quad.entry((m.eps, *a, *a)).or_default().insert(k.abs(), half.clone());
                        quad.entry((m.eps, *a, *a)).or_default().insert(-k.abs(), half);
                    } else {
                        quad.entry((m.eps, *a, *b)).or_default().insert(*k, c.clone());
                    }
                }
                _ => {
                    return Err(Error::Unsupported(format!(
                        "reconstruction from modes supports arity ≤ 2, got degree {}",
                        m.degree()
                    )))
                }
            }
        }
        for ((eps, a, b), samples) in quad {
            let pts: Vec<(Rational, AlgScalar)> = (-self.window..=self.window)
                .map(|k| (Rational::from_integer(k as i64), samples.get(&k).cloned().unwrap_or_else(AlgScalar::zero)))
                .collect();
            let coeffs = interpolate(&pts);
            let i_inv = AlgScalar::i().inverse().unwrap();
            for (j, aj) in coeffs.into_iter().enumerate() {
                let q = &aj * &i_inv.pow(j as i32);
                let m = Monomial::from_vars(eps, [(JetVar::new(a, j as u16), 1), (JetVar::new(b, 0), 1)]);
                density.add_term(m, q);
            }
        }
        Ok(LocalFunctional::new(density.with_n(n)))
    }
}

/// `Σ_{|k|≤M} (ik)^j p^α_k` for `v = u^α_j`.
fn jet_series(n: usize, window: i32, v: JetVar) -> PSeries {
    let mut s = PSeries::zero(n, window);
    for k in -window..=window {
        let c = (AlgScalar::i() * AlgScalar::from_int(k as i64)).pow(v.order as i32);
        s.add_term(PMonomial::new(0, [(v.field, k, 1)]), c);
    }
    s
}

/// Coefficients (increasing degree) of the interpolating polynomial through the points.
pub fn interpolate(pts: &[(Rational, AlgScalar)]) -> Vec<AlgScalar> {
    let n = pts.len();
    let mut out = alloc::vec![AlgScalar::zero(); n];
    for (i, (xi, yi)) in pts.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        // basis polynomial Π_{j≠i} (x − x_j)/(x_i − x_j)
        let mut basis: Vec<Rational> = alloc::vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, (xj, _)) in pts.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = alloc::vec![Rational::zero(); basis.len() + 1];
            for (d, b) in basis.iter().enumerate() {
                next[d + 1] += b;
                next[d] -= &(b * xj);
            }
            basis = next;
            denom *= &(xi - xj);
        }
        let scale = yi.scale(&denom.recip());
        for (d, b) in basis.iter().enumerate() {
            out[d] += &scale.scale(b);
        }
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}
