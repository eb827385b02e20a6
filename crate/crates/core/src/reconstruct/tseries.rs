//! Truncated power series in the times `t^γ_n` and `ε`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::diffpoly::{DiffPoly, JetVar};
use crate::error::Error;
use crate::scalars::AlgScalar;

/// Truncation bounds: subscripts `n ≤ t_max`, total t-degree `≤ degree`, `ε`-order `≤ eps`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub t_max: u16,
    pub degree: u16,
    pub eps: u16,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { t_max: 3, degree: 4, eps: 4 }
    }
}

/// Largest supported number of time variables.
pub const MAX_VARS: usize = 32;
/// Largest supported total t-degree.
pub const MAX_DEGREE: u16 = 15;

/// A monomial `ε^eps Π (t^γ_n)^{e_{γ,n}}`; the variable `(γ, n)` sits at index
/// `γ(t_max+1) + n` and its exponent in the 4-bit nibble at that index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TKey {
    pub degree: u16,
    pub packed: u128,
    pub eps: u16,
}

impl TKey {
    pub fn one(eps: u16) -> Self {
        TKey { degree: 0, packed: 0, eps }
    }

    pub fn from_exps(exps: &[u8], eps: u16) -> Self {
        let mut packed = 0u128;
        let mut degree = 0;
        for (i, e) in exps.iter().enumerate() {
            packed |= (*e as u128) << (4 * i);
            degree += *e as u16;
        }
        TKey { degree, packed, eps }
    }

    pub fn exp(&self, idx: usize) -> u8 {
        ((self.packed >> (4 * idx)) & 0xf) as u8
    }

    pub fn exps(&self, n_vars: usize) -> Vec<u8> {
        (0..n_vars).map(|i| self.exp(i)).collect()
    }

    /// Product of monomials; the caller keeps every exponent below 16.
    pub fn mul(&self, other: &TKey) -> TKey {
        TKey { degree: self.degree + other.degree, packed: self.packed + other.packed, eps: self.eps + other.eps }
    }

    /// Raises (`delta = 1`) or lowers (`delta = -1`) the exponent at `idx`.
    pub fn bump(&self, idx: usize, delta: i32) -> TKey {
        let unit = 1u128 << (4 * idx);
        let packed = if delta > 0 { self.packed + unit } else { self.packed - unit };
        TKey { degree: (self.degree as i32 + delta) as u16, packed, eps: self.eps }
    }
}

/// Sparse truncated series with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSeries {
    pub n_fields: usize,
    pub bounds: Bounds,
    terms: BTreeMap<TKey, AlgScalar>,
}

impl TSeries {
    pub fn zero(n_fields: usize, bounds: Bounds) -> Self {
        TSeries { n_fields, bounds, terms: BTreeMap::new() }
    }

    /// Rejects bounds that do not fit the packed key.
    pub fn check_bounds(n_fields: usize, bounds: Bounds) -> Result<(), Error> {
        if n_fields * (bounds.t_max as usize + 1) > MAX_VARS || bounds.degree > MAX_DEGREE {
            return Err(Error::Unsupported(format!(
                "at most {} time variables and t-degree {} are supported",
                MAX_VARS, MAX_DEGREE
            )));
        }
        Ok(())
    }

    /// Same terms under other bounds (terms outside them are dropped).
    pub fn with_bounds(&self, bounds: Bounds) -> TSeries {
        let mut out = TSeries::zero(self.n_fields, bounds);
        for (k, c) in &self.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn n_vars(&self) -> usize {
        self.n_fields * (self.bounds.t_max as usize + 1)
    }

    /// Index of `t^γ_n` (zero-based `γ`).
    pub fn var_index(&self, gamma: usize, n: u16) -> usize {
        gamma * (self.bounds.t_max as usize + 1) + n as usize
    }

    /// `(γ, n)` of a variable index.
    pub fn var_of(&self, idx: usize) -> (usize, u16) {
        let w = self.bounds.t_max as usize + 1;
        (idx / w, (idx % w) as u16)
    }

    pub fn constant(n_fields: usize, bounds: Bounds, c: AlgScalar) -> Self {
        let mut s = Self::zero(n_fields, bounds);
        s.add_term(TKey::one(0), c);
        s
    }

    /// The single variable `t^γ_n`.
    pub fn var(n_fields: usize, bounds: Bounds, gamma: usize, n: u16) -> Self {
        let mut s = Self::zero(n_fields, bounds);
        let k = TKey::one(0).bump(s.var_index(gamma, n), 1);
        s.add_term(k, AlgScalar::from_int(1));
        s
    }

    fn fits(&self, k: &TKey) -> bool {
        k.degree <= self.bounds.degree && k.eps <= self.bounds.eps
    }

    pub fn add_term(&mut self, k: TKey, c: AlgScalar) {
        if c.is_zero() || !self.fits(&k) {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn set(&mut self, k: TKey, c: AlgScalar) {
        if c.is_zero() {
            self.terms.remove(&k);
        } else if self.fits(&k) {
            self.terms.insert(k, c);
        }
    }

    pub fn coeff(&self, k: &TKey) -> AlgScalar {
        self.terms.get(k).cloned().unwrap_or_else(|| AlgScalar::from_int(0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TKey, &AlgScalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TSeries) -> TSeries {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TSeries) -> TSeries {
        self.add(&other.scale(&AlgScalar::from_int(-1)))
    }

    pub fn scale(&self, s: &AlgScalar) -> TSeries {
        let mut out = TSeries::zero(self.n_fields, self.bounds);
        for (k, c) in &self.terms {
            out.add_term(*k, c * s);
        }
        out
    }

    pub fn mul(&self, other: &TSeries) -> TSeries {
        let mut out = TSeries::zero(self.n_fields, self.bounds);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                if k1.degree + k2.degree > self.bounds.degree || k1.eps + k2.eps > self.bounds.eps {
                    continue;
                }
                out.add_term(k1.mul(k2), c1 * c2);
            }
        }
        out
    }

    /// `∂/∂t` for the variable at index `idx`.
    pub fn diff_var(&self, idx: usize) -> TSeries {
        let mut out = TSeries::zero(self.n_fields, self.bounds);
        for (k, c) in &self.terms {
            let e = k.exp(idx);
            if e == 0 {
                continue;
            }
            out.add_term(k.bump(idx, -1), c * &AlgScalar::from_int(e as i64));
        }
        out
    }

    /// `Σ_{γ, n<t_max} t^γ_{n+1} ∂/∂t^γ_n`, which preserves degree.
    pub fn string_shift(&self) -> TSeries {
        let mut out = TSeries::zero(self.n_fields, self.bounds);
        let tm = self.bounds.t_max;
        for (k, c) in &self.terms {
            for gamma in 0..self.n_fields {
                for n in 0..tm {
                    let i = self.var_index(gamma, n);
                    let e = k.exp(i);
                    if e == 0 {
                        continue;
                    }
                    out.add_term(k.bump(i, -1).bump(i + 1, 1), c * &AlgScalar::from_int(e as i64));
                }
            }
        }
        out
    }

    /// `ε∂_ε + Σ t ∂_t`: multiplies each term by `eps + degree`.
    pub fn euler(&self) -> TSeries {
        let mut out = TSeries::zero(self.n_fields, self.bounds);
        for (k, c) in &self.terms {
            out.add_term(*k, c * &AlgScalar::from_int((k.eps + k.degree) as i64));
        }
        out
    }

    /// Terms of total degree `≤ d`.
    pub fn truncate_degree(&self, d: u16) -> TSeries {
        let mut out = TSeries::zero(self.n_fields, self.bounds);
        for (k, c) in &self.terms {
            if k.degree <= d {
                out.add_term(*k, c.clone());
            }
        }
        out
    }

    /// Restricts to the terms with the given degree and `ε`-order.
    pub fn layer(&self, degree: u16, eps: u16) -> TSeries {
        let mut out = TSeries::zero(self.n_fields, self.bounds);
        for (k, c) in &self.terms {
            if k.degree == degree && k.eps == eps {
                out.add_term(*k, c.clone());
            }
        }
        out
    }

    /// Human-readable monomial, e.g. `eps^2*t1_0^2*t2_1`.
    pub fn key_text(&self, k: &TKey) -> String {
        let mut parts: Vec<String> = Vec::new();
        if k.eps > 0 {
            parts.push(format!("eps^{}", k.eps));
        }
        for i in 0..self.n_vars() {
            let e = &k.exp(i);
            if *e == 0 {
                continue;
            }
            let (g, n) = self.var_of(i);
            if *e == 1 {
                parts.push(format!("t{}_{}", g + 1, n));
            } else {
                parts.push(format!("t{}_{}^{}", g + 1, n, e));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Evaluates a differential polynomial at series-valued jets, with `ε` kept.
pub fn eval_diffpoly(p: &DiffPoly, jets: &mut dyn FnMut(JetVar) -> TSeries, n_fields: usize, bounds: Bounds) -> TSeries {
    let mut cache: BTreeMap<(JetVar, u16), TSeries> = BTreeMap::new();
    let mut base: BTreeMap<JetVar, TSeries> = BTreeMap::new();
    let mut out = TSeries::zero(n_fields, bounds);
    for (m, c) in p.terms() {
        if m.eps > bounds.eps {
            continue;
        }
        let mut acc = TSeries::zero(n_fields, bounds);
        acc.add_term(TKey::one(m.eps), c.clone());
        for (v, e) in m.vars() {
            if !base.contains_key(v) {
                base.insert(*v, jets(*v));
            }
            let pw = power(&mut cache, &base, *v, *e);
            acc = acc.mul(&pw);
            if acc.is_zero() {
                break;
            }
        }
        out = out.add(&acc);
    }
    out
}

fn power(cache: &mut BTreeMap<(JetVar, u16), TSeries>, base: &BTreeMap<JetVar, TSeries>, v: JetVar, e: u16) -> TSeries {
    if e == 1 {
        return base[&v].clone();
    }
    if let Some(s) = cache.get(&(v, e)) {
        return s.clone();
    }
    let lower = power(cache, base, v, e - 1);
    let r = lower.mul(&base[&v]);
    cache.insert((v, e), r.clone());
    r
}

/// Substitutes series for the time variables: variable `i` of `f` becomes `subs[i]`.
pub fn compose(f: &TSeries, subs: &[TSeries], bounds: Bounds) -> TSeries {
    let nf = subs.first().map(|s| s.n_fields).unwrap_or(f.n_fields);
    let mut cache: BTreeMap<(usize, u8), TSeries> = BTreeMap::new();
    let mut out = TSeries::zero(nf, bounds);
    for (k, c) in f.terms() {
        if k.eps > bounds.eps {
            continue;
        }
        let mut acc = TSeries::zero(nf, bounds);
        acc.add_term(TKey::one(k.eps), c.clone());
        for (i, s) in subs.iter().enumerate() {
            let e = k.exp(i);
            if e == 0 {
                continue;
            }
            let pw = match cache.get(&(i, e)) {
                Some(p) => p.clone(),
                None => {
                    let mut p = s.with_bounds(bounds);
                    for _ in 1..e {
                        p = p.mul(s);
                    }
                    cache.insert((i, e), p.clone());
                    p
                }
            };
            acc = acc.mul(&pw);
            if acc.is_zero() {
                break;
            }
        }
        out = out.add(&acc);
    }
    out
}
