//! Differential polynomials, local functionals and the Fourier-mode dictionary.

mod canonical;
mod functional;
mod pseries;
mod text;

pub use canonical::canonical_density;
pub use functional::LocalFunctional;
pub use pseries::{PMonomial, PSeries};
pub use text::{parse_diffpoly, render_latex, render_text, VarNames};

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::scalars::{AlgScalar, Rational};

/// The jet variable `u^α_i`; `field` is zero-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct JetVar {
    pub field: u16,
    pub order: u16,
}

impl JetVar {
    pub const fn new(field: u16, order: u16) -> Self {
        JetVar { field, order }
    }
}

/// A monomial `ε^eps · Π (u^α_i)^p`, variables sorted and powers positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    pub eps: u16,
    vars: SmallVec<[(JetVar, u16); 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn eps_only(eps: u16) -> Self {
        Monomial { eps, vars: SmallVec::new() }
    }

    pub fn var(v: JetVar) -> Self {
        let mut vars = SmallVec::new();
        vars.push((v, 1));
        Monomial { eps: 0, vars }
    }

    /// Builds from unsorted `(var, power)` pairs; repeated variables are merged.
    pub fn from_vars(eps: u16, items: impl IntoIterator<Item = (JetVar, u16)>) -> Self {
        let mut vars: SmallVec<[(JetVar, u16); 4]> = items.into_iter().filter(|x| x.1 > 0).collect();
        vars.sort_by_key(|x| x.0);
        let mut merged: SmallVec<[(JetVar, u16); 4]> = SmallVec::new();
        for (v, p) in vars {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += p,
                _ => merged.push((v, p)),
            }
        }
        Monomial { eps, vars: merged }
    }

    pub fn vars(&self) -> &[(JetVar, u16)] {
        &self.vars
    }

    /// Polynomial degree in the jet variables.
    pub fn degree(&self) -> u32 {
        self.vars.iter().map(|x| x.1 as u32).sum()
    }

    /// Σ order·power, the derivative weight ignoring ε.
    pub fn jet_weight(&self) -> u32 {
        self.vars.iter().map(|(v, p)| v.order as u32 * *p as u32).sum()
    }

    /// Differential degree: jet weight minus ε exponent.
    pub fn diff_degree(&self) -> i64 {
        self.jet_weight() as i64 - self.eps as i64
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn power_of(&self, v: JetVar) -> u16 {
        self.vars.iter().find(|x| x.0 == v).map_or(0, |x| x.1)
    }

    pub fn max_field(&self) -> Option<u16> {
        self.vars.iter().map(|x| x.0.field).max()
    }

    pub fn max_order(&self) -> u16 {
        self.vars.iter().map(|x| x.0.order).max().unwrap_or(0)
    }

    /// Number of factors per field, as a vector of length `n`.
    pub fn field_degrees(&self, n: usize) -> Vec<u32> {
        let mut out = alloc::vec![0u32; n];
        for (v, p) in &self.vars {
            out[v.field as usize] += *p as u32;
        }
        out
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut vars: SmallVec<[(JetVar, u16); 4]> = SmallVec::with_capacity(self.vars.len() + other.vars.len());
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() && j < other.vars.len() {
            let (a, b) = (self.vars[i], other.vars[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    vars.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    vars.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    vars.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        vars.extend_from_slice(&self.vars[i..]);
        vars.extend_from_slice(&other.vars[j..]);
        Monomial { eps: self.eps + other.eps, vars }
    }

    /// Divides out one factor of `v`; returns the exponent it had.
    pub fn remove_one(&self, v: JetVar) -> Option<(u16, Monomial)> {
        let idx = self.vars.iter().position(|x| x.0 == v)?;
        let mut out = self.clone();
        let p = out.vars[idx].1;
        if p == 1 {
            out.vars.remove(idx);
        } else {
            out.vars[idx].1 -= 1;
        }
        Some((p, out))
    }

    /// Drops all variables, keeping only the ε exponent.
    pub fn with_eps(&self, eps: u16) -> Monomial {
        Monomial { eps, vars: self.vars.clone() }
    }

    /// Applies a field relabelling.
    pub fn map_fields(&self, f: impl Fn(u16) -> u16) -> Monomial {
        Monomial::from_vars(self.eps, self.vars.iter().map(|(v, p)| (JetVar::new(f(v.field), v.order), *p)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.eps
            .cmp(&other.eps)
            .then_with(|| self.degree().cmp(&other.degree()))
            .then_with(|| self.vars.as_slice().cmp(other.vars.as_slice()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A differential polynomial in `n` fields, possibly with ε.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffPoly {
    n: usize,
    terms: BTreeMap<Monomial, AlgScalar>,
}

impl DiffPoly {
    pub fn zero(n: usize) -> Self {
        DiffPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: AlgScalar) -> Self {
        Self::term(n, Monomial::one(), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, AlgScalar::one())
    }

    pub fn term(n: usize, m: Monomial, c: AlgScalar) -> Self {
        let mut p = Self::zero(n);
        p.add_term(m, c);
        p
    }

    /// `u^{field}_{order}` (zero-based field).
    pub fn var(n: usize, field: u16, order: u16) -> Self {
        assert!((field as usize) < n, "field index out of range");
        Self::term(n, Monomial::var(JetVar::new(field, order)), AlgScalar::one())
    }

    pub fn eps_power(n: usize, k: u16) -> Self {
        Self::term(n, Monomial::eps_only(k), AlgScalar::one())
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, AlgScalar)>) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn n_fields(&self) -> usize {
        self.n
    }

    /// The same polynomial viewed in a ring with `n ≥` current fields.
    pub fn with_n(mut self, n: usize) -> Self {
        if let Some(m) = self.terms.keys().filter_map(|m| m.max_field()).max() {
            assert!((m as usize) < n, "polynomial uses field {} outside ring of {}", m, n);
        }
        self.n = n;
        self
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &AlgScalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, AlgScalar)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> AlgScalar {
        self.terms.get(m).cloned().unwrap_or_else(AlgScalar::zero)
    }

    pub fn constant_term(&self) -> AlgScalar {
        self.coeff(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: AlgScalar) {
        if c.is_zero() {
            return;
        }
        if let Some(f) = m.max_field() {
            if f as usize >= self.n {
                self.n = f as usize + 1;
            }
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_term_ref(&mut self, m: &Monomial, c: &AlgScalar) {
        if c.is_zero() {
            return;
        }
        if let Some(v) = self.terms.get_mut(m) {
            *v += c;
            if v.is_zero() {
                self.terms.remove(m);
            }
        } else {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &DiffPoly, s: &AlgScalar) {
        if s.is_zero() {
            return;
        }
        self.n = self.n.max(other.n);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn scale(&self, s: &AlgScalar) -> DiffPoly {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        DiffPoly { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn scale_q(&self, q: &Rational) -> DiffPoly {
        if q.is_zero() {
            return Self::zero(self.n);
        }
        DiffPoly { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scale(q))).collect() }
    }

    /// Multiplies every term by `ε^k`.
    pub fn shift_eps(&self, k: u16) -> DiffPoly {
        DiffPoly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.with_eps(m.eps + k), c.clone())).collect(),
        }
    }

    pub fn mul_trunc(&self, other: &DiffPoly, eps_max: Option<u16>) -> DiffPoly {
        let mut out = Self::zero(self.n.max(other.n));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some(e) = eps_max {
                    if m1.eps + m2.eps > e {
                        continue;
                    }
                }
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> DiffPoly {
        self.pow_trunc(k, None)
    }

    pub fn pow_trunc(&self, k: u32, eps_max: Option<u16>) -> DiffPoly {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = acc.mul_trunc(self, eps_max);
        }
        acc
    }

    /// Drops terms with ε exponent above `e`.
    pub fn truncate_eps(&self, e: u16) -> DiffPoly {
        DiffPoly {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| m.eps <= e).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// The coefficient of `ε^k`, as an ε-free polynomial.
    pub fn eps_part(&self, k: u16) -> DiffPoly {
        DiffPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.eps == k)
                .map(|(m, c)| (m.with_eps(0), c.clone()))
                .collect(),
        }
    }

    pub fn max_eps(&self) -> u16 {
        self.terms.keys().map(|m| m.eps).max().unwrap_or(0)
    }

    /// Sets ε = 1: merges all ε powers.
    pub fn forget_eps(&self) -> DiffPoly {
        Self::from_terms(self.n, self.terms.iter().map(|(m, c)| (m.with_eps(0), c.clone())))
    }

    /// Replaces each ε-free monomial's ε exponent by its jet weight.
    ///
    /// Panics if the polynomial already contains ε.
    pub fn eps_dress(&self) -> DiffPoly {
        assert!(self.terms.keys().all(|m| m.eps == 0), "eps_dress expects an ε-free polynomial");
        DiffPoly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.with_eps(m.jet_weight() as u16), c.clone())).collect(),
        }
    }

    /// Keeps only terms satisfying the predicate.
    pub fn filter(&self, pred: impl Fn(&Monomial) -> bool) -> DiffPoly {
        DiffPoly {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| pred(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Applies a coefficient map, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&Monomial, &AlgScalar) -> AlgScalar) -> DiffPoly {
        Self::from_terms(self.n, self.terms.iter().map(|(m, c)| (m.clone(), f(m, c))))
    }

    /// Relabels fields into a ring with `n` fields.
    pub fn map_fields(&self, n: usize, f: impl Fn(u16) -> u16) -> DiffPoly {
        let mut out = Self::zero(n);
        for (m, c) in &self.terms {
            out.add_term(m.map_fields(&f), c.clone());
        }
        out.n = n;
        out
    }

    /// Largest derivative order of `field` appearing, if any.
    pub fn max_order_of(&self, field: u16) -> Option<u16> {
        self.terms
            .keys()
            .flat_map(|m| m.vars().iter().filter(|x| x.0.field == field).map(|x| x.0.order))
            .max()
    }

    pub fn max_order(&self) -> u16 {
        self.terms.keys().map(|m| m.max_order()).max().unwrap_or(0)
    }

    /// Whether any monomial involves a jet of positive order.
    pub fn has_jets(&self) -> bool {
        self.max_order() > 0
    }

    /// The total x-derivative `∂_x`.
    pub fn dx(&self) -> DiffPoly {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            for (k, (v, p)) in m.vars.iter().enumerate() {
                let next = JetVar::new(v.field, v.order + 1);
                let mut vars = m.vars.clone();
                if *p == 1 {
                    vars.remove(k);
                } else {
                    vars[k].1 -= 1;
                }
                let nm = Monomial::from_vars(m.eps, vars.into_iter().chain(core::iter::once((next, 1))));
                out.add_term(nm, c.scale(&Rational::from_integer(*p as i64)));
            }
        }
        out
    }

    pub fn dx_n(&self, k: u32) -> DiffPoly {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.dx();
        }
        out
    }

    /// The partial derivative `∂/∂u^α_i`.
    pub fn partial(&self, v: JetVar) -> DiffPoly {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            if let Some((p, rest)) = m.remove_one(v) {
                out.add_term(rest, c.scale(&Rational::from_integer(p as i64)));
            }
        }
        out
    }

    /// The variational derivative `δ/δu^α = Σ_i (−∂_x)^i ∂/∂u^α_i`.
    pub fn var_der(&self, field: u16) -> DiffPoly {
        let top = match self.max_order_of(field) {
            Some(t) => t,
            None => return Self::zero(self.n),
        };
        let mut acc = Self::zero(self.n);
        for i in (0..=top).rev() {
            let g = self.partial(JetVar::new(field, i));
            acc = g - acc.dx();
        }
        acc
    }

    /// Substitutes `u^α ↦ subs[α]` (with jets mapped to x-derivatives of the images).
    ///
    /// The result lives in a ring with `n_out` fields; ε exponents above `eps_max` are dropped.
    pub fn substitute(&self, subs: &[DiffPoly], n_out: usize, eps_max: Option<u16>) -> DiffPoly {
        let mut sub = Substituter::new(subs, n_out, eps_max);
        sub.apply(self)
    }

    /// Splits into the homogeneous pieces of given jet weight.
    pub fn by_jet_weight(&self) -> BTreeMap<u32, DiffPoly> {
        let mut out: BTreeMap<u32, DiffPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.jet_weight()).or_insert_with(|| Self::zero(self.n)).add_term(m.clone(), c.clone());
        }
        out
    }

    /// Whether every term has differential degree `deg` (jet weight minus ε exponent).
    pub fn is_homogeneous(&self, deg: i64) -> bool {
        self.terms.keys().all(|m| m.diff_degree() == deg)
    }

    /// Drops the constant term.
    pub fn drop_constant(&self) -> DiffPoly {
        self.filter(|m| !m.is_constant())
    }
}

/// Memoizing substitution engine, reused across many polynomials with the same images.
pub struct Substituter<'a> {
    subs: &'a [DiffPoly],
    n_out: usize,
    eps_max: Option<u16>,
    jets: Vec<Vec<DiffPoly>>,
    powers: BTreeMap<(JetVar, u16), DiffPoly>,
}

impl<'a> Substituter<'a> {
    pub fn new(subs: &'a [DiffPoly], n_out: usize, eps_max: Option<u16>) -> Self {
        let jets = subs
            .iter()
            .map(|s| alloc::vec![s.truncate_eps(eps_max.unwrap_or(u16::MAX)).with_n_max(n_out)])
            .collect();
        Substituter { subs, n_out, eps_max, jets, powers: BTreeMap::new() }
    }

    fn jet(&mut self, v: JetVar) -> &DiffPoly {
        let f = v.field as usize;
        assert!(f < self.subs.len(), "no image for field {}", f);
        while self.jets[f].len() <= v.order as usize {
            let next = self.jets[f].last().unwrap().dx();
            self.jets[f].push(next);
        }
        &self.jets[f][v.order as usize]
    }

    fn power(&mut self, v: JetVar, p: u16) -> DiffPoly {
        if p == 1 {
            return self.jet(v).clone();
        }
        if let Some(x) = self.powers.get(&(v, p)) {
            return x.clone();
        }
        let lower = self.power(v, p - 1);
        let base = self.jet(v).clone();
        let r = lower.mul_trunc(&base, self.eps_max);
        self.powers.insert((v, p), r.clone());
        r
    }

    pub fn apply(&mut self, f: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero(self.n_out);
        for (m, c) in f.terms() {
            if let Some(e) = self.eps_max {
                if m.eps > e {
                    continue;
                }
            }
            let mut acc = DiffPoly::term(self.n_out, Monomial::eps_only(m.eps), c.clone());
            for (v, p) in m.vars() {
                let pw = self.power(*v, *p);
                acc = acc.mul_trunc(&pw, self.eps_max);
                if acc.is_zero() {
                    break;
                }
            }
            for (mm, cc) in acc.terms {
                out.add_term_ref(&mm, &cc);
            }
        }
        out.n = self.n_out.max(out.n);
        out
    }
}

impl DiffPoly {
    fn with_n_max(mut self, n: usize) -> Self {
        self.n = self.n.max(n);
        self
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> core::ops::$tr<&'a DiffPoly> for &'a DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: &'a DiffPoly) -> DiffPoly {
                let f: fn(&DiffPoly, &DiffPoly) -> DiffPoly = $body;
                f(self, rhs)
            }
        }
        impl core::ops::$tr<DiffPoly> for DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: DiffPoly) -> DiffPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> core::ops::$tr<&'a DiffPoly> for DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: &'a DiffPoly) -> DiffPoly {
                (&self).$m(rhs)
            }
        }
        impl<'a> core::ops::$tr<DiffPoly> for &'a DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: DiffPoly) -> DiffPoly {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| {
    let mut out = a.clone();
    out += b;
    out
});
binop!(Sub, sub, |a, b| {
    let mut out = a.clone();
    out -= b;
    out
});
binop!(Mul, mul, |a, b| a.mul_trunc(b, None));

impl core::ops::AddAssign<&DiffPoly> for DiffPoly {
    fn add_assign(&mut self, rhs: &DiffPoly) {
        self.n = self.n.max(rhs.n);
        for (m, c) in &rhs.terms {
            self.add_term_ref(m, c);
        }
    }
}

impl core::ops::AddAssign for DiffPoly {
    fn add_assign(&mut self, rhs: DiffPoly) {
        if self.terms.is_empty() {
            let n = self.n.max(rhs.n);
            *self = rhs;
            self.n = n;
            return;
        }
        *self += &rhs;
    }
}

impl core::ops::SubAssign<&DiffPoly> for DiffPoly {
    fn sub_assign(&mut self, rhs: &DiffPoly) {
        self.n = self.n.max(rhs.n);
        for (m, c) in &rhs.terms {
            self.add_term_ref(m, &-c);
        }
    }
}

impl core::ops::Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl core::ops::Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", text::render_text(self, &VarNames::u(self.n)))
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", text::render_text(self, &VarNames::u(self.n)))
    }
}

#[cfg(test)]
mod tests;
