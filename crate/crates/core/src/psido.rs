//! Truncated pseudo-differential operators `Σ_{n ≤ top} a_n ∂_x^n`.
//!
//! Every operator knows its trustworthy window `[lo, top]`. Orders below `lo`
//! are unknown unless the operator is marked exact, in which case they are
//! zero. Products compute their windows pessimistically.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;


use crate::diffpoly::DiffPoly;
use crate::error::Error;
use crate::hamops::DiffOperator;
use crate::scalars::{AlgScalar, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoDiffOp {
    n: usize,
    top: i64,
    lo: i64,
    exact: bool,
    coeffs: BTreeMap<i64, DiffPoly>,
}

impl PseudoDiffOp {
    /// `c ∂^k`, exact.
    pub fn monomial(n: usize, k: i64, c: DiffPoly) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c.with_n(n));
        }
        PseudoDiffOp { n, top: k, lo: k, exact: true, coeffs }
    }

    /// `∂^k`, exact.
    pub fn dx_power(n: usize, k: i64) -> Self {
        Self::monomial(n, k, DiffPoly::one(n))
    }

    /// A differential operator as an exact pseudo-differential operator.
    pub fn from_diff_op(op: &DiffOperator) -> Self {
        let n = op.n_fields();
        let top = op.order().map_or(0, |t| t as i64);
        PseudoDiffOp {
            n,
            top,
            lo: 0,
            exact: true,
            coeffs: op.coeffs().map(|(k, c)| (k as i64, c.clone().with_n(n))).collect(),
        }
    }

    /// Builds from explicit coefficients with a declared window.
    pub fn from_coeffs(
        n: usize,
        top: i64,
        lo: i64,
        exact: bool,
        coeffs: impl IntoIterator<Item = (i64, DiffPoly)>,
    ) -> Result<Self, Error> {
        if lo > top {
            return Err(Error::Truncation(format!("empty window [{}, {}]", lo, top)));
        }
        let mut map = BTreeMap::new();
        for (k, c) in coeffs {
            if k > top || k < lo {
                return Err(Error::Truncation(format!("order {} outside window [{}, {}]", k, lo, top)));
            }
            if !c.is_zero() {
                map.insert(k, c.with_n(n));
            }
        }
        Ok(PseudoDiffOp { n, top, lo, exact, coeffs: map })
    }

    /// The Lax-type operator `∂^r + Σ_{i<r} c_i ∂^i` from coefficient list `c_0, c_1, …`.
    pub fn monic(n: usize, r: i64, lower: &[DiffPoly]) -> Self {
        let mut op = Self::dx_power(n, r);
        for (i, c) in lower.iter().enumerate() {
            if !c.is_zero() {
                op.coeffs.insert(i as i64, c.clone().with_n(n));
            }
        }
        op.lo = 0;
        op
    }

    pub fn n_fields(&self) -> usize {
        self.n
    }
    pub fn top(&self) -> i64 {
        self.top
    }
    /// Lowest trustworthy order (`i64::MIN` semantics when exact are handled by [`Self::is_exact`]).
    pub fn lo(&self) -> i64 {
        self.lo
    }
    pub fn is_exact(&self) -> bool {
        self.exact
    }
    /// Number of trustworthy orders.
    pub fn depth(&self) -> i64 {
        self.top - self.lo + 1
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &DiffPoly)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Coefficient of `∂^k`; errors below the trustworthy window.
    pub fn coeff(&self, k: i64) -> Result<DiffPoly, Error> {
        if k < self.lo && !self.exact {
            return Err(Error::Truncation(format!("order {} below window [{}, {}]", k, self.lo, self.top)));
        }
        Ok(self.coeffs.get(&k).cloned().unwrap_or_else(|| DiffPoly::zero(self.n)))
    }

    /// Narrows the window to orders `≥ floor` (marking the result inexact).
    pub fn truncate_below(&self, floor: i64) -> Self {
        if floor <= self.lo && !self.exact {
            return self.clone();
        }
        if self.exact && self.coeffs.keys().next().is_none_or(|k| *k >= floor) {
            return self.clone();
        }
        PseudoDiffOp {
            n: self.n,
            top: self.top,
            lo: floor.max(if self.exact { floor } else { self.lo }),
            exact: false,
            coeffs: self.coeffs.range(floor..).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    fn combine_window(&self, other: &Self) -> (i64, i64, bool) {
        let top = self.top.max(other.top);
        match (self.exact, other.exact) {
            (true, true) => (top, self.lo.min(other.lo), true),
            (true, false) => (top, other.lo, false),
            (false, true) => (top, self.lo, false),
            (false, false) => (top, self.lo.max(other.lo), false),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (top, lo, exact) = self.combine_window(other);
        let mut coeffs: BTreeMap<i64, DiffPoly> = BTreeMap::new();
        for (k, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if *k < lo && !exact {
                continue;
            }
            *coeffs.entry(*k).or_insert_with(|| DiffPoly::zero(self.n.max(other.n))) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        PseudoDiffOp { n: self.n.max(other.n), top, lo, exact, coeffs }
    }

    pub fn neg(&self) -> Self {
        PseudoDiffOp {
            n: self.n,
            top: self.top,
            lo: self.lo,
            exact: self.exact,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &AlgScalar) -> Self {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|(k, c)| (*k, c.scale(s))).filter(|(_, c)| !c.is_zero()).collect();
        out
    }

    /// `self ∘ other` using `∂^k ∘ a = Σ_l C(k, l) a^{(l)} ∂^{k−l}`.
    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.mul_floor(other, None)
    }

    /// Product restricted to orders `≥ floor` (required when an exact factor has negative orders).
    pub fn mul_floor(&self, other: &Self, floor: Option<i64>) -> Result<Self, Error> {
        let n = self.n.max(other.n);
        let top = self.top + other.top;
        let self_has_negative = self.coeffs.keys().next().is_some_and(|k| *k < 0);
        let finite = self.exact && other.exact && !self_has_negative;
        let mut lo = i64::MIN;
        if !self.exact {
            lo = lo.max(self.lo + other.top);
        }
        if !other.exact {
            lo = lo.max(self.top + other.lo);
        }
        if let Some(f) = floor {
            lo = lo.max(f);
        }
        if lo == i64::MIN && !finite {
            return Err(Error::Truncation("product of exact operators with negative orders needs a floor".into()));
        }
        if lo > top {
            return Err(Error::Truncation(format!("empty product window [{}, {}]", lo, top)));
        }
        let mut coeffs: BTreeMap<i64, DiffPoly> = BTreeMap::new();
        for (&j, b) in &other.coeffs {
            // Derivatives of b are produced lazily and shared across all a_i.
            let mut derivs: Vec<DiffPoly> = alloc::vec![b.clone()];
            for (&i, a) in self.coeffs.iter().rev() {
                let mut l: i64 = 0;
                loop {
                    let ord = i + j - l;
                    if ord < lo || (i >= 0 && l > i) {
                        break;
                    }
                    while derivs.len() <= l as usize {
                        let next = derivs.last().unwrap().dx();
                        derivs.push(next);
                    }
                    let d = &derivs[l as usize];
                    if d.is_zero() {
                        break;
                    }
                    let c = Rational::binomial(i, l as u32);
                    let term = (a * d).scale_q(&c);
                    let slot = coeffs.entry(ord).or_insert_with(|| DiffPoly::zero(n));
                    *slot += term;
                    l += 1;
                }
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        let (lo, exact) = if finite && floor.is_none_or(|f| coeffs.keys().next().is_none_or(|k| *k >= f)) {
            (coeffs.keys().next().copied().unwrap_or(top).min(top), true)
        } else {
            (lo, false)
        };
        Ok(PseudoDiffOp { n, top, lo, exact, coeffs })
    }

    pub fn pow(&self, k: u32, floor: Option<i64>) -> Result<Self, Error> {
        let mut acc = Self::dx_power(self.n, 0);
        for i in 0..k {
            // Partial products must reach far enough for the remaining factors.
            let rest = (k - i - 1) as i64;
            acc = acc.mul_floor(self, floor.map(|f| f - rest * self.top))?;
        }
        Ok(acc)
    }

    /// `[A, B] = A∘B − B∘A`.
    pub fn commutator(&self, other: &Self, floor: Option<i64>) -> Result<Self, Error> {
        Ok(self.mul_floor(other, floor)?.sub(&other.mul_floor(self, floor)?))
    }

    /// The differential part `Σ_{n≥0} a_n ∂^n`.
    pub fn plus(&self) -> Result<Self, Error> {
        if self.lo > 0 && !self.exact {
            return Err(Error::Truncation(format!("window [{}, {}] does not reach order 0", self.lo, self.top)));
        }
        let coeffs: BTreeMap<i64, DiffPoly> = self.coeffs.range(0..).map(|(k, c)| (*k, c.clone())).collect();
        Ok(PseudoDiffOp { n: self.n, top: self.top.max(0), lo: 0, exact: true, coeffs })
    }

    /// The negative part `Σ_{n<0} a_n ∂^n`, with the same window.
    pub fn minus(&self) -> Self {
        PseudoDiffOp {
            n: self.n,
            top: self.top.min(-1).max(self.lo),
            lo: self.lo,
            exact: self.exact,
            coeffs: self.coeffs.range(..0).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    /// The residue `a_{−1}`.
    pub fn res(&self) -> Result<DiffPoly, Error> {
        self.coeff(-1)
    }

    /// `(A_+, res A)`.
    pub fn plus_res(&self) -> Result<(Self, DiffPoly), Error> {
        Ok((self.plus()?, self.res()?))
    }

    /// The differential part as a [`DiffOperator`].
    pub fn to_diff_op(&self) -> Result<DiffOperator, Error> {
        let p = self.plus()?;
        Ok(DiffOperator::from_coeffs(self.n, p.coeffs.into_iter().map(|(k, c)| (k as u16, c))))
    }

    /// The unique `S = ∂ + Σ_{n≥0} ã_n ∂^{−n}` with `S^m = self`, to `depth` coefficients `ã_0..ã_{depth−1}`.
    pub fn root(&self, m: u32, depth: u32) -> Result<Self, Error> {
        let mi = m as i64;
        if m == 0 || self.top != mi {
            return Err(Error::Precondition(format!("root of order {} needs top order {}", m, m)));
        }
        if self.coeff(mi)? != DiffPoly::one(self.n) {
            return Err(Error::Precondition("operator is not monic".into()));
        }
        let need_lo = mi - depth as i64;
        if !self.exact && self.lo > need_lo {
            return Err(Error::Truncation(format!(
                "root to depth {} needs input orders down to {}, window starts at {}",
                depth, need_lo, self.lo
            )));
        }
        let n = self.n;
        let one = DiffPoly::one(n);
        // powers[k] holds the known coefficients of S^{k+1}.
        let mut s: BTreeMap<i64, DiffPoly> = BTreeMap::new();
        s.insert(1, one.clone());
        let mut powers: Vec<BTreeMap<i64, DiffPoly>> = (1..=m)
            .map(|k| {
                let mut p = BTreeMap::new();
                p.insert(k as i64, one.clone());
                p
            })
            .collect();
        let mut s_derivs: BTreeMap<i64, Vec<DiffPoly>> = BTreeMap::new();
        s_derivs.insert(1, alloc::vec![one.clone()]);
        for step in 0..depth as i64 {
            // With ã_step provisionally zero, S^{k+1} at order k − step is k+1 times ã_step plus known terms.
            for k in 1..m as usize {
                let target = k as i64 - step;
                let c = single_coeff(&powers[k - 1], &s, &mut s_derivs, target, n);
                powers[k].insert(target, c);
            }
            let known = if m == 1 { DiffPoly::zero(n) } else { powers[m as usize - 1][&(mi - 1 - step)].clone() };
            let a = &self.coeff(mi - 1 - step)? - &known;
            let a = a.scale_q(&Rational::new(1, mi));
            for (k, p) in powers.iter_mut().enumerate() {
                let ord = k as i64 - step;
                let e = p.entry(ord).or_insert_with(|| DiffPoly::zero(n));
                *e += a.scale_q(&Rational::from_integer(k as i64 + 1));
            }
            s_derivs.insert(-step, alloc::vec![a.clone()]);
            s.insert(-step, a);
        }
        s.retain(|_, c| !c.is_zero());
        Ok(PseudoDiffOp { n, top: 1, lo: 1 - depth as i64, exact: false, coeffs: s })
    }

    /// `A^{p/m} = A^{p div m} ∘ (A^{1/m})^{p mod m}`, valid on orders `≥ floor`.
    pub fn frac_power(&self, p: u32, m: u32, depth: u32, floor: Option<i64>) -> Result<Self, Error> {
        let q = p / m;
        let s = p % m;
        let base = self.pow(q, floor.map(|f| f - (s as i64)))?;
        if s == 0 {
            return Ok(base);
        }
        let root = self.root(m, depth)?;
        let inner_floor = floor.map(|f| f - base.top);
        let mut acc = root.clone();
        for k in 1..s {
            acc = acc.mul_floor(&root, inner_floor.map(|f| f - (s - 1 - k) as i64))?;
        }
        base.mul_floor(&acc, floor)
    }
}

/// Depth of `A^{1/m}` needed to know `res A^{p/m}`, over-provisioned by two.
pub fn depth_for_residue(p: u32) -> u32 {
    p + 1 + 2
}

/// Coefficient of `∂^target` in `P ∘ S` from coefficient maps, caching derivatives of `S`.
fn single_coeff(
    p: &BTreeMap<i64, DiffPoly>,
    s: &BTreeMap<i64, DiffPoly>,
    s_derivs: &mut BTreeMap<i64, Vec<DiffPoly>>,
    target: i64,
    n: usize,
) -> DiffPoly {
    let mut out = DiffPoly::zero(n);
    for (&i, a) in p {
        for &j in s.keys() {
            let l = i + j - target;
            if l < 0 || (i >= 0 && l > i) {
                continue;
            }
            let ds = s_derivs.get_mut(&j).unwrap();
            while ds.len() <= l as usize {
                let next = ds.last().unwrap().dx();
                ds.push(next);
            }
            let d = &ds[l as usize];
            if d.is_zero() {
                continue;
            }
            out += (a * d).scale_q(&Rational::binomial(i, l as u32));
        }
    }
    out
}

impl core::fmt::Display for PseudoDiffOp {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c == &DiffPoly::one(self.n) {
                write!(f, "d^{}", k)?;
            } else {
                write!(f, "({})*d^{}", c, k)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        if !self.exact {
            write!(f, " + O(d^{})", self.lo - 1)?;
        }
        Ok(())
    }
}
