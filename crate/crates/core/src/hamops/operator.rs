use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::diffpoly::{DiffPoly, LocalFunctional, Monomial};
use crate::error::Error;
use crate::scalars::{AlgScalar, Rational};

/// A scalar differential operator `Σ_j a_j ∂_x^j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOperator {
    n: usize,
    coeffs: BTreeMap<u16, DiffPoly>,
}

impl DiffOperator {
    pub fn zero(n: usize) -> Self {
        DiffOperator { n, coeffs: BTreeMap::new() }
    }

    /// `c · ∂_x^k`.
    pub fn monomial(n: usize, k: u16, c: DiffPoly) -> Self {
        let mut op = Self::zero(n);
        op.add_coeff(k, c);
        op
    }

    /// `q · ∂_x^k` for a scalar `q`.
    pub fn scalar_dx(n: usize, k: u16, q: AlgScalar) -> Self {
        Self::monomial(n, k, DiffPoly::constant(n, q))
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar_dx(n, 0, AlgScalar::one())
    }

    pub fn from_coeffs(n: usize, coeffs: impl IntoIterator<Item = (u16, DiffPoly)>) -> Self {
        let mut op = Self::zero(n);
        for (k, c) in coeffs {
            op.add_coeff(k, c);
        }
        op
    }

    pub fn n_fields(&self) -> usize {
        self.n
    }

    pub fn add_coeff(&mut self, k: u16, c: DiffPoly) {
        if c.is_zero() {
            return;
        }
        self.n = self.n.max(c.n_fields());
        let e = self.coeffs.entry(k).or_insert_with(|| DiffPoly::zero(self.n));
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u16, &DiffPoly)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: u16) -> DiffPoly {
        self.coeffs.get(&k).cloned().unwrap_or_else(|| DiffPoly::zero(self.n))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Option<u16> {
        self.coeffs.keys().next_back().copied()
    }

    /// Applies the operator to a differential polynomial.
    pub fn apply(&self, f: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero(self.n.max(f.n_fields()));
        let mut jet = f.clone();
        let mut k = 0;
        for (&j, a) in &self.coeffs {
            while k < j {
                jet = jet.dx();
                k += 1;
            }
            out += a * &jet;
        }
        out
    }

    /// Composition `self ∘ other`, normal-ordered with `∂_x` on the right.
    pub fn compose(&self, other: &DiffOperator) -> DiffOperator {
        self.compose_trunc(other, None)
    }

    pub fn compose_trunc(&self, other: &DiffOperator, eps_max: Option<u16>) -> DiffOperator {
        let mut out = Self::zero(self.n.max(other.n));
        for (&i, a) in &self.coeffs {
            for (&j, b) in &other.coeffs {
                // a ∂^i ∘ b ∂^j = a Σ_l C(i,l) b^{(l)} ∂^{i−l+j}
                let mut bl = b.clone();
                for l in 0..=i {
                    if l > 0 {
                        bl = bl.dx();
                    }
                    if bl.is_zero() {
                        break;
                    }
                    let c = Rational::binomial(i as i64, l as u32);
                    out.add_coeff(i - l + j, a.mul_trunc(&bl, eps_max).scale_q(&c));
                }
            }
        }
        out
    }

    /// Formal adjoint `Σ_j (−∂_x)^j ∘ a_j`.
    pub fn adjoint(&self) -> DiffOperator {
        let mut out = Self::zero(self.n);
        for (&j, a) in &self.coeffs {
            let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
            let mut al = a.clone();
            for l in 0..=j {
                if l > 0 {
                    al = al.dx();
                }
                let c = &sign * &Rational::binomial(j as i64, l as u32);
                out.add_coeff(j - l, al.scale_q(&c));
            }
        }
        out
    }

    pub fn scale(&self, s: &AlgScalar) -> DiffOperator {
        Self::from_coeffs(self.n, self.coeffs.iter().map(|(k, c)| (*k, c.scale(s))))
    }

    /// Left multiplication by a differential polynomial.
    pub fn left_mul(&self, p: &DiffPoly) -> DiffOperator {
        Self::from_coeffs(self.n.max(p.n_fields()), self.coeffs.iter().map(|(k, c)| (*k, p * c)))
    }

    pub fn map_coeffs(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> DiffOperator {
        Self::from_coeffs(self.n, self.coeffs.iter().map(|(k, c)| (*k, f(c))))
    }

    pub fn truncate_eps(&self, e: u16) -> DiffOperator {
        self.map_coeffs(|c| c.truncate_eps(e))
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self.coeffs = self.coeffs.into_iter().map(|(k, c)| (k, c.with_n(n))).collect();
        self
    }
}

impl core::ops::Add for &DiffOperator {
    type Output = DiffOperator;
    fn add(self, rhs: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_coeff(*k, c.clone());
        }
        out
    }
}

impl core::ops::Sub for &DiffOperator {
    type Output = DiffOperator;
    fn sub(self, rhs: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_coeff(*k, -c);
        }
        out
    }
}

/// An `N × N` matrix of differential operators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HamiltonianOperator {
    n: usize,
    entries: Vec<DiffOperator>,
}

impl HamiltonianOperator {
    pub fn zero(n: usize) -> Self {
        HamiltonianOperator { n, entries: (0..n * n).map(|_| DiffOperator::zero(n)).collect() }
    }

    /// `η ∂_x` for a constant matrix `η` (row-major).
    pub fn eta_dx(eta: &[Vec<AlgScalar>]) -> Self {
        let n = eta.len();
        let mut k = Self::zero(n);
        for (a, row) in eta.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    k.set(a, b, DiffOperator::scalar_dx(n, 1, c.clone()));
                }
            }
        }
        k
    }

    /// The scalar operator `∂_x` in one field.
    pub fn dx() -> Self {
        Self::eta_dx(&[alloc::vec![AlgScalar::one()]])
    }

    pub fn from_entries(n: usize, entries: Vec<DiffOperator>) -> Result<Self, Error> {
        if entries.len() != n * n {
            return Err(Error::ContextMismatch(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        Ok(HamiltonianOperator { n, entries: entries.into_iter().map(|e| e.with_n(n)).collect() })
    }

    pub fn n_fields(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> &DiffOperator {
        &self.entries[a * self.n + b]
    }

    pub fn set(&mut self, a: usize, b: usize, op: DiffOperator) {
        self.entries[a * self.n + b] = op.with_n(self.n);
    }

    pub fn entries(&self) -> &[DiffOperator] {
        &self.entries
    }

    pub fn scale(&self, s: &AlgScalar) -> Self {
        HamiltonianOperator { n: self.n, entries: self.entries.iter().map(|e| e.scale(s)).collect() }
    }

    pub fn map_entries(&self, f: impl Fn(&DiffOperator) -> DiffOperator) -> Self {
        HamiltonianOperator { n: self.n, entries: self.entries.iter().map(|e| f(e).with_n(self.n)).collect() }
    }

    pub fn truncate_eps(&self, e: u16) -> Self {
        self.map_entries(|x| x.truncate_eps(e))
    }

    /// Formal adjoint: `(K†)^{αβ} = (K^{βα})†`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.n);
        for a in 0..self.n {
            for b in 0..self.n {
                out.set(a, b, self.get(b, a).adjoint());
            }
        }
        out
    }

    /// Skew-adjointness `K† = −K`, the antisymmetry of the induced bracket.
    pub fn is_skew_adjoint(&self) -> bool {
        let adj = self.adjoint();
        self.entries.iter().zip(adj.entries.iter()).all(|(k, a)| (k + a).is_zero())
    }

    /// Weights each `ε`-free coefficient term of `∂_x^i` of jet weight `j` by `ε^{i+j−1}`.
    pub fn op_dress(&self) -> Result<Self, Error> {
        let mut out = Self::zero(self.n);
        for a in 0..self.n {
            for b in 0..self.n {
                let mut op = DiffOperator::zero(self.n);
                for (i, c) in self.get(a, b).coeffs() {
                    let mut dressed = DiffPoly::zero(self.n);
                    for (m, v) in c.terms() {
                        if m.eps != 0 {
                            return Err(Error::Precondition("op_dress expects an ε-free operator".into()));
                        }
                        let w = i as i64 + m.jet_weight() as i64 - 1;
                        if w < 0 {
                            return Err(Error::Precondition(format!(
                                "entry ({}, {}) has a nonzero ∂^0 coefficient of weight 0",
                                a, b
                            )));
                        }
                        dressed.add_term(m.with_eps(w as u16), v.clone());
                    }
                    op.add_coeff(i, dressed);
                }
                out.set(a, b, op);
            }
        }
        Ok(out)
    }

    /// Substitutes into every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> Self {
        self.map_entries(|e| e.map_coeffs(&f))
    }

    /// Whether all coefficients are constants (no field dependence).
    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(|e| e.coeffs().all(|(_, c)| c.terms().all(|(m, _)| m.is_constant())))
    }

    /// For constant operators: the scalar coefficient of `ε^eps ∂^k` in entry `(a, b)`.
    pub fn constant_coeff(&self, a: usize, b: usize, k: u16, eps: u16) -> AlgScalar {
        self.get(a, b).coeff(k).coeff(&Monomial::eps_only(eps))
    }
}

impl core::ops::Sub for &HamiltonianOperator {
    type Output = HamiltonianOperator;
    fn sub(self, rhs: &HamiltonianOperator) -> HamiltonianOperator {
        HamiltonianOperator {
            n: self.n,
            entries: self.entries.iter().zip(rhs.entries.iter()).map(|(a, b)| a - b).collect(),
        }
    }
}

/// `{h1, h2}_K = ∫ δh1/δu^μ K^{μν} δh2/δu^ν dx`.
pub fn bracket(h1: &LocalFunctional, h2: &LocalFunctional, k: &HamiltonianOperator) -> Result<LocalFunctional, Error> {
    let n = k.n_fields();
    if h1.n_fields() != n || h2.n_fields() != n {
        return Err(Error::ContextMismatch(format!(
            "bracket of functionals in {} and {} fields with a {}×{} operator",
            h1.n_fields(),
            h2.n_fields(),
            n,
            n
        )));
    }
    let g1 = h1.gradient();
    let g2 = h2.gradient();
    let mut density = DiffPoly::zero(n);
    for mu in 0..n {
        if g1[mu].is_zero() {
            continue;
        }
        for nu in 0..n {
            let applied = k.get(mu, nu).apply(&g2[nu]);
            density += &g1[mu] * &applied;
        }
    }
    Ok(LocalFunctional::new(density))
}

/// Components `K^{αμ} δh/δu^μ` of the hamiltonian flow.
pub fn flow(h: &LocalFunctional, k: &HamiltonianOperator) -> Result<Vec<DiffPoly>, Error> {
    let n = k.n_fields();
    if h.n_fields() != n {
        return Err(Error::ContextMismatch(format!("functional in {} fields, operator in {}", h.n_fields(), n)));
    }
    let g = h.gradient();
    Ok((0..n)
        .map(|a| {
            let mut out = DiffPoly::zero(n);
            for (mu, gm) in g.iter().enumerate() {
                out += k.get(a, mu).apply(gm);
            }
            out
        })
        .collect())
}
