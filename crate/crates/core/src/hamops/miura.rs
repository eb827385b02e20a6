use alloc::format;
use core::cell::RefCell;
use alloc::vec::Vec;

use super::{DiffOperator, HamiltonianOperator};
use crate::diffpoly::{DiffPoly, JetVar, LocalFunctional, Substituter};
use crate::error::Error;

/// A Miura transformation `w^α = u^α + Σ_{k≥1} ε^k f^α_k(u)` with `deg f^α_k = k`.
///
/// The same zero-based field indices name both coordinate systems.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MiuraMap {
    images: Vec<DiffPoly>,
}

impl MiuraMap {
    /// Validates the identity leading term and the degree-zero grading.
    pub fn new(images: Vec<DiffPoly>) -> Result<Self, Error> {
        let n = images.len();
        for (a, w) in images.iter().enumerate() {
            let corr = w - &DiffPoly::var(n, a as u16, 0);
            for (m, _) in corr.terms() {
                if m.eps == 0 {
                    return Err(Error::Precondition(format!("image of field {} has an ε-free correction", a + 1)));
                }
                if m.jet_weight() != m.eps as u32 {
                    return Err(Error::Precondition(format!(
                        "image of field {} is not homogeneous of degree 0",
                        a + 1
                    )));
                }
            }
        }
        Ok(MiuraMap { images: images.into_iter().map(|p| p.with_n(n)).collect() })
    }

    pub fn identity(n: usize) -> Self {
        MiuraMap { images: (0..n as u16).map(|a| DiffPoly::var(n, a, 0)).collect() }
    }

    pub fn n_fields(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[DiffPoly] {
        &self.images
    }

    /// Composition `self ∘ other`: first `other`, then `self`, truncated at `ε^e`.
    pub fn compose(&self, other: &MiuraMap, e: u16) -> MiuraMap {
        let n = self.n_fields();
        let mut sub = Substituter::new(&other.images, n, Some(e));
        MiuraMap { images: self.images.iter().map(|w| sub.apply(w)).collect() }
    }

    /// The inverse map `u = u(w)` modulo `ε^{e+1}`, by successive substitution.
    pub fn invert(&self, e: u16) -> MiuraMap {
        let n = self.n_fields();
        let ids: Vec<DiffPoly> = (0..n as u16).map(|a| DiffPoly::var(n, a, 0)).collect();
        let corrections: Vec<DiffPoly> = self.images.iter().zip(ids.iter()).map(|(w, u)| w - u).collect();
        let mut g = ids.clone();
        // Each round fixes one more order in ε.
        for _ in 0..e {
            let mut sub = Substituter::new(&g, n, Some(e));
            g = ids.iter().zip(corrections.iter()).map(|(u, f)| u - &sub.apply(f)).collect();
        }
        MiuraMap { images: g }
    }

    /// Rewrites a polynomial in `u` as one in `w`, truncated at `ε^e`.
    pub fn push_poly(&self, f: &DiffPoly, e: u16) -> DiffPoly {
        let inv = self.invert(e);
        f.substitute(&inv.images, self.n_fields(), Some(e))
    }

    pub fn push_functional(&self, h: &LocalFunctional, e: u16) -> LocalFunctional {
        LocalFunctional::new(self.push_poly(h.density(), e))
    }

    /// The transported operator `L ∘ K ∘ L†` with `L^{αμ} = Σ_p ∂w^α/∂u^μ_p ∂^p`, expressed in `w`.
    pub fn push_operator(&self, k: &HamiltonianOperator, e: u16) -> HamiltonianOperator {
        let inv = self.invert(e);
        transform_operator(k, &self.images, &inv.images, Some(e))
    }

    /// Matrix (row-major) of Fréchet derivative operators `Σ_p ∂w^α/∂u^μ_p ∂^p`.
    pub fn linearization(&self) -> Vec<DiffOperator> {
        linearization(&self.images)
    }
}

/// Row-major matrix of the operators `Σ_p ∂w^α/∂u^μ_p ∂^p`.
pub fn linearization(images: &[DiffPoly]) -> Vec<DiffOperator> {
    let n = images.len();
    {
        let mut out = Vec::with_capacity(n * n);
        for w in images {
            for mu in 0..n as u16 {
                let top = w.max_order_of(mu);
                let mut op = DiffOperator::zero(n);
                if let Some(top) = top {
                    for p in 0..=top {
                        op.add_coeff(p, w.partial(JetVar::new(mu, p)));
                    }
                }
                out.push(op);
            }
        }
        out
    }
}

/// Transports `K` along a change of variables `w = forward(u)`, `u = inverse(w)`.
///
/// Computes `Σ (∂w^α/∂u^μ_p) ∂^p ∘ K^{μν} ∘ (−∂)^q ∘ (∂w^β/∂u^ν_q)` and rewrites the
/// coefficients in `w`; ε powers above `eps_max` are dropped.
pub fn transform_operator(
    k: &HamiltonianOperator,
    forward: &[DiffPoly],
    inverse: &[DiffPoly],
    eps_max: Option<u16>,
) -> HamiltonianOperator {
    let n = forward.len();
    let lin = linearization(forward);
    let adj: Vec<DiffOperator> = lin.iter().map(|l| l.adjoint()).collect();
    let mut lk = HamiltonianOperator::zero(n);
    for a in 0..n {
        for nu in 0..n {
            let mut acc = DiffOperator::zero(n);
            for mu in 0..n {
                acc = &acc + &lin[a * n + mu].compose_trunc(k.get(mu, nu), eps_max);
            }
            lk.set(a, nu, acc);
        }
    }
    let mut out = HamiltonianOperator::zero(n);
    for a in 0..n {
        for b in 0..n {
            let mut acc = DiffOperator::zero(n);
            for nu in 0..n {
                acc = &acc + &lk.get(a, nu).compose_trunc(&adj[b * n + nu], eps_max);
            }
            out.set(a, b, acc);
        }
    }
    let sub = RefCell::new(Substituter::new(inverse, n, eps_max));
    out.map_coeffs(|c| sub.borrow_mut().apply(c))
}
