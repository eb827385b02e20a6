//! The `r`-th Gelfand–Dickey hierarchy, its first hamiltonian structure and the
//! rescaled `r`-spin normalization in `w`-coordinates.
//!
//! Field conventions: the Lax coefficients `f_0..f_{r−2}` use indices `0..r−2`;
//! the normalized variables `w^1..w^{r−1}` use indices `0..r−2` as well.

mod omega;
pub mod reference;

use alloc::format;
use alloc::vec::Vec;
use core::cell::OnceCell;

use crate::diffpoly::{DiffPoly, JetVar, LocalFunctional, Monomial, Substituter};
use crate::error::Error;
use crate::hamops::{transform_operator, DiffOperator, HamiltonianOperator};
use crate::psido::PseudoDiffOp;
use crate::scalars::{AlgScalar, Rational};

pub use omega::{dispersionless_omega, check_trr0, OmegaData};

/// Lax operator `L = ∂^r + f_{r−2}∂^{r−2} + … + f_0` plus caches.
#[derive(Debug)]
pub struct GDContext {
    r: u32,
    depth: Option<u32>,
    lax: PseudoDiffOp,
    k_gd: OnceCell<HamiltonianOperator>,
    change: OnceCell<RSpinChange>,
    k_rspin: OnceCell<HamiltonianOperator>,
}

impl GDContext {
    /// Context with the depth of `L^{1/r}` chosen per request.
    pub fn new(r: u32) -> Result<Self, Error> {
        Self::build(r, None)
    }

    /// Context with a fixed depth; requests needing more fail with a truncation error.
    pub fn with_depth(r: u32, depth: u32) -> Result<Self, Error> {
        Self::build(r, Some(depth))
    }

    fn build(r: u32, depth: Option<u32>) -> Result<Self, Error> {
        if r < 2 {
            return Err(Error::Precondition(format!("r = {} must be at least 2", r)));
        }
        let n = r as usize - 1;
        let lower: Vec<DiffPoly> = (0..n as u16).map(|i| DiffPoly::var(n, i, 0)).collect();
        Ok(GDContext {
            r,
            depth,
            lax: PseudoDiffOp::monic(n, r as i64, &lower),
            k_gd: OnceCell::new(),
            change: OnceCell::new(),
            k_rspin: OnceCell::new(),
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n_fields(&self) -> usize {
        self.r as usize - 1
    }

    pub fn lax(&self) -> &PseudoDiffOp {
        &self.lax
    }

    fn depth_or(&self, needed: u32) -> u32 {
        self.depth.unwrap_or(needed)
    }

    /// `L^{p/r}` correct on orders `≥ floor`.
    pub fn lax_power(&self, p: u32, floor: i64) -> Result<PseudoDiffOp, Error> {
        let needed = (p as i64 - floor).max(1) as u32;
        self.lax.frac_power(p, self.r, self.depth_or(needed), Some(floor))
    }

    /// `res L^{p/r}`.
    pub fn residue(&self, p: u32) -> Result<DiffPoly, Error> {
        self.lax_power(p, -1)?.res()
    }

    /// The first hamiltonian operator `K^GD` on `f_0..f_{r−2}`.
    pub fn gd_operator(&self) -> Result<&HamiltonianOperator, Error> {
        if let Some(k) = self.k_gd.get() {
            return Ok(k);
        }
        let k = compute_gd_operator(self.r)?;
        Ok(self.k_gd.get_or_init(|| k))
    }

    /// `h̄^GD_m = −r/(m+r) ∫ res L^{(m+r)/r}`.
    pub fn gd_hamiltonian(&self, m: u32) -> Result<LocalFunctional, Error> {
        if m == 0 || m % self.r == 0 {
            return Err(Error::Precondition(format!("m = {} must be positive and not divisible by {}", m, self.r)));
        }
        let res = self.residue(m + self.r)?;
        let c = Rational::new(-(self.r as i64), (m + self.r) as i64);
        Ok(LocalFunctional::new(res.scale_q(&c)))
    }

    /// Right-hand sides `∂f_i/∂T_m` of `∂L/∂T_m = [(L^{m/r})_+, L]`.
    pub fn gd_flow(&self, m: u32) -> Result<Vec<DiffPoly>, Error> {
        let n = self.n_fields();
        if m == 0 {
            return Err(Error::Precondition("flow index must be positive".into()));
        }
        let p = self.lax_power(m, 0)?.plus()?;
        let c = p.commutator(&self.lax, None)?;
        for (k, coeff) in c.coeffs() {
            if k >= self.r as i64 - 1 && !coeff.is_zero() {
                return Err(Error::Precondition(format!("commutator has a nonzero ∂^{} coefficient", k)));
            }
        }
        (0..n as i64).map(|i| c.coeff(i).map(|x| x.with_n(n))).collect()
    }

    /// The change `f → w` and its inverse.
    pub fn rspin_change(&self) -> Result<&RSpinChange, Error> {
        if let Some(c) = self.change.get() {
            return Ok(c);
        }
        let c = RSpinChange::compute(self)?;
        Ok(self.change.get_or_init(|| c))
    }

    /// `K^{r-spin} = (−r)^{r/2} K^GD_w` with `ε` restored.
    pub fn rspin_operator(&self) -> Result<&HamiltonianOperator, Error> {
        if let Some(k) = self.k_rspin.get() {
            return Ok(k);
        }
        let change = self.rspin_change()?;
        let k = transform_operator(self.gd_operator()?, &change.forward, &change.inverse, None);
        let k = k.scale(&AlgScalar::neg_half_power(self.r as u64, self.r as i32)).op_dress()?;
        Ok(self.k_rspin.get_or_init(|| k))
    }

    /// `h̄^{r-spin}_{α,d} = h̄^GD_k[w] / ((−r)^{(r+k−1)/2−d} k!_r)` with `k = α + rd`, `ε` restored.
    pub fn rspin_hamiltonian(&self, alpha: u32, d: u32) -> Result<LocalFunctional, Error> {
        let r = self.r;
        if alpha == 0 || alpha >= r {
            return Err(Error::Precondition(format!("α = {} outside 1..{}", alpha, r - 1)));
        }
        let k = alpha + r * d;
        let h = self.gd_hamiltonian(k)?;
        let change = self.rspin_change()?;
        let n = self.n_fields();
        let in_w = Substituter::new(&change.inverse, n, None).apply(h.density());
        let kr: i64 = (0..=d as i64).map(|i| alpha as i64 + r as i64 * i).product();
        let denom = AlgScalar::neg_half_power(r as u64, (r + k - 1) as i32 - 2 * d as i32)
            * AlgScalar::from_int(kr);
        let scale = denom.inverse().expect("nonzero normalization");
        Ok(LocalFunctional::new(in_w.scale(&scale).eps_dress()))
    }

    /// `(K^{r-spin}, h̄^{r-spin}_{α,d})`.
    pub fn rspin_system(&self, alpha: u32, d: u32) -> Result<(HamiltonianOperator, LocalFunctional), Error> {
        let h = self.rspin_hamiltonian(alpha, d)?;
        Ok((self.rspin_operator()?.clone(), h))
    }

    /// `η^{αβ}` read off the `ε^0 ∂_x` part of `K^{r-spin}`.
    pub fn eta_inverse(&self) -> Result<Vec<Vec<AlgScalar>>, Error> {
        let k = self.rspin_operator()?;
        let n = self.n_fields();
        Ok((0..n).map(|a| (0..n).map(|b| k.constant_coeff(a, b, 1, 0)).collect()).collect())
    }
}

/// Reads `K^GD` off `[X, L]_+` with `X = Σ_β ∂^{−β−1} ∘ X_β` for formal fields `X_β`.
fn compute_gd_operator(r: u32) -> Result<HamiltonianOperator, Error> {
    let n = r as usize - 1;
    let total = 2 * n;
    let lower: Vec<DiffPoly> = (0..n as u16).map(|i| DiffPoly::var(total, i, 0)).collect();
    let lax = PseudoDiffOp::monic(total, r as i64, &lower);
    let floor = -(r as i64);
    let mut x = PseudoDiffOp::from_coeffs(total, -1, floor, false, [])?;
    for beta in 0..n {
        let xb = PseudoDiffOp::monomial(total, 0, DiffPoly::var(total, (n + beta) as u16, 0));
        let term = PseudoDiffOp::dx_power(total, -(beta as i64) - 1).mul_floor(&xb, Some(floor))?;
        x = x.add(&term);
    }
    let c = x.commutator(&lax, Some(0))?.plus()?;
    let mut entries: Vec<DiffOperator> = (0..n * n).map(|_| DiffOperator::zero(n)).collect();
    for (alpha, coeff) in c.coeffs() {
        if coeff.is_zero() {
            continue;
        }
        if alpha as usize >= n {
            return Err(Error::Precondition(format!("[X, L]_+ has a ∂^{} term", alpha)));
        }
        for (m, v) in coeff.terms() {
            let xs: Vec<(JetVar, u16)> = m.vars().iter().filter(|(j, _)| j.field as usize >= n).copied().collect();
            if xs.len() != 1 || xs[0].1 != 1 {
                return Err(Error::Precondition("[X, L]_+ is not linear in X".into()));
            }
            let jv = xs[0].0;
            let beta = jv.field as usize - n;
            let rest = Monomial::from_vars(m.eps, m.vars().iter().filter(|(j, _)| (j.field as usize) < n).copied());
            let entry = &mut entries[alpha as usize * n + beta];
            entry.add_coeff(jv.order, DiffPoly::term(n, rest, v.clone()));
        }
    }
    HamiltonianOperator::from_entries(n, entries)
}

/// The normalized coordinates `w^α = res L^{(r−α)/r} / ((r−α)(−r)^{(r−α−1)/2})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RSpinChange {
    /// `w^{α}` at index `α−1`, as polynomials in `f`.
    pub forward: Vec<DiffPoly>,
    /// `f_i` at index `i`, as polynomials in `w`.
    pub inverse: Vec<DiffPoly>,
    /// `forward` with jets weighted by `ε`.
    pub forward_dressed: Vec<DiffPoly>,
    /// `inverse` with jets weighted by `ε`.
    pub inverse_dressed: Vec<DiffPoly>,
}

impl RSpinChange {
    fn compute(ctx: &GDContext) -> Result<Self, Error> {
        let r = ctx.r;
        let n = ctx.n_fields();
        let mut forward = Vec::with_capacity(n);
        for alpha in 1..r {
            let res = ctx.residue(r - alpha)?;
            let c = AlgScalar::neg_half_power(r as u64, (r - alpha - 1) as i32) * AlgScalar::from_int((r - alpha) as i64);
            forward.push(res.scale(&c.inverse().expect("nonzero")).with_n(n));
        }
        // w^α = c_α f_{α−1} + P_α(f_α, …, f_{r−2}); solve from α = r−1 downwards.
        let mut inverse: Vec<DiffPoly> = (0..n).map(|_| DiffPoly::zero(n)).collect();
        for a in (0..n).rev() {
            let lead = JetVar { field: a as u16, order: 0 };
            let w = &forward[a];
            let mut c = AlgScalar::from_int(0);
            let mut rest = DiffPoly::zero(n);
            for (m, v) in w.terms() {
                if m.vars().iter().any(|(j, _)| (j.field as usize) < a) {
                    return Err(Error::Precondition(format!("w^{} depends on lower Lax coefficients", a + 1)));
                }
                if m.vars() == [(lead, 1)] {
                    c = v.clone();
                } else if m.power_of(lead) > 0 || m.vars().iter().any(|(j, _)| j.field as usize == a) {
                    return Err(Error::Precondition(format!("w^{} is not linear in f_{}", a + 1, a)));
                } else {
                    rest.add_term(m.clone(), v.clone());
                }
            }
            let inv_c = c.inverse().ok_or_else(|| Error::Precondition(format!("w^{} misses f_{}", a + 1, a)))?;
            let mut subs: Vec<DiffPoly> = inverse.clone();
            for (i, s) in subs.iter_mut().enumerate().take(a + 1) {
                *s = DiffPoly::var(n, i as u16, 0);
            }
            let rest_w = Substituter::new(&subs, n, None).apply(&rest);
            inverse[a] = (&DiffPoly::var(n, a as u16, 0) - &rest_w).scale(&inv_c);
        }
        let forward_dressed = forward.iter().map(|p| p.eps_dress()).collect();
        let inverse_dressed = inverse.iter().map(|p| p.eps_dress()).collect();
        Ok(RSpinChange { forward, inverse, forward_dressed, inverse_dressed })
    }
}
