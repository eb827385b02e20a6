//! Genus-zero two-point functions `Ω^{[0]}_{α,p;β,0}` from the dispersionless limit.

use alloc::format;
use alloc::vec::Vec;

use super::GDContext;
use crate::diffpoly::{DiffPoly, JetVar};
use crate::error::Error;
use num_traits::Zero;

/// `Ω_{α,p+1;1,0}` (the `ε^0` density of `h̄_{α,p}`) and its gradient `Ω_{α,p;β,0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaData {
    pub alpha: u32,
    pub p: u32,
    /// `Ω_{α,p+1;1,0}`.
    pub potential: DiffPoly,
    /// `Ω_{α,p;β,0}` at index `β−1`.
    pub first: Vec<DiffPoly>,
}

/// Dispersionless data for `(α, p)`; fields are renamed `u`.
pub fn dispersionless_omega(ctx: &GDContext, alpha: u32, p: u32) -> Result<OmegaData, Error> {
    let h = ctx.rspin_hamiltonian(alpha, p)?;
    let pot = h.density().eps_part(0).drop_constant();
    if pot.has_jets() {
        return Err(Error::Precondition(format!(
            "ε^0 density of h_({},{}) depends on jets",
            alpha, p
        )));
    }
    let n = ctx.n_fields();
    let first = (0..n as u16).map(|b| pot.partial(JetVar { field: b, order: 0 })).collect();
    Ok(OmegaData { alpha, p, potential: pot, first })
}

/// Checks `∂Ω_{α,p+1;β,0}/∂u^γ = Ω_{α,p;μ,0} η^{μν} ∂Ω_{ν,0;β,0}/∂u^γ` for `p < p_max`
/// and the vanishing of `∂Ω_{α,p;μ,0}/∂u^γ` at `u = 0` for `1 ≤ p ≤ p_max`.
pub fn check_trr0(ctx: &GDContext, p_max: u32) -> Result<bool, Error> {
    let n = ctx.n_fields();
    let eta = ctx.eta_inverse()?;
    let table: Vec<Vec<OmegaData>> = (1..=n as u32)
        .map(|a| (0..=p_max).map(|p| dispersionless_omega(ctx, a, p)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let d = |f: &DiffPoly, g: usize| f.partial(JetVar { field: g as u16, order: 0 });
    for row in &table {
        for p in 0..p_max as usize {
            for beta in 0..n {
                for gamma in 0..n {
                    let lhs = d(&row[p + 1].first[beta], gamma);
                    let mut rhs = DiffPoly::zero(n);
                    for mu in 0..n {
                        for nu in 0..n {
                            if eta[mu][nu].is_zero() {
                                continue;
                            }
                            let t = &row[p].first[mu] * &d(&table[nu][0].first[beta], gamma);
                            rhs.add_scaled(&t, &eta[mu][nu]);
                        }
                    }
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
        for data in row.iter().skip(1) {
            for f in &data.first {
                for gamma in 0..n {
                    if !d(f, gamma).constant_term().is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
