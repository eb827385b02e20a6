//! Local functionals `∫ f dx`, modulo constants and total derivatives.

use alloc::format;
use alloc::vec::Vec;

use super::{canonical_density, DiffPoly};
use crate::error::Error;

/// A local functional, stored by a representative density.
#[derive(Clone, Debug)]
pub struct LocalFunctional {
    density: DiffPoly,
}

impl LocalFunctional {
    pub fn new(density: DiffPoly) -> Self {
        LocalFunctional { density }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(DiffPoly::zero(n))
    }

    pub fn density(&self) -> &DiffPoly {
        &self.density
    }

    pub fn into_density(self) -> DiffPoly {
        self.density
    }

    pub fn n_fields(&self) -> usize {
        self.density.n_fields()
    }

    /// `δ/δu^α` of the functional.
    pub fn var_der(&self, field: u16) -> DiffPoly {
        self.density.var_der(field)
    }

    /// All `n` variational derivatives.
    pub fn gradient(&self) -> Vec<DiffPoly> {
        (0..self.n_fields() as u16).map(|a| self.var_der(a)).collect()
    }

    /// Whether the functional is zero (its density is a total derivative plus a constant).
    pub fn is_zero(&self) -> bool {
        (0..self.n_fields() as u16).all(|a| self.var_der(a).is_zero())
    }

    /// Equality of classes; the two functionals must live in the same ring.
    pub fn local_eq(&self, other: &LocalFunctional) -> Result<bool, Error> {
        if self.n_fields() != other.n_fields() {
            return Err(Error::ContextMismatch(format!(
                "functionals in {} and {} fields",
                self.n_fields(),
                other.n_fields()
            )));
        }
        Ok((self - other).is_zero())
    }

    /// `Σ ε^i h_i` from an ε-free density, each graded piece getting ε to its jet weight.
    pub fn eps_dress(&self) -> LocalFunctional {
        Self::new(self.density.eps_dress())
    }

    pub fn truncate_eps(&self, e: u16) -> LocalFunctional {
        Self::new(self.density.truncate_eps(e))
    }

    /// Canonical representative: no constant, integrated by parts to a fixed normal form.
    pub fn canonical(&self) -> DiffPoly {
        canonical_density(&self.density)
    }

    pub fn scale(&self, s: &crate::scalars::AlgScalar) -> LocalFunctional {
        Self::new(self.density.scale(s))
    }
}

impl core::ops::Sub for &LocalFunctional {
    type Output = LocalFunctional;
    fn sub(self, rhs: &LocalFunctional) -> LocalFunctional {
        LocalFunctional::new(&self.density - &rhs.density)
    }
}

impl core::ops::Add for &LocalFunctional {
    type Output = LocalFunctional;
    fn add(self, rhs: &LocalFunctional) -> LocalFunctional {
        LocalFunctional::new(&self.density + &rhs.density)
    }
}

impl PartialEq for LocalFunctional {
    /// Class equality; functionals over different rings compare unequal.
    fn eq(&self, other: &Self) -> bool {
        self.local_eq(other).unwrap_or(false)
    }
}

impl From<DiffPoly> for LocalFunctional {
    fn from(p: DiffPoly) -> Self {
        Self::new(p)
    }
}
