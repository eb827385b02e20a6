//! Exact symbolic computation for hamiltonian hierarchies of evolutionary PDEs.
//!
//! The crate is `no_std` (with `alloc`). It covers the differential polynomial
//! ring and local functionals, hamiltonian operators and Miura maps,
//! pseudo-differential operators, the Gelfand–Dickey hierarchy with its r-spin
//! normalization, the double ramification pipeline, string/dilaton
//! reconstruction of special solutions, and a truncated Weyl algebra.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod diffpoly;
pub mod drspin;
pub mod error;
pub mod gdhier;
pub mod hamops;
pub mod psido;
pub mod quantize;
pub mod reconstruct;
pub mod scalars;

pub use diffpoly::{DiffPoly, JetVar, LocalFunctional, Monomial};
pub use error::{Error, Result};
pub use scalars::{AlgScalar, Rational};
