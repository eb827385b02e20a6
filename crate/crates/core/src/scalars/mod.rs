//! Exact coefficient arithmetic.

mod alg;
mod rational;
mod special;

pub use alg::{squarefree_split, AlgScalar};
pub use rational::Rational;
pub use special::{
    bernoulli_number, bernoulli_numbers, bernoulli_poly, bernoulli_poly_coeffs, s_coefficient,
    stirling_gamma, SCoeffRep,
};
