//! Hamiltonian operators, Poisson brackets, flows and Miura transformations.

mod miura;
mod operator;

pub use miura::{linearization, transform_operator, MiuraMap};
pub use operator::{bracket, flow, DiffOperator, HamiltonianOperator};

#[cfg(test)]
mod tests;
