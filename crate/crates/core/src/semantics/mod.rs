//! Exact matrix semantics.

mod eval;
mod matrix;

pub use eval::{eval, v_matrix};
pub use matrix::{adjoint, compose, direct_sum, equal_matrices, kronecker, ExactMatrix, MatrixEq, PhaseMode};
