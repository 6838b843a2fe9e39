//! Exact integer linear algebra: Smith normal form, integer and rational
//! solvability, kernels, cokernels and finitely generated abelian groups.

mod group;
mod matrix;
mod snf;

pub use group::{cokernel, kernel_basis, solve_integer, subquotient, FgAbelianGroup, GroupSummary};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SnfResult};
