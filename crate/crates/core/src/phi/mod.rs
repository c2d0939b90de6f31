//! The phi functions `phi_0 = exp`, `phi_k(z) = int_0^1 e^{(1-t)z} t^{k-1}/(k-1)! dt`
//! for scalar and matrix arguments.

mod cache;
mod matrix;
pub mod quadrature;
mod scalar;

pub use cache::{PhiCache, PhiRequest};
pub use matrix::{matrix_exp, phi_matrices, phi_matrix, phi_matrix_by_embedding};
pub use quadrature::phi_quadrature;
pub use scalar::{inv_factorial, phi, phi_all, PhiArg, TAYLOR_THRESHOLD};
