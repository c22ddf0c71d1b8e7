//! Dense linear algebra substrate: matrices, Gauss–Jordan elimination,
//! null-space bases and minimum-norm least squares.

mod elimination;
mod matrix;
mod qr;

pub use elimination::{
    default_pivot_tol, gauss_jordan, null_space_basis, null_tolerance, rank, EliminationResult,
    NullSpaceBasis,
};
pub use matrix::{axpy, dot, norm2, norm_inf, positive_part, sub, DenseMatrix, Vector};
pub use qr::least_squares_apply;

pub(crate) use qr::cholesky_solve;
