//! Residual minimization engines.
//!
//! - [`solve_primal_residual`]: `min ½‖b − Ax‖²` over `x ≥ 0`.
//! - [`solve_dual_residual`]: `min ½{‖(Aᵀu)₊‖² + (ρ − bᵀu)²}` over all `u`.
//! - [`solve_reduced_residual`]: `min ½‖(Kᵀy − x̄)₊‖²`, zero exactly when
//!   `Kᵀy ≤ x̄` is solvable.

mod config;
mod newton;
mod objectives;
mod primal;

pub use config::{SolverConfig, SolverKind, SolverReport};
pub use objectives::{
    dual_gradient, dual_objective, primal_gradient, primal_objective, reduced_gradient,
    reduced_objective,
};
pub use primal::{projected_gradient_norm, solve_primal_residual};

use crate::error::{Error, Result};
use crate::linalg::{norm2, DenseMatrix, Vector};
use objectives::PiecewiseQuadratic;

/// Minimizes the alternative-system residual from `u = 0`.
pub fn solve_dual_residual(
    a: &DenseMatrix,
    b: &[f64],
    rho: f64,
    cfg: &SolverConfig,
) -> Result<(Vector, SolverReport)> {
    solve_dual_residual_from(a, b, rho, cfg, &vec![0.0; a.rows()])
}

pub fn solve_dual_residual_from(
    a: &DenseMatrix,
    b: &[f64],
    rho: f64,
    cfg: &SolverConfig,
    start: &[f64],
) -> Result<(Vector, SolverReport)> {
    cfg.validate()?;
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::InvalidRho(rho));
    }
    for (what, len) in [("b", b.len()), ("starting point", start.len())] {
        if len != a.rows() {
            return Err(Error::DimensionMismatch {
                what,
                expected: a.rows(),
                found: len,
            });
        }
    }
    if norm2(b) == 0.0 {
        return Err(Error::ZeroRhs);
    }
    let q = PiecewiseQuadratic::dual(a, b, rho);
    newton::minimize(&q, start.to_vec(), SolverKind::Dual, cfg)
}

/// Minimizes the residual of `Kᵀy ≤ x̄` from `y = 0`. A `0 x n` basis gives an
/// empty `y` with objective `½‖(−x̄)₊‖²`.
pub fn solve_reduced_residual(
    k: &DenseMatrix,
    x_bar: &[f64],
    cfg: &SolverConfig,
) -> Result<(Vector, SolverReport)> {
    solve_reduced_residual_from(k, x_bar, cfg, &vec![0.0; k.rows()])
}

pub fn solve_reduced_residual_from(
    k: &DenseMatrix,
    x_bar: &[f64],
    cfg: &SolverConfig,
    start: &[f64],
) -> Result<(Vector, SolverReport)> {
    cfg.validate()?;
    if x_bar.len() != k.cols() {
        return Err(Error::DimensionMismatch {
            what: "x_bar",
            expected: k.cols(),
            found: x_bar.len(),
        });
    }
    if start.len() != k.rows() {
        return Err(Error::DimensionMismatch {
            what: "starting point",
            expected: k.rows(),
            found: start.len(),
        });
    }
    let q = PiecewiseQuadratic::reduced(k, x_bar);
    newton::minimize(&q, start.to_vec(), SolverKind::Reduced, cfg)
}
