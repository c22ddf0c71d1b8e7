use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Stationarity threshold on the (projected) gradient norm.
    pub grad_tol: f64,
    pub max_iter: usize,
    /// Relative threshold deciding that a residual objective is zero.
    pub feas_tol: f64,
    /// Backtracking contraction factor.
    pub armijo_beta: f64,
    /// Sufficient-decrease constant.
    pub armijo_sigma: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grad_tol: 1e-10,
            max_iter: 10_000,
            feas_tol: 1e-9,
            armijo_beta: 0.5,
            armijo_sigma: 1e-4,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let in_unit = |v: f64| v > 0.0 && v < 1.0;
        if !(self.grad_tol > 0.0) || !(self.feas_tol > 0.0) || self.max_iter == 0 {
            return Err(Error::InvalidArgument(
                "solver config needs grad_tol > 0, feas_tol > 0, max_iter >= 1".into(),
            ));
        }
        if !in_unit(self.armijo_beta) || !in_unit(self.armijo_sigma) {
            return Err(Error::InvalidArgument(
                "armijo_beta and armijo_sigma must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// Which residual problem a report belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    /// `min ½‖b − Ax‖²` over `x ≥ 0`.
    Primal,
    /// `min ½{‖(Aᵀu)₊‖² + (ρ − bᵀu)²}`.
    Dual,
    /// `min ½‖(Kᵀy − x̄)₊‖²`.
    Reduced,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Primal => "primal",
            SolverKind::Dual => "dual",
            SolverKind::Reduced => "reduced",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub kind: SolverKind,
    pub iterations: usize,
    pub objective: f64,
    pub grad_norm: f64,
    pub converged: bool,
    /// Primal: indices held at the bound `x_j = 0`.
    /// Dual and reduced: indices whose affine piece is strictly positive.
    pub active_set: Vec<usize>,
}
