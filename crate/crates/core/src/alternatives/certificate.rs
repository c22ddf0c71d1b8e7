use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::Vector;
use crate::solvers::SolverReport;

/// Minimizer of the alternative-system residual and the derived dual pair
/// `w₁ = (Aᵀu)₊`, `w₂ = ρ − bᵀu`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualSolution {
    pub u_star: Vector,
    pub w1: Vector,
    pub w2: f64,
}

/// Minimizer of `½‖b − Ax‖²` over `x ≥ 0` and its residual `z = b − Ax`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimalSolution {
    pub x_star: Vector,
    pub z: Vector,
}

/// Outcome of a feasibility decision. Exactly one of `Ax = b, x ≥ 0` and
/// `Aᵀu ≤ 0, bᵀu = ρ` is solvable, so there is no third state.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// `x_normal` solves `Ax = b, x ≥ 0`. It has minimal norm when it was
    /// recovered as `w₁/w₂` from a dual solve (`dual` is present).
    Feasible {
        x_normal: Vector,
        dual: Option<DualSolution>,
    },
    /// `u_cert` solves `Aᵀu ≤ 0, bᵀu = ρ`. It has minimal norm when it was
    /// recovered as `ρz/‖z‖²` from a primal solve (`primal` is present).
    Infeasible {
        u_cert: Vector,
        primal: Option<PrimalSolution>,
    },
}

impl Certificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Certificate::Feasible { .. })
    }

    pub fn normality_guaranteed(&self) -> bool {
        match self {
            Certificate::Feasible { dual, .. } => dual.is_some(),
            Certificate::Infeasible { primal, .. } => primal.is_some(),
        }
    }

    /// The solution vector of whichever system is solvable.
    pub fn witness(&self) -> &Vector {
        match self {
            Certificate::Feasible { x_normal, .. } => x_normal,
            Certificate::Infeasible { u_cert, .. } => u_cert,
        }
    }
}

/// Residuals of `‖z*‖² = bᵀz*` and `‖w₁*‖² + w₂*² = ρw₂*`. Each is present
/// when the corresponding solve ran.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DualIdentityReport {
    pub z_identity_residual: Option<f64>,
    pub w_identity_residual: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Primal,
    Dual,
    Both,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Primal => "primal",
            Route::Dual => "dual",
            Route::Both => "both",
        })
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "primal" => Ok(Route::Primal),
            "dual" => Ok(Route::Dual),
            "both" => Ok(Route::Both),
            other => Err(Error::InvalidArgument(format!("unknown route {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub certificate: Certificate,
    pub identities: DualIdentityReport,
    /// One report per solve, primal first when both ran.
    pub reports: Vec<SolverReport>,
}
