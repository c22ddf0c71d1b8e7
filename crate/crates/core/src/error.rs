use thiserror::Error;

use crate::alternatives::Clause;
use crate::linalg::Vector;
use crate::reduction::DiagramEdge;
use crate::solvers::SolverReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Best iterate of a solve that ran out of iterations.
#[derive(Debug, Clone)]
pub struct Unconverged {
    pub point: Vector,
    pub report: SolverReport,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFiniteInput(&'static str),

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("rank {rank} < m={rows}")]
    RankDeficient { rank: usize, rows: usize },

    #[error("right-hand side b is zero")]
    ZeroRhs,

    #[error("rho must be positive and finite, got {0}")]
    InvalidRho(f64),

    #[error(
        "solver stopped after {} iterations with gradient norm {:e}",
        .0.report.iterations,
        .0.report.grad_norm
    )]
    MaxIterExceeded(Box<Unconverged>),

    #[error("primal route says feasible={primal_feasible}, dual route says feasible={dual_feasible}")]
    InconsistentRoutes {
        primal_feasible: bool,
        dual_feasible: bool,
        reports: Vec<SolverReport>,
    },

    #[error("residual b - Ax has norm {norm:e}; the system is feasible")]
    ZeroResidual { norm: f64 },

    #[error("certificate clause {clause} violated by {violation:e}")]
    CertificateInvalid { clause: Clause, violation: f64 },

    #[error("point is not a solution of Ax = b (residual {residual:e})")]
    NotInSolutionSet { residual: f64 },

    #[error("vector is not in the range of -A^T (residual {residual:e})")]
    NotInRange { residual: f64 },

    #[error("four-system diagram violated on edge {edge}")]
    DiagramViolation { edge: DiagramEdge },

    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code printed by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonFiniteInput(_) => "E_NONFINITE",
            Error::DimensionMismatch { .. } => "E_DIMENSION",
            Error::InvalidArgument(_) => "E_INVALID_ARGUMENT",
            Error::RankDeficient { .. } => "E_RANK",
            Error::ZeroRhs => "E_ZERO_RHS",
            Error::InvalidRho(_) => "E_INVALID_RHO",
            Error::MaxIterExceeded(_) => "E_NOT_CONVERGED",
            Error::InconsistentRoutes { .. } => "E_INCONSISTENT_ROUTES",
            Error::ZeroResidual { .. } => "E_ZERO_RESIDUAL",
            Error::CertificateInvalid { .. } => "E_CERT_INVALID",
            Error::NotInSolutionSet { .. } => "E_NOT_IN_SOLUTION_SET",
            Error::NotInRange { .. } => "E_NOT_IN_RANGE",
            Error::DiagramViolation { .. } => "E_DIAGRAM",
            Error::BudgetExceeded(_) => "E_BUDGET",
            Error::Parse { .. } => "E_PARSE",
            Error::Io(_) => "E_IO",
            Error::Json(_) => "E_PARSE",
        }
    }
}
