//! Feasibility certificates for `Ax = b, x ≥ 0`.
//!
//! The system and its alternative `Aᵀu ≤ 0, bᵀu = ρ` are decided by
//! minimizing residuals: `½‖b − Ax‖²` over `x ≥ 0`, or the piecewise
//! quadratic `½{‖(Aᵀu)₊‖² + (ρ − bᵀu)²}` over all `u`. Either minimizer yields
//! a certificate: the minimal-norm solution of whichever system is solvable.
//!
//! For full-row-rank `A` the [`reduction`] module recasts both systems over a
//! null-space basis `K` of `A`, in `ν = n − m` and `n` variables.
//!
//! ```
//! use farkas::alternatives::{decide, Certificate, FeasibilityProblem, Route};
//! use farkas::solvers::SolverConfig;
//!
//! let p = FeasibilityProblem::from_rows(&[[1.0, 1.0]], &[1.0]).unwrap();
//! let d = decide(&p, &SolverConfig::default(), Route::Both).unwrap();
//! let Certificate::Feasible { x_normal, .. } = d.certificate else { unreachable!() };
//! assert!((x_normal[0] - 0.5).abs() < 1e-12 && (x_normal[1] - 0.5).abs() < 1e-12);
//! ```

pub mod alternatives;
pub mod cli;
pub mod error;
pub mod instances;
pub mod linalg;
pub mod oracle;
pub mod reduction;
pub mod solvers;

pub use error::{Error, Result};
