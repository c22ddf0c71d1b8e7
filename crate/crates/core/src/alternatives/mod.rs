//! Certification layer: decides which of `Ax = b, x ≥ 0` and
//! `Aᵀu ≤ 0, bᵀu = ρ` is solvable and produces a checkable witness.
//!
//! The dual route recovers the minimal-norm solution `x̃* = w₁*/w₂*` of the
//! first system; the primal route recovers the minimal-norm solution
//! `ũ* = ρz*/‖z*‖²` of the second.

mod certificate;
mod decide;
mod problem;
mod verify;

pub use certificate::{
    Certificate, Decision, DualIdentityReport, DualSolution, PrimalSolution, Route,
};
pub use decide::{
    decide, normal_solution_of_ii, w_identity_residual, z_identity_residual, DEFAULT_VERIFY_TOL,
    W2_RELATIVE_THRESHOLD,
};
pub use problem::FeasibilityProblem;
pub use verify::{verify_certificate, Clause};
