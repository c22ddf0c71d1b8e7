//! Reduced alternative pair built from a null-space basis of `A`.
//!
//! For full-row-rank `A`, every solution of `Ax = b` is `x = x̄ − Kᵀy`, where
//! `x̄` is a particular solution and the rows of `K` span the null space of
//! `A`. This turns the four systems
//!
//! ```text
//!   (I)    Ax = b, x ≥ 0            <=>   (I_y)   Kᵀy ≤ x̄
//!   (II)   Aᵀu ≤ 0, bᵀu = ρ         <=>   (II_v)  Kv = 0, −x̄ᵀv = ρ, v ≥ 0
//! ```
//!
//! into two equivalent pairs, with (I)/(II) and (I_y)/(II_v) alternatives.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alternatives::{decide, FeasibilityProblem, Route};
use crate::error::{Error, Result};
use crate::linalg::{
    dot, least_squares_apply, norm2, norm_inf, null_space_basis, null_tolerance, DenseMatrix,
    NullSpaceBasis, Vector,
};
use crate::solvers::{solve_dual_residual, solve_reduced_residual, SolverConfig, SolverReport};

/// Relative tolerance for `Ax = b` membership and range round trips.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct ReducedSystems {
    basis: NullSpaceBasis,
    x_bar: Vector,
    rho: f64,
    a: DenseMatrix,
    b: Vector,
}

/// `x̄ = A⁺b` and `K = [−Nᵀ | I_ν]` for a full-row-rank `A`.
pub fn build_reduction(problem: &FeasibilityProblem) -> Result<ReducedSystems> {
    let basis = null_space_basis(problem.a())?;
    let x_bar = least_squares_apply(problem.a(), problem.b())?;
    Ok(ReducedSystems {
        basis,
        x_bar,
        rho: problem.rho(),
        a: problem.a().clone(),
        b: problem.b().clone(),
    })
}

impl ReducedSystems {
    pub fn k(&self) -> &DenseMatrix {
        &self.basis.k
    }

    pub fn basis(&self) -> &NullSpaceBasis {
        &self.basis
    }

    pub fn x_bar(&self) -> &Vector {
        &self.x_bar
    }

    /// ν = n − m
    pub fn nu(&self) -> usize {
        self.basis.nullity
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `max |(A Kᵀ)_ij|`
    pub fn null_residual(&self) -> f64 {
        self.basis.null_residual(&self.a)
    }

    pub fn null_tolerance(&self) -> f64 {
        null_tolerance(&self.a)
    }

    /// `max_j (Kᵀy − x̄)_j`; nonpositive exactly when `y` solves `Kᵀy ≤ x̄`.
    pub fn inequality_violation(&self, y: &[f64]) -> f64 {
        self.k()
            .tr_mul_vec(y)
            .iter()
            .zip(self.x_bar.iter())
            .map(|(kty, xb)| kty - xb)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Decides `Kᵀy ≤ x̄` by minimizing the reduced residual. Returns a
    /// solution when the system is solvable. For `ν = 0` the system reads
    /// `0 ≤ x̄` and is checked directly.
    pub fn solve_primal_reduced(&self, cfg: &SolverConfig) -> Result<(Option<Vector>, SolverReport)> {
        let (y, rep) = solve_reduced_residual(self.k(), &self.x_bar, cfg)?;
        let solvable = if self.nu() == 0 {
            let tol = MEMBERSHIP_TOL * norm_inf(&self.x_bar).max(1.0);
            self.x_bar.iter().all(|&v| v >= -tol)
        } else {
            rep.objective <= cfg.feas_tol * self.x_bar.norm().powi(2).max(1.0)
        };
        Ok((solvable.then_some(y), rep))
    }

    /// `x = x̄ − Kᵀy`
    pub fn map_y_to_x(&self, y: &[f64]) -> Result<Vector> {
        if y.len() != self.nu() {
            return Err(Error::DimensionMismatch {
                what: "y",
                expected: self.nu(),
                found: y.len(),
            });
        }
        let kty = self.k().tr_mul_vec(y);
        Vector::new(self.x_bar.iter().zip(kty).map(|(xb, v)| xb - v).collect())
    }

    /// `y = (Kᵀ)⁺(x̄ − x)`, the inverse of [`Self::map_y_to_x`] on solutions
    /// of `Ax = b`.
    pub fn map_x_to_y(&self, x: &[f64]) -> Result<Vector> {
        if x.len() != self.x_bar.len() {
            return Err(Error::DimensionMismatch {
                what: "x",
                expected: self.x_bar.len(),
                found: x.len(),
            });
        }
        let ax = self.a.mul_vec(x);
        let residual = norm2(&ax.iter().zip(self.b.iter()).map(|(p, q)| p - q).collect::<Vec<_>>());
        let scale = 1.0_f64.max(self.b.norm()).max(self.a.max_abs() * norm2(x));
        if !(residual <= MEMBERSHIP_TOL * scale) {
            return Err(Error::NotInSolutionSet { residual });
        }
        let diff: Vec<f64> = self.x_bar.iter().zip(x).map(|(xb, xi)| xb - xi).collect();
        least_squares_apply(&self.k().transpose(), &diff)
    }
}

/// `u = −(Aᵀ)⁺v`; fails unless `v` lies in the range of `Aᵀ`.
pub fn map_v_to_u(problem: &FeasibilityProblem, v: &[f64]) -> Result<Vector> {
    if v.len() != problem.n() {
        return Err(Error::DimensionMismatch {
            what: "v",
            expected: problem.n(),
            found: v.len(),
        });
    }
    let neg_v: Vec<f64> = v.iter().map(|x| -x).collect();
    let u = least_squares_apply(&problem.a().transpose(), &neg_v)?;
    let back = problem.a().tr_mul_vec(&u);
    let residual = norm2(&back.iter().zip(v).map(|(p, q)| p + q).collect::<Vec<_>>());
    if !(residual <= MEMBERSHIP_TOL * norm2(v).max(1.0)) {
        return Err(Error::NotInRange { residual });
    }
    Ok(u)
}

/// `v = −Aᵀu`
pub fn map_u_to_v(problem: &FeasibilityProblem, u: &[f64]) -> Result<Vector> {
    if u.len() != problem.m() {
        return Err(Error::DimensionMismatch {
            what: "u",
            expected: problem.m(),
            found: u.len(),
        });
    }
    Vector::new(problem.a().tr_mul_vec(u).iter().map(|x| -x).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagramEdge {
    /// (I) ⇔ (I_y)
    PrimalReduced,
    /// (II) ⇔ (II_v)
    AlternativeReduced,
    /// exactly one of (I), (II)
    Alternative,
}

impl fmt::Display for DiagramEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagramEdge::PrimalReduced => "I<=>I_y",
            DiagramEdge::AlternativeReduced => "II<=>II_v",
            DiagramEdge::Alternative => "I xor II",
        })
    }
}

/// Solvability of the four systems, with a witness for each solvable one.
#[derive(Clone, Debug)]
pub struct DiagramReport {
    pub primal: bool,
    pub primal_reduced: bool,
    pub alternative: bool,
    pub alternative_reduced: bool,
    pub x: Option<Vector>,
    pub y: Option<Vector>,
    pub u: Option<Vector>,
    pub v: Option<Vector>,
    pub nullity: usize,
    pub null_residual: f64,
}

impl DiagramReport {
    fn first_violation(&self) -> Option<DiagramEdge> {
        if self.primal != self.primal_reduced {
            Some(DiagramEdge::PrimalReduced)
        } else if self.alternative != self.alternative_reduced {
            Some(DiagramEdge::AlternativeReduced)
        } else if self.primal == self.alternative {
            Some(DiagramEdge::Alternative)
        } else {
            None
        }
    }
}

/// Decides all four systems independently where possible and checks the
/// equivalence and alternative edges between them.
///
/// (I) comes from [`decide`] on both routes, (II) from the alternative-system
/// residual, (I_y) from the reduced residual, and (II_v) by transporting the
/// (II) witness through `v = −Aᵀu`.
pub fn check_diagram(problem: &FeasibilityProblem, cfg: &SolverConfig) -> Result<DiagramReport> {
    let red = build_reduction(problem)?;
    let rho = problem.rho();

    let decision = decide(problem, cfg, Route::Both)?;
    let primal = decision.certificate.is_feasible();
    let x = primal.then(|| decision.certificate.witness().clone());

    let (u_star, dual_report) = solve_dual_residual(problem.a(), problem.b(), rho, cfg)?;
    let alternative = dual_report.objective <= cfg.feas_tol * rho * rho;
    let u = alternative.then(|| {
        let scale = rho / dot(problem.b(), &u_star);
        Vector::from_raw(u_star.iter().map(|v| v * scale).collect())
    });

    let (y, _) = red.solve_primal_reduced(cfg)?;
    let primal_reduced = y.is_some();

    let v = match &u {
        Some(u) => transport_witness(problem, &red, u)?,
        None => None,
    };

    let report = DiagramReport {
        primal,
        primal_reduced,
        alternative,
        alternative_reduced: v.is_some(),
        x,
        y,
        u,
        v,
        nullity: red.nu(),
        null_residual: red.null_residual(),
    };
    match report.first_violation() {
        Some(edge) => Err(Error::DiagramViolation { edge }),
        None => Ok(report),
    }
}

/// Maps a (II) witness to (II_v) and rescales it onto `−x̄ᵀv = ρ`. Returns
/// `None` if the image fails `v ≥ 0` or `Kv = 0`.
fn transport_witness(
    problem: &FeasibilityProblem,
    red: &ReducedSystems,
    u: &[f64],
) -> Result<Option<Vector>> {
    let v = map_u_to_v(problem, u)?;
    let level = -dot(red.x_bar(), &v);
    if !(level > 0.0) {
        return Ok(None);
    }
    let scale = red.rho() / level;
    let v: Vec<f64> = v.iter().map(|x| x * scale).collect();
    let v_scale = norm_inf(&v).max(1.0);
    let nonneg = v.iter().all(|&x| x >= -MEMBERSHIP_TOL * v_scale);
    let in_kernel = red.nu() == 0
        || norm_inf(&red.k().mul_vec(&v)) <= red.null_tolerance().max(1e-12) * v_scale;
    Ok((nonneg && in_kernel).then(|| Vector::from_raw(v)))
}
