use log::{debug, info};

use super::certificate::{
    Certificate, Decision, DualIdentityReport, DualSolution, PrimalSolution, Route,
};
use super::problem::FeasibilityProblem;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, positive_part, Vector};
use crate::solvers::{solve_dual_residual, solve_primal_residual, SolverConfig, SolverReport};

/// The dual route declares `Ax = b, x ≥ 0` solvable when `w₂* > 1e-7·ρ`.
pub const W2_RELATIVE_THRESHOLD: f64 = 1e-7;

/// Default absolute tolerance for certificate clauses.
pub const DEFAULT_VERIFY_TOL: f64 = 1e-7;

/// Runs the requested residual solve(s) and turns the result into a
/// certificate for whichever of the two alternative systems is solvable.
pub fn decide(problem: &FeasibilityProblem, cfg: &SolverConfig, route: Route) -> Result<Decision> {
    let decision = match route {
        Route::Primal => {
            let p = PrimalRun::solve(problem, cfg)?;
            Decision {
                identities: DualIdentityReport {
                    z_identity_residual: Some(p.z_identity()),
                    w_identity_residual: None,
                },
                certificate: p.certificate(problem, cfg)?,
                reports: vec![p.report],
            }
        }
        Route::Dual => {
            let d = DualRun::solve(problem, cfg)?;
            Decision {
                identities: DualIdentityReport {
                    z_identity_residual: None,
                    w_identity_residual: Some(d.w_identity(problem.rho())),
                },
                certificate: d.certificate(problem),
                reports: vec![d.report],
            }
        }
        Route::Both => {
            let p = PrimalRun::solve(problem, cfg)?;
            let d = DualRun::solve(problem, cfg)?;
            if p.feasible != d.feasible {
                return Err(Error::InconsistentRoutes {
                    primal_feasible: p.feasible,
                    dual_feasible: d.feasible,
                    reports: vec![p.report, d.report],
                });
            }
            let identities = DualIdentityReport {
                z_identity_residual: Some(p.z_identity()),
                w_identity_residual: Some(d.w_identity(problem.rho())),
            };
            let certificate = if d.feasible {
                d.certificate(problem)
            } else {
                p.certificate(problem, cfg)?
            };
            Decision {
                certificate,
                identities,
                reports: vec![p.report, d.report],
            }
        }
    };
    info!(
        "route {route}: {} ({} iterations total)",
        if decision.certificate.is_feasible() { "feasible" } else { "infeasible" },
        decision.reports.iter().map(|r| r.iterations).sum::<usize>()
    );
    Ok(decision)
}

/// `ũ* = ρ(b − Ax*)/‖b − Ax*‖²`, the minimal-norm solution of
/// `Aᵀu ≤ 0, bᵀu = ρ` when `x*` minimizes `½‖b − Ax‖²` over `x ≥ 0`.
pub fn normal_solution_of_ii(
    problem: &FeasibilityProblem,
    x_star: &[f64],
    feas_tol: f64,
) -> Result<Vector> {
    if x_star.len() != problem.n() {
        return Err(Error::DimensionMismatch {
            what: "x_star",
            expected: problem.n(),
            found: x_star.len(),
        });
    }
    let z = residual(problem, x_star);
    let zz = dot(&z, &z);
    let norm = zz.sqrt();
    if norm <= feas_tol {
        return Err(Error::ZeroResidual { norm });
    }
    let scale = problem.rho() / zz;
    Vector::new(z.iter().map(|v| v * scale).collect())
}

/// `|‖z‖² − bᵀz|` with `z = b − Ax*`.
pub fn z_identity_residual(problem: &FeasibilityProblem, x_star: &[f64]) -> f64 {
    let z = residual(problem, x_star);
    (dot(&z, &z) - dot(problem.b(), &z)).abs()
}

/// `|‖w₁‖² + w₂² − ρw₂|`
pub fn w_identity_residual(rho: f64, w1: &[f64], w2: f64) -> f64 {
    (dot(w1, w1) + w2 * w2 - rho * w2).abs()
}

fn residual(problem: &FeasibilityProblem, x: &[f64]) -> Vec<f64> {
    let ax = problem.a().mul_vec(x);
    problem.b().iter().zip(ax).map(|(b, ax)| b - ax).collect()
}

struct PrimalRun {
    x_star: Vector,
    report: SolverReport,
    feasible: bool,
    z_identity: f64,
}

impl PrimalRun {
    fn solve(problem: &FeasibilityProblem, cfg: &SolverConfig) -> Result<Self> {
        let (x_star, report) = solve_primal_residual(problem.a(), problem.b(), cfg)?;
        let b_norm = norm2(problem.b());
        let feasible = report.objective <= cfg.feas_tol * b_norm.powi(2).max(1.0);
        debug!(
            "primal residual {:e} after {} iterations",
            report.objective, report.iterations
        );
        let z_identity = z_identity_residual(problem, &x_star);
        Ok(Self {
            x_star,
            report,
            feasible,
            z_identity,
        })
    }

    fn z_identity(&self) -> f64 {
        self.z_identity
    }

    fn certificate(&self, problem: &FeasibilityProblem, cfg: &SolverConfig) -> Result<Certificate> {
        if self.feasible {
            return Ok(Certificate::Feasible {
                x_normal: self.x_star.clone(),
                dual: None,
            });
        }
        let u_cert = normal_solution_of_ii(problem, &self.x_star, cfg.feas_tol)?;
        let z = Vector::new(residual(problem, &self.x_star))?;
        Ok(Certificate::Infeasible {
            u_cert,
            primal: Some(PrimalSolution {
                x_star: self.x_star.clone(),
                z,
            }),
        })
    }
}

struct DualRun {
    u_star: Vector,
    w1: Vector,
    w2: f64,
    report: SolverReport,
    feasible: bool,
}

impl DualRun {
    fn solve(problem: &FeasibilityProblem, cfg: &SolverConfig) -> Result<Self> {
        let rho = problem.rho();
        let (u_star, report) = solve_dual_residual(problem.a(), problem.b(), rho, cfg)?;
        let w1 = Vector::new(positive_part(&problem.a().tr_mul_vec(&u_star)))?;
        let w2 = rho - dot(problem.b(), &u_star);
        debug!(
            "dual residual {:e}, w2 = {w2:e} after {} iterations",
            report.objective, report.iterations
        );
        Ok(Self {
            feasible: w2 > W2_RELATIVE_THRESHOLD * rho,
            u_star,
            w1,
            w2,
            report,
        })
    }

    fn w_identity(&self, rho: f64) -> f64 {
        w_identity_residual(rho, &self.w1, self.w2)
    }

    fn certificate(&self, problem: &FeasibilityProblem) -> Certificate {
        if self.feasible {
            let x_normal = Vector::from_raw(self.w1.iter().map(|v| v / self.w2).collect());
            Certificate::Feasible {
                x_normal,
                dual: Some(DualSolution {
                    u_star: self.u_star.clone(),
                    w1: self.w1.clone(),
                    w2: self.w2,
                }),
            }
        } else {
            // w₂ ≈ 0 means bᵀu ≈ ρ; rescale onto bᵀu = ρ exactly.
            let bu = dot(problem.b(), &self.u_star);
            let scale = problem.rho() / bu;
            Certificate::Infeasible {
                u_cert: Vector::from_raw(self.u_star.iter().map(|v| v * scale).collect()),
                primal: None,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn single_row_feasible_gives_midpoint() {
        let p = FeasibilityProblem::from_rows(&[[1.0, 1.0]], &[1.0]).unwrap();
        for route in [Route::Dual, Route::Both] {
            let d = decide(&p, &cfg(), route).unwrap();
            let Certificate::Feasible { x_normal, dual } = &d.certificate else {
                panic!("expected feasible");
            };
            assert!(close(x_normal, &[0.5, 0.5], 1e-12), "{x_normal:?}");
            let dual = dual.as_ref().unwrap();
            assert!(close(&dual.u_star, &[1.0 / 3.0], 1e-12));
            assert!((dual.w2 - 2.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_row_feasible_normal_solution() {
        let p = FeasibilityProblem::from_rows(&[[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]], &[1.0, 1.0])
            .unwrap();
        let d = decide(&p, &cfg(), Route::Both).unwrap();
        assert!(close(d.certificate.witness(), &[1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0], 1e-12));
        assert!(d.certificate.normality_guaranteed());
    }

    #[test]
    fn scalar_infeasible_certificate() {
        let p = FeasibilityProblem::from_rows(&[[1.0]], &[-1.0]).unwrap();
        for route in [Route::Primal, Route::Dual, Route::Both] {
            let d = decide(&p, &cfg(), route).unwrap();
            assert!(!d.certificate.is_feasible());
            assert!(close(d.certificate.witness(), &[-1.0], 1e-12), "{route}");
        }
    }

    #[test]
    fn identity_infeasible_certificate() {
        let p = FeasibilityProblem::from_rows(&[[1.0, 0.0], [0.0, 1.0]], &[-1.0, 1.0]).unwrap();
        let d = decide(&p, &cfg(), Route::Primal).unwrap();
        let Certificate::Infeasible { u_cert, primal } = &d.certificate else {
            panic!("expected infeasible");
        };
        assert_eq!(u_cert.as_slice(), &[-1.0, 0.0]);
        let primal = primal.as_ref().unwrap();
        assert_eq!(primal.x_star.as_slice(), &[0.0, 1.0]);
        assert_eq!(primal.z.as_slice(), &[-1.0, 0.0]);
        assert_eq!(dot(p.b(), u_cert), 1.0);
    }

    #[test]
    fn primal_route_feasible_is_not_flagged_normal() {
        let p = FeasibilityProblem::from_rows(&[[1.0, 1.0]], &[1.0]).unwrap();
        let d = decide(&p, &cfg(), Route::Primal).unwrap();
        assert!(d.certificate.is_feasible());
        assert!(!d.certificate.normality_guaranteed());
    }

    #[test]
    fn eq6_scales_linearly_in_rho() {
        let p = FeasibilityProblem::from_rows(&[[1.0, 0.0], [0.0, 1.0]], &[-1.0, 1.0])
            .unwrap()
            .with_rho(2.0)
            .unwrap();
        let u = normal_solution_of_ii(&p, &[0.0, 1.0], 1e-9).unwrap();
        assert_eq!(u.as_slice(), &[-2.0, 0.0]);
    }

    #[test]
    fn eq6_rejects_zero_residual() {
        let p = FeasibilityProblem::from_rows(&[[1.0, 1.0]], &[1.0]).unwrap();
        let err = normal_solution_of_ii(&p, &[0.5, 0.5], 1e-9).unwrap_err();
        assert!(matches!(err, Error::ZeroResidual { .. }));
    }

    #[test]
    fn w_identity_on_worked_example() {
        // (1/9 + 1/9) + (2/3)² − 1·(2/3) = 0
        let r = w_identity_residual(1.0, &[1.0 / 3.0, 1.0 / 3.0], 2.0 / 3.0);
        assert!(r < 1e-16);
    }
}
