//! Generalized Newton method for convex piecewise quadratics.
//!
//! The step solves `H(u) d = −∇φ(u)` with the generalized Hessian
//! `H(u) = M D(u) Mᵀ (+ b bᵀ)`, where `D(u)` selects the strictly positive
//! pieces. A singular `H` (flat directions of the current piece) is solved in
//! the minimum-norm sense through a rank-revealing factorization, so round-off
//! in the gradient is not amplified along the flat directions. Steps are
//! Armijo-backtracked; when the Newton
//! direction fails to produce sufficient decrease the iteration falls back
//! to a backtracked steepest-descent step. Once the predicted decrease is
//! below the rounding level of the objective, a full Newton step is accepted
//! on gradient reduction instead. A solve that cannot move and whose gradient
//! is within its rounding bound ends as converged.

use log::debug;

use super::config::{SolverConfig, SolverKind, SolverReport};
use super::objectives::PiecewiseQuadratic;
use crate::error::{Error, Result, Unconverged};
use crate::linalg::{cholesky_solve, dot, least_squares_apply, norm2, DenseMatrix, Vector};

const MIN_STEP: f64 = 1e-30;

pub(crate) fn minimize(
    q: &PiecewiseQuadratic<'_>,
    start: Vec<f64>,
    kind: SolverKind,
    cfg: &SolverConfig,
) -> Result<(Vector, SolverReport)> {
    let d = q.dim();
    debug_assert_eq!(start.len(), d);
    let mut u = start;
    let mut f = q.value(&u);
    let mut g = q.gradient(&u);
    let mut iterations = 0;

    loop {
        let gn = norm2(&g);
        let report = |converged: bool, iterations: usize, u: &[f64]| SolverReport {
            kind,
            iterations,
            objective: f,
            grad_norm: gn,
            converged,
            active_set: q.active(u),
        };
        if gn <= cfg.grad_tol {
            let report = report(true, iterations, &u);
            return Ok((Vector::from_raw(u), report));
        }
        if iterations == cfg.max_iter {
            let report = report(false, iterations, &u);
            return Err(stalled(u, report));
        }
        iterations += 1;

        let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
        let noise = q.value_rounding_bound(&u);
        let step = newton_direction(q, &u, &neg_g)
            .and_then(|dir| {
                let resolvable = -dot(&g, &dir) > noise;
                if resolvable {
                    armijo(q, &u, f, &g, &dir, cfg)
                } else {
                    unit_step_below_noise(q, &u, f, noise, gn, &dir)
                        .or_else(|| armijo(q, &u, f, &g, &dir, cfg))
                }
            })
            .or_else(|| armijo(q, &u, f, &g, &neg_g, cfg));
        let Some((u_new, f_new)) = step else {
            // No move is possible; a gradient at its own rounding level is as
            // small as it can be made at this scale of u.
            let at_noise = gn <= q.gradient_rounding_bound(&u);
            let report = report(at_noise, iterations, &u);
            if at_noise {
                debug!("{kind}: gradient {gn:e} at rounding level, stopping");
                return Ok((Vector::from_raw(u), report));
            }
            return Err(stalled(u, report));
        };
        debug_assert!(
            f_new <= f + noise,
            "{kind} objective increased: {f} -> {f_new}"
        );
        u = u_new;
        f = f_new;
        g = q.gradient(&u);
    }
}

fn stalled(u: Vec<f64>, report: SolverReport) -> Error {
    Error::MaxIterExceeded(Box::new(Unconverged {
        point: Vector::from_raw(u),
        report,
    }))
}

fn newton_direction(q: &PiecewiseQuadratic<'_>, u: &[f64], neg_g: &[f64]) -> Option<Vec<f64>> {
    let d = q.dim();
    let h = q.hessian(&q.active(u));
    cholesky_solve(&h, d, neg_g).or_else(|| {
        least_squares_apply(&DenseMatrix::from_raw(d, d, h), neg_g)
            .ok()
            .map(Vector::into_inner)
    })
}

/// Full Newton step, accepted when `f` stays within rounding of its current
/// value and the gradient at least halves. Close to the minimizer the
/// predicted decrease `½gᵀH⁻¹g` drops below the rounding error of `f`, where Armijo can no longer
/// tell progress from noise.
fn unit_step_below_noise(
    q: &PiecewiseQuadratic<'_>,
    u: &[f64],
    f: f64,
    noise: f64,
    grad_norm: f64,
    dir: &[f64],
) -> Option<(Vec<f64>, f64)> {
    let trial: Vec<f64> = u.iter().zip(dir).map(|(ui, di)| ui + di).collect();
    let ft = q.value(&trial);
    let noise = noise.max(q.value_rounding_bound(&trial));
    let ok = ft <= f + noise && norm2(&q.gradient(&trial)) <= 0.5 * grad_norm;
    ok.then_some((trial, ft))
}

fn armijo(
    q: &PiecewiseQuadratic<'_>,
    u: &[f64],
    f: f64,
    g: &[f64],
    dir: &[f64],
    cfg: &SolverConfig,
) -> Option<(Vec<f64>, f64)> {
    let slope = dot(g, dir);
    if !(slope < 0.0) {
        return None;
    }
    let mut t = 1.0;
    while t > MIN_STEP {
        let trial: Vec<f64> = u.iter().zip(dir).map(|(ui, di)| ui + t * di).collect();
        let ft = q.value(&trial);
        if trial.as_slice() == u {
            // The step no longer moves u.
            return None;
        }
        if ft <= f + cfg.armijo_sigma * t * slope {
            return Some((trial, ft));
        }
        t *= cfg.armijo_beta;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{random_instance, seeded_rng, InstanceKind};
    use crate::linalg::DenseMatrix;

    #[test]
    fn closed_form_on_single_row() {
        // φ(u) = ½(u₊² + u₊²) + ½(1 − u)², stationary at 3u = 1.
        let a = DenseMatrix::from_rows(&[[1.0, 1.0]]).unwrap();
        let q = PiecewiseQuadratic::dual(&a, &[1.0], 1.0);
        let (u, rep) = minimize(&q, vec![0.0], SolverKind::Dual, &SolverConfig::default()).unwrap();
        assert!((u[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!(rep.converged);
    }

    #[test]
    fn flat_direction_gets_no_step() {
        // The third coordinate never enters φ; a minimum-norm step leaves it alone.
        let a = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]).unwrap();
        let q = PiecewiseQuadratic::dual(&a, &[1.0, 1.0, 0.0], 1.0);
        let (u, rep) =
            minimize(&q, vec![0.2, 0.1, 0.7], SolverKind::Dual, &SolverConfig::default()).unwrap();
        assert!(rep.converged);
        assert!((u[0] - 1.0 / 3.0).abs() < 1e-14 && (u[1] - 1.0 / 3.0).abs() < 1e-14);
        assert_eq!(u[2], 0.7);
    }

    #[test]
    fn degenerate_feasible_instance_converges() {
        // b lies in the span of the active columns, so H is singular at the
        // minimizer; this instance once stalled just above the tolerance.
        let p = random_instance(&mut seeded_rng(2778), InstanceKind::Feasible, 4, 4, 1.0).unwrap();
        let q = PiecewiseQuadratic::dual(p.a(), p.b(), 1.0);
        let cfg = SolverConfig::default();
        let (_, rep) = minimize(&q, vec![0.0; 4], SolverKind::Dual, &cfg).unwrap();
        assert!(rep.converged);
        assert!(rep.iterations < 20);
    }

    #[test]
    fn far_minimizer_stops_at_rounding_level() {
        // Infeasible; one Newton step lands on the minimizer set near |u| = 5e5,
        // where round-off in the gradient exceeds the absolute tolerance.
        let p = random_instance(&mut seeded_rng(2805), InstanceKind::Random, 5, 7, 1.0).unwrap();
        let q = PiecewiseQuadratic::dual(p.a(), p.b(), 1.0);
        let (u, rep) = minimize(&q, vec![0.0; 5], SolverKind::Dual, &SolverConfig::default()).unwrap();
        assert!(rep.converged);
        assert!(rep.objective < 1e-18);
        assert!(rep.grad_norm <= q.gradient_rounding_bound(&u));
    }
}
