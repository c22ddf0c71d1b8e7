//! Projected gradient for `min ½‖b − Ax‖²` over the nonnegative orthant.
//!
//! Each iteration takes an Armijo-backtracked projected gradient step with a
//! Barzilai–Borwein trial length, then refines it with a subspace step: the
//! least-squares minimizer over the current free variables, truncated at the
//! first bound it would cross. The objective never increases.

use super::config::{SolverConfig, SolverKind, SolverReport};
use super::objectives::{primal_gradient, primal_objective};
use crate::error::{Error, Result, Unconverged};
use crate::linalg::{dot, least_squares_apply, norm2, DenseMatrix, Vector};

/// `‖x − (x − ∇f(x))₊‖`
pub fn projected_gradient_norm(x: &[f64], grad: &[f64]) -> f64 {
    x.iter()
        .zip(grad)
        .map(|(&xi, &gi)| {
            let d = xi - (xi - gi).max(0.0);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Minimizes `½‖b − Ax‖²` over `x ≥ 0` starting from `x = 0`.
pub fn solve_primal_residual(
    a: &DenseMatrix,
    b: &[f64],
    cfg: &SolverConfig,
) -> Result<(Vector, SolverReport)> {
    cfg.validate()?;
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            what: "b",
            expected: a.rows(),
            found: b.len(),
        });
    }
    if norm2(b) == 0.0 {
        return Err(Error::ZeroRhs);
    }

    let n = a.cols();
    let mut x = vec![0.0; n];
    let mut f = primal_objective(a, b, &x);
    let mut g = primal_gradient(a, b, &x);
    let mut step = {
        let ag = a.mul_vec(&g);
        let denom = dot(&ag, &ag);
        if denom > 0.0 {
            dot(&g, &g) / denom
        } else {
            1.0
        }
    };

    let mut iterations = 0;
    loop {
        let pg = projected_gradient_norm(&x, &g);
        let report = |converged: bool, iterations: usize| SolverReport {
            kind: SolverKind::Primal,
            iterations,
            objective: f,
            grad_norm: pg,
            converged,
            active_set: (0..n).filter(|&j| x[j] == 0.0).collect(),
        };
        if pg <= cfg.grad_tol {
            let report = report(true, iterations);
            return Ok((Vector::from_raw(x), report));
        }
        if iterations == cfg.max_iter {
            let report = report(false, iterations);
            return Err(not_converged(x, report));
        }
        iterations += 1;

        let (mut xt, mut ft) = projected_armijo(a, b, &x, f, &g, step, cfg);

        let free: Vec<usize> = (0..n).filter(|&j| xt[j] > 0.0).collect();
        if !free.is_empty() {
            let target = least_squares_apply(&a.select_columns(&free), b)?;
            if let Some((xs, fs)) = truncated_subspace_step(a, b, &xt, &free, &target) {
                if fs <= ft {
                    xt = xs;
                    ft = fs;
                }
            }
        }
        debug_assert!(
            ft <= f + 1e-12 * f.abs(),
            "primal objective increased: {f} -> {ft}"
        );

        if xt == x {
            // No representable progress left.
            let report = report(false, iterations);
            return Err(not_converged(x, report));
        }

        let g_new = primal_gradient(a, b, &xt);
        let s: Vec<f64> = xt.iter().zip(&x).map(|(p, q)| p - q).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(p, q)| p - q).collect();
        let sy = dot(&s, &y);
        if sy > 0.0 {
            step = dot(&s, &s) / sy;
        }
        x = xt;
        f = ft;
        g = g_new;
    }
}

fn not_converged(x: Vec<f64>, report: SolverReport) -> Error {
    Error::MaxIterExceeded(Box::new(Unconverged {
        point: Vector::from_raw(x),
        report,
    }))
}

/// Backtracking along the projection arc `t ↦ (x − t∇f)₊`.
fn projected_armijo(
    a: &DenseMatrix,
    b: &[f64],
    x: &[f64],
    f: f64,
    g: &[f64],
    initial: f64,
    cfg: &SolverConfig,
) -> (Vec<f64>, f64) {
    let mut t = initial;
    while t > 1e-30 {
        let xt: Vec<f64> = x
            .iter()
            .zip(g)
            .map(|(&xi, &gi)| (xi - t * gi).max(0.0))
            .collect();
        let ft = primal_objective(a, b, &xt);
        let moved: Vec<f64> = xt.iter().zip(x).map(|(p, q)| p - q).collect();
        if ft <= f + cfg.armijo_sigma * dot(g, &moved) {
            return (xt, ft);
        }
        t *= cfg.armijo_beta;
    }
    (x.to_vec(), f)
}

/// Moves the free variables toward `target`, stopping at the first bound.
fn truncated_subspace_step(
    a: &DenseMatrix,
    b: &[f64],
    x: &[f64],
    free: &[usize],
    target: &[f64],
) -> Option<(Vec<f64>, f64)> {
    let dir: Vec<f64> = free.iter().zip(target).map(|(&j, &t)| t - x[j]).collect();
    if dir.iter().all(|&d| d == 0.0) {
        return None;
    }
    let mut alpha = 1.0;
    let mut blocking = None;
    for (pos, (&j, &d)) in free.iter().zip(&dir).enumerate() {
        if d < 0.0 {
            let limit = -x[j] / d;
            if limit < alpha {
                alpha = limit;
                blocking = Some(pos);
            }
        }
    }
    let mut xs = x.to_vec();
    for (pos, (&j, &d)) in free.iter().zip(&dir).enumerate() {
        xs[j] = if Some(pos) == blocking {
            0.0
        } else {
            (x[j] + alpha * d).max(0.0)
        };
    }
    let fs = primal_objective(a, b, &xs);
    Some((xs, fs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_rows(rows).unwrap()
    }

    /// Grid search over `x ∈ [0, 3]` for the 1-D problem.
    fn grid_min_1d(a: f64, b: f64) -> (f64, f64) {
        (0..=30_000)
            .map(|i| i as f64 * 1e-4)
            .map(|x| (x, 0.5 * (b - a * x).powi(2)))
            .fold((0.0, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best })
    }

    #[test]
    fn one_dimensional_negative_rhs_clamps_to_zero() {
        let (x_grid, f_grid) = grid_min_1d(1.0, -1.0);
        let (x, rep) = solve_primal_residual(&mat(&[&[1.0]]), &[-1.0], &SolverConfig::default())
            .unwrap();
        assert_eq!(x_grid, 0.0);
        assert_eq!(x.as_slice(), &[x_grid]);
        assert!((rep.objective - f_grid).abs() < 1e-15);
        assert_eq!(rep.objective, 0.5);
        assert!(rep.converged);
        assert_eq!(rep.active_set, vec![0]);
    }

    #[test]
    fn feasible_system_drives_residual_to_zero() {
        let a = mat(&[&[1.0, 1.0]]);
        let (x, rep) = solve_primal_residual(&a, &[1.0], &SolverConfig::default()).unwrap();
        assert!(rep.objective <= 1e-20);
        assert!(x.iter().all(|&v| v >= 0.0));
        assert!((a.mul_vec(&x)[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn separable_problem_matches_per_coordinate_clamp() {
        let b = [-1.0, 1.0];
        let expected: Vec<f64> = b.iter().map(|v: &f64| v.max(0.0)).collect();
        let (x, rep) =
            solve_primal_residual(&DenseMatrix::identity(2), &b, &SolverConfig::default())
                .unwrap();
        assert_eq!(x.as_slice(), expected.as_slice());
        assert_eq!(rep.objective, 0.5);
    }

    #[test]
    fn zero_rhs_is_rejected() {
        let err = solve_primal_residual(&mat(&[&[1.0]]), &[0.0], &SolverConfig::default())
            .unwrap_err();
        assert!(matches!(err, Error::ZeroRhs));
    }

    #[test]
    fn iteration_budget_exhaustion_returns_best_iterate() {
        use crate::instances::{random_instance, seeded_rng, InstanceKind};
        let p = random_instance(&mut seeded_rng(3), InstanceKind::Infeasible, 6, 10, 1.0).unwrap();
        let (_, full) = solve_primal_residual(p.a(), p.b(), &SolverConfig::default()).unwrap();
        assert!(full.iterations > 1);
        let cfg = SolverConfig {
            max_iter: 1,
            ..SolverConfig::default()
        };
        match solve_primal_residual(p.a(), p.b(), &cfg) {
            Err(Error::MaxIterExceeded(u)) => {
                assert!(!u.report.converged);
                assert_eq!(u.report.iterations, 1);
                assert!(u.point.iter().all(|&v| v >= 0.0));
                assert!(u.report.objective >= full.objective);
            }
            other => panic!("expected MaxIterExceeded, got {other:?}"),
        }
    }
}
