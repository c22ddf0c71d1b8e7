//! Brute-force ground truth for desk-sized instances.
//!
//! Feasibility is settled by enumerating bases: a solvable `Ax = b, x ≥ 0`
//! always has a basic feasible solution. Minimal-norm points are found by
//! enumerating supports, since the minimal-norm point with support `F` is the
//! minimum-norm solution of `A_F x_F = b`. The minimal-norm solution of
//! `Aᵀu ≤ 0, bᵀu = ρ` is found the same way over sets of active inequalities.

use std::cmp::Ordering;

use crate::alternatives::FeasibilityProblem;
use crate::error::{Error, Result};
use crate::linalg::{least_squares_apply, norm2, norm_inf, rank, DenseMatrix, Vector};

pub const MAX_COLUMNS: usize = 14;
pub const MAX_WITNESS_ROWS: usize = 8;

const CONSISTENCY_TOL: f64 = 1e-9;
const SIGN_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct OracleVerdict {
    pub feasible: bool,
    pub min_norm_point: Option<Vector>,
    pub basic_feasible_points: Vec<Vector>,
    /// Computed for infeasible instances with `m ≤ MAX_WITNESS_ROWS`.
    pub min_norm_ii_witness: Option<Vector>,
}

fn check_budget(problem: &FeasibilityProblem) -> Result<()> {
    if problem.n() > MAX_COLUMNS {
        return Err(Error::BudgetExceeded(format!(
            "n = {} exceeds {MAX_COLUMNS}",
            problem.n()
        )));
    }
    Ok(())
}

fn subset(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&j| mask & (1 << j) != 0).collect()
}

/// Minimum-norm solution of `M z = rhs`, if that system is consistent.
fn consistent_solution(m: &DenseMatrix, rhs: &[f64]) -> Option<Vector> {
    let z = least_squares_apply(m, rhs).ok()?;
    let mz = m.mul_vec(&z);
    let residual = norm2(&mz.iter().zip(rhs).map(|(p, q)| p - q).collect::<Vec<_>>());
    let scale = 1.0_f64
        .max(norm2(rhs))
        .max(m.max_abs() * z.iter().map(|v| v.abs()).sum::<f64>());
    (residual <= CONSISTENCY_TOL * scale).then_some(z)
}

/// Scatters `values` into an `n`-vector at `columns`, clamping round-off
/// negatives. Returns `None` if any entry is genuinely negative.
fn nonnegative_embedding(values: &[f64], columns: &[usize], n: usize) -> Option<Vector> {
    let tol = SIGN_TOL * norm_inf(values).max(1.0);
    if values.iter().any(|&v| v < -tol) {
        return None;
    }
    let mut x = vec![0.0; n];
    for (&j, &v) in columns.iter().zip(values) {
        x[j] = v.max(0.0);
    }
    Some(Vector::from_raw(x))
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Keeps the candidate of least norm; equal norms resolve lexicographically.
fn keep_smaller(best: &mut Option<(f64, Vector)>, candidate: Vector) {
    let norm = candidate.norm();
    let better = match best {
        None => true,
        Some((bn, bv)) => match norm.total_cmp(bn) {
            Ordering::Less => true,
            Ordering::Equal => lexicographic(&candidate, bv).is_lt(),
            Ordering::Greater => false,
        },
    };
    if better {
        *best = Some((norm, candidate));
    }
}

pub fn enumerate_feasibility(problem: &FeasibilityProblem) -> Result<OracleVerdict> {
    check_budget(problem)?;
    let (a, b, n) = (problem.a(), problem.b().as_slice(), problem.n());
    let r = rank(a);

    let mut basic_feasible_points: Vec<Vector> = Vec::new();
    if r > 0 {
        for mask in (0u32..1 << n).filter(|m| m.count_ones() as usize == r) {
            let cols = subset(mask, n);
            let basis = a.select_columns(&cols);
            if rank(&basis) != r {
                continue;
            }
            let Some(xb) = consistent_solution(&basis, b) else {
                continue;
            };
            if let Some(x) = nonnegative_embedding(&xb, &cols, n) {
                let dup = basic_feasible_points.iter().any(|p| {
                    let scale = norm_inf(p).max(1.0);
                    p.iter().zip(x.iter()).all(|(s, t)| (s - t).abs() <= 1e-9 * scale)
                });
                if !dup {
                    basic_feasible_points.push(x);
                }
            }
        }
    }
    let feasible = !basic_feasible_points.is_empty();

    let mut best: Option<(f64, Vector)> = None;
    if feasible {
        for mask in 1u32..1 << n {
            let cols = subset(mask, n);
            let Some(xf) = consistent_solution(&a.select_columns(&cols), b) else {
                continue;
            };
            if let Some(x) = nonnegative_embedding(&xf, &cols, n) {
                keep_smaller(&mut best, x);
            }
        }
    }

    let min_norm_ii_witness = if !feasible && problem.m() <= MAX_WITNESS_ROWS {
        min_norm_ii_witness(problem)?
    } else {
        None
    };

    Ok(OracleVerdict {
        feasible,
        min_norm_point: best.map(|(_, x)| x),
        basic_feasible_points,
        min_norm_ii_witness,
    })
}

/// Minimal-norm `u` with `Aᵀu ≤ 0, bᵀu = ρ`, or `None` if there is none.
pub fn min_norm_ii_witness(problem: &FeasibilityProblem) -> Result<Option<Vector>> {
    check_budget(problem)?;
    let (m, n) = (problem.m(), problem.n());
    if m > MAX_WITNESS_ROWS {
        return Err(Error::BudgetExceeded(format!(
            "m = {m} exceeds {MAX_WITNESS_ROWS}"
        )));
    }
    let (a, b, rho) = (problem.a(), problem.b(), problem.rho());
    let a_scale = a.max_abs();

    let mut best: Option<(f64, Vector)> = None;
    // b is independent of any active set, so at most m − 1 columns are needed.
    for mask in (0u32..1 << n).filter(|s| (s.count_ones() as usize) < m) {
        let active = subset(mask, n);
        let mut rows: Vec<Vec<f64>> = active.iter().map(|&j| a.column(j)).collect();
        rows.push(b.to_vec());
        let mut rhs = vec![0.0; active.len()];
        rhs.push(rho);
        let system = DenseMatrix::from_raw(rows.len(), m, rows.concat());
        let Some(u) = consistent_solution(&system, &rhs) else {
            continue;
        };
        let tol = SIGN_TOL * (a_scale * u.iter().map(|v| v.abs()).sum::<f64>()).max(1.0);
        if a.tr_mul_vec(&u).iter().all(|&v| v <= tol) {
            keep_smaller(&mut best, u);
        }
    }
    Ok(best.map(|(_, u)| u))
}
