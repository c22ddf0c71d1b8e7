//! Householder QR with column pivoting and minimum-norm least squares.

use super::matrix::{dot, DenseMatrix, Vector};
use crate::error::{Error, Result};

/// `M P = Q R` with `Q` kept as Householder reflectors.
struct PivotedQr {
    /// Row-major working copy; the upper trapezoid holds `R`.
    r: Vec<Vec<f64>>,
    reflectors: Vec<(Vec<f64>, f64)>,
    /// `perm[k]` is the original column placed at position `k`.
    perm: Vec<usize>,
    rank: usize,
}

impl PivotedQr {
    fn new(m: &DenseMatrix) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        let mut r = m.to_rows();
        let mut perm: Vec<usize> = (0..cols).collect();
        let mut reflectors = Vec::new();
        let tol = rows.max(cols) as f64 * f64::EPSILON;
        let mut first_diag = 0.0;

        for k in 0..rows.min(cols) {
            let tail_norm = |j: usize, r: &[Vec<f64>]| -> f64 {
                r[k..].iter().map(|row| row[j] * row[j]).sum::<f64>().sqrt()
            };
            let (p, norm) = (k..cols)
                .map(|j| (j, tail_norm(j, &r)))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if k == 0 {
                first_diag = norm;
            }
            if norm == 0.0 || norm <= tol * first_diag {
                break;
            }
            if p != k {
                for row in r.iter_mut() {
                    row.swap(k, p);
                }
                perm.swap(k, p);
            }

            let x0 = r[k][k];
            let alpha = if x0 >= 0.0 { -norm } else { norm };
            let mut v: Vec<f64> = r[k..].iter().map(|row| row[k]).collect();
            v[0] -= alpha;
            let vtv = dot(&v, &v);
            let beta = if vtv == 0.0 { 0.0 } else { 2.0 / vtv };

            for j in k..cols {
                let s: f64 = v.iter().zip(&r[k..]).map(|(vi, row)| vi * row[j]).sum();
                let s = beta * s;
                for (vi, row) in v.iter().zip(r[k..].iter_mut()) {
                    row[j] -= s * vi;
                }
            }
            r[k][k] = alpha;
            for row in r[k + 1..].iter_mut() {
                row[k] = 0.0;
            }
            reflectors.push((v, beta));
        }

        let rank = reflectors.len();
        Self {
            r,
            reflectors,
            perm,
            rank,
        }
    }

    /// `y <- Qᵀ y`
    fn apply_qt(&self, y: &mut [f64]) {
        for (k, (v, beta)) in self.reflectors.iter().enumerate() {
            let s = beta * dot(v, &y[k..]);
            for (yi, vi) in y[k..].iter_mut().zip(v) {
                *yi -= s * vi;
            }
        }
    }

    /// `y <- Q y`
    fn apply_q(&self, y: &mut [f64]) {
        for (k, (v, beta)) in self.reflectors.iter().enumerate().rev() {
            let s = beta * dot(v, &y[k..]);
            for (yi, vi) in y[k..].iter_mut().zip(v) {
                *yi -= s * vi;
            }
        }
    }
}

/// Minimum-norm least-squares solution `M⁺ rhs`.
///
/// Uses a complete orthogonal decomposition: a pivoted QR of `M` exposes the
/// rank `k`, and a second QR of the leading `k` rows of `R` (transposed)
/// yields the minimum-norm solution of the resulting underdetermined system.
pub fn least_squares_apply(m: &DenseMatrix, rhs: &[f64]) -> Result<Vector> {
    if rhs.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            what: "least_squares_apply rhs",
            expected: m.rows(),
            found: rhs.len(),
        });
    }
    let cols = m.cols();
    if m.rows() == 0 || cols == 0 {
        return Ok(Vector::zeros(cols));
    }

    let qr = PivotedQr::new(m);
    let k = qr.rank;
    if k == 0 {
        return Ok(Vector::zeros(cols));
    }
    let mut c = rhs.to_vec();
    qr.apply_qt(&mut c);
    c.truncate(k);

    let z = if k == cols {
        back_substitute(&qr.r, &c)
    } else {
        // R1 = R[0..k, :] has full row rank; min-norm solve via QR of R1ᵀ.
        let r1t = DenseMatrix::from_raw(
            cols,
            k,
            (0..cols)
                .flat_map(|j| (0..k).map(move |i| (i, j)))
                .map(|(i, j)| qr.r[i][j])
                .collect(),
        );
        let qr2 = PivotedQr::new(&r1t);
        debug_assert_eq!(qr2.rank, k);
        // R1ᵀ P2 = Q2 R2  =>  R1 = P2 R2ᵀ Q2ᵀ ; solve R2ᵀ s = P2ᵀ c.
        let permuted: Vec<f64> = qr2.perm.iter().map(|&p| c[p]).collect();
        let s = forward_substitute_transposed(&qr2.r, &permuted);
        let mut z = s;
        z.resize(cols, 0.0);
        qr2.apply_q(&mut z);
        z
    };

    let mut x = vec![0.0; cols];
    for (pos, &orig) in qr.perm.iter().enumerate() {
        x[orig] = z[pos];
    }
    Vector::new(x)
}

/// Solves `R z = c` for the leading square upper-triangular block of `r`.
fn back_substitute(r: &[Vec<f64>], c: &[f64]) -> Vec<f64> {
    let k = c.len();
    let mut z = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| r[i][j] * z[j]).sum();
        z[i] = (c[i] - s) / r[i][i];
    }
    z
}

/// Solves `Rᵀ s = c` for the leading square upper-triangular block of `r`.
fn forward_substitute_transposed(r: &[Vec<f64>], c: &[f64]) -> Vec<f64> {
    let k = c.len();
    let mut s = vec![0.0; k];
    for i in 0..k {
        let acc: f64 = (0..i).map(|j| r[j][i] * s[j]).sum();
        s[i] = (c[i] - acc) / r[i][i];
    }
    s
}

/// Solves `H d = rhs` for symmetric positive definite `H` (row-major,
/// `n x n`). Returns `None` when a pivot is not safely positive.
pub(crate) fn cholesky_solve(h: &[f64], n: usize, rhs: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let s = h[i * n + j] - (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum::<f64>();
            if i == j {
                // Relative pivot floor: treat near-singular H as singular.
                if !(s > 0.0) || s <= 1e-13 * h[i * n + i] {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[i * n + k] * y[k]).sum();
        y[i] = (rhs[i] - s) / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[k * n + i] * x[k]).sum();
        x[i] = (y[i] - s) / l[i * n + i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}
