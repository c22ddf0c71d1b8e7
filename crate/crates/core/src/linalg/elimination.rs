//! Gauss–Jordan elimination with rank detection and null-space bases.
//!
//! Pivots are chosen by scaled complete pivoting: each candidate entry is
//! measured relative to the largest magnitude of its original row, so the
//! pivot sequence and the detected rank do not change when a row is rescaled.

use super::matrix::{axpy, DenseMatrix};
use crate::error::{Error, Result};

/// Relative pivot threshold `max(rows, cols) * eps`.
pub fn default_pivot_tol(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON
}

#[derive(Clone, Debug)]
pub struct EliminationResult {
    /// Reduced row echelon form, columns in the original order.
    pub reduced: DenseMatrix,
    /// Original column index of the pivot in each of the first `rank` rows.
    pub pivot_columns: Vec<usize>,
    pub rank: usize,
    /// `pivot_columns` followed by the remaining columns in increasing order.
    /// Reading `reduced` in this order gives `[I_rank | N]`.
    pub column_permutation: Vec<usize>,
    /// Accumulated row operations `T` with `T * M = reduced`.
    pub row_transform: DenseMatrix,
}

/// Reduces `m` to row echelon form with unit pivots and zeros above and below
/// every pivot. Entries whose magnitude falls below `pivot_tol` times the
/// scale of their row are treated as zero.
pub fn gauss_jordan(m: &DenseMatrix, pivot_tol: f64) -> Result<EliminationResult> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::InvalidArgument("gauss_jordan: empty matrix".into()));
    }
    if !(pivot_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gauss_jordan: pivot_tol must be positive, got {pivot_tol}"
        )));
    }
    if m.entries().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput("gauss_jordan"));
    }

    let (rows, cols) = (m.rows(), m.cols());
    let mut work: Vec<Vec<f64>> = m.to_rows();
    let mut transform: Vec<Vec<f64>> = DenseMatrix::identity(rows).to_rows();
    let mut scale: Vec<f64> = work
        .iter()
        .map(|r| r.iter().fold(0.0_f64, |acc, v| acc.max(v.abs())))
        .collect();
    let mut is_pivot = vec![false; cols];
    let mut pivot_columns = Vec::new();

    for r in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in r..rows {
            if scale[i] == 0.0 {
                continue;
            }
            for j in (0..cols).filter(|&j| !is_pivot[j]) {
                let score = work[i][j].abs() / scale[i];
                if best.is_none_or(|(_, _, s)| score > s) {
                    best = Some((i, j, score));
                }
            }
        }
        let Some((pi, pj, score)) = best.filter(|&(_, _, s)| s > pivot_tol) else {
            break;
        };
        debug_assert!(score > 0.0);

        work.swap(r, pi);
        transform.swap(r, pi);
        scale.swap(r, pi);

        let inv = 1.0 / work[r][pj];
        work[r].iter_mut().for_each(|v| *v *= inv);
        transform[r].iter_mut().for_each(|v| *v *= inv);
        work[r][pj] = 1.0;

        let pivot_row = work[r].clone();
        let pivot_transform = transform[r].clone();
        for i in (0..rows).filter(|&i| i != r) {
            let factor = work[i][pj];
            if factor != 0.0 {
                axpy(-factor, &pivot_row, &mut work[i]);
                axpy(-factor, &pivot_transform, &mut transform[i]);
                work[i][pj] = 0.0;
            }
        }

        is_pivot[pj] = true;
        pivot_columns.push(pj);
    }

    let rank = pivot_columns.len();
    // Rows past the rank hold only sub-threshold noise.
    for row in work.iter_mut().skip(rank) {
        row.iter_mut().for_each(|v| *v = 0.0);
    }
    for (i, row) in work.iter_mut().enumerate().take(rank) {
        for (j, v) in row.iter_mut().enumerate() {
            if !is_pivot[j] && v.abs() <= pivot_tol * scale[i] {
                *v = 0.0;
            }
        }
    }

    let mut column_permutation = pivot_columns.clone();
    column_permutation.extend((0..cols).filter(|&j| !is_pivot[j]));

    Ok(EliminationResult {
        reduced: DenseMatrix::from_raw(rows, cols, work.concat()),
        pivot_columns,
        rank,
        column_permutation,
        row_transform: DenseMatrix::from_raw(rows, rows, transform.concat()),
    })
}

/// Rank of `m` under the default pivot threshold. Empty matrices have rank 0.
pub fn rank(m: &DenseMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    gauss_jordan(m, default_pivot_tol(m.rows(), m.cols()))
        .map(|e| e.rank)
        .unwrap_or(0)
}

/// Basis of the null space of a full-row-rank matrix, one basis vector per row.
#[derive(Clone, Debug)]
pub struct NullSpaceBasis {
    /// `ν x n`, columns in the original order of `A`.
    pub k: DenseMatrix,
    pub nullity: usize,
    /// Column order in which `K = [-Nᵀ | I_ν]`.
    pub source_permutation: Vec<usize>,
}

impl NullSpaceBasis {
    /// True when `A` is square and nonsingular, so `K` is `0 x n`.
    pub fn is_trivial(&self) -> bool {
        self.nullity == 0
    }

    /// `max |(A Kᵀ)_ij|`.
    pub fn null_residual(&self, a: &DenseMatrix) -> f64 {
        if self.nullity == 0 {
            return 0.0;
        }
        a.mul_transpose(&self.k).max_abs()
    }
}

/// Null-space tolerance `1e-10 * max|A| * n`.
pub fn null_tolerance(a: &DenseMatrix) -> f64 {
    1e-10 * a.max_abs() * a.cols() as f64
}

/// Builds `K = [-Nᵀ | I_ν]` from the reduced form `[I_m | N]` of `A` and
/// returns it in the original column order.
pub fn null_space_basis(a: &DenseMatrix) -> Result<NullSpaceBasis> {
    let el = gauss_jordan(a, default_pivot_tol(a.rows(), a.cols()))?;
    if el.rank < a.rows() {
        return Err(Error::RankDeficient {
            rank: el.rank,
            rows: a.rows(),
        });
    }
    let (m, n) = (a.rows(), a.cols());
    let nullity = n - m;
    let perm = &el.column_permutation;
    let mut k = DenseMatrix::zeros(nullity, n);
    for row in 0..nullity {
        let free_col = perm[m + row];
        k.set(row, free_col, 1.0);
        for (i, &pivot_col) in perm.iter().take(m).enumerate() {
            k.set(row, pivot_col, -el.reduced[(i, free_col)]);
        }
    }
    Ok(NullSpaceBasis {
        k,
        nullity,
        source_permutation: el.column_permutation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn single_row_is_already_reduced() {
        let el = gauss_jordan(&mat(&[&[1.0, 1.0]]), 1e-12).unwrap();
        assert_eq!(el.reduced, mat(&[&[1.0, 1.0]]));
        assert_eq!(el.pivot_columns, vec![0]);
        assert_eq!(el.rank, 1);
    }

    #[test]
    fn identity_block_form_is_kept() {
        let a = mat(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]]);
        let el = gauss_jordan(&a, 1e-12).unwrap();
        assert_eq!(el.reduced, a);
        assert_eq!(el.rank, 2);
        assert_eq!(el.pivot_columns, vec![0, 1]);
        assert_eq!(el.column_permutation, vec![0, 1, 2]);
    }

    #[test]
    fn duplicate_row_is_eliminated() {
        let el = gauss_jordan(&mat(&[&[1.0, 1.0], &[2.0, 2.0]]), 1e-12).unwrap();
        assert_eq!(el.rank, 1);
        assert_eq!(el.reduced.row(1), &[0.0, 0.0]);
    }

    #[test]
    fn row_transform_reproduces_reduced_form() {
        let a = mat(&[&[2.0, -1.0, 0.5, 3.0], &[0.3, 4.0, -2.0, 1.0], &[1.0, 1.0, 1.0, 1.0]]);
        let el = gauss_jordan(&a, default_pivot_tol(3, 4)).unwrap();
        let back = el.row_transform.matmul(&a);
        for (x, y) in back.entries().iter().zip(el.reduced.entries()) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let a = mat(&[&[1.0]]);
        assert!(matches!(gauss_jordan(&a, 0.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            gauss_jordan(&DenseMatrix::zeros(0, 3), 1e-12),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn null_space_of_single_row() {
        let a = mat(&[&[1.0, 1.0]]);
        let ns = null_space_basis(&a).unwrap();
        assert_eq!(ns.nullity, 1);
        assert_eq!(ns.k, mat(&[&[-1.0, 1.0]]));
        assert_eq!(a.mul_transpose(&ns.k).entries(), &[0.0]);
    }

    #[test]
    fn null_space_of_identity_block_matrix() {
        let a = mat(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]]);
        let ns = null_space_basis(&a).unwrap();
        assert_eq!(ns.k, mat(&[&[-1.0, -1.0, 1.0]]));
        assert_eq!(a.mul_transpose(&ns.k).entries(), &[0.0, 0.0]);
    }

    #[test]
    fn square_nonsingular_has_zero_nullity() {
        let ns = null_space_basis(&DenseMatrix::identity(2)).unwrap();
        assert!(ns.is_trivial());
        assert_eq!((ns.k.rows(), ns.k.cols()), (0, 2));
    }

    #[test]
    fn rank_deficient_reports_detected_rank() {
        let err = null_space_basis(&mat(&[&[1.0, 1.0], &[2.0, 2.0]])).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { rank: 1, rows: 2 }));
        assert_eq!(err.to_string(), "rank 1 < m=2");
    }

    #[test]
    fn permuted_pivots_still_give_original_column_order() {
        // Largest entries sit in the last columns, forcing column exchanges.
        let a = mat(&[&[0.1, 0.2, 5.0, 1.0], &[0.3, -0.1, 1.0, 7.0]]);
        let ns = null_space_basis(&a).unwrap();
        assert_eq!(ns.nullity, 2);
        assert!(ns.null_residual(&a) <= null_tolerance(&a));
        assert_eq!(rank(&ns.k), 2);
    }
}
