//! Residual objectives and their gradients.

use crate::linalg::{axpy, dot, norm2, DenseMatrix};

/// `½‖b − Ax‖²`
pub fn primal_objective(a: &DenseMatrix, b: &[f64], x: &[f64]) -> f64 {
    let r: Vec<f64> = a.mul_vec(x).iter().zip(b).map(|(ax, bi)| ax - bi).collect();
    0.5 * dot(&r, &r)
}

/// `Aᵀ(Ax − b)`
pub fn primal_gradient(a: &DenseMatrix, b: &[f64], x: &[f64]) -> Vec<f64> {
    let r: Vec<f64> = a.mul_vec(x).iter().zip(b).map(|(ax, bi)| ax - bi).collect();
    a.tr_mul_vec(&r)
}

/// `½{‖(Aᵀu)₊‖² + (ρ − bᵀu)²}`
pub fn dual_objective(a: &DenseMatrix, b: &[f64], rho: f64, u: &[f64]) -> f64 {
    PiecewiseQuadratic::dual(a, b, rho).value(u)
}

/// `A(Aᵀu)₊ − b(ρ − bᵀu)`
pub fn dual_gradient(a: &DenseMatrix, b: &[f64], rho: f64, u: &[f64]) -> Vec<f64> {
    PiecewiseQuadratic::dual(a, b, rho).gradient(u)
}

/// `½‖(Kᵀy − x̄)₊‖²`; zero exactly when `Kᵀy ≤ x̄`.
pub fn reduced_objective(k: &DenseMatrix, x_bar: &[f64], y: &[f64]) -> f64 {
    PiecewiseQuadratic::reduced(k, x_bar).value(y)
}

/// `K(Kᵀy − x̄)₊`
pub fn reduced_gradient(k: &DenseMatrix, x_bar: &[f64], y: &[f64]) -> Vec<f64> {
    PiecewiseQuadratic::reduced(k, x_bar).gradient(y)
}

/// `φ(u) = ½‖(Mᵀu − c)₊‖² + ½(ρ − bᵀu)²`, where the second term is optional.
///
/// Both the alternative-system residual (`M = A`, `c = 0`, with the affine
/// term) and the reduced residual (`M = K`, `c = x̄`, without it) have this shape.
pub(crate) struct PiecewiseQuadratic<'a> {
    mat: &'a DenseMatrix,
    shift: Option<&'a [f64]>,
    affine: Option<(&'a [f64], f64)>,
}

impl<'a> PiecewiseQuadratic<'a> {
    pub(crate) fn dual(a: &'a DenseMatrix, b: &'a [f64], rho: f64) -> Self {
        Self {
            mat: a,
            shift: None,
            affine: Some((b, rho)),
        }
    }

    pub(crate) fn reduced(k: &'a DenseMatrix, x_bar: &'a [f64]) -> Self {
        Self {
            mat: k,
            shift: Some(x_bar),
            affine: None,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// `Mᵀu − c`
    pub(crate) fn pieces(&self, u: &[f64]) -> Vec<f64> {
        let mut t = self.mat.tr_mul_vec(u);
        if let Some(c) = self.shift {
            axpy(-1.0, c, &mut t);
        }
        t
    }

    fn affine_residual(&self, u: &[f64]) -> Option<(&'a [f64], f64)> {
        self.affine.map(|(b, rho)| (b, rho - dot(b, u)))
    }

    pub(crate) fn value(&self, u: &[f64]) -> f64 {
        let pos: f64 = self.pieces(u).iter().map(|&t| t.max(0.0).powi(2)).sum();
        let aff = self.affine_residual(u).map_or(0.0, |(_, w)| w * w);
        0.5 * (pos + aff)
    }

    /// First-order bound on the rounding error of [`Self::value`] at `u`,
    /// from the magnitudes that cancel in `Mᵀu − c` and `ρ − bᵀu`.
    pub(crate) fn value_rounding_bound(&self, u: &[f64]) -> f64 {
        let d = self.dim() as f64 + 2.0;
        let abs_u: Vec<f64> = u.iter().map(|v| v.abs()).collect();
        let pieces = self.pieces(u);
        let mut bound = 0.0;
        for (j, &t) in pieces.iter().enumerate() {
            if t > 0.0 {
                let col = self.mat.column(j);
                let mag: f64 = col.iter().zip(&abs_u).map(|(m, a)| m.abs() * a).sum::<f64>()
                    + self.shift.map_or(0.0, |c| c[j].abs());
                bound += t * (d * mag + t);
            }
        }
        if let Some((b, rho)) = self.affine {
            let w = rho - dot(b, u);
            let mag: f64 = rho.abs() + b.iter().zip(&abs_u).map(|(p, a)| p.abs() * a).sum::<f64>();
            bound += w.abs() * (d * mag + w.abs());
        }
        f64::EPSILON * bound
    }

    /// First-order bound on the rounding error in `‖∇φ(u)‖`. Pieces within
    /// rounding of zero are counted, since their sign is not resolved.
    pub(crate) fn gradient_rounding_bound(&self, u: &[f64]) -> f64 {
        let d = self.dim() as f64 + 2.0;
        let abs_u: Vec<f64> = u.iter().map(|v| v.abs()).collect();
        let mut bound = 0.0;
        for (j, &t) in self.pieces(u).iter().enumerate() {
            let col = self.mat.column(j);
            let mag: f64 = col.iter().zip(&abs_u).map(|(m, a)| m.abs() * a).sum::<f64>()
                + self.shift.map_or(0.0, |c| c[j].abs());
            if t > -d * f64::EPSILON * mag {
                bound += norm2(&col) * (mag + t.max(0.0));
            }
        }
        if let Some((b, rho)) = self.affine {
            let w = rho - dot(b, u);
            let mag: f64 = rho.abs() + b.iter().zip(&abs_u).map(|(p, a)| p.abs() * a).sum::<f64>();
            bound += norm2(b) * (mag + w.abs());
        }
        d * f64::EPSILON * bound
    }

    pub(crate) fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let pos: Vec<f64> = self.pieces(u).iter().map(|&t| t.max(0.0)).collect();
        let mut g = self.mat.mul_vec(&pos);
        if let Some((b, w)) = self.affine_residual(u) {
            axpy(-w, b, &mut g);
        }
        g
    }

    /// Pieces with strictly positive value. Ties at zero count as inactive.
    pub(crate) fn active(&self, u: &[f64]) -> Vec<usize> {
        self.pieces(u)
            .iter()
            .enumerate()
            .filter(|(_, &t)| t > 0.0)
            .map(|(j, _)| j)
            .collect()
    }

    /// Generalized Hessian `M D(u) Mᵀ + b bᵀ`, row-major.
    pub(crate) fn hessian(&self, active: &[usize]) -> Vec<f64> {
        let d = self.dim();
        let mut h = vec![0.0; d * d];
        for &j in active {
            let col = self.mat.column(j);
            for p in 0..d {
                if col[p] != 0.0 {
                    axpy(col[p], &col, &mut h[p * d..(p + 1) * d]);
                }
            }
        }
        if let Some((b, _)) = self.affine {
            for p in 0..d {
                axpy(b[p], b, &mut h[p * d..(p + 1) * d]);
            }
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_objective_at_origin_is_half_rho_squared() {
        let a = DenseMatrix::from_rows(&[[1.0, -2.0], [0.5, 3.0]]).unwrap();
        assert_eq!(dual_objective(&a, &[1.0, 2.0], 3.0, &[0.0, 0.0]), 4.5);
    }

    #[test]
    fn reduced_objective_vanishes_on_feasible_interval() {
        let k = DenseMatrix::from_rows(&[[-1.0, 1.0]]).unwrap();
        for y in [-0.5, 0.0, 0.25, 0.5] {
            assert_eq!(reduced_objective(&k, &[0.5, 0.5], &[y]), 0.0);
        }
        // y = 1 violates the second inequality by 0.5.
        assert_eq!(reduced_objective(&k, &[0.5, 0.5], &[1.0]), 0.125);
    }

    #[test]
    fn hessian_of_dual_counts_only_positive_pieces() {
        let a = DenseMatrix::from_rows(&[[1.0, -1.0]]).unwrap();
        let q = PiecewiseQuadratic::dual(&a, &[1.0], 1.0);
        assert_eq!(q.active(&[2.0]), vec![0]);
        assert_eq!(q.hessian(&q.active(&[2.0])), vec![2.0]);
        assert!(q.active(&[0.0]).is_empty());
    }
}
