use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Vector};

/// The instance `Ax = b, x ≥ 0` together with the normalization `ρ > 0` of
/// its alternative `Aᵀu ≤ 0, bᵀu = ρ`.
#[derive(Clone, Debug)]
pub struct FeasibilityProblem {
    a: DenseMatrix,
    b: Vector,
    rho: f64,
}

impl FeasibilityProblem {
    pub fn new(a: DenseMatrix, b: Vector, rho: f64) -> Result<Self> {
        if b.len() != a.rows() {
            return Err(Error::DimensionMismatch {
                what: "b",
                expected: a.rows(),
                found: b.len(),
            });
        }
        if a.cols() == 0 {
            return Err(Error::InvalidArgument("A must have at least one column".into()));
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::InvalidRho(rho));
        }
        if b.norm() == 0.0 {
            return Err(Error::ZeroRhs);
        }
        Ok(Self { a, b, rho })
    }

    /// Convenience constructor from row slices with `ρ = 1`.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], b: &[f64]) -> Result<Self> {
        Self::new(DenseMatrix::from_rows(rows)?, Vector::new(b.to_vec())?, 1.0)
    }

    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), rho)
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &Vector {
        &self.b
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_rhs_and_bad_rho() {
        assert!(matches!(
            FeasibilityProblem::from_rows(&[[1.0, 1.0]], &[0.0]),
            Err(Error::ZeroRhs)
        ));
        let p = FeasibilityProblem::from_rows(&[[1.0, 1.0]], &[1.0]).unwrap();
        assert!(matches!(p.with_rho(0.0), Err(Error::InvalidRho(_))));
        assert!(matches!(p.with_rho(f64::NAN), Err(Error::InvalidRho(_))));
        assert_eq!(p.with_rho(17.0).unwrap().rho(), 17.0);
    }

    #[test]
    fn rejects_mismatched_rhs() {
        let err = FeasibilityProblem::from_rows(&[[1.0, 1.0]], &[1.0, 2.0]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }
}
