//! Independent re-check of a certificate against its problem data.
//!
//! Everything here is recomputed with plain loops over the raw entries so the
//! check does not share arithmetic with the solvers that produced the
//! certificate.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::certificate::{Certificate, DualIdentityReport, DualSolution, PrimalSolution};
use super::problem::FeasibilityProblem;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// A single verifiable statement about a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Clause {
    Dimensions,
    /// `Ax = b`
    Equality,
    /// `x ≥ 0`
    Nonnegative,
    /// `w₁ = (Aᵀu)₊`
    W1Definition,
    /// `w₂ = ρ − bᵀu`
    W2Definition,
    /// `w₂ > 0`
    W2Positive,
    /// `x = w₁/w₂`
    Quotient,
    /// `‖w₁‖² + w₂² = ρw₂`
    WIdentity,
    /// `Aᵀu ≤ 0`
    DualCone,
    /// `bᵀu = ρ`
    Normalization,
    /// `z = b − Ax`
    ZDefinition,
    /// `z ≠ 0`
    ZNonzero,
    /// `‖z‖² = bᵀz`
    ZIdentity,
    /// Agreement with brute-force enumeration.
    Oracle,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Dimensions => "dimensions",
            Clause::Equality => "Ax=b",
            Clause::Nonnegative => "x>=0",
            Clause::W1Definition => "w1=(A^T u)+",
            Clause::W2Definition => "w2=rho-b^T u",
            Clause::W2Positive => "w2>0",
            Clause::Quotient => "x=w1/w2",
            Clause::WIdentity => "|w1|^2+w2^2=rho*w2",
            Clause::DualCone => "A^T u<=0",
            Clause::Normalization => "b^T u=rho",
            Clause::ZDefinition => "z=b-Ax",
            Clause::ZNonzero => "z!=0",
            Clause::ZIdentity => "|z|^2=b^T z",
            Clause::Oracle => "oracle",
        })
    }
}

fn require(clause: Clause, violation: f64, limit: f64) -> Result<()> {
    // NaN violations fail as well.
    if violation <= limit {
        Ok(())
    } else {
        Err(Error::CertificateInvalid { clause, violation })
    }
}

fn times(a: &DenseMatrix, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.rows()];
    for (i, o) in out.iter_mut().enumerate() {
        for (j, xj) in x.iter().enumerate() {
            *o += a[(i, j)] * xj;
        }
    }
    out
}

fn times_transposed(a: &DenseMatrix, u: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.cols()];
    for (j, o) in out.iter_mut().enumerate() {
        for (i, ui) in u.iter().enumerate() {
            *o += a[(i, j)] * ui;
        }
    }
    out
}

fn inner(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += a[i] * b[i];
    }
    s
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn check_len(len: usize, expected: usize) -> Result<()> {
    require(Clause::Dimensions, (len != expected) as u8 as f64, 0.0)
}

/// Re-derives every clause of `cert` and both dual identities. Clauses are
/// checked with absolute tolerance `verify_tol`; the identities and the
/// normalization use it relative to `max(1, ‖b‖²)` and `max(1, ρ²)`.
pub fn verify_certificate(
    problem: &FeasibilityProblem,
    cert: &Certificate,
    verify_tol: f64,
) -> Result<DualIdentityReport> {
    let (a, b, rho) = (problem.a(), problem.b().as_slice(), problem.rho());
    let (m, n) = (problem.m(), problem.n());
    let mut report = DualIdentityReport::default();

    match cert {
        Certificate::Feasible { x_normal, dual } => {
            check_len(x_normal.len(), n)?;
            let ax = times(a, x_normal);
            require(Clause::Equality, max_abs_diff(&ax, b), verify_tol)?;
            let most_negative = x_normal.iter().fold(0.0_f64, |acc, &v| acc.max(-v));
            require(Clause::Nonnegative, most_negative, verify_tol)?;

            if let Some(DualSolution { u_star, w1, w2 }) = dual {
                check_len(u_star.len(), m)?;
                check_len(w1.len(), n)?;
                let atu: Vec<f64> = times_transposed(a, u_star)
                    .into_iter()
                    .map(|v| v.max(0.0))
                    .collect();
                require(Clause::W1Definition, max_abs_diff(&atu, w1), verify_tol)?;
                let w2_direct = rho - inner(b, u_star);
                require(Clause::W2Definition, (w2_direct - w2).abs(), verify_tol)?;
                if !(*w2 > 0.0) {
                    return Err(Error::CertificateInvalid {
                        clause: Clause::W2Positive,
                        violation: -w2,
                    });
                }
                let quotient: Vec<f64> = w1.iter().map(|v| v / w2).collect();
                let x_scale = x_normal.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
                require(
                    Clause::Quotient,
                    max_abs_diff(&quotient, x_normal),
                    verify_tol * x_scale,
                )?;
                let w_res = (inner(w1, w1) + w2 * w2 - rho * w2).abs();
                require(Clause::WIdentity, w_res, verify_tol * rho.powi(2).max(1.0))?;
                report.w_identity_residual = Some(w_res);
            }
        }
        Certificate::Infeasible { u_cert, primal } => {
            check_len(u_cert.len(), m)?;
            let atu = times_transposed(a, u_cert);
            let most_positive = atu.iter().fold(0.0_f64, |acc, &v| acc.max(v));
            require(Clause::DualCone, most_positive, verify_tol)?;
            let bu = inner(b, u_cert);
            require(Clause::Normalization, (bu - rho).abs(), verify_tol * rho.max(1.0))?;

            if let Some(PrimalSolution { x_star, z }) = primal {
                check_len(x_star.len(), n)?;
                check_len(z.len(), m)?;
                let ax = times(a, x_star);
                let direct: Vec<f64> = b.iter().zip(&ax).map(|(bi, axi)| bi - axi).collect();
                require(Clause::ZDefinition, max_abs_diff(&direct, z), verify_tol)?;
                let most_negative = x_star.iter().fold(0.0_f64, |acc, &v| acc.max(-v));
                require(Clause::Nonnegative, most_negative, verify_tol)?;
                let zz = inner(z, z);
                if !(zz > 0.0) {
                    return Err(Error::CertificateInvalid {
                        clause: Clause::ZNonzero,
                        violation: 0.0,
                    });
                }
                let z_res = (zz - inner(b, z)).abs();
                require(Clause::ZIdentity, z_res, verify_tol * inner(b, b).max(1.0))?;
                report.z_identity_residual = Some(z_res);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alternatives::{decide, Route};
    use crate::linalg::Vector;
    use crate::solvers::SolverConfig;

    #[test]
    fn worked_feasible_certificate_has_zero_w_identity() {
        let p = FeasibilityProblem::from_rows(&[[1.0, 1.0]], &[1.0]).unwrap();
        let d = decide(&p, &SolverConfig::default(), Route::Dual).unwrap();
        let rep = verify_certificate(&p, &d.certificate, 1e-7).unwrap();
        assert!(rep.w_identity_residual.unwrap() < 1e-15);
        assert_eq!(rep.z_identity_residual, None);
    }

    #[test]
    fn worked_infeasible_certificate_has_zero_z_identity() {
        let p = FeasibilityProblem::from_rows(&[[1.0]], &[-1.0]).unwrap();
        let d = decide(&p, &SolverConfig::default(), Route::Primal).unwrap();
        let rep = verify_certificate(&p, &d.certificate, 1e-7).unwrap();
        assert_eq!(rep.z_identity_residual, Some(0.0));
    }

    #[test]
    fn tampered_normal_solution_names_equality_clause() {
        let p = FeasibilityProblem::from_rows(&[[1.0, 1.0]], &[1.0]).unwrap();
        let d = decide(&p, &SolverConfig::default(), Route::Both).unwrap();
        let Certificate::Feasible { x_normal, dual } = d.certificate else {
            panic!("expected feasible");
        };
        let mut x = x_normal.into_inner();
        x[0] += 1e-3;
        let tampered = Certificate::Feasible {
            x_normal: Vector::new(x).unwrap(),
            dual,
        };
        match verify_certificate(&p, &tampered, 1e-7) {
            Err(Error::CertificateInvalid { clause, .. }) => {
                assert_eq!(clause, Clause::Equality);
                assert_eq!(clause.to_string(), "Ax=b");
            }
            other => panic!("expected CertificateInvalid, got {other:?}"),
        }
    }

    #[test]
    fn certificate_for_wrong_problem_is_rejected() {
        let p = FeasibilityProblem::from_rows(&[[1.0]], &[-1.0]).unwrap();
        let bogus = Certificate::Infeasible {
            u_cert: Vector::new(vec![1.0]).unwrap(),
            primal: None,
        };
        let err = verify_certificate(&p, &bogus, 1e-7).unwrap_err();
        assert!(matches!(
            err,
            Error::CertificateInvalid {
                clause: Clause::DualCone,
                ..
            }
        ));
        let short = Certificate::Infeasible {
            u_cert: Vector::new(vec![]).unwrap(),
            primal: None,
        };
        assert!(matches!(
            verify_certificate(&p, &short, 1e-7),
            Err(Error::CertificateInvalid {
                clause: Clause::Dimensions,
                ..
            })
        ));
    }
}
