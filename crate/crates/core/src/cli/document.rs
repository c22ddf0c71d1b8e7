//! JSON certificate documents.
//!
//! Floats are written in shortest round-trip form, which reads back to the
//! identical `f64`.

use serde::{Deserialize, Serialize};

use crate::alternatives::{
    Certificate, Decision, DualSolution, FeasibilityProblem, PrimalSolution, Route,
};
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::solvers::{SolverKind, SolverReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualBlock {
    pub u_star: Vector,
    pub w1: Vector,
    pub w2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimalBlock {
    pub x_star: Vector,
    pub z: Vector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Identities {
    pub z_residual: Option<f64>,
    pub w_identity_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Run {
    pub kind: SolverKind,
    pub iterations: usize,
    pub objective: f64,
    pub grad_norm: f64,
    pub converged: bool,
}

/// `iterations`, `objective` and `grad_norm` belong to the solve the
/// certificate was recovered from; `runs` lists every solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverSummary {
    pub route: Route,
    pub iterations: usize,
    pub objective: f64,
    pub grad_norm: f64,
    pub runs: Vec<Run>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub status: Status,
    pub rho: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_normal: Option<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_cert: Option<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<DualBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primal: Option<PrimalBlock>,
    pub identities: Identities,
    pub solver: SolverSummary,
    pub normality_guaranteed: bool,
}

fn run_of(r: &SolverReport) -> Run {
    Run {
        kind: r.kind,
        iterations: r.iterations,
        objective: r.objective,
        grad_norm: r.grad_norm,
        converged: r.converged,
    }
}

impl CertificateDocument {
    pub fn from_decision(problem: &FeasibilityProblem, route: Route, decision: &Decision) -> Self {
        let cert = &decision.certificate;
        let source = match cert {
            Certificate::Feasible { dual: Some(_), .. } => SolverKind::Dual,
            Certificate::Feasible { dual: None, .. } => SolverKind::Primal,
            Certificate::Infeasible { primal: Some(_), .. } => SolverKind::Primal,
            Certificate::Infeasible { primal: None, .. } => SolverKind::Dual,
        };
        let main = decision
            .reports
            .iter()
            .find(|r| r.kind == source)
            .or(decision.reports.first());

        let (status, x_normal, u_cert, dual, primal) = match cert {
            Certificate::Feasible { x_normal, dual } => (
                Status::Feasible,
                Some(x_normal.clone()),
                None,
                dual.as_ref().map(|d| DualBlock {
                    u_star: d.u_star.clone(),
                    w1: d.w1.clone(),
                    w2: d.w2,
                }),
                None,
            ),
            Certificate::Infeasible { u_cert, primal } => (
                Status::Infeasible,
                None,
                Some(u_cert.clone()),
                None,
                primal.as_ref().map(|p| PrimalBlock {
                    x_star: p.x_star.clone(),
                    z: p.z.clone(),
                }),
            ),
        };

        CertificateDocument {
            status,
            rho: problem.rho(),
            x_normal,
            u_cert,
            dual,
            primal,
            identities: Identities {
                z_residual: decision.identities.z_identity_residual,
                w_identity_residual: decision.identities.w_identity_residual,
            },
            solver: SolverSummary {
                route,
                iterations: main.map_or(0, |r| r.iterations),
                objective: main.map_or(0.0, |r| r.objective),
                grad_norm: main.map_or(0.0, |r| r.grad_norm),
                runs: decision.reports.iter().map(run_of).collect(),
            },
            normality_guaranteed: cert.normality_guaranteed(),
        }
    }

    /// Rebuilds the certificate the document describes.
    pub fn certificate(&self) -> Result<Certificate> {
        let missing = |field: &str| {
            Error::InvalidArgument(format!("{} document lacks {field}", self.status_name()))
        };
        match self.status {
            Status::Feasible => Ok(Certificate::Feasible {
                x_normal: self.x_normal.clone().ok_or_else(|| missing("x_normal"))?,
                dual: self.dual.as_ref().map(|d| DualSolution {
                    u_star: d.u_star.clone(),
                    w1: d.w1.clone(),
                    w2: d.w2,
                }),
            }),
            Status::Infeasible => Ok(Certificate::Infeasible {
                u_cert: self.u_cert.clone().ok_or_else(|| missing("u_cert"))?,
                primal: self.primal.as_ref().map(|p| PrimalSolution {
                    x_star: p.x_star.clone(),
                    z: p.z.clone(),
                }),
            }),
        }
    }

    fn status_name(&self) -> &'static str {
        match self.status {
            Status::Feasible => "feasible",
            Status::Infeasible => "infeasible",
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alternatives::decide;
    use crate::solvers::SolverConfig;

    #[test]
    fn round_trip_is_exact() {
        let p = FeasibilityProblem::from_rows(&[[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]], &[1.0, 1.0])
            .unwrap()
            .with_rho(0.3)
            .unwrap();
        let d = decide(&p, &SolverConfig::default(), Route::Both).unwrap();
        let doc = CertificateDocument::from_decision(&p, Route::Both, &d);
        let back = CertificateDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.certificate().unwrap(), d.certificate);
    }

    #[test]
    fn missing_witness_is_rejected() {
        let text = r#"{"status":"feasible","rho":1.0,
            "identities":{"z_residual":null,"w_identity_residual":null},
            "solver":{"route":"dual","iterations":0,"objective":0.0,"grad_norm":0.0,"runs":[]},
            "normality_guaranteed":false}"#;
        let doc = CertificateDocument::from_json(text).unwrap();
        assert!(matches!(doc.certificate(), Err(Error::InvalidArgument(_))));
    }
}
