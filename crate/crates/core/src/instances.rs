//! Seeded random instances.
//!
//! All entries of `A` are standard normal.
//!
//! - `Feasible`: `b = A x₀` with `x₀ ≥ 0`; each component of `x₀` is zero with
//!   probability 1/4, otherwise `0.05 + |N(0,1)|`.
//! - `Infeasible`: a unit witness `u₀` is drawn first; every column with
//!   `a_jᵀu₀ > −margin_j` is shifted along `u₀` to `a_jᵀu₀ = −margin_j`,
//!   `margin_j = 0.1 + 0.5|N(0,1)|`, and `b` is a normal vector shifted along
//!   `u₀` to `bᵀu₀ = 0.5 + |N(0,1)|`. Then `u₀` strictly solves the
//!   alternative system.
//! - `Random`: `b` standard normal, no construction.
//!
//! Draw order is fixed, so a seed determines the instance bit for bit.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::alternatives::FeasibilityProblem;
use crate::error::{Error, Result};
use crate::linalg::{dot, DenseMatrix, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    Feasible,
    Infeasible,
    Random,
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstanceKind::Feasible => "feasible",
            InstanceKind::Infeasible => "infeasible",
            InstanceKind::Random => "random",
        })
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "feasible" => Ok(InstanceKind::Feasible),
            "infeasible" => Ok(InstanceKind::Infeasible),
            "random" => Ok(InstanceKind::Random),
            other => Err(Error::InvalidArgument(format!("unknown instance kind {other:?}"))),
        }
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn normal_vec<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| normal(rng)).collect()
}

pub fn random_instance<R: Rng>(
    rng: &mut R,
    kind: InstanceKind,
    m: usize,
    n: usize,
    rho: f64,
) -> Result<FeasibilityProblem> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("instance sizes must be positive".into()));
    }
    let mut cols: Vec<Vec<f64>> = (0..n).map(|_| normal_vec(rng, m)).collect();

    let b = match kind {
        InstanceKind::Feasible => {
            let mut x0: Vec<f64> = (0..n)
                .map(|_| {
                    let zero = rng.random_bool(0.25);
                    let mag = 0.05 + normal(rng).abs();
                    if zero {
                        0.0
                    } else {
                        mag
                    }
                })
                .collect();
            if x0.iter().all(|&v| v == 0.0) {
                x0[0] = 1.0;
            }
            let mut b = vec![0.0; m];
            for (col, &xj) in cols.iter().zip(&x0) {
                for (bi, aij) in b.iter_mut().zip(col) {
                    *bi += aij * xj;
                }
            }
            b
        }
        InstanceKind::Infeasible => {
            let mut u0 = normal_vec(rng, m);
            let len = dot(&u0, &u0).sqrt();
            u0.iter_mut().for_each(|v| *v /= len);
            for col in cols.iter_mut() {
                let margin = 0.1 + 0.5 * normal(rng).abs();
                let s = dot(col, &u0);
                if s > -margin {
                    let shift = s + margin;
                    col.iter_mut().zip(&u0).for_each(|(a, u)| *a -= shift * u);
                }
            }
            let target = 0.5 + normal(rng).abs();
            let mut b = normal_vec(rng, m);
            let shift = dot(&b, &u0) - target;
            b.iter_mut().zip(&u0).for_each(|(bi, u)| *bi -= shift * u);
            b
        }
        InstanceKind::Random => normal_vec(rng, m),
    };

    let mut entries = vec![0.0; m * n];
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            entries[i * n + j] = v;
        }
    }
    FeasibilityProblem::new(DenseMatrix::new(m, n, entries)?, Vector::new(b)?, rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        for kind in [InstanceKind::Feasible, InstanceKind::Infeasible, InstanceKind::Random] {
            let p = random_instance(&mut seeded_rng(7), kind, 3, 5, 1.0).unwrap();
            let q = random_instance(&mut seeded_rng(7), kind, 3, 5, 1.0).unwrap();
            assert_eq!(p.a(), q.a());
            assert_eq!(p.b(), q.b());
        }
    }

    #[test]
    fn infeasible_construction_embeds_a_witness() {
        let mut rng = seeded_rng(11);
        for _ in 0..20 {
            let p = random_instance(&mut rng, InstanceKind::Infeasible, 4, 7, 1.0).unwrap();
            let witness = crate::oracle::min_norm_ii_witness(&p).unwrap();
            assert!(witness.is_some());
        }
    }
}
