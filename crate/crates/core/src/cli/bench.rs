//! Timing table over seeded random instances.

use std::fmt::Write as _;
use std::time::Instant;

use clap::ValueEnum;

use crate::alternatives::{decide, FeasibilityProblem, Route};
use crate::error::Result;
use crate::instances::{random_instance, seeded_rng, InstanceKind};
use crate::reduction::build_reduction;
use crate::solvers::SolverConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchRoute {
    Primal,
    Dual,
    Both,
    /// Reduced residual over the null-space basis.
    Reduced,
}

impl BenchRoute {
    fn name(self) -> &'static str {
        match self {
            BenchRoute::Primal => "primal",
            BenchRoute::Dual => "dual",
            BenchRoute::Both => "both",
            BenchRoute::Reduced => "reduced",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchKind {
    Feasible,
    Infeasible,
    /// Alternates feasible and infeasible, starting with feasible.
    Mixed,
    Random,
}

impl BenchKind {
    fn for_instance(self, index: usize) -> InstanceKind {
        match self {
            BenchKind::Feasible => InstanceKind::Feasible,
            BenchKind::Infeasible => InstanceKind::Infeasible,
            BenchKind::Random => InstanceKind::Random,
            BenchKind::Mixed if index % 2 == 0 => InstanceKind::Feasible,
            BenchKind::Mixed => InstanceKind::Infeasible,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub m: usize,
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub routes: Vec<BenchRoute>,
    pub kind: BenchKind,
    /// Print `-` instead of wall times, making the table reproducible.
    pub hide_time: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub instance: usize,
    pub kind: InstanceKind,
    pub route: BenchRoute,
    pub seconds: f64,
    pub iterations: usize,
    /// `feasible`, `infeasible`, or `error:<code>`.
    pub verdict: String,
}

fn run_route(problem: &FeasibilityProblem, route: BenchRoute, cfg: &SolverConfig) -> Result<(usize, bool)> {
    let decided = |r: Route| -> Result<(usize, bool)> {
        let d = decide(problem, cfg, r)?;
        let iterations = d.reports.iter().map(|r| r.iterations).sum();
        Ok((iterations, d.certificate.is_feasible()))
    };
    match route {
        BenchRoute::Primal => decided(Route::Primal),
        BenchRoute::Dual => decided(Route::Dual),
        BenchRoute::Both => decided(Route::Both),
        BenchRoute::Reduced => {
            let red = build_reduction(problem)?;
            let (y, rep) = red.solve_primal_reduced(cfg)?;
            Ok((rep.iterations, y.is_some()))
        }
    }
}

/// Instances are drawn in order from one seeded stream, so the same options
/// produce the same instances and verdicts.
pub fn run_bench(opts: &BenchOptions, cfg: &SolverConfig) -> Result<Vec<BenchRow>> {
    let mut rng = seeded_rng(opts.seed);
    let mut rows = Vec::with_capacity(opts.count * opts.routes.len());
    for instance in 0..opts.count {
        let kind = opts.kind.for_instance(instance);
        let problem = random_instance(&mut rng, kind, opts.m, opts.n, 1.0)?;
        for &route in &opts.routes {
            let start = Instant::now();
            let outcome = run_route(&problem, route, cfg);
            let seconds = start.elapsed().as_secs_f64();
            let (iterations, verdict) = match outcome {
                Ok((it, true)) => (it, "feasible".to_string()),
                Ok((it, false)) => (it, "infeasible".to_string()),
                Err(e) => (0, format!("error:{}", e.code())),
            };
            log::debug!("instance {instance} route {} -> {verdict}", route.name());
            rows.push(BenchRow {
                instance,
                kind,
                route,
                seconds,
                iterations,
                verdict,
            });
        }
    }
    Ok(rows)
}

pub fn render_table(rows: &[BenchRow], hide_time: bool) -> String {
    let mut out = format!(
        "{:>8}  {:<10}  {:<7}  {:>10}  {:>10}  {}\n",
        "instance", "kind", "route", "time_ms", "iterations", "verdict"
    );
    for r in rows {
        let time = if hide_time {
            "-".to_string()
        } else {
            format!("{:.3}", r.seconds * 1e3)
        };
        writeln!(
            out,
            "{:>8}  {:<10}  {:<7}  {:>10}  {:>10}  {}",
            r.instance,
            r.kind.to_string(),
            r.route.name(),
            time,
            r.iterations,
            r.verdict
        )
        .unwrap();
    }
    out
}
