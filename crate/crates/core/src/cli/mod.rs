//! Command-line front end.
//!
//! Exit codes: 0 feasible, 1 infeasible, 2 input or solver error,
//! 3 certificate invalid. Errors are printed to stderr as
//! `error[CODE]: message`.

mod bench;
mod document;
mod problem_file;

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use bench::{render_table, run_bench, BenchKind, BenchOptions, BenchRoute, BenchRow};
pub use document::{
    CertificateDocument, DualBlock, Identities, PrimalBlock, Run, SolverSummary, Status,
};
pub use problem_file::ProblemFile;

use crate::alternatives::{
    decide, verify_certificate, Clause, FeasibilityProblem, Route, DEFAULT_VERIFY_TOL,
};
use crate::error::{Error, Result};
use crate::linalg::{norm2, DenseMatrix};
use crate::oracle::enumerate_feasibility;
use crate::reduction::{build_reduction, check_diagram};
use crate::solvers::SolverConfig;

pub const EXIT_FEASIBLE: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_CERTIFICATE_INVALID: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "farkas", version, about = "Decide Ax = b, x >= 0 and emit a certificate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide feasibility and write a certificate document.
    Decide(DecideArgs),
    /// Re-check a certificate document against a problem file.
    Verify(VerifyArgs),
    /// Print the null-space reduction and the four-system diagram.
    Reduce(ReduceArgs),
    /// Time the decision routes on seeded random instances.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct DecideArgs {
    problem: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, default_value = "both")]
    route: Route,
    /// Tolerance for the self-check of the emitted certificate.
    #[arg(long, default_value_t = DEFAULT_VERIFY_TOL)]
    tol: f64,
    /// Write the document here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    certificate: PathBuf,
    problem: PathBuf,
    /// Also compare against brute-force enumeration (small instances only).
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = DEFAULT_VERIFY_TOL)]
    tol: f64,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    problem: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    /// Print the null-space basis K.
    #[arg(long)]
    emit_k: bool,
    /// Print the particular solution x̄.
    #[arg(long)]
    emit_xbar: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 20)]
    m: usize,
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "primal,dual,reduced")]
    routes: Vec<BenchRoute>,
    #[arg(long, value_enum, default_value = "mixed")]
    kind: BenchKind,
    /// Print `-` in the time column so repeated runs are byte-identical.
    #[arg(long)]
    no_time: bool,
}

/// Configures logging from `FARKAS_LOG` (`quiet`, `info` or `trace`).
fn init_logging() {
    let level = match std::env::var("FARKAS_LOG").as_deref() {
        Ok("quiet") => log::LevelFilter::Off,
        Ok("info") => log::LevelFilter::Info,
        Ok("trace") => log::LevelFilter::Trace,
        _ => log::LevelFilter::Warn,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .try_init();
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { 0 };
        }
    };
    let outcome = match cli.command {
        Command::Decide(a) => cmd_decide(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Reduce(a) => cmd_reduce(&a),
        Command::Bench(a) => cmd_bench(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            match e {
                Error::CertificateInvalid { .. } => EXIT_CERTIFICATE_INVALID,
                _ => EXIT_ERROR,
            }
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

pub fn read_problem(path: &Path, rho: f64) -> Result<FeasibilityProblem> {
    ProblemFile::parse(&read_text(path)?)?.into_problem(rho)
}

fn verdict_code(feasible: bool) -> i32 {
    if feasible {
        EXIT_FEASIBLE
    } else {
        EXIT_INFEASIBLE
    }
}

fn cmd_decide(args: &DecideArgs) -> Result<i32> {
    let problem = read_problem(&args.problem, args.rho)?;
    let decision = decide(&problem, &SolverConfig::default(), args.route)?;
    verify_certificate(&problem, &decision.certificate, args.tol)?;
    let doc = CertificateDocument::from_decision(&problem, args.route, &decision);
    log::info!(
        "{} via {} route",
        if decision.certificate.is_feasible() { "feasible" } else { "infeasible" },
        args.route
    );
    match &args.output {
        Some(path) => fs::write(path, doc.to_json())?,
        None => std::io::stdout().write_all(doc.to_json().as_bytes())?,
    }
    Ok(verdict_code(decision.certificate.is_feasible()))
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let doc = CertificateDocument::from_json(&read_text(&args.certificate)?)?;
    let problem = read_problem(&args.problem, doc.rho)?;
    let cert = doc.certificate()?;
    let identities = verify_certificate(&problem, &cert, args.tol)?;
    let feasible = cert.is_feasible();

    let mut out = String::new();
    out.push_str(&format!(
        "certificate valid: {}\n",
        if feasible { "feasible" } else { "infeasible" }
    ));
    if let Some(r) = identities.z_identity_residual {
        out.push_str(&format!("z identity residual: {r:e}\n"));
    }
    if let Some(r) = identities.w_identity_residual {
        out.push_str(&format!("w identity residual: {r:e}\n"));
    }

    if args.oracle {
        let verdict = enumerate_feasibility(&problem)?;
        out.push_str(&format!(
            "oracle: {}\n",
            if verdict.feasible { "feasible" } else { "infeasible" }
        ));
        if verdict.feasible != feasible {
            print!("{out}");
            return Err(Error::CertificateInvalid {
                clause: Clause::Oracle,
                violation: 1.0,
            });
        }
        let reference = if feasible {
            verdict.min_norm_point.as_ref()
        } else {
            verdict.min_norm_ii_witness.as_ref()
        };
        if let Some(r) = reference {
            let d: Vec<f64> = cert.witness().iter().zip(r.iter()).map(|(p, q)| p - q).collect();
            out.push_str(&format!("distance to oracle min-norm solution: {:e}\n", norm2(&d)));
        }
    }
    print!("{out}");
    Ok(0)
}

fn format_matrix(m: &DenseMatrix) -> String {
    (0..m.rows())
        .map(|i| {
            let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:?}")).collect();
            format!("  {}\n", row.join(" "))
        })
        .collect()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_reduce(args: &ReduceArgs) -> Result<i32> {
    let problem = read_problem(&args.problem, args.rho)?;
    let red = build_reduction(&problem)?;
    let mut out = format!("nu = {}\n", red.nu());
    if red.nu() == 0 {
        out.push_str("note: nu = 0, A is square and nonsingular; (I_y) reads x_bar >= 0\n");
    }
    if args.emit_k {
        out.push_str(&format!("K ({} x {}):\n", red.k().rows(), red.k().cols()));
        out.push_str(&format_matrix(red.k()));
    }
    if args.emit_xbar {
        let xs: Vec<String> = red.x_bar().iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&format!("x_bar:\n  {}\n", xs.join(" ")));
    }
    let report = check_diagram(&problem, &SolverConfig::default())?;
    out.push_str(&format!(
        "diagram: I={} I_y={} II={} II_v={}\n",
        yes_no(report.primal),
        yes_no(report.primal_reduced),
        yes_no(report.alternative),
        yes_no(report.alternative_reduced)
    ));
    out.push_str(&format!("null residual |A K^T|_max = {:e}\n", report.null_residual));
    print!("{out}");
    Ok(verdict_code(report.primal))
}

fn cmd_bench(args: &BenchArgs) -> Result<i32> {
    if args.m == 0 || args.n == 0 {
        return Err(Error::InvalidArgument("--m and --n must be positive".into()));
    }
    let opts = BenchOptions {
        m: args.m,
        n: args.n,
        count: args.count,
        seed: args.seed,
        routes: args.routes.clone(),
        kind: args.kind,
        hide_time: args.no_time,
    };
    let rows = run_bench(&opts, &SolverConfig::default())?;
    print!("{}", render_table(&rows, opts.hide_time));
    Ok(0)
}
