//! Command-line interface.
//!
//! One thin binary with four subcommands: `solve` runs the full solver on
//! an instance read from files, `bounds` stops after the initial bracket,
//! `oracle` runs the dense reference for cross-checking, and `bench`
//! emits scaling measurements as CSV. Every command prints a single JSON
//! document to stdout; logging goes to stderr under the `GTRS_LOG`
//! environment variable (`off`, `info`, or `trace`).
//!
//! Exit codes: 0 success, 1 invalid input or I/O failure, 2 assumption
//! or regularity failure, 3 iteration cap.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bench::{run_bench, write_csv};
use crate::bounds::compute_bounds;
use crate::eig::RngState;
use crate::error::GtrsError;
use crate::operator::MatvecMeter;
use crate::oracle::{dense_solve, DenseSolution, ReferenceError};
use crate::solver::{solve, GtrsProblem, SolveStatus, SolverConfig};
use crate::sparse::SparseSymMatrix;
use crate::vecmath::norm;

#[derive(Parser)]
#[command(
    name = "gtrs",
    version,
    about = "Sparse, matrix-free solver for the generalized trust region subproblem"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance to additive accuracy eps.
    Solve(SolveArgs),
    /// Compute only the initial bracket on the optimal value.
    Bounds(BoundsArgs),
    /// Solve with the dense reference method (n <= 200).
    Oracle(OracleArgs),
    /// Run the scaling benchmark and write CSV measurements.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Objective matrix, Matrix Market symmetric coordinate format.
    #[arg(long = "A", value_name = "FILE")]
    mat_a: PathBuf,

    /// Constraint matrix, Matrix Market symmetric coordinate format.
    #[arg(long = "B", value_name = "FILE")]
    mat_b: PathBuf,

    /// Objective linear term, one real per line. Defaults to zero.
    #[arg(long = "a", value_name = "FILE")]
    vec_a: Option<PathBuf>,

    /// Constraint linear term, one real per line. Defaults to zero.
    #[arg(long = "b", value_name = "FILE")]
    vec_b: Option<PathBuf>,

    /// Constraint constant term.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    d: f64,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,

    /// Additive optimality tolerance.
    #[arg(long)]
    eps: f64,

    /// Total failure probability budget.
    #[arg(long)]
    delta: f64,

    /// Assumption margin xi.
    #[arg(long)]
    xi: f64,

    /// Spectral norm bound for the objective matrix (estimated if absent).
    #[arg(long = "rho-a")]
    rho_a: Option<f64>,

    /// Spectral norm bound for the constraint matrix (estimated if absent).
    #[arg(long = "rho-b")]
    rho_b: Option<f64>,

    /// Seed for all randomized oracle calls.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Cross-check the result against the dense reference (n <= 200).
    #[arg(long = "oracle-check")]
    oracle_check: bool,

    /// Omit the solution vector from the report.
    #[arg(long = "no-x")]
    no_x: bool,

    /// Also write the report to this file.
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    instance: InstanceArgs,

    /// Assumption margin xi.
    #[arg(long)]
    xi: f64,

    /// Failure probability budget for the two oracle stages used here.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,

    /// Seed for the randomized oracle calls.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    instance: InstanceArgs,

    /// Omit the solution vector from the report.
    #[arg(long = "no-x")]
    no_x: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance sizes to measure.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1_000usize, 10_000, 100_000])]
    sizes: Vec<usize>,

    /// Off-diagonal entries per row in each generated matrix.
    #[arg(long, default_value_t = 3)]
    degree: usize,

    /// One solve per (size, seed) pair.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1u64, 2, 3])]
    seeds: Vec<u64>,

    /// Optimality tolerance for the benchmark solves.
    #[arg(long, default_value_t = 0.5)]
    eps: f64,

    /// Failure probability budget per solve.
    #[arg(long, default_value_t = 0.3)]
    delta: f64,

    /// Write the CSV here instead of stdout.
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct ConfigEcho {
    eps: f64,
    delta: f64,
    xi: f64,
    rho_a: Option<f64>,
    rho_b: Option<f64>,
}

#[derive(Serialize)]
struct OracleCheck {
    reference_value: f64,
    difference: f64,
    within_eps: bool,
    multiplier: f64,
    near_hard_case: bool,
}

#[derive(Serialize)]
struct RunReport {
    status: String,
    n: usize,
    nnz: usize,
    value: Option<f64>,
    lower: Option<f64>,
    upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<Vec<f64>>,
    iterations: usize,
    oracle_calls: u64,
    oracle_matvecs: u64,
    oracle_matvec_work: u64,
    elapsed_ms: f64,
    seed: u64,
    config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_check: Option<OracleCheck>,
}

#[derive(Serialize)]
struct BoundsReport {
    status: String,
    n: usize,
    nnz: usize,
    mu0: f64,
    lambda: f64,
    lambda_bar: f64,
    nu0: f64,
    lower: f64,
    upper: f64,
    varpi: f64,
    elapsed_ms: f64,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
}

#[derive(Serialize)]
struct OracleReport {
    status: String,
    n: usize,
    value: f64,
    multiplier: f64,
    active: bool,
    near_hard_case: bool,
    kkt_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<Vec<f64>>,
    elapsed_ms: f64,
}

#[derive(Serialize)]
struct ErrorReport {
    status: String,
    message: String,
}

fn emit<T: Serialize>(doc: &T) {
    println!("{}", serde_json::to_string_pretty(doc).expect("report serializes"));
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn read_vector(path: &Path, expected: usize) -> Result<Vec<f64>, GtrsError> {
    let text = fs::read_to_string(path).map_err(|source| GtrsError::File {
        path: path.display().to_string(),
        source,
    })?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: f64 = t.parse().map_err(|_| GtrsError::Parse {
            line: idx + 1,
            message: format!("expected one real number per line, got '{t}'"),
        })?;
        if !v.is_finite() {
            return Err(GtrsError::Parse {
                line: idx + 1,
                message: "vector entries must be finite".into(),
            });
        }
        out.push(v);
    }
    if out.len() != expected {
        return Err(GtrsError::DimensionMismatch {
            context: "vector file length",
            expected,
            found: out.len(),
        });
    }
    Ok(out)
}

fn load_problem(args: &InstanceArgs) -> Result<GtrsProblem, GtrsError> {
    let mat_a = SparseSymMatrix::read_matrix_market(&args.mat_a)?;
    let mat_b = SparseSymMatrix::read_matrix_market(&args.mat_b)?;
    let n = mat_a.n();
    let vec_a = match &args.vec_a {
        Some(p) => read_vector(p, n)?,
        None => vec![0.0; n],
    };
    let vec_b = match &args.vec_b {
        Some(p) => read_vector(p, n)?,
        None => vec![0.0; n],
    };
    GtrsProblem::new(mat_a, mat_b, vec_a, vec_b, args.d)
}

fn cmd_solve(args: SolveArgs) -> Result<i32, GtrsError> {
    let problem = load_problem(&args.instance)?;
    let mut config = SolverConfig::new(args.eps, args.delta, args.xi, args.seed);
    config.rho_a = args.rho_a;
    config.rho_b = args.rho_b;
    let sol = solve(&problem, &config)?;

    let oracle_check = if args.oracle_check && sol.status == SolveStatus::Optimal {
        match dense_solve(&problem) {
            Ok(reference) => {
                let difference = sol.value - reference.value;
                let scale = 1.0 + sol.value.abs().max(reference.value.abs());
                Some(OracleCheck {
                    reference_value: reference.value,
                    difference,
                    within_eps: difference >= -1e-6 * scale
                        && difference <= args.eps + 1e-6 * scale,
                    multiplier: reference.multiplier,
                    near_hard_case: reference.near_hard_case,
                })
            }
            Err(e) => {
                log::info!("reference check unavailable: {e}");
                None
            }
        }
    } else {
        None
    };

    let report = RunReport {
        status: sol.status.as_str().to_string(),
        n: problem.n(),
        nnz: problem.nnz(),
        value: finite(sol.value),
        lower: finite(sol.lower),
        upper: finite(sol.upper),
        x: (!args.no_x && !sol.x.is_empty()).then_some(sol.x.clone()),
        iterations: sol.stats.feas_calls,
        oracle_calls: sol.stats.oracle_calls,
        oracle_matvecs: sol.stats.oracle_matvecs,
        oracle_matvec_work: sol.stats.oracle_matvec_work,
        elapsed_ms: sol.stats.elapsed.as_secs_f64() * 1e3,
        seed: sol.seed,
        config: ConfigEcho {
            eps: args.eps,
            delta: args.delta,
            xi: args.xi,
            rho_a: args.rho_a,
            rho_b: args.rho_b,
        },
        message: sol.assumption_failure.as_ref().map(|f| f.to_string()),
        oracle_check,
    };
    if let Some(path) = &args.json {
        fs::write(path, serde_json::to_string_pretty(&report).expect("report serializes"))?;
    }
    emit(&report);
    Ok(match sol.status {
        SolveStatus::Optimal => 0,
        SolveStatus::AssumptionFailed => 2,
        SolveStatus::IterationCapped => 3,
    })
}

fn cmd_bounds(args: BoundsArgs) -> Result<i32, GtrsError> {
    let problem = load_problem(&args.instance)?;
    let rho_a = problem.A.norm_upper_bound();
    let rho_b = problem.B.norm_upper_bound();
    let phi =
        rho_a + rho_b + norm(&problem.a) + norm(&problem.b) + problem.d.abs() + 1.0;
    let mut rng = RngState::new(args.seed);
    let mut meter = MatvecMeter::default();
    let start = Instant::now();
    match compute_bounds(&problem, args.xi, phi, args.delta, &mut rng, &mut meter) {
        Ok(b) => {
            emit(&BoundsReport {
                status: "ok".into(),
                n: problem.n(),
                nnz: problem.nnz(),
                mu0: b.mu0,
                lambda: b.lambda,
                lambda_bar: b.lambda_bar,
                nu0: b.nu0,
                lower: b.lower,
                upper: b.upper,
                varpi: b.varpi,
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                seed: args.seed,
                message: None,
            });
            Ok(0)
        }
        Err(GtrsError::AssumptionFailed(f)) => {
            emit(&ErrorReport { status: "assumption_failed".into(), message: f.to_string() });
            Ok(2)
        }
        Err(e) => Err(e),
    }
}

fn cmd_oracle(args: OracleArgs) -> Result<i32, GtrsError> {
    let problem = load_problem(&args.instance)?;
    let start = Instant::now();
    match dense_solve(&problem) {
        Ok(DenseSolution { value, x, multiplier, active, near_hard_case, kkt_residual }) => {
            emit(&OracleReport {
                status: "optimal".into(),
                n: problem.n(),
                value,
                multiplier,
                active,
                near_hard_case,
                kkt_residual,
                x: (!args.no_x).then_some(x),
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            });
            Ok(0)
        }
        Err(ReferenceError::Regularity(f)) => {
            emit(&ErrorReport { status: "regularity_failure".into(), message: f.to_string() });
            Ok(2)
        }
        Err(ReferenceError::Invalid(m)) => Err(GtrsError::InvalidParameter(m)),
    }
}

fn cmd_bench(args: BenchArgs) -> Result<i32, GtrsError> {
    let rows = run_bench(&args.sizes, args.degree, &args.seeds, args.eps, args.delta)?;
    match &args.csv {
        Some(path) => {
            let mut file = fs::File::create(path)?;
            write_csv(&rows, &mut file)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            write_csv(&rows, &mut out)?;
        }
    }
    Ok(0)
}

/// Entry point for the binary; returns the process exit code.
pub fn run() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GTRS_LOG", "off"))
        .format_timestamp(None)
        .try_init()
        .ok();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            e.print().expect("clap error prints");
            return code;
        }
    };

    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            emit(&ErrorReport { status: "error".into(), message: e.to_string() });
            1
        }
    }
}
