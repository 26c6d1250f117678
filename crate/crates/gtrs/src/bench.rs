//! Scaling benchmark: instances whose assumption data is known by
//! construction at any size.
//!
//! The generator controls spectra through Gershgorin discs alone, so no
//! dense eigendecomposition is ever needed: the objective matrix is a
//! dominant diagonal plus bounded off-diagonal rows, the constraint
//! matrix the same shape shifted negative. That pins `lambda(A)` inside
//! `[1.5, 2.5]` and `lambda(B)` inside `[-1.25, -0.75]`, so the working
//! assumption holds at `xi = 0.5` with the pure-objective pencil weight.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GtrsError;
use crate::solver::{solve, GtrsProblem, SolveStatus, SolverConfig};
use crate::sparse::SparseSymMatrix;

/// Assumption margin every benchmark instance satisfies by construction.
pub const BENCH_XI: f64 = 0.5;

fn banded_random(
    n: usize,
    degree: usize,
    diag: f64,
    offdiag_budget: f64,
    rng: &mut ChaCha8Rng,
) -> SparseSymMatrix {
    let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(n * (degree + 1));
    let mut row_sums = vec![0.0_f64; n];
    for i in 0..n {
        for _ in 0..degree {
            if i + 1 >= n {
                break;
            }
            let j = rng.gen_range(i + 1..n);
            let v: f64 = rng.gen_range(-1.0..1.0);
            entries.push((i, j, v));
            row_sums[i] += v.abs();
            row_sums[j] += v.abs();
        }
    }
    let max_row = row_sums.iter().cloned().fold(0.0, f64::max);
    let scale = if max_row > 0.0 { offdiag_budget / max_row } else { 0.0 };
    for e in entries.iter_mut() {
        e.2 *= scale;
    }
    for i in 0..n {
        entries.push((i, i, diag));
    }
    SparseSymMatrix::from_entries(n, &entries).expect("generated entries are valid")
}

/// Sparse instance of dimension `n` with about `degree` off-diagonal
/// entries per row in each matrix. Satisfies the assumption at
/// [`BENCH_XI`] for every `n`, `degree`, and `seed`.
pub fn bench_instance(n: usize, degree: usize, seed: u64) -> Result<GtrsProblem, GtrsError> {
    if n == 0 {
        return Err(GtrsError::InvalidParameter("benchmark dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Gershgorin: lambda(A) in [1.5, 2.5], lambda(B) in [-1.25, -0.75].
    let a_mat = banded_random(n, degree, 2.0, 0.5, &mut rng);
    let b_mat = banded_random(n, degree, -1.0, 0.25, &mut rng);
    let mut a = vec![0.0; n];
    a[0] = -0.5;
    let b = vec![0.0; n];
    GtrsProblem::new(a_mat, b_mat, a, b, 0.5)
}

/// One benchmark measurement.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub n: usize,
    pub nnz: usize,
    pub seed: u64,
    pub elapsed_ms: f64,
    pub oracle_matvecs: u64,
    pub oracle_matvec_work: u64,
    pub status: SolveStatus,
    pub value: f64,
}

/// Solves one benchmark instance per `(size, seed)` pair and reports the
/// oracle effort of each run.
pub fn run_bench(
    sizes: &[usize],
    degree: usize,
    seeds: &[u64],
    eps: f64,
    delta: f64,
) -> Result<Vec<BenchRow>, GtrsError> {
    let mut rows = Vec::with_capacity(sizes.len() * seeds.len());
    for &n in sizes {
        for &seed in seeds {
            let problem = bench_instance(n, degree, seed)?;
            let mut config = SolverConfig::new(eps, delta, BENCH_XI, seed);
            // Gershgorin bounds are tighter than the generic entry-based
            // estimate and identical across sizes.
            config.rho_a = Some(2.5);
            config.rho_b = Some(1.25);
            let start = Instant::now();
            let sol = solve(&problem, &config)?;
            let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            log::info!(
                "bench n = {n}, seed = {seed}: status {}, work {} in {elapsed_ms:.1} ms",
                sol.status.as_str(),
                sol.stats.oracle_matvec_work
            );
            rows.push(BenchRow {
                n,
                nnz: problem.nnz(),
                seed,
                elapsed_ms,
                oracle_matvecs: sol.stats.oracle_matvecs,
                oracle_matvec_work: sol.stats.oracle_matvec_work,
                status: sol.status,
                value: sol.value,
            });
        }
    }
    Ok(rows)
}

/// Writes rows in the benchmark CSV layout.
pub fn write_csv<W: Write>(rows: &[BenchRow], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "n,nnz,seed,elapsed_ms,oracle_matvecs,oracle_matvec_work")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{:.3},{},{}",
            r.n, r.nnz, r.seed, r.elapsed_ms, r.oracle_matvecs, r.oracle_matvec_work
        )?;
    }
    Ok(())
}

/// Least-squares slope of `ln y` against `ln x`. Points with
/// nonpositive coordinates are rejected.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<f64, GtrsError> {
    if points.len() < 2 {
        return Err(GtrsError::InvalidParameter("slope needs at least two points".into()));
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(x, y) in points {
        if !(x > 0.0 && y > 0.0) {
            return Err(GtrsError::InvalidParameter(format!(
                "log-log slope needs positive points, got ({x}, {y})"
            )));
        }
        xs.push(x.ln());
        ys.push(y.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(GtrsError::InvalidParameter("slope undefined: all x equal".into()));
    }
    Ok(sxy / sxx)
}
