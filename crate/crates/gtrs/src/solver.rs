//! Top-level driver: binary search on the objective level.
//!
//! With an initial bracket `l <= v* <= u` from [`crate::bounds`], each
//! round asks the feasibility stage whether some `x` attains
//! `f(x) <= c = (l + u) / 2` while satisfying the constraint. A point
//! shrinks `u` to `f(x)`; a certified "no" lifts `l` to `c - 2 eps'`
//! (the relaxation answers a question shifted by `eps'`, and one more
//! `eps'` covers the slack between the shifted and the exact system).
//! Either way the bracket obeys
//! `u - l <= (u_prev - l_prev) / 2 + 2 eps'`,
//! so `T = ceil(log2((u0 - l0) / eps'))` rounds drive the gap below
//! `5 eps'`. With `eps' = eps / 7` the returned point is `eps`-optimal
//! even after accounting for the lower-bound shift.

use std::time::{Duration, Instant};

use crate::bounds::compute_bounds;
use crate::error::GtrsError;
use crate::operator::MatvecMeter;
use crate::pencil::AssumptionFailure;
use crate::eig::RngState;
use crate::sdp::{feas, FeasOutcome};
use crate::sparse::SparseSymMatrix;
use crate::vecmath::{dot, norm};

/// Instance data: minimize `x'Ax + 2a'x` subject to `x'Bx + 2b'x + d <= 0`.
#[derive(Debug, Clone)]
pub struct GtrsProblem {
    pub A: SparseSymMatrix,
    pub B: SparseSymMatrix,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub d: f64,
}

impl GtrsProblem {
    pub fn new(
        A: SparseSymMatrix,
        B: SparseSymMatrix,
        a: Vec<f64>,
        b: Vec<f64>,
        d: f64,
    ) -> Result<Self, GtrsError> {
        let n = A.n();
        for (len, context) in [
            (B.n(), "constraint matrix dimension"),
            (a.len(), "objective linear term length"),
            (b.len(), "constraint linear term length"),
        ] {
            if len != n {
                return Err(GtrsError::DimensionMismatch { context, expected: n, found: len });
            }
        }
        if !d.is_finite() || a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(GtrsError::InvalidParameter("linear terms must be finite".into()));
        }
        Ok(Self { A, B, a, b, d })
    }

    pub fn n(&self) -> usize {
        self.A.n()
    }

    /// Stored nonzeros across both matrices.
    pub fn nnz(&self) -> usize {
        self.A.nnz() + self.B.nnz()
    }
}

/// Objective and constraint values `(f(x), h(x))`.
pub fn evaluate(problem: &GtrsProblem, x: &[f64]) -> (f64, f64) {
    let f = problem.A.quad_form(x) + 2.0 * dot(&problem.a, x);
    let h = problem.B.quad_form(x) + 2.0 * dot(&problem.b, x) + problem.d;
    (f, h)
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Optimality tolerance: the returned value satisfies `f(x) <= v* + eps`.
    pub eps: f64,
    /// Total failure probability budget across all randomized oracle calls.
    pub delta: f64,
    /// Assumption margin: `lambda_min(B) <= -xi` and some convex pencil
    /// `mu A + (1 - mu) B` is `>= xi I`.
    pub xi: f64,
    pub seed: u64,
    /// Spectral norm bound for `A`; computed from the entries when absent.
    pub rho_a: Option<f64>,
    /// Spectral norm bound for `B`; computed from the entries when absent.
    pub rho_b: Option<f64>,
    /// Extra feasibility rounds tolerated for anomaly retries.
    pub max_extra_iters: usize,
}

impl SolverConfig {
    pub fn new(eps: f64, delta: f64, xi: f64, seed: u64) -> Self {
        Self { eps, delta, xi, seed, rho_a: None, rho_b: None, max_extra_iters: 2 }
    }

    fn validate(&self) -> Result<(), GtrsError> {
        for (value, name) in [(self.eps, "eps"), (self.delta, "delta"), (self.xi, "xi")] {
            if !(value.is_finite() && value > 0.0) {
                return Err(GtrsError::InvalidParameter(format!("{name} = {value} must be positive")));
            }
        }
        if self.delta >= 1.0 {
            return Err(GtrsError::InvalidParameter("delta must lie in (0, 1)".into()));
        }
        for (bound, name) in [(self.rho_a, "rho_a"), (self.rho_b, "rho_b")] {
            if let Some(r) = bound {
                if !(r.is_finite() && r >= 0.0) {
                    return Err(GtrsError::InvalidParameter(format!("{name} = {r} must be nonnegative")));
                }
            }
        }
        Ok(())
    }
}

/// Quantities derived once per solve from the config and initial bracket.
#[derive(Debug, Clone)]
pub struct DerivedParams {
    /// `rho_a + rho_b + ||a|| + ||b|| + |d| + 1`, the instance scale.
    pub phi: f64,
    /// Constraint shift factor `K = rho_a / xi + 1`.
    pub k_shift: f64,
    pub xi_tilde: f64,
    /// Per-round tolerance `eps / 7`.
    pub eps_prime: f64,
    /// Feasibility rounds on the success path.
    pub t_max: usize,
    /// Per-round failure budget `delta / (2 t_max)`.
    pub delta_prime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    AssumptionFailed,
    IterationCapped,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::AssumptionFailed => "assumption_failed",
            SolveStatus::IterationCapped => "iteration_capped",
        }
    }
}

/// One feasibility round, recorded after the bracket update.
#[derive(Debug, Clone, Copy)]
pub struct IterationRecord {
    pub level: f64,
    pub infeasible: bool,
    pub lower: f64,
    pub upper: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    /// Feasibility rounds performed (including anomaly retries).
    pub feas_calls: usize,
    /// Eigenvector-oracle invocations across all stages.
    pub oracle_calls: u64,
    /// Sparse matrix-vector products consumed by oracle calls.
    pub oracle_matvecs: u64,
    /// Products weighted by the stored nonzeros of the matrix applied.
    pub oracle_matvec_work: u64,
    pub elapsed: Duration,
    pub records: Vec<IterationRecord>,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub status: SolveStatus,
    /// Best feasible point found; empty when the assumption check failed.
    pub x: Vec<f64>,
    /// `f(x)`; NaN when the assumption check failed.
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub derived: DerivedParams,
    pub stats: SolveStats,
    pub seed: u64,
    pub assumption_failure: Option<AssumptionFailure>,
}

/// Solves the instance to additive accuracy `eps` with probability at
/// least `1 - delta`. Assumption violations and anomaly cascades surface
/// as statuses, not errors; `Err` is reserved for invalid inputs.
pub fn solve(problem: &GtrsProblem, config: &SolverConfig) -> Result<Solution, GtrsError> {
    config.validate()?;
    let start = Instant::now();
    let mut rng = RngState::new(config.seed);
    let mut meter = MatvecMeter::default();

    let rho_a = config.rho_a.unwrap_or_else(|| problem.A.norm_upper_bound());
    let rho_b = config.rho_b.unwrap_or_else(|| problem.B.norm_upper_bound());
    let norm_a = norm(&problem.a);
    let norm_b = norm(&problem.b);
    let phi = rho_a + rho_b + norm_a + norm_b + problem.d.abs() + 1.0;
    let k_shift = rho_a / config.xi + 1.0;
    let eps_prime = config.eps / 7.0;

    let mut derived = DerivedParams {
        phi,
        k_shift,
        xi_tilde: config.xi.min(1.0),
        eps_prime,
        t_max: 0,
        delta_prime: config.delta,
    };

    let bounds = match compute_bounds(problem, config.xi, phi, config.delta / 2.0, &mut rng, &mut meter)
    {
        Ok(b) => b,
        Err(GtrsError::AssumptionFailed(failure)) => {
            log::info!("assumption check failed: {failure}");
            return Ok(Solution {
                status: SolveStatus::AssumptionFailed,
                x: Vec::new(),
                value: f64::NAN,
                lower: f64::NAN,
                upper: f64::NAN,
                derived,
                stats: finish_stats(SolveStats::default(), &meter, start),
                seed: config.seed,
                assumption_failure: Some(failure),
            });
        }
        Err(e) => return Err(e),
    };

    let mut lower = bounds.lower;
    let mut upper = bounds.upper;
    let mut best_x = bounds.witness.clone();
    log::info!(
        "initial bracket [{lower:.6e}, {upper:.6e}], pencil mu0 = {:.6}, lambda_bar = {:.6e}",
        bounds.mu0,
        bounds.lambda_bar
    );

    let gap0 = upper - lower;
    let mut stats = SolveStats::default();
    if gap0 <= 5.0 * eps_prime {
        return Ok(Solution {
            status: SolveStatus::Optimal,
            x: best_x,
            value: upper,
            lower,
            upper,
            derived,
            stats: finish_stats(stats, &meter, start),
            seed: config.seed,
            assumption_failure: None,
        });
    }

    let t_max = (gap0 / eps_prime).log2().ceil() as usize;
    let delta_prime = config.delta / (2.0 * t_max as f64);
    derived.t_max = t_max;
    derived.delta_prime = delta_prime;

    // Constant across rounds: the bracket radius only depends on u through
    // the final square root, so it never grows while u shrinks.
    let nu0 = bounds.nu0;
    let p_vec: Vec<f64> = problem
        .a
        .iter()
        .zip(&problem.b)
        .map(|(&ai, &bi)| ai + nu0 * bi)
        .collect();
    let radius_term = bounds.mu0 * norm(&p_vec) / bounds.lambda_bar;
    let radius_of = |u: f64| {
        let radicand = radius_term * radius_term
            + (bounds.mu0 / bounds.lambda_bar) * (u - nu0 * problem.d);
        radius_term + radicand.max(0.0).sqrt()
    };

    let mu_b = rho_b + 2.0 * norm_b + problem.d.abs();
    let mut prev_radius = f64::INFINITY;
    let mut anomalies_here = 0usize;
    let mut extra_rounds = 0usize;
    let mut capped = false;

    while upper - lower > 5.0 * eps_prime {
        if stats.feas_calls >= t_max + config.max_extra_iters {
            capped = true;
            break;
        }
        let level = 0.5 * (lower + upper);
        let mu_a = rho_a + 2.0 * norm_a + level.abs();
        let kappa = mu_a.max(k_shift * mu_b);
        let radius = radius_of(upper);
        assert!(
            radius <= prev_radius + 1e-9 * (1.0 + radius.abs()),
            "bracket radius must not grow: {radius} after {prev_radius}"
        );
        prev_radius = radius;

        let outcome = feas(
            problem, level, eps_prime, delta_prime, mu_a, mu_b, k_shift, radius, &mut rng,
            &mut meter,
        )?;
        stats.feas_calls += 1;
        let gap_prev = upper - lower;
        let recheck_tol = 1e-9 * kappa;
        let was_infeasible = matches!(outcome, FeasOutcome::Infeasible);

        match outcome {
            FeasOutcome::Infeasible => {
                lower = level - 2.0 * eps_prime;
                anomalies_here = 0;
                log::info!(
                    "round {}: level {level:.6e} infeasible, bracket [{lower:.6e}, {upper:.6e}]",
                    stats.feas_calls
                );
            }
            FeasOutcome::Point(x) => {
                let (f, h) = evaluate(problem, &x);
                if f <= level + recheck_tol && h <= recheck_tol {
                    if f < upper {
                        upper = f;
                        best_x = x;
                    }
                    anomalies_here = 0;
                    log::info!(
                        "round {}: level {level:.6e} attained f = {f:.6e}, bracket [{lower:.6e}, {upper:.6e}]",
                        stats.feas_calls
                    );
                } else {
                    // Oracle anomaly: the rounding produced a point that
                    // fails the deterministic recheck. Retry this level on
                    // a fresh substream once.
                    anomalies_here += 1;
                    extra_rounds += 1;
                    log::info!(
                        "round {}: anomalous point at level {level:.6e} (f = {f:.6e}, h = {h:.6e}), retrying",
                        stats.feas_calls
                    );
                    if anomalies_here > 1 || extra_rounds > config.max_extra_iters {
                        capped = true;
                        break;
                    }
                    continue;
                }
            }
        }

        let gap = upper - lower;
        assert!(
            gap <= 0.5 * gap_prev + 2.0 * eps_prime + recheck_tol + 1e-12 * (1.0 + gap_prev.abs()),
            "bracket gap must contract: {gap} after {gap_prev}"
        );
        stats.records.push(IterationRecord {
            level,
            infeasible: was_infeasible,
            lower,
            upper,
            radius,
        });
    }

    if !capped {
        assert!(
            stats.feas_calls <= t_max + extra_rounds,
            "feasibility rounds {} exceeded budget {t_max} + {extra_rounds}",
            stats.feas_calls
        );
    }

    let value = upper;
    debug_assert!({
        let (f, _) = evaluate(problem, &best_x);
        (f - value).abs() <= 1e-9 * (1.0 + value.abs())
    });
    Ok(Solution {
        status: if capped { SolveStatus::IterationCapped } else { SolveStatus::Optimal },
        x: best_x,
        value,
        lower,
        upper,
        derived,
        stats: finish_stats(stats, &meter, start),
        seed: config.seed,
        assumption_failure: None,
    })
}

fn finish_stats(mut stats: SolveStats, meter: &MatvecMeter, start: Instant) -> SolveStats {
    stats.oracle_calls = meter.calls;
    stats.oracle_matvecs = meter.products;
    stats.oracle_matvec_work = meter.work;
    stats.elapsed = start.elapsed();
    stats
}
