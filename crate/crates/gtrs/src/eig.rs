//! Approximate extreme-eigenvector oracle.
//!
//! Lanczos iteration with a uniformly random unit start vector and full
//! reorthogonalization over the stored Krylov basis. The iteration budget
//! `k = ceil(0.5 * sqrt(rho / eps) * ln(4n / delta^2)) + 5`, capped at `n`,
//! makes `lambda >= lambda_max(C) - eps` hold with probability at least
//! `1 - delta` over the start vector; the basis is cut short early when the
//! extreme Ritz pair has already converged well past the requested
//! tolerance, which changes nothing about the returned contract.
//!
//! Diagonal elements `alpha_j = <v_j, C v_j>` and couplings
//! `beta_j = ||w_j||` form the tridiagonal whose extreme Ritz pair is
//! extracted by a dense symmetric eigensolve (the tridiagonal is tiny).
//! The returned `lambda` is always the exact Rayleigh quotient of the
//! returned unit vector, recomputed through one extra operator product.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::GtrsError;
use crate::operator::{LinOp, MatvecMeter, Negated};
use crate::vecmath::{axpy, dot, normalize};

/// Deterministic stream of independent RNG substreams. Every oracle call
/// consumes one substream, so a fixed seed reproduces the whole run
/// regardless of how operator data changes between calls.
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    counter: u64,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Next independent substream.
    pub fn substream(&mut self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.counter);
        self.counter += 1;
        rng
    }
}

/// Unit vector and its exact Rayleigh quotient.
#[derive(Debug, Clone)]
pub struct EigResult {
    pub lambda: f64,
    pub x: Vec<f64>,
}

/// Approximate largest eigenpair of `C`, where `rho >= ||C||_2`.
pub fn approx_max_ev<C: LinOp + ?Sized>(
    op: &C,
    rho: f64,
    eps: f64,
    delta: f64,
    rng: &mut RngState,
    meter: &mut MatvecMeter,
) -> Result<EigResult, GtrsError> {
    validate(op.dim(), rho, eps, delta)?;
    meter.calls += 1;
    Ok(lanczos_max(op, rho, eps, delta, rng, meter))
}

/// Approximate smallest eigenpair of `C`: the largest eigenpair of `-C`
/// with the Rayleigh quotient negated (negation is exact in IEEE
/// arithmetic, so `lambda` still equals `x' C x`).
pub fn approx_min_ev<C: LinOp + ?Sized>(
    op: &C,
    rho: f64,
    eps: f64,
    delta: f64,
    rng: &mut RngState,
    meter: &mut MatvecMeter,
) -> Result<EigResult, GtrsError> {
    validate(op.dim(), rho, eps, delta)?;
    meter.calls += 1;
    let neg = Negated(op);
    let res = lanczos_max(&neg, rho, eps, delta, rng, meter);
    Ok(EigResult { lambda: -res.lambda, x: res.x })
}

fn validate(n: usize, rho: f64, eps: f64, delta: f64) -> Result<(), GtrsError> {
    if n == 0 {
        return Err(GtrsError::InvalidParameter("operator dimension is zero".into()));
    }
    if !(rho.is_finite() && rho >= 0.0) {
        return Err(GtrsError::InvalidParameter(format!("norm bound rho = {rho} must be finite and nonnegative")));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(GtrsError::InvalidParameter(format!("tolerance eps = {eps} must be positive")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(GtrsError::InvalidParameter(format!("failure budget delta = {delta} must lie in (0, 1)")));
    }
    Ok(())
}

/// Iteration budget from the norm bound, tolerance, and failure budget.
pub fn iteration_budget(n: usize, rho: f64, eps: f64, delta: f64) -> usize {
    let k = 0.5 * (rho / eps).sqrt() * (4.0 * n as f64 / (delta * delta)).ln();
    let k = if k.is_finite() { k.ceil().max(0.0) as usize } else { n };
    (k + 5).min(n)
}

fn lanczos_max<C: LinOp + ?Sized>(
    op: &C,
    rho: f64,
    eps: f64,
    delta: f64,
    rng: &mut RngState,
    meter: &mut MatvecMeter,
) -> EigResult {
    let n = op.dim();
    let mut stream = rng.substream();
    if rho == 0.0 {
        // A zero norm bound certifies the zero operator.
        let mut x = vec![0.0; n];
        x[0] = 1.0;
        return EigResult { lambda: 0.0, x };
    }

    let k_max = iteration_budget(n, rho, eps, delta);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k_max.min(64));
    basis.push(random_unit(n, &mut stream));
    let mut alphas: Vec<f64> = Vec::with_capacity(k_max);
    let mut betas: Vec<f64> = Vec::with_capacity(k_max);
    let breakdown_tol = 1e-13 * rho;
    let exit_tol = 0.1 * eps;
    let mut last_theta = f64::INFINITY;

    loop {
        let m = alphas.len();
        let mut w = vec![0.0; n];
        op.apply_into(&basis[m], &mut w);
        meter.record(op);
        let alpha = dot(&basis[m], &w);
        alphas.push(alpha);
        axpy(-alpha, &basis[m], &mut w);
        if m > 0 {
            axpy(-betas[m - 1], &basis[m - 1], &mut w);
        }
        for vi in &basis {
            let c = dot(vi, &w);
            axpy(-c, vi, &mut w);
        }
        let beta = normalize(&mut w);
        betas.push(beta);
        let m = alphas.len();
        if m >= k_max || beta <= breakdown_tol {
            // Budget exhausted, or an invariant subspace was found (the
            // tridiagonal is then exact on it).
            break;
        }
        basis.push(w);

        let at_checkpoint =
            m >= 8 && (if m <= 96 { m.is_multiple_of(8) } else { m.is_multiple_of(32) });
        if at_checkpoint {
            let (theta, s) = extreme_ritz(&alphas, &betas[..m - 1]);
            let residual = betas[m - 1] * s[m - 1].abs();
            if residual <= exit_tol && (theta - last_theta).abs() <= 0.01 * eps {
                break;
            }
            last_theta = theta;
        }
    }

    let m = alphas.len();
    let (_, s) = extreme_ritz(&alphas, &betas[..m - 1]);
    let mut x = vec![0.0; n];
    for (i, vi) in basis.iter().take(m).enumerate() {
        axpy(s[i], vi, &mut x);
    }
    normalize(&mut x);
    let mut cx = vec![0.0; n];
    op.apply_into(&x, &mut cx);
    meter.record(op);
    let lambda = dot(&x, &cx);
    EigResult { lambda, x }
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    if normalize(&mut v) == 0.0 {
        v[0] = 1.0;
    }
    v
}

/// Largest Ritz pair of the symmetric tridiagonal with diagonal `alphas`
/// and off-diagonal `betas`. Ties break toward the first index.
fn extreme_ritz(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let m = alphas.len();
    debug_assert_eq!(betas.len(), m.saturating_sub(1));
    if m == 1 {
        return (alphas[0], vec![1.0]);
    }
    let mut t = nalgebra::DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = t.symmetric_eigen();
    let mut best = 0;
    for i in 1..m {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    let s: Vec<f64> = eig.eigenvectors.column(best).iter().cloned().collect();
    (eig.eigenvalues[best], s)
}
