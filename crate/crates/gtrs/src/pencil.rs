//! Search for a positive definite matrix in the convex pencil
//! `mu A + (1 - mu) B`.
//!
//! The working assumption guarantees some `mu* in (0, 1]` with
//! `mu* A + (1 - mu*) B >= xi I`. Since the smallest eigenvalue of the
//! pencil is `2 phi`-Lipschitz in `mu`, an interval of width on the
//! order of `xi / phi` around `mu*` still clears `3 xi / 4`, so
//! `ceil(log2(8 phi / xi))` bisection steps suffice. The bisection
//! direction comes from the eigenvector witness `x` at the midpoint: if
//! `x'Ax > x'Bx` then every smaller `mu` gives `x` an even smaller
//! Rayleigh quotient, so the good region lies to the right.

use std::fmt;

use crate::eig::{approx_min_ev, RngState};
use crate::error::GtrsError;
use crate::operator::{MatvecMeter, Pencil};
use crate::sparse::SparseSymMatrix;

/// A pencil weight certified (approximately) positive definite.
#[derive(Debug, Clone)]
pub struct PencilResult {
    pub mu: f64,
    /// Oracle estimate of the smallest pencil eigenvalue, `>= 3 xi / 4`.
    pub lambda: f64,
    /// The eigenvector witness from the accepting oracle call.
    pub x: Vec<f64>,
    /// Bisection steps performed, including the accepting one.
    pub iterations: usize,
}

/// The bisection exhausted its budget without certifying definiteness.
/// With high probability no convex combination of the two matrices is
/// `xi`-definite, i.e. the working assumption does not hold at this `xi`.
#[derive(Debug, Clone)]
pub struct AssumptionFailure {
    pub iterations: usize,
    /// Final bisection bracket on `mu`.
    pub bracket: (f64, f64),
    pub xi: f64,
    pub detail: String,
}

impl fmt::Display for AssumptionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "assumption failure at xi = {}: {} (after {} iterations, bracket [{}, {}])",
            self.xi, self.detail, self.iterations, self.bracket.0, self.bracket.1
        )
    }
}

impl std::error::Error for AssumptionFailure {}

/// Number of bisection steps budgeted for the given scale and margin.
pub fn pencil_iterations(phi: f64, xi: f64) -> usize {
    ((8.0 * phi / xi).log2().ceil() as usize).max(1)
}

/// Finds `mu` with `mu A + (1 - mu) B >= (3 xi / 4) I` (up to oracle
/// error) or reports that no such weight exists. `phi` must bound the
/// spectral norms of both matrices; `delta` is the total failure
/// probability across the oracle calls made here.
pub fn psd_pencil(
    a_mat: &SparseSymMatrix,
    b_mat: &SparseSymMatrix,
    xi: f64,
    phi: f64,
    delta: f64,
    rng: &mut RngState,
    meter: &mut MatvecMeter,
) -> Result<PencilResult, GtrsError> {
    if b_mat.n() != a_mat.n() {
        return Err(GtrsError::DimensionMismatch {
            context: "pencil matrices",
            expected: a_mat.n(),
            found: b_mat.n(),
        });
    }
    if !(xi.is_finite() && xi > 0.0) {
        return Err(GtrsError::InvalidParameter(format!("xi = {xi} must be positive")));
    }
    if !(phi.is_finite() && phi >= xi) {
        return Err(GtrsError::InvalidParameter(format!(
            "scale phi = {phi} must be finite and at least xi = {xi}"
        )));
    }
    if !(delta.is_finite() && delta > 0.0 && delta < 1.0) {
        return Err(GtrsError::InvalidParameter(format!("delta = {delta} must lie in (0, 1)")));
    }

    let budget = pencil_iterations(phi, xi);
    let delta_step = delta / budget as f64;
    let (mut mu_lo, mut mu_hi) = (0.0_f64, 1.0_f64);

    for iter in 1..=budget {
        let mu = 0.5 * (mu_lo + mu_hi);
        let pencil = Pencil { a: a_mat, b: b_mat, mu };
        let est = approx_min_ev(&pencil, phi, xi / 4.0, delta_step, rng, meter)?;
        log::trace!("pencil step {iter}: mu = {mu:.9}, lambda_min ~ {:.6e}", est.lambda);
        if est.lambda >= 0.75 * xi {
            assert!(iter <= budget, "pencil bisection exceeded its iteration budget");
            return Ok(PencilResult { mu, lambda: est.lambda, x: est.x, iterations: iter });
        }
        // lambda = x' (mu A + (1 - mu) B) x is affine in mu with slope
        // x'Ax - x'Bx, so the witness rules out one side entirely. A tie
        // rules out both; shrinking from the right then fails fast.
        if a_mat.quad_form(&est.x) > b_mat.quad_form(&est.x) {
            mu_lo = mu;
        } else {
            mu_hi = mu;
        }
    }

    Err(GtrsError::AssumptionFailed(AssumptionFailure {
        iterations: budget,
        bracket: (mu_lo, mu_hi),
        xi,
        detail: "no convex combination of the matrices is sufficiently positive definite".into(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::rayleigh;
    use crate::vecmath::norm;

    fn run(
        a: &SparseSymMatrix,
        b: &SparseSymMatrix,
        xi: f64,
        phi: f64,
        seed: u64,
    ) -> Result<PencilResult, GtrsError> {
        let mut rng = RngState::new(seed);
        let mut meter = MatvecMeter::default();
        psd_pencil(a, b, xi, phi, 0.1, &mut rng, &mut meter)
    }

    #[test]
    fn identity_pair_certifies_quickly() {
        let a = SparseSymMatrix::diagonal(&[1.0, 1.0, 1.0]).unwrap();
        let b = SparseSymMatrix::diagonal(&[-1.0, -1.0, -1.0]).unwrap();
        // The pencil is (2 mu - 1) I: mu = 0.5 gives the zero matrix, and
        // xi = 0.5 needs mu >= 0.75, which is the second midpoint probed.
        let res = run(&a, &b, 0.5, 2.0, 7).unwrap();
        assert!(res.lambda >= 0.375);
        assert_eq!(res.iterations, 2);
        assert!((res.mu - 0.75).abs() < 1e-12);
        let pencil = Pencil { a: &a, b: &b, mu: res.mu };
        assert!(rayleigh(&pencil, &res.x) >= 0.375 - 1e-12);
        assert!((norm(&res.x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn indefinite_pair_with_definite_midpoint() {
        // A = diag(3, -1), B = diag(-1, 3): both indefinite, while
        // mu = 0.5 gives the identity. xi = 1 is attainable.
        let a = SparseSymMatrix::diagonal(&[3.0, -1.0]).unwrap();
        let b = SparseSymMatrix::diagonal(&[-1.0, 3.0]).unwrap();
        let res = run(&a, &b, 1.0, 4.0, 3).unwrap();
        assert!(res.lambda >= 0.75);
        assert!(res.mu > 0.0 && res.mu <= 1.0);
        // The accepted estimate is a Rayleigh quotient, so the true
        // smallest diagonal entry of the accepted pencil matches it.
        let diag_lo = res.mu * 3.0 - (1.0 - res.mu);
        let diag_hi = -res.mu + (1.0 - res.mu) * 3.0;
        assert!(diag_lo.min(diag_hi) >= res.lambda - 1e-9);
    }

    #[test]
    fn zero_sum_pair_fails_within_budget() {
        // B = -A makes every convex combination a scaling of A, which is
        // indefinite: the assumption cannot hold for any xi.
        for s in [1.0, 4.0] {
            let a = SparseSymMatrix::diagonal(&[s, -s]).unwrap();
            let b = SparseSymMatrix::diagonal(&[-s, s]).unwrap();
            let phi = s + 1.0;
            match run(&a, &b, 0.5, phi, 11) {
                Err(GtrsError::AssumptionFailed(fail)) => {
                    assert_eq!(fail.iterations, pencil_iterations(phi, 0.5));
                    assert!(fail.bracket.0 >= 0.0 && fail.bracket.1 <= 1.0);
                    assert!(fail.bracket.0 < fail.bracket.1);
                    assert_eq!(fail.xi, 0.5);
                }
                other => panic!("expected assumption failure, got {other:?}"),
            }
        }
    }

    #[test]
    fn iteration_count_within_stated_budget() {
        let a = SparseSymMatrix::diagonal(&[3.0, -1.0, 2.0]).unwrap();
        let b = SparseSymMatrix::diagonal(&[-1.0, 3.0, -0.5]).unwrap();
        let phi = 4.5;
        let res = run(&a, &b, 0.8, phi, 19).unwrap();
        assert!(res.iterations <= pencil_iterations(phi, 0.8));
    }

    #[test]
    fn rejects_bad_parameters() {
        let a = SparseSymMatrix::diagonal(&[1.0]).unwrap();
        let b = SparseSymMatrix::diagonal(&[-1.0]).unwrap();
        let mut rng = RngState::new(0);
        let mut meter = MatvecMeter::default();
        assert!(psd_pencil(&a, &b, 0.0, 1.0, 0.1, &mut rng, &mut meter).is_err());
        assert!(psd_pencil(&a, &b, 2.0, 1.0, 0.1, &mut rng, &mut meter).is_err());
        assert!(psd_pencil(&a, &b, 0.5, 1.0, 0.0, &mut rng, &mut meter).is_err());
    }
}
