//! Initial bracket `[l, u]` on the optimal value.
//!
//! The lower bound is the dual value at the pencil weight found by
//! [`crate::pencil::psd_pencil`]: with `nu0 = (1 - mu0) / mu0` and
//! `p = a + nu0 b`, weak duality gives
//! `v* >= d nu0 - mu0 ||p||^2 / lambda_bar`,
//! where `lambda_bar` discounts the oracle estimate by its error
//! allowance so it is a certified definiteness margin.
//!
//! The upper bound evaluates the objective at a feasible point built
//! from an approximate most-negative-curvature direction `y` of the
//! constraint matrix: scaling `y` far enough always satisfies the
//! constraint, and the scaling admits a closed form from the quadratic
//! formula. Feasibility of that point is deterministic: the curvature
//! estimate is the exact Rayleigh quotient of `y`, so the root choice
//! makes `h(alpha y) <= 0` an algebraic identity.

use crate::eig::{approx_min_ev, RngState};
use crate::error::GtrsError;
use crate::operator::MatvecMeter;
use crate::pencil::{psd_pencil, AssumptionFailure};
use crate::solver::{evaluate, GtrsProblem};
use crate::vecmath::dot;

/// Certified bracket on the optimal value plus the pencil data the
/// solver reuses for its compactness radius.
#[derive(Debug, Clone)]
pub struct BoundsResult {
    pub mu0: f64,
    /// Oracle estimate of the smallest pencil eigenvalue at `mu0`.
    pub lambda: f64,
    /// Certified definiteness margin `lambda - xi / 4`.
    pub lambda_bar: f64,
    /// Dual weight `(1 - mu0) / mu0`.
    pub nu0: f64,
    pub lower: f64,
    pub upper: f64,
    /// Feasible point attaining `upper`.
    pub witness: Vec<f64>,
    /// Estimated smallest eigenvalue of the constraint matrix.
    pub varpi: f64,
}

/// Dual lower bound on the optimal value for a pencil weight `mu0` whose
/// combination is positive definite with margin `lambda_bar`.
pub fn dual_lower_bound(
    mu0: f64,
    lambda_bar: f64,
    a: &[f64],
    b: &[f64],
    d: f64,
) -> Result<f64, GtrsError> {
    if !(mu0.is_finite() && mu0 > 0.0 && mu0 <= 1.0) {
        return Err(GtrsError::InvalidParameter(format!("mu0 = {mu0} must lie in (0, 1]")));
    }
    if !(lambda_bar.is_finite() && lambda_bar > 0.0) {
        return Err(GtrsError::InvalidParameter(format!(
            "definiteness margin lambda_bar = {lambda_bar} must be positive"
        )));
    }
    if a.len() != b.len() {
        return Err(GtrsError::DimensionMismatch {
            context: "dual bound linear terms",
            expected: a.len(),
            found: b.len(),
        });
    }
    let nu0 = (1.0 - mu0) / mu0;
    let p_sq: f64 = a.iter().zip(b).map(|(&ai, &bi)| ai + nu0 * bi).map(|v| v * v).sum();
    Ok(d * nu0 - mu0 * p_sq / lambda_bar)
}

/// Scaling that makes `alpha y` feasible when `y` is a unit vector with
/// `y'By = varpi < 0` and `b'y = by`: the larger root of
/// `varpi t^2 + 2 by t + d = 0` in absolute value, taken with the sign
/// that helps. Returns 0 when `d <= 0` (the origin already fits).
pub fn feasible_point_alpha(varpi: f64, by: f64, d: f64) -> Result<f64, GtrsError> {
    if !(varpi.is_finite() && varpi < 0.0) {
        return Err(GtrsError::InvalidParameter(format!(
            "curvature varpi = {varpi} must be negative to produce a feasible scaling"
        )));
    }
    if d <= 0.0 {
        return Ok(0.0);
    }
    Ok((by.abs() + (by * by + varpi.abs() * d).sqrt()) / varpi.abs())
}

/// Computes the initial bracket. `delta` covers both oracle stages used
/// here (the pencil search and the curvature estimate), half each.
pub fn compute_bounds(
    problem: &GtrsProblem,
    xi: f64,
    phi: f64,
    delta: f64,
    rng: &mut RngState,
    meter: &mut MatvecMeter,
) -> Result<BoundsResult, GtrsError> {
    let pencil = psd_pencil(&problem.A, &problem.B, xi, phi, delta / 2.0, rng, meter)?;
    let lambda_bar = pencil.lambda - xi / 4.0;
    let nu0 = (1.0 - pencil.mu) / pencil.mu;
    let lower = dual_lower_bound(pencil.mu, lambda_bar, &problem.a, &problem.b, problem.d)?;

    let curv = approx_min_ev(&problem.B, phi, xi / 2.0, delta / 2.0, rng, meter)?;
    let varpi = curv.lambda;
    if varpi >= 0.0 {
        // The constraint matrix should have an eigenvalue <= -xi; even
        // with the oracle's xi/2 allowance the estimate must be negative.
        return Err(GtrsError::AssumptionFailed(AssumptionFailure {
            iterations: pencil.iterations,
            bracket: (pencil.mu, pencil.mu),
            xi,
            detail: format!(
                "constraint matrix lacks negative curvature (estimate {varpi:.3e})"
            ),
        }));
    }

    let by = dot(&problem.b, &curv.x);
    let alpha = feasible_point_alpha(varpi, by, problem.d)?;
    // Flip y so the linear term works with the scaling rather than
    // against it; the quadratic parts are sign-invariant.
    let sign = if by > 0.0 { -1.0 } else { 1.0 };
    let witness: Vec<f64> = curv.x.iter().map(|&v| sign * alpha * v).collect();
    let (upper, h) = evaluate(problem, &witness);
    let h_scale = 1.0 + problem.d.abs() + phi * (1.0 + alpha * alpha);
    assert!(
        h <= 1e-12 * h_scale,
        "upper-bound witness must be feasible by construction (h = {h:.3e})"
    );

    log::info!(
        "bracket: lower {lower:.6e} (mu0 = {:.6}), upper {upper:.6e} (alpha = {alpha:.6})",
        pencil.mu
    );
    Ok(BoundsResult {
        mu0: pencil.mu,
        lambda: pencil.lambda,
        lambda_bar,
        nu0,
        lower,
        upper,
        witness,
        varpi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::SparseSymMatrix;
    use crate::vecmath::norm;

    #[test]
    fn dual_bound_matches_closed_forms() {
        // Pure objective weight and a = 0: the bound is zero whatever b, d.
        let l = dual_lower_bound(1.0, 0.5, &[0.0, 0.0], &[3.0, -1.0], 2.5).unwrap();
        assert_eq!(l, 0.0);
        // mu0 = 1, a = (1, 0), margin 0.5: l = -||a||^2 / 0.5 = -2.
        let l = dual_lower_bound(1.0, 0.5, &[1.0, 0.0], &[0.0, 0.0], 7.0).unwrap();
        assert!((l - -2.0).abs() < 1e-15);
        // Mixed weight folds b and d in through nu0.
        let l = dual_lower_bound(0.5, 2.0, &[1.0], &[1.0], 3.0).unwrap();
        // nu0 = 1, p = 2, l = 3 - 0.5 * 4 / 2 = 2.
        assert!((l - 2.0).abs() < 1e-15);
        assert!(dual_lower_bound(0.0, 0.5, &[1.0], &[1.0], 0.0).is_err());
        assert!(dual_lower_bound(0.5, 0.0, &[1.0], &[1.0], 0.0).is_err());
    }

    #[test]
    fn alpha_scaling_matches_hand_roots() {
        // varpi = -1, by = 0: alpha = sqrt(d).
        assert_eq!(feasible_point_alpha(-1.0, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(feasible_point_alpha(-1.0, 0.0, 4.0).unwrap(), 2.0);
        // varpi = -2, by = 1, d = 3: (1 + sqrt(1 + 6)) / 2.
        let alpha = feasible_point_alpha(-2.0, 1.0, 3.0).unwrap();
        assert!((alpha - (1.0 + 7.0_f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!(feasible_point_alpha(0.0, 1.0, 1.0).is_err());
        // Any d <= 0 short-circuits to the origin.
        assert_eq!(feasible_point_alpha(-3.0, 5.0, -2.0).unwrap(), 0.0);
    }

    #[test]
    fn bracket_contains_known_optimum() {
        // min 2x^2 + y^2 - 2y  s.t.  x^2 - y^2 <= 1; optimum -1 at (0, 1).
        let a_mat = SparseSymMatrix::diagonal(&[2.0, 1.0]).unwrap();
        let b_mat = SparseSymMatrix::diagonal(&[1.0, -1.0]).unwrap();
        let problem = GtrsProblem::new(a_mat, b_mat, vec![0.0, -1.0], vec![0.0, 0.0], -1.0).unwrap();
        let phi = 2.0 + 1.0 + 1.0 + 1.0;
        let mut rng = RngState::new(5);
        let mut meter = MatvecMeter::default();
        let res = compute_bounds(&problem, 0.4, phi, 0.1, &mut rng, &mut meter).unwrap();
        assert!(res.lower <= -1.0 + 1e-9, "lower = {}", res.lower);
        assert!(res.upper >= -1.0 - 1e-9, "upper = {}", res.upper);
        assert!(res.lambda_bar > 0.0);
        let (_, h) = evaluate(&problem, &res.witness);
        assert!(h <= 1e-12);
        // d <= 0 puts the witness at the origin, so the upper bound is 0.
        assert_eq!(res.upper, 0.0);
    }

    #[test]
    fn positive_d_forces_nonzero_witness() {
        // min x^2 + y^2 - 2x  s.t.  -x^2 - y^2 + 4 <= 0: feasible set is
        // the exterior of the radius-2 disk, optimum 0 at (2, 0).
        let a_mat = SparseSymMatrix::diagonal(&[1.0, 1.0]).unwrap();
        let b_mat = SparseSymMatrix::diagonal(&[-1.0, -1.0]).unwrap();
        let problem =
            GtrsProblem::new(a_mat, b_mat, vec![-1.0, 0.0], vec![0.0, 0.0], 4.0).unwrap();
        let phi = 1.0 + 1.0 + 1.0 + 4.0 + 1.0;
        let mut rng = RngState::new(6);
        let mut meter = MatvecMeter::default();
        let res = compute_bounds(&problem, 0.5, phi, 0.1, &mut rng, &mut meter).unwrap();
        let (f, h) = evaluate(&problem, &res.witness);
        assert!(h <= 1e-10, "witness infeasible: h = {h}");
        assert_eq!(res.upper, f);
        assert!(res.lower <= 0.0 + 1e-9);
        assert!(res.upper >= 0.0 - 1e-9);
        assert!(norm(&res.witness) >= 2.0 - 1e-6);
    }

    #[test]
    fn psd_constraint_matrix_is_an_assumption_failure() {
        let a_mat = SparseSymMatrix::diagonal(&[1.0, 1.0]).unwrap();
        let b_mat = SparseSymMatrix::diagonal(&[1.0, 2.0]).unwrap();
        let problem =
            GtrsProblem::new(a_mat, b_mat, vec![0.0, 0.0], vec![0.0, 0.0], -1.0).unwrap();
        let mut rng = RngState::new(2);
        let mut meter = MatvecMeter::default();
        match compute_bounds(&problem, 0.3, 5.0, 0.1, &mut rng, &mut meter) {
            Err(GtrsError::AssumptionFailed(f)) => {
                assert!(f.detail.contains("curvature"), "unexpected detail: {}", f.detail)
            }
            other => panic!("expected assumption failure, got {other:?}"),
        }
    }
}
