//! Feasibility via a two-constraint semidefinite relaxation.
//!
//! The question "is there `x` with `f(x) <= c` and `h(x) <= 0`?" is
//! homogenized into "is there a unit-trace PSD matrix `Y` with
//! `Q1 . Y >= eps_r` and `Q2 . Y >= eps_r`?" for two normalized bordered
//! operators. Because there are only two constraints, the relaxation is
//! solved by a one-dimensional bisection over `theta in [0, 1]`: the
//! largest eigenvalue of `theta Q1 + (1 - theta) Q2` is exactly
//! `max { theta (Q1 . Y) + (1 - theta) (Q2 . Y) : Y PSD, tr Y = 1 }`,
//! so each eigenvector probe either certifies infeasibility, satisfies
//! both constraints outright, or tells which constraint is deficient and
//! hence which way to move `theta`. Two nearby probes deficient in
//! opposite constraints blend into a rank-two solution.
//!
//! A rank-two solution is then rounded to one vector: a Jacobi-style
//! rotation equalizes the first constraint across the two factors
//! without changing their sum of outer products, after which the factor
//! with the larger second-constraint value satisfies both. Dividing out
//! the homogenization coordinate yields the point; when that coordinate
//! is (numerically) zero the quadratic forms alone are enough to rescale
//! the remaining block into a strictly feasible point.

use crate::eig::{approx_max_ev, RngState};
use crate::error::GtrsError;
use crate::operator::{rayleigh, Homogenized, LinOp, MatvecMeter, ThetaCombination};
use crate::solver::GtrsProblem;
use crate::vecmath::{dot, norm};

/// Unit-trace PSD solution `Y = q y1 y1' + (1 - q) y2 y2'` of the
/// two-constraint relaxation, with unit vectors `y1`, `y2`.
#[derive(Debug, Clone)]
pub struct RankTwoPsd {
    pub q: f64,
    pub y1: Vec<f64>,
    pub y2: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum RelaxOutcome {
    Feasible(RankTwoPsd),
    /// Certificate: some convex combination of the constraint operators
    /// has largest eigenvalue below `eps_r`, so no unit-trace PSD matrix
    /// satisfies both constraints at level `eps_r`.
    Infeasible,
}

/// Bisection steps budgeted for tolerance `eps_r`.
pub fn relax_iterations(eps_r: f64) -> usize {
    ((8.0 / eps_r).log2().ceil() as usize).max(1)
}

struct Probe {
    theta: f64,
    q1_val: f64,
    q2_val: f64,
    x: Vec<f64>,
}

/// Solves `find Y PSD, tr Y = 1, Q1 . Y >= eps_r, Q2 . Y >= eps_r` in a
/// weak sense: `Feasible` returns `Y` meeting both constraints at level
/// `eps_r / 2`; `Infeasible` certifies (with probability `1 - delta`)
/// that no `Y` meets both at level `eps_r`. Requires `||Qi|| <= 1`.
pub fn relax_solve<C1: LinOp + ?Sized, C2: LinOp + ?Sized>(
    q1: &C1,
    q2: &C2,
    eps_r: f64,
    delta: f64,
    rng: &mut RngState,
    meter: &mut MatvecMeter,
) -> Result<RelaxOutcome, GtrsError> {
    if q1.dim() != q2.dim() {
        return Err(GtrsError::DimensionMismatch {
            context: "relaxation operators",
            expected: q1.dim(),
            found: q2.dim(),
        });
    }
    if !(eps_r.is_finite() && eps_r > 0.0) {
        return Err(GtrsError::InvalidParameter(format!("eps_r = {eps_r} must be positive")));
    }
    if !(delta.is_finite() && delta > 0.0 && delta < 1.0) {
        return Err(GtrsError::InvalidParameter(format!("delta = {delta} must lie in (0, 1)")));
    }

    let budget = relax_iterations(eps_r);
    let delta_step = delta / (budget + 2) as f64;
    let threshold = 0.5 * eps_r;

    let probe = |theta: f64, rng: &mut RngState, meter: &mut MatvecMeter| {
        let comb = ThetaCombination { q1, q2, theta };
        let est = approx_max_ev(&comb, 1.0, eps_r / 4.0, delta_step, rng, meter)?;
        let p = Probe {
            theta,
            q1_val: rayleigh(q1, &est.x),
            q2_val: rayleigh(q2, &est.x),
            x: est.x,
        };
        log::trace!(
            "relax probe theta = {theta:.9}: lambda ~ {:.3e}, q1 = {:.3e}, q2 = {:.3e}",
            est.lambda,
            p.q1_val,
            p.q2_val
        );
        Ok::<(Probe, f64), GtrsError>((p, est.lambda))
    };

    // The probe value theta q1_val + (1 - theta) q2_val tracks the top
    // eigenvalue up to oracle error. Below 3/4 eps_r it certifies that no
    // unit-trace PSD point reaches eps_r on both constraints (their
    // convex combination already falls short at this theta). Otherwise
    // exactly one constraint can be deficient: a Q1-deficient probe bounds
    // the feasible weights from below (more mass on Q1 is needed), a
    // Q2-deficient probe from above.
    enum Classified {
        Done(RelaxOutcome),
        Q1Deficient(Probe),
        Q2Deficient(Probe),
    }
    let classify = |p: Probe| {
        let value = p.theta * p.q1_val + (1.0 - p.theta) * p.q2_val;
        if value < 0.75 * eps_r {
            return Classified::Done(RelaxOutcome::Infeasible);
        }
        if p.q1_val >= threshold && p.q2_val >= threshold {
            let dim = p.x.len();
            return Classified::Done(RelaxOutcome::Feasible(RankTwoPsd {
                q: 1.0,
                y1: p.x,
                y2: vec![0.0; dim],
            }));
        }
        if p.q1_val < threshold {
            Classified::Q1Deficient(p)
        } else {
            Classified::Q2Deficient(p)
        }
    };

    let mut lo: Option<Probe> = None;
    let mut hi: Option<Probe> = None;

    for theta in [0.0, 1.0] {
        let (p, _) = probe(theta, rng, meter)?;
        match classify(p) {
            Classified::Done(outcome) => return Ok(outcome),
            Classified::Q1Deficient(p) => lo = Some(p),
            Classified::Q2Deficient(p) => hi = Some(p),
        }
    }

    // Both endpoint witnesses exist now: at theta = 0 the oracle saw only
    // Q2, so a deficiency there must be Q1's; symmetrically at theta = 1.
    let (mut lo, mut hi) = match (lo, hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => unreachable!("endpoint probes classify as deficient on their blind side"),
    };

    let mut steps = 0;
    while hi.theta - lo.theta > eps_r / 8.0 && steps < budget {
        steps += 1;
        let theta = 0.5 * (lo.theta + hi.theta);
        let (p, _) = probe(theta, rng, meter)?;
        match classify(p) {
            Classified::Done(outcome) => return Ok(outcome),
            Classified::Q1Deficient(p) => lo = p,
            Classified::Q2Deficient(p) => hi = p,
        }
    }
    assert!(
        hi.theta - lo.theta <= eps_r / 8.0 * (1.0 + 1e-9),
        "relaxation bracket failed to close within its budget"
    );

    combine(lo, hi, threshold)
}

/// Blends two probes deficient in opposite constraints. On the segment
/// `Y(q) = q x_lo x_lo' + (1 - q) x_hi x_hi'` both constraint values are
/// affine in `q` and cross; since the probes sit within `eps_r / 8` in
/// `theta` and the values are 2-Lipschitz in `theta`, the crossing value
/// stays above `eps_r / 2`.
fn combine(lo: Probe, hi: Probe, threshold: f64) -> Result<RelaxOutcome, GtrsError> {
    let (a1, b1) = (lo.q1_val, lo.q2_val);
    let (a2, b2) = (hi.q1_val, hi.q2_val);
    let denom = (a1 - b1) + (b2 - a2);
    let q = if denom.abs() > f64::EPSILON {
        ((b2 - a2) / denom).clamp(0.0, 1.0)
    } else if a1.min(b1) >= a2.min(b2) {
        1.0
    } else {
        0.0
    };
    let q1_at = q * a1 + (1.0 - q) * a2;
    let q2_at = q * b1 + (1.0 - q) * b2;
    if q1_at >= threshold && q2_at >= threshold {
        Ok(RelaxOutcome::Feasible(RankTwoPsd { q, y1: lo.x, y2: hi.x }))
    } else {
        // The bracket collapsed without a usable crossing; treat it as
        // the certificate the nearest probe provides.
        log::trace!("relax combine fell short: q = {q:.6}, values ({q1_at:.3e}, {q2_at:.3e})");
        Ok(RelaxOutcome::Infeasible)
    }
}

/// Rotates the factors of `X = sum_i z_i z_i'` (rank at most two) so
/// every factor carries an equal share of `M . X`, without changing `X`.
/// Requires `M . X >= a_val` up to roundoff; the returned factors then
/// satisfy `y_i' M y_i >= a_val / r` for `r` factors.
pub fn sz_rotation<M: LinOp + ?Sized>(
    z: &[Vec<f64>],
    m_op: &M,
    a_val: f64,
) -> Result<Vec<Vec<f64>>, GtrsError> {
    match z.len() {
        0 => Err(GtrsError::InvalidParameter("rotation needs at least one factor".into())),
        1 => Ok(vec![z[0].clone()]),
        2 => {
            let (z1, z2) = (&z[0], &z[1]);
            if z1.len() != z2.len() || z1.len() != m_op.dim() {
                return Err(GtrsError::DimensionMismatch {
                    context: "rotation factors",
                    expected: m_op.dim(),
                    found: z1.len().max(z2.len()),
                });
            }
            let mut mz1 = vec![0.0; z1.len()];
            m_op.apply_into(z1, &mut mz1);
            let m11 = dot(z1, &mz1);
            let m12 = dot(z2, &mz1);
            let mut mz2 = vec![0.0; z2.len()];
            m_op.apply_into(z2, &mut mz2);
            let m22 = dot(z2, &mz2);
            let total = m11 + m22;
            let scale = m11.abs() + m22.abs() + a_val.abs() + 1.0;
            assert!(
                total >= a_val - 1e-9 * scale,
                "rotation precondition violated: M . X = {total:.6e} < {a_val:.6e}"
            );

            let p_gap = 0.5 * (m11 - m22);
            let t = if p_gap == 0.0 {
                // Already split evenly; the zero rotation keeps it that way.
                0.0
            } else {
                0.5 * (-p_gap).atan2(m12)
            };
            let rotated = |t: f64| {
                let (s, c) = t.sin_cos();
                let y1: Vec<f64> =
                    z1.iter().zip(z2).map(|(&u, &v)| c * u + s * v).collect();
                let y2: Vec<f64> =
                    z1.iter().zip(z2).map(|(&u, &v)| -s * u + c * v).collect();
                (y1, y2)
            };
            // Value of y1'My1 - y2'My2 after rotating by t; the closed
            // form zeroes it, the bisection below is a fallback for the
            // rare case roundoff defeats the closed form.
            let split_gap = |t: f64| 2.0 * p_gap * (2.0 * t).cos() + 2.0 * m12 * (2.0 * t).sin();
            let mut angle = t;
            if split_gap(angle).abs() > 1e-7 * scale && p_gap != 0.0 {
                let (mut t_lo, mut t_hi) = (0.0_f64, std::f64::consts::FRAC_PI_2);
                if split_gap(t_lo) < 0.0 {
                    std::mem::swap(&mut t_lo, &mut t_hi);
                }
                for _ in 0..60 {
                    let mid = 0.5 * (t_lo + t_hi);
                    if split_gap(mid) >= 0.0 {
                        t_lo = mid;
                    } else {
                        t_hi = mid;
                    }
                }
                angle = 0.5 * (t_lo + t_hi);
            }
            let (y1, y2) = rotated(angle);
            Ok(vec![y1, y2])
        }
        r => Err(GtrsError::InvalidParameter(format!("rotation supports rank <= 2, got {r}"))),
    }
}

#[derive(Debug, Clone)]
pub enum FeasOutcome {
    /// A point with `f(x) <= c` and `h(x) <= 0` up to the stated
    /// recheck tolerance.
    Point(Vec<f64>),
    /// No `x` in the compactness ball satisfies `f(x) <= c - eps` and the
    /// constraint strictly (with probability `1 - delta`).
    Infeasible,
}

/// Asks whether the objective level `c` is attainable. `mu_a`, `mu_b`
/// normalize the homogenized objective and constraint operators,
/// `k_shift` is the constraint weighting `K`, and `radius` bounds the
/// norm of every candidate minimizer at this level.
#[allow(clippy::too_many_arguments)]
pub fn feas(
    problem: &GtrsProblem,
    c: f64,
    eps: f64,
    delta: f64,
    mu_a: f64,
    mu_b: f64,
    k_shift: f64,
    radius: f64,
    rng: &mut RngState,
    meter: &mut MatvecMeter,
) -> Result<FeasOutcome, GtrsError> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(GtrsError::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    if !(radius.is_finite() && radius >= 0.0) {
        return Err(GtrsError::InvalidParameter(format!("radius = {radius} must be nonnegative")));
    }
    if !(k_shift.is_finite() && k_shift >= 1.0) {
        return Err(GtrsError::InvalidParameter(format!("k_shift = {k_shift} must be >= 1")));
    }
    if !(mu_a.is_finite() && mu_b.is_finite() && mu_a > 0.0 && mu_b > 0.0) {
        return Err(GtrsError::InvalidParameter("operator scales must be positive".into()));
    }

    let kappa = mu_a.max(k_shift * mu_b);
    let s_cap = (radius + 1.0) * (radius + 1.0);
    // Q1 . (homogenized x) = (c - f(x)) / kappa, Q2 . (.) = -K h(x) / kappa.
    let q1 = Homogenized { mat: &problem.A, lin: &problem.a, scalar: c, scale: 1.0 / kappa };
    let q2 = Homogenized {
        mat: &problem.B,
        lin: &problem.b,
        scalar: -problem.d,
        scale: k_shift / kappa,
    };
    let eps_r = eps / (kappa * s_cap);

    let rank_two = match relax_solve(&q1, &q2, eps_r, delta, rng, meter)? {
        RelaxOutcome::Infeasible => return Ok(FeasOutcome::Infeasible),
        RelaxOutcome::Feasible(y) => y,
    };

    // Scale the unit-trace solution up to trace S and drop zero-weight
    // factors; X = sum z_i z_i' then satisfies Q1 . X, Q2 . X >= S eps_r / 2.
    let mut factors: Vec<Vec<f64>> = Vec::new();
    for (weight, y) in [(rank_two.q, &rank_two.y1), (1.0 - rank_two.q, &rank_two.y2)] {
        if weight > 0.0 && norm(y) > 0.0 {
            let s = (s_cap * weight).sqrt();
            factors.push(y.iter().map(|&v| s * v).collect());
        }
    }
    let a_val = 0.5 * eps / kappa;
    let rotated = sz_rotation(&factors, &q1, a_val)?;

    // The rotation preserves the total of each quadratic form, so the
    // factor with the larger constraint value clears half the total on
    // both forms.
    let (_, z) = rotated
        .into_iter()
        .map(|y| (rayleigh(&q2, &y), y))
        .max_by(|(u, _), (v, _)| u.total_cmp(v))
        .expect("rotation preserves factor count");

    match round_point(problem, c, k_shift, kappa, &q1, &q2, &z) {
        Some(x) => Ok(FeasOutcome::Point(x)),
        None => {
            log::trace!("degenerate rounding at level {c:.6e}; reporting infeasible");
            Ok(FeasOutcome::Infeasible)
        }
    }
}

/// Recovers a point from one homogenized factor `z = (t, tail)` whose
/// quadratic forms on both operators are positive. When `t` is far from
/// zero, dividing it out works directly and the form values translate
/// into strict margins on `f` and `h`. When `t` vanishes, the tail is
/// rescaled so the (sign-unknown) linear and constant terms are dominated
/// by the quadratic margins:
/// `f(tail / alpha) = (tail'A tail) / alpha^2 + 2 a'tail / alpha <= c`
/// whenever `alpha <= s1 / (2 |a'tail| + |c|)` with
/// `s1 = c t^2 - 2 t a'tail - tail'A tail > 0`, and symmetrically for the
/// constraint. Returns `None` if the margins have degenerated.
fn round_point(
    problem: &GtrsProblem,
    c: f64,
    k_shift: f64,
    kappa: f64,
    q1: &Homogenized,
    q2: &Homogenized,
    z: &[f64],
) -> Option<Vec<f64>> {
    let t = z[0];
    let tail = &z[1..];
    if t.abs() > 1e-12 * norm(z) {
        return Some(tail.iter().map(|&v| v / t).collect());
    }
    let s1 = kappa * rayleigh(q1, z);
    let s2 = (kappa / k_shift) * rayleigh(q2, z);
    let az = dot(&problem.a, tail);
    let bz = dot(&problem.b, tail);
    let mut alpha = 1.0_f64;
    let den1 = 2.0 * az.abs() + c.abs();
    let den2 = 2.0 * bz.abs() + problem.d.abs();
    if den1 > 0.0 {
        alpha = alpha.min(s1 / den1);
    }
    if den2 > 0.0 {
        alpha = alpha.min(s2 / den2);
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return None;
    }
    Some(tail.iter().map(|&v| v / alpha).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::evaluate;
    use crate::sparse::SparseSymMatrix;

    fn trace_of(y: &RankTwoPsd) -> f64 {
        y.q * dot(&y.y1, &y.y1) + (1.0 - y.q) * dot(&y.y2, &y.y2)
    }

    #[test]
    fn relax_finds_planted_direction() {
        // Q1 = diag(1, 0, 0), Q2 = diag(0.8, 0.1, 0): e1 satisfies both.
        let q1 = SparseSymMatrix::diagonal(&[1.0, 0.0, 0.0]).unwrap();
        let q2 = SparseSymMatrix::diagonal(&[0.8, 0.1, 0.0]).unwrap();
        let mut rng = RngState::new(3);
        let mut meter = MatvecMeter::default();
        match relax_solve(&q1, &q2, 0.2, 0.1, &mut rng, &mut meter).unwrap() {
            RelaxOutcome::Feasible(y) => {
                assert!((trace_of(&y) - 1.0).abs() < 1e-9);
                let v1 = y.q * q1.quad_form(&y.y1) + (1.0 - y.q) * q1.quad_form(&y.y2);
                let v2 = y.q * q2.quad_form(&y.y1) + (1.0 - y.q) * q2.quad_form(&y.y2);
                assert!(v1 >= 0.1 && v2 >= 0.1, "constraint values {v1}, {v2}");
            }
            RelaxOutcome::Infeasible => panic!("planted instance reported infeasible"),
        }
    }

    #[test]
    fn relax_certifies_opposed_constraints() {
        // Q1 = -Q2: any PSD Y has Q1 . Y = -(Q2 . Y), so both cannot be
        // positive. Every convex combination's top eigenvalue is tiny.
        let q1 = SparseSymMatrix::diagonal(&[0.5, -0.5]).unwrap();
        let q2 = SparseSymMatrix::diagonal(&[-0.5, 0.5]).unwrap();
        let mut rng = RngState::new(4);
        let mut meter = MatvecMeter::default();
        // eps_r = 1.2 exceeds what either constraint can reach jointly.
        match relax_solve(&q1, &q2, 1.2, 0.1, &mut rng, &mut meter).unwrap() {
            RelaxOutcome::Infeasible => {}
            RelaxOutcome::Feasible(_) => panic!("opposed constraints reported feasible"),
        }
    }

    #[test]
    fn relax_needs_rank_two_on_disjoint_supports() {
        // Q1 = diag(1, 0), Q2 = diag(0, 1): no single unit vector gets
        // both above 1/2 + margin, but q = 1/2 across e1, e2 gives 1/2.
        let q1 = SparseSymMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let q2 = SparseSymMatrix::diagonal(&[0.0, 1.0]).unwrap();
        let mut rng = RngState::new(8);
        let mut meter = MatvecMeter::default();
        match relax_solve(&q1, &q2, 0.5, 0.1, &mut rng, &mut meter).unwrap() {
            RelaxOutcome::Feasible(y) => {
                assert!((trace_of(&y) - 1.0).abs() < 1e-9);
                let v1 = y.q * q1.quad_form(&y.y1) + (1.0 - y.q) * q1.quad_form(&y.y2);
                let v2 = y.q * q2.quad_form(&y.y1) + (1.0 - y.q) * q2.quad_form(&y.y2);
                // No single coordinate direction reaches 1/4 on both, so
                // the solution must balance the two supports.
                assert!(v1 >= 0.25 && v2 >= 0.25, "constraint values {v1}, {v2}");
            }
            RelaxOutcome::Infeasible => panic!("jointly attainable pair reported infeasible"),
        }
    }

    #[test]
    fn rotation_equalizes_and_preserves_outer_product_sum() {
        // M = diag(2, 0): z1 = e1, z2 = e2 carry shares 2 and 0. The
        // rotation must land both at 1 while X = z1 z1' + z2 z2' = I stays.
        let m = SparseSymMatrix::diagonal(&[2.0, 0.0]).unwrap();
        let z = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let rotated = sz_rotation(&z, &m, 2.0).unwrap();
        let v1 = m.quad_form(&rotated[0]);
        let v2 = m.quad_form(&rotated[1]);
        assert!((v1 - 1.0).abs() < 1e-12, "first share {v1}");
        assert!((v2 - 1.0).abs() < 1e-12, "second share {v2}");
        for i in 0..2 {
            for j in 0..2 {
                let before = z[0][i] * z[0][j] + z[1][i] * z[1][j];
                let after =
                    rotated[0][i] * rotated[0][j] + rotated[1][i] * rotated[1][j];
                assert!((before - after).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rotation_handles_even_split_and_rank_one() {
        let m = SparseSymMatrix::diagonal(&[1.0, 1.0]).unwrap();
        let z = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        // Already equal: factors must come back unchanged.
        let rotated = sz_rotation(&z, &m, 2.0).unwrap();
        assert_eq!(rotated, z);
        let single = sz_rotation(&z[..1], &m, 1.0).unwrap();
        assert_eq!(single[0], z[0]);
    }

    #[test]
    fn rotation_off_diagonal_coupling() {
        // M with coupling: closed-form angle must still equalize shares.
        let m = SparseSymMatrix::from_entries(
            3,
            &[(0, 0, 3.0), (0, 1, 1.0), (1, 1, -1.0), (2, 2, 0.5)],
        )
        .unwrap();
        let z = vec![vec![1.0, 0.0, 0.5], vec![0.0, 1.0, -0.5]];
        let x11 = m.quad_form(&z[0]);
        let x22 = m.quad_form(&z[1]);
        let rotated = sz_rotation(&z, &m, x11 + x22).unwrap();
        let v1 = m.quad_form(&rotated[0]);
        let v2 = m.quad_form(&rotated[1]);
        assert!((v1 - v2).abs() < 1e-9, "shares {v1} vs {v2}");
        assert!((v1 + v2 - (x11 + x22)).abs() < 1e-9);
    }

    fn toy_problem() -> GtrsProblem {
        // min 2x^2 + y^2 - 2y s.t. x^2 - y^2 <= 1, optimum -1 at (0, 1).
        let a_mat = SparseSymMatrix::diagonal(&[2.0, 1.0]).unwrap();
        let b_mat = SparseSymMatrix::diagonal(&[1.0, -1.0]).unwrap();
        GtrsProblem::new(a_mat, b_mat, vec![0.0, -1.0], vec![0.0, 0.0], -1.0).unwrap()
    }

    #[test]
    fn feas_attains_reachable_level() {
        let problem = toy_problem();
        let (mu_a, mu_b) = (2.0 + 2.0 + 0.5, 1.0 + 0.0 + 1.0);
        let k_shift = 2.0 / 0.4 + 1.0;
        let mut rng = RngState::new(12);
        let mut meter = MatvecMeter::default();
        // Level 0 is attainable (the optimum is -1).
        match feas(&problem, -0.5, 0.05, 0.05, mu_a, mu_b, k_shift, 6.0, &mut rng, &mut meter)
            .unwrap()
        {
            FeasOutcome::Point(x) => {
                let (f, h) = evaluate(&problem, &x);
                let kappa = mu_a.max(k_shift * mu_b);
                assert!(f <= -0.5 + 1e-9 * kappa, "f = {f}");
                assert!(h <= 1e-9 * kappa, "h = {h}");
            }
            FeasOutcome::Infeasible => panic!("attainable level reported infeasible"),
        }
    }

    #[test]
    fn feas_rejects_level_below_optimum() {
        let problem = toy_problem();
        let (mu_a, mu_b) = (2.0 + 2.0 + 3.0, 1.0 + 0.0 + 1.0);
        let k_shift = 2.0 / 0.4 + 1.0;
        let mut rng = RngState::new(13);
        let mut meter = MatvecMeter::default();
        // The optimum is -1; level -3 is out of reach for any point.
        match feas(&problem, -3.0, 0.05, 0.05, mu_a, mu_b, k_shift, 6.0, &mut rng, &mut meter)
            .unwrap()
        {
            FeasOutcome::Infeasible => {}
            FeasOutcome::Point(x) => {
                let (f, h) = evaluate(&problem, &x);
                panic!("impossible level attained: f = {f}, h = {h}");
            }
        }
    }

    #[test]
    fn rounding_divides_out_the_homogenization_coordinate() {
        let problem = toy_problem();
        let (kappa, k_shift, c) = (12.0, 6.0, 0.0);
        let q1 = Homogenized { mat: &problem.A, lin: &problem.a, scalar: c, scale: 1.0 / kappa };
        let q2 = Homogenized {
            mat: &problem.B,
            lin: &problem.b,
            scalar: -problem.d,
            scale: k_shift / kappa,
        };
        let z = vec![2.0, 0.5, 3.0];
        let x = round_point(&problem, c, k_shift, kappa, &q1, &q2, &z).unwrap();
        assert_eq!(x, vec![0.25, 1.5]);
    }

    #[test]
    fn rounding_rescales_when_homogenization_vanishes() {
        // Indefinite instance so both quadratic margins can be positive on
        // a tail alone: min -x^2 + y^2 s.t. -x^2 + 2y^2 + 3 <= 0.
        let a_mat = SparseSymMatrix::diagonal(&[-1.0, 1.0]).unwrap();
        let b_mat = SparseSymMatrix::diagonal(&[-1.0, 2.0]).unwrap();
        let problem =
            GtrsProblem::new(a_mat, b_mat, vec![0.0, 0.0], vec![0.0, 0.0], 3.0).unwrap();
        let (kappa, k_shift, c) = (10.0, 4.0, 0.0);
        let q1 = Homogenized { mat: &problem.A, lin: &problem.a, scalar: c, scale: 1.0 / kappa };
        let q2 = Homogenized {
            mat: &problem.B,
            lin: &problem.b,
            scalar: -problem.d,
            scale: k_shift / kappa,
        };
        // z = (0, e1): s1 = -tail'A tail = 1 > 0, s2 = -tail'B tail = 1 > 0,
        // so alpha = min(s2 / |d|, 1) = 1/3 and x = 3 e1.
        let z = vec![0.0, 1.0, 0.0];
        let s1 = kappa * rayleigh(&q1, &z);
        let s2 = (kappa / k_shift) * rayleigh(&q2, &z);
        assert!((s1 - 1.0).abs() < 1e-12 && (s2 - 1.0).abs() < 1e-12);
        let x = round_point(&problem, c, k_shift, kappa, &q1, &q2, &z).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-12 && x[1] == 0.0);
        let (f, h) = evaluate(&problem, &x);
        assert!(f <= c + 1e-12, "f = {f}");
        assert!(h <= 1e-12, "h = {h}");
    }
}
