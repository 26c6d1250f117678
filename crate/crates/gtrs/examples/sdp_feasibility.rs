//! Asks the relax-and-round feasibility primitive two questions about an
//! instance with optimal value 0: "is there a feasible point with
//! objective at most 1?" (yes, with the point produced) and "... at most
//! -1?" (certifiably no). The solver's level bisection is this primitive
//! in a loop.

use gtrs::vecmath::norm;
use gtrs::{evaluate, feas, FeasOutcome, GtrsProblem, MatvecMeter, RngState, SparseSymMatrix};

fn main() {
    let a_mat = SparseSymMatrix::from_entries(2, &[(0, 0, 1.0), (1, 1, 1.0)]).unwrap();
    let b_mat = SparseSymMatrix::from_entries(2, &[(0, 0, -1.0), (1, 1, -1.0)]).unwrap();
    let problem =
        GtrsProblem::new(a_mat, b_mat, vec![-1.0, 0.0], vec![0.0, 0.0], 4.0).unwrap();

    let xi = 0.5;
    let rho_a = problem.A.norm_upper_bound();
    let rho_b = problem.B.norm_upper_bound();
    let k_shift = rho_a / xi + 1.0;
    // Every candidate solution lies on the boundary circle of radius 2,
    // so 3 is a safe norm cap for the rounding stage.
    let radius = 3.0;
    let mu_b = rho_b + 2.0 * norm(&problem.b) + problem.d.abs();

    let mut rng = RngState::new(9);
    let mut meter = MatvecMeter::default();

    for c in [1.0_f64, -1.0] {
        let mu_a = rho_a + 2.0 * norm(&problem.a) + c.abs();
        let outcome = feas(
            &problem, c, 0.25, 0.05, mu_a, mu_b, k_shift, radius, &mut rng, &mut meter,
        )
        .unwrap();
        match outcome {
            FeasOutcome::Point(x) => {
                let (f, h) = evaluate(&problem, &x);
                println!("level c = {c:+.1}: reachable, x = ({:.4}, {:.4}), f = {f:.6}, h = {h:.3e}", x[0], x[1]);
                assert!(f <= c + 1e-9 && h <= 1e-9);
            }
            FeasOutcome::Infeasible => {
                println!("level c = {c:+.1}: certified unreachable");
                assert!(c < 0.0, "level 1 lies above the optimum and must be reachable");
            }
        }
    }
    println!("oracle matvecs: {}", meter.products);
}
