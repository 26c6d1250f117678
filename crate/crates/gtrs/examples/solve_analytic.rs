//! Solves a two-variable instance whose optimum is known in closed form.
//!
//! minimize   x^2 + y^2 - 2x
//! subject to 4 - x^2 - y^2 <= 0
//!
//! The constraint keeps the point outside the radius-2 disk, so the
//! unconstrained minimizer (1, 0) is cut off and the optimum sits on the
//! boundary at (2, 0) with value 0.

use gtrs::{evaluate, solve, GtrsProblem,SolverConfig, SparseSymMatrix};

fn main() {
    let a_mat = SparseSymMatrix::from_entries(2, &[(0, 0, 1.0), (1, 1, 1.0)]).unwrap();
    let b_mat = SparseSymMatrix::from_entries(2, &[(0, 0, -1.0), (1, 1, -1.0)]).unwrap();
    let problem =
        GtrsProblem::new(a_mat, b_mat, vec![-1.0, 0.0], vec![0.0, 0.0], 4.0).unwrap();

    let eps = 1e-4;
    let config = SolverConfig::new(eps, 0.05, 0.5, 2024);
    let sol = solve(&problem, &config).unwrap();

    let (f, h) = evaluate(&problem, &sol.x);
    println!("status           {}", sol.status.as_str());
    println!("bracket          [{:.6}, {:.6}]", sol.lower, sol.upper);
    println!("value            {:.6}  (exact optimum 0)", sol.value);
    println!("point            ({:.6}, {:.6})  (exact optimizer (2, 0))", sol.x[0], sol.x[1]);
    println!("constraint       h(x) = {h:.3e} (must be <= 0)");
    println!("feasibility runs {}", sol.stats.feas_calls);
    println!("oracle matvecs   {}", sol.stats.oracle_matvecs);

    assert!(h <= 0.0, "returned point must be feasible");
    assert!(f <= 0.0 + eps, "value must be eps-close to the optimum");
    assert!((f - sol.value).abs() <= 1e-12);
}
