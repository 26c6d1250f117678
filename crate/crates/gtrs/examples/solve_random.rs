//! Generates a random instance that satisfies the solver's assumption,
//! solves it matrix-free, and cross-checks the value against the dense
//! reference method. Pass a seed as the first argument to vary the
//! instance (default 11).

use gtrs::oracle::{dense_solve, gen_regular_instance};
use gtrs::{evaluate, solve, SolverConfig};

fn main() {
    let seed = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("seed must be an integer"))
        .unwrap_or(11);

    let instance = gen_regular_instance(80, 0.1, 0.5, seed).unwrap();
    let problem = &instance.problem;
    println!("instance         n = {}, nnz = {}, seed = {seed}", problem.n(), problem.nnz());

    let eps = 1e-3;
    let config = SolverConfig::new(eps, 0.05, instance.xi, seed);
    let sol = solve(problem, &config).unwrap();
    let reference = dense_solve(problem).unwrap();

    let (_, h) = evaluate(problem, &sol.x);
    println!("matrix-free      {:.8}  ({} oracle calls, {} matvecs)",
        sol.value, sol.stats.oracle_calls, sol.stats.oracle_matvecs);
    println!("dense reference  {:.8}  (multiplier {:.4}, boundary active: {})",
        reference.value, reference.multiplier, reference.active);
    println!("difference       {:.3e}  (tolerance {eps:.0e})", sol.value - reference.value);
    println!("constraint       h(x) = {h:.3e}");

    assert!(h <= 1e-9, "returned point must be feasible");
    assert!(
        sol.value >= reference.value - 1e-6 && sol.value <= reference.value + eps + 1e-6,
        "matrix-free value must land within eps above the reference optimum"
    );
}
