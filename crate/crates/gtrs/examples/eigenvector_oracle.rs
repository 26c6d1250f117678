//! Runs the randomized extreme-eigenvalue oracle on a tridiagonal
//! second-difference matrix whose spectrum is known in closed form:
//! eigenvalues 2 - 2 cos(k pi / (n+1)) for k = 1..n.

use std::f64::consts::PI;

use gtrs::{approx_max_ev, approx_min_ev, MatvecMeter, RngState, SparseSymMatrix};

fn main() {
    let n = 5_000;
    let mut entries = Vec::with_capacity(2 * n);
    for i in 0..n {
        entries.push((i, i, 2.0));
    }
    for i in 0..n - 1 {
        entries.push((i, i + 1, -1.0));
    }
    let m = SparseSymMatrix::from_entries(n, &entries).unwrap();

    let exact_max = 2.0 - 2.0 * (n as f64 * PI / (n as f64 + 1.0)).cos();
    let exact_min = 2.0 - 2.0 * (PI / (n as f64 + 1.0)).cos();

    // The extreme eigenvalues of this matrix cluster at spacing O(1/n^2),
    // so asking for accuracy below that spacing would force the iteration
    // toward a full tridiagonalization. 1e-3 keeps the run short.
    let eps = 1e-3;
    let mut rng = RngState::new(3);
    let mut meter = MatvecMeter::default();

    let top = approx_max_ev(&m, 4.0, eps, 0.05, &mut rng, &mut meter).unwrap();
    let matvecs_top = meter.products;
    let bottom = approx_min_ev(&m, 4.0, eps, 0.05, &mut rng, &mut meter).unwrap();

    println!("n = {n}, accuracy target {eps:.0e}");
    println!(
        "largest   estimate {:.12}, exact {:.12}, error {:+.3e}, matvecs {}",
        top.lambda,
        exact_max,
        top.lambda - exact_max,
        matvecs_top
    );
    println!(
        "smallest  estimate {:.12}, exact {:.12}, error {:+.3e}, matvecs {}",
        bottom.lambda,
        exact_min,
        bottom.lambda - exact_min,
        meter.products - matvecs_top
    );
    println!("total matvec work (products times nonzeros) {}", meter.work);

    // The estimate is an exact Rayleigh quotient of the returned vector, so
    // it can only undershoot the largest eigenvalue (and overshoot the
    // smallest), never the other way around.
    assert!(top.lambda <= exact_max + 1e-12 && top.lambda >= exact_max - eps);
    assert!(bottom.lambda >= exact_min - 1e-12 && bottom.lambda <= exact_min + eps);
    assert_eq!(top.x.len(), n);
}
