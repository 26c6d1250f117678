//! Searches for a convex combination weight `mu` that makes
//! `mu*A + (1-mu)*B` positive definite, first on a pair where one exists
//! and then on a pair where none can (B = -A), showing the diagnostics
//! carried by the failure.

use gtrs::{psd_pencil, GtrsError, MatvecMeter, RngState, SparseSymMatrix};

fn main() {
    // Both diagonals are indefinite, but mu = 1/2 blends them into
    // diag(1, 1, 1/2), which is >= 0.5 I.
    let a_mat = SparseSymMatrix::from_entries(
        3,
        &[(0, 0, 3.0), (1, 1, -1.0), (2, 2, 2.0)],
    )
    .unwrap();
    let b_mat = SparseSymMatrix::from_entries(
        3,
        &[(0, 0, -1.0), (1, 1, 3.0), (2, 2, -1.0)],
    )
    .unwrap();

    let xi = 0.5;
    let phi = a_mat.norm_upper_bound() + b_mat.norm_upper_bound() + 1.0;
    let mut rng = RngState::new(17);
    let mut meter = MatvecMeter::default();

    let found = psd_pencil(&a_mat, &b_mat, xi, phi, 0.05, &mut rng, &mut meter).unwrap();
    println!("definite combination found:");
    println!("  mu          {:.6}", found.mu);
    println!("  lambda_min  >= {:.6} (certified above 3 xi / 4 = {:.6})", found.lambda, 0.75 * xi);
    println!("  bisections  {}", found.iterations);
    println!("  matvecs     {}", meter.products);

    // No convex combination of A and -A can be positive definite.
    let neg = SparseSymMatrix::from_entries(
        3,
        &[(0, 0, -3.0), (1, 1, 1.0), (2, 2, -2.0)],
    )
    .unwrap();
    let mut meter2 = MatvecMeter::default();
    match psd_pencil(&a_mat, &neg, xi, phi, 0.05, &mut rng, &mut meter2) {
        Err(GtrsError::AssumptionFailed(failure)) => {
            println!("\nimpossible pair rejected after {} bisections:", failure.iterations);
            println!("  final bracket [{:.6}, {:.6}]", failure.bracket.0, failure.bracket.1);
            println!("  {failure}");
        }
        other => panic!("expected an assumption failure, got {other:?}"),
    }
}
