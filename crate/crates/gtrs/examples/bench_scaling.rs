//! Measures oracle work against instance size on the built-in benchmark
//! family and reports the fitted log-log slope.
//!
//! ```text
//! cargo run --release --example bench_scaling -- [sizes...]
//! ```

use gtrs::bench::{log_log_slope, run_bench, write_csv};

fn main() {
    let sizes: Vec<usize> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("sizes must be positive integers"))
        .collect();
    let sizes = if sizes.is_empty() { vec![1_000, 10_000, 100_000] } else { sizes };

    let rows = run_bench(&sizes, 3, &[1, 2, 3], 0.5, 0.3).expect("benchmark instances are valid");
    let mut out = Vec::new();
    write_csv(&rows, &mut out).unwrap();
    print!("{}", String::from_utf8(out).unwrap());

    let points: Vec<(f64, f64)> =
        rows.iter().map(|r| (r.nnz as f64, r.oracle_matvec_work as f64)).collect();
    let slope = log_log_slope(&points).expect("rows carry positive work counts");
    println!("# log-log slope of oracle work vs nonzeros: {slope:.3}");
}
