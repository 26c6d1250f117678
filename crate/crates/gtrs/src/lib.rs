//! Sparse, matrix-free solver for the generalized trust region subproblem
//! (GTRS): minimize a quadratic `f(x) = x'Ax + 2a'x` subject to a single
//! quadratic constraint `h(x) = x'Bx + 2b'x + d <= 0`, where both `A` and
//! `B` may be indefinite.
//!
//! The solver never factors a matrix. Every stage works through sparse
//! matrix-vector products and an approximate extreme-eigenvector oracle:
//!
//! * [`pencil`] finds a convex pencil weight `mu` with `mu*A + (1-mu)*B`
//!   positive definite, or reports that no such weight exists.
//! * [`bounds`] turns the pencil weight into an initial bracket
//!   `l <= v* <= u` together with a feasible witness for `u`.
//! * [`sdp`] answers approximate feasibility queries "is there x with
//!   `f(x) <= c` and `h(x) <= 0`?" through a two-constraint SDP relaxation
//!   solved by eigenvector bisection plus a rank-two rounding rotation.
//! * [`solver`] drives binary search on the objective level `c` until the
//!   bracket collapses to width `O(eps)`.
//! * [`oracle`] holds a dense reference solver and an instance generator
//!   used for cross-checking; it is test support, not part of the fast path.
//!
//! ```
//! use gtrs::{solve, GtrsProblem, SolverConfig, SparseSymMatrix};
//!
//! // minimize 2x^2 + y^2 - 2y  s.t.  x^2 - y^2 - 1 <= 0  (optimum -1 at (0,1))
//! let a_mat = SparseSymMatrix::from_entries(2, &[(0, 0, 2.0), (1, 1, 1.0)]).unwrap();
//! let b_mat = SparseSymMatrix::from_entries(2, &[(0, 0, 1.0), (1, 1, -1.0)]).unwrap();
//! let problem = GtrsProblem::new(a_mat, b_mat, vec![0.0, -1.0], vec![0.0, 0.0], -1.0).unwrap();
//! let solution = solve(&problem, &SolverConfig::new(1e-3, 0.1, 0.4, 7)).unwrap();
//! assert!((solution.value - (-1.0)).abs() <= 1e-3);
//! ```

#![forbid(unsafe_code)]
#![allow(non_snake_case)]

pub mod bench;
pub mod bounds;
pub mod cli;
mod error;
pub mod eig;
pub mod operator;
pub mod oracle;
pub mod pencil;
pub mod sdp;
pub mod solver;
pub mod sparse;
pub mod vecmath;


pub use bounds::{compute_bounds, dual_lower_bound, feasible_point_alpha, BoundsResult};
pub use error::GtrsError;
pub use eig::{approx_max_ev, approx_min_ev, EigResult, RngState};
pub use operator::MatvecMeter;
pub use pencil::{psd_pencil, AssumptionFailure, PencilResult};
pub use sdp::{feas, relax_solve, sz_rotation, FeasOutcome, RankTwoPsd, RelaxOutcome};
pub use solver::{evaluate, solve, GtrsProblem, Solution, SolveStatus, SolverConfig};
pub use sparse::SparseSymMatrix;
