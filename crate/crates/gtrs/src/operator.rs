//! Matrix-free linear operators.
//!
//! The eigenvector oracle only ever sees something that can multiply a
//! vector. Pencils, homogenized constraint matrices, and their convex
//! combinations are assembled lazily here; none of them materializes a
//! matrix, so one application costs a constant number of sparse products.

use crate::sparse::SparseSymMatrix;
use crate::vecmath::dot;

/// Symmetric linear operator with known matvec cost, used by the
/// eigenvector oracle. `cost` reports the sparse products and the
/// nonzero-weighted work of a single `apply_into`, so callers can meter
/// total oracle effort.
pub trait LinOp {
    fn dim(&self) -> usize;

    /// Writes `C x` into `y` (overwriting it).
    fn apply_into(&self, x: &[f64], y: &mut [f64]);

    /// `(sparse products, nonzero-weighted work)` per application.
    fn cost(&self) -> (u64, u64);
}

/// Running tally of sparse matrix-vector products consumed by oracle
/// calls. `work` weights each product by the stored nonzeros of the matrix
/// applied, which is the scale-bearing metric for linearity checks;
/// `calls` counts oracle invocations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MatvecMeter {
    pub calls: u64,
    pub products: u64,
    pub work: u64,
}

impl MatvecMeter {
    pub fn record<C: LinOp + ?Sized>(&mut self, op: &C) {
        let (products, work) = op.cost();
        self.products += products;
        self.work += work;
    }
}

impl LinOp for SparseSymMatrix {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.matvec_into(x, y);
    }

    fn cost(&self) -> (u64, u64) {
        (1, self.nnz() as u64)
    }
}

/// `-C`, used to reduce min-eigenvector queries to max queries.
pub struct Negated<'a, C: LinOp + ?Sized>(pub &'a C);

impl<C: LinOp + ?Sized> LinOp for Negated<'_, C> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.0.apply_into(x, y);
        for v in y.iter_mut() {
            *v = -*v;
        }
    }

    fn cost(&self) -> (u64, u64) {
        self.0.cost()
    }
}

/// Convex pencil `mu * A + (1 - mu) * B`.
pub struct Pencil<'a> {
    pub a: &'a SparseSymMatrix,
    pub b: &'a SparseSymMatrix,
    pub mu: f64,
}

impl LinOp for Pencil<'_> {
    fn dim(&self) -> usize {
        self.a.n()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.a.matvec_into(x, y);
        let mut by = vec![0.0; self.b.n()];
        self.b.matvec_into(x, &mut by);
        for i in 0..y.len() {
            y[i] = self.mu * y[i] + (1.0 - self.mu) * by[i];
        }
    }

    fn cost(&self) -> (u64, u64) {
        (2, (self.a.nnz() + self.b.nnz()) as u64)
    }
}

/// Homogenized bordered operator
/// `scale * [[scalar, -lin'], [-lin, -mat]]`
/// acting on `(x0, xs)` of dimension `n + 1`. Both constraint matrices of
/// the feasibility SDP take this shape.
pub struct Homogenized<'a> {
    pub mat: &'a SparseSymMatrix,
    pub lin: &'a [f64],
    pub scalar: f64,
    pub scale: f64,
}

impl LinOp for Homogenized<'_> {
    fn dim(&self) -> usize {
        self.mat.n() + 1
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let n = self.mat.n();
        let (x0, xs) = (x[0], &x[1..]);
        self.mat.matvec_into(xs, &mut y[1..]);
        y[0] = self.scale * (self.scalar * x0 - dot(self.lin, xs));
        for i in 0..n {
            y[i + 1] = self.scale * (-x0 * self.lin[i] - y[i + 1]);
        }
    }

    fn cost(&self) -> (u64, u64) {
        (1, self.mat.nnz() as u64)
    }
}

/// `theta * Q1 + (1 - theta) * Q2` over two operators of the same shape.
pub struct ThetaCombination<'a, C1: LinOp + ?Sized, C2: LinOp + ?Sized> {
    pub q1: &'a C1,
    pub q2: &'a C2,
    pub theta: f64,
}

impl<C1: LinOp + ?Sized, C2: LinOp + ?Sized> LinOp for ThetaCombination<'_, C1, C2> {
    fn dim(&self) -> usize {
        self.q1.dim()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.q1.apply_into(x, y);
        let mut y2 = vec![0.0; y.len()];
        self.q2.apply_into(x, &mut y2);
        for i in 0..y.len() {
            y[i] = self.theta * y[i] + (1.0 - self.theta) * y2[i];
        }
    }

    fn cost(&self) -> (u64, u64) {
        let (p1, w1) = self.q1.cost();
        let (p2, w2) = self.q2.cost();
        (p1 + p2, w1 + w2)
    }
}

/// Rayleigh quotient `x' C x` through one operator application.
pub fn rayleigh<C: LinOp + ?Sized>(op: &C, x: &[f64]) -> f64 {
    let mut y = vec![0.0; x.len()];
    op.apply_into(x, &mut y);
    dot(x, &y)
}
