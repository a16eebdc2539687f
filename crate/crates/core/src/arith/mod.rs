//! Exact field, polynomial and matrix arithmetic: the layer everything else
//! is built on. All values are immutable after construction and every
//! operation is a pure function.

pub mod factor;
pub mod field;
pub mod grammar;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod scalar;

pub use field::Field;
pub use grammar::{FieldElem, ScalarGrammar};
pub use linalg::Rect;
pub use matrix::Mat;
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use scalar::{FieldDesc, Fq, FqCtx, Scalar};

/// Matrices as used by the group-theoretic modules: entries are rational
/// functions over the base field (constants in the characteristic-zero case).
pub type Matrix = Mat<FieldElem>;

/// Rational functions one transcendental up: elements of k(t)(u).
pub type FieldElem2 = RatFunc<FieldElem>;
