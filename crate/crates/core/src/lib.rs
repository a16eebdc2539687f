//! Exact-arithmetic library for experiments with finitely generated matrix
//! groups: discrete valuations on function fields, Bruhat-Tits lattice-class
//! actions with stabilizer bounds, simultaneous block decompositions of
//! commuting families, and word-metric translation-length and distortion
//! estimators.
//!
//! No floating point is used anywhere; every comparison is a comparison of
//! canonical exact forms.

pub mod arith;
pub mod error;

pub mod blocks;
pub mod building;
pub mod distortion;
pub mod group;
pub mod valuations;

pub use arith::{Field, FieldDesc, FieldElem, Mat, Matrix, Poly, RatFunc, Scalar, ScalarGrammar};
pub use error::{Error, Result};

/// Seed used by every randomized routine unless overridden.
pub const DEFAULT_SEED: u64 = 0x6e70_635f_7365_6564;
