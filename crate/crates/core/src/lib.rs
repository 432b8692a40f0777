//! Exact lattice computations for simple plane sextics.
//!
//! A simple sextic `B` with ADE singularities determines lattice data
//! `[ℰ, h, Λ]`: the exceptional roots of its K3 double cover, the pull-back
//! of a line, and the primitive closure of the lattice they span.  This crate
//! classifies such data for a given ADE type, derives the splitting-curve
//! invariants, and certifies specialisations between lattice data.
//!
//! All arithmetic is exact.  The linear-algebra layer ([`linalg`]) is generic
//! over the integer scalar; the domain layers use the aliases below.

pub mod classify;
pub mod criterion;
pub mod demo;
pub mod discriminant;
pub mod error;
pub mod glue;
pub mod k3;
pub mod lattice;
pub mod linalg;
pub mod roots;
pub mod specialize;

/// Arbitrary-precision integer used throughout the domain layers.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational.
pub type Rat = num_rational::BigRational;
/// Integer matrix over [`Int`].
pub type IntMatrix = linalg::Matrix<Int>;
/// Rational matrix over [`Rat`].
pub type RatMatrix = linalg::Matrix<Rat>;
/// Small-integer instantiation of the generic matrix, for bounded entries.
pub type SmallMatrix = linalg::Matrix<i64>;

pub use error::{Error, Result};
pub use lattice::{Basis, EvenLattice, QVector, Sublattice};
pub use roots::{ADEType, Component, Family};

/// Version of the classification algorithm; part of every cache key.
pub const ALGORITHM_VERSION: &str = "1";
