//! Exact-arithmetic engine for formal group laws and their geometry.
//!
//! The crate is layered bottom-up: exact scalars, graded polynomial
//! coefficients, a small family of coefficient rings, truncated sparse
//! multivariate power series, formal group laws with their inverse and
//! coefficient-table caches, twist sequences, cellular rings built from
//! projective-space products and rank-two projective bundles, and a split
//! K-theory layer on top. All arithmetic is exact; nothing here ever
//! touches floating point.

pub mod cellular;
pub mod error;
pub mod fgl;
pub mod ktheory;
pub mod poly;
pub mod ring;
pub mod scalar;
pub mod series;
pub mod twist;

pub use error::{AlgebraError, Result};
pub use ring::{BaseKind, Coeff, RingSpec};
pub use scalar::Scalar;
pub use series::MultiSeries;
