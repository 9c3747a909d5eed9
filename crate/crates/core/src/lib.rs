//! Exact computation of the Thurston norm unit ball of closed, oriented,
//! triangulated 3-manifolds from transversely oriented normal surfaces.

pub mod chi;
pub mod cli;
pub mod enumeration;
pub mod error;
pub mod homology;
pub mod linalg;
pub mod normal;
pub mod normball;
pub mod scalar;
pub mod surfaces;
pub mod triangulation;

pub use error::{Error, Result};
pub use triangulation::{parse_triangulation, ClosedTriangulation, Triangulation};

/// Arbitrary-precision rationals, the scalar type of every public result.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integers.
pub type Integer = num_bigint::BigInt;
