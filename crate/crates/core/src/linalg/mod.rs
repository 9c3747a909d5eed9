//! Exact rational and integer polyhedral computation.

pub mod dd;
pub mod hull;
pub mod lattice;
pub mod lp;
pub mod matrix;
pub mod refine;

pub use dd::{enumerate_extreme_rays, enumerate_extreme_rays_filtered, Adjacency, ConeDescription, DdOptions, Ray};
pub use hull::{gauge, remove_redundant_points};
pub use lp::{solve_lp, LinearProgram, LpOutcome, LpSolution};
pub use matrix::Matrix;
pub use refine::{cut_by_halfspaces, HalfspaceCut};
