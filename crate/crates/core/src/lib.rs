//! Exact hyperplane covers and almost covers of finite point sets.
//!
//! The crate computes minimum hyperplane covers of permutohedron vertex sets,
//! permutation orbits, grids and zonotopes with exact rational arithmetic,
//! and checks the polynomial-method certificates behind their lower bounds
//! (Vandermonde expansions, signed permutation sums, permanents, and the
//! degree bound for polynomials vanishing on all but one grid point).

pub mod covers;
pub mod error;
pub mod exact_arith;
pub mod geometry;
pub mod pointsets;
pub mod polymethod;

pub use error::{Error, Result};
