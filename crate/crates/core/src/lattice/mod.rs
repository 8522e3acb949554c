//! Exact integer and rational polyhedral primitives: lattice points,
//! dilation, recession cones and Hilbert bases.
//!
//! No floating point is used anywhere in this module.

mod cone;
pub mod linalg;
mod polyhedron;
mod vector;

pub use cone::{cone_contains, extreme_rays, Cone, HilbertBasisResult};
pub use linalg::Rat;
pub use polyhedron::{HalfSpace, RationalPolyhedron};
pub use vector::IntVector;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("polyhedron is unbounded")]
    UnboundedPolyhedron,
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("half-space normal must be nonzero")]
    ZeroNormal,
    #[error("ambient dimension must be positive")]
    ZeroDimension,
}
