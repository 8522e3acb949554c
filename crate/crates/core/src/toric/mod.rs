//! Toric realization of divisorial algebras and modules: every section space
//! `H⁰(X, D)` is spanned by the lattice points of the polytope
//! `P_D = {u : ⟨u, v_ρ⟩ ≥ −a_ρ}`.

mod divisor;
mod exact;
pub mod examples;
mod fan;
mod fixmov;
mod sections;

use thiserror::Error;

use crate::graded::GradedError;
use crate::lattice::GeometryError;

pub use divisor::CartierDivisor;
pub use exact::{
    algebra_cone, exact_fg_algebra, exact_fg_algebra_family, exact_fg_module,
    exact_fg_module_family, AlgebraCone,
};
pub use fan::{Fan, ToricVariety};
pub use fixmov::{
    fix_mov, fix_stability_check, is_ample, is_base_point_free, section_growth,
    supp_fix_with_ample, FixMov, FixStabilityReport, StabilityRow, SuppFixReport, SuppFixRow,
};
pub use sections::{
    divisorial_algebra, divisorial_family, divisorial_module, h0, restriction_image,
    restriction_kernel, restriction_kernel_twisted, SectionPolytopeFamily, ToricAlgebra,
    ToricModuleFamily,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ToricError {
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("fan is not complete: {0}")]
    NotComplete(String),
    #[error("maximal cone {cone:?} is not simplicial and full-dimensional")]
    NotSimplicial { cone: Vec<usize> },
    #[error("divisor is not Cartier on maximal cone {cone:?}")]
    NotCartier { cone: Vec<usize> },
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no ray with index {0}")]
    UnknownRay(usize),
    #[error("the variety is not smooth")]
    NotSmooth,
    #[error("{0} has no sections")]
    NoSections(String),
    #[error("{0} is not ample")]
    NotAmple(String),
    #[error("{0} is not effective")]
    NotEffective(String),
    #[error("invalid polytope family: {0}")]
    InvalidFamily(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("integer {0} does not fit in a degree")]
    Overflow(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}
