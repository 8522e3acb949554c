//! Backend-agnostic graded algebras and modules presented by degree-slice
//! oracles, derived views of them, and bounded generator searches.

mod counting;
mod echelon;
mod generators;
mod polynomial;
mod slice;
mod traits;
mod views;

use thiserror::Error;

use crate::lattice::GeometryError;

pub use counting::{
    counting_bound_check, counting_refutation, growth_degree, CountingCheck, CountingFailure,
    CountingProbe, CountingRow, CountingWitness, GrowthEstimate, HilbertFunction,
};
pub use echelon::{Echelon, Reduction};
pub(crate) use generators::generated_span;
pub use generators::{
    find_algebra_generators, find_algebra_generators_seeded, find_module_generators,
    find_module_generators_seeded, first_unspanned_degree, generated_rank, CertificateKind,
    FGCertificate, GeneratorSet, SearchOutcome, Witness,
};
pub use polynomial::{PolynomialRing, Twist};
pub use slice::{BasisRef, Combination, DegreeSlice, Element, Label};
pub use traits::{
    act, algebra_dims, multiply, slice_dims, GradedAlgebra, GradedModule, SliceCache, SliceFamily,
};
pub use views::{
    change_offset, decompose, reindex_component, reindexed_offset, truncate, verify_sub_basis,
    veronese, AlgebraModule, OffsetModule, QuotientAlgebra, QuotientModule, Reindexed,
    ResidueComponent, Truncation, Veronese,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GradedError {
    #[error("label {label} appears twice in degree {degree}")]
    DuplicateLabel { degree: i64, label: String },
    #[error("label {label} is not in the basis of degree {degree}")]
    UnknownLabel { degree: i64, label: String },
    #[error("basis index {index} out of range in degree {degree}")]
    InvalidBasisRef { degree: i64, index: usize },
    #[error("period must be at least 1, got {0}")]
    InvalidPeriod(i64),
    #[error("residue {residue} is not in 0..{period}")]
    InvalidResidue { residue: i64, period: i64 },
    #[error("offset {requested} lies below the lowest degree {lowest} the oracle supports")]
    OracleRangeExceeded { requested: i64, lowest: i64 },
    #[error("label {label} in degree {degree} is not in the ambient basis")]
    NotASubmodule { degree: i64, label: String },
    #[error("search bound {bound} is below the lowest admissible degree {lowest}")]
    InvalidBound { bound: i64, lowest: i64 },
    #[error("no data for degree {degree}")]
    InsufficientRange { degree: i64 },
    #[error("growth exponent could not be determined from the sampled tail")]
    GrowthUndetermined,
    #[error("multiplicative structure unavailable: {0}")]
    StructureMissing(String),
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
