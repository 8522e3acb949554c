//! Exact computations with divisorial algebras `R(L) = ⊕_{m≥0} H⁰(X, mL)`
//! and divisorial modules `M^p_F(L)`.
//!
//! The crate is organized bottom-up:
//!
//! * [`lattice`]: exact polyhedral primitives (lattice points, recession
//!   cones, Hilbert bases).
//! * [`graded`]: backend-agnostic graded algebras and modules given by
//!   degree-slice oracles, with truncation, decomposition, generator search
//!   and finite-generation certificates.
//! * [`toric`]: the toric backend, where every section space is the set of
//!   lattice points of a polytope.
//! * [`induction`]: restriction/induction pipelines along exact sequences.
//! * [`tabulated`]: Hilbert-function tables for non-toric scenarios and
//!   counting-based non-finite-generation witnesses.

pub mod graded;
pub mod induction;
pub mod lattice;
pub mod tabulated;
pub mod toric;

mod serde_rat;

pub use graded::{
    CertificateKind, DegreeSlice, Element, FGCertificate, GeneratorSet, GradedAlgebra, GradedError,
    GradedModule, Label,
};
pub use lattice::{Cone, GeometryError, HalfSpace, IntVector, Rat, RationalPolyhedron};
pub use toric::{CartierDivisor, Fan, ToricError, ToricVariety};
