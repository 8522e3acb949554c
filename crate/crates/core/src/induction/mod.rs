//! Restriction/induction along exact sequences
//! `0 → M^p_{D−C−S}(L) → M^p_{D−C}(L) → M^p_{D−C}(L)|_S → 0`,
//! with generator bookkeeping and span verification at every step.

mod lemmas;
mod pipeline;

use thiserror::Error;

use crate::graded::GradedError;
use crate::toric::ToricError;

pub use lemmas::{lemma32_reconstruct, lemma33_extend, Lemma32Outcome, SplitRow};
pub use pipeline::{
    theorem34_pipeline, theorem35_pipeline, theorem36_pipeline, Decomposition, DescentReport,
    ExactnessRow, PipelineOptions, PipelineTrace, RestrictionStep, Theorem35Outcome,
    Theorem36Outcome,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InductionError {
    #[error("the kernel has nonzero elements in degree {degree}")]
    DegreeZeroKernel { degree: i64 },
    #[error("generators fail to span degree {degree}")]
    SpanFailure { degree: i64 },
    #[error("sequence is not exact in degree {degree}: {detail}")]
    ExactnessFailure { degree: i64, detail: String },
    #[error(
        "restriction at C = {c:?}, S = component {s} produced new generators at the bound {bound}"
    )]
    StepNotFG { c: Vec<i64>, s: usize, bound: i64 },
    #[error("hypothesis failed: {0}")]
    HypothesisFailure(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Toric(#[from] ToricError),
}
