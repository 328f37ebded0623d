//! Signed rotation systems of quadrangulations of the sphere and the
//! projective plane, the surgeries that shrink them, and exact t-perfection
//! checks.

pub mod canonical;
pub mod embedding;
pub mod generate;
pub mod reduce;
pub mod surgery;
pub mod tperfect;

pub use canonical::{canonical_form, canonical_hash, CanonicalForm, Digest};
pub use embedding::{
    rsq, trace_faces, validate_quadrangulation, CycleHandle, Dart, EmbeddingError, RotationTable, Sign,
    SignedRotationSystem, Surface, ValidationReport, VertexId,
};
pub use generate::{gen_quadrangulation, Lcg};
pub use reduce::{reduce_projective, reduce_sphere, ReduceError, ReductionTrace, Terminal};
pub use surgery::{Operation, ReductionStep, StepKind, SurgeryError};
pub use tperfect::{Caps, Certificate, RationalVector, TPerfectError, Verdict};
