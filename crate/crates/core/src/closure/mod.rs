//! Aut-stable spans: scripted certificates, generic saturation, and the
//! certificate verifier.

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::morphism::MorphismError;

pub mod certificate;
pub mod saturate;
pub mod scripted;

pub use certificate::{
    verify_certificate, CertStep, CertificateError, ClosureCertificate, Derivation, MapRef, StepKind, Verdict,
    SCHEMA_VERSION,
};
pub use saturate::{default_pool_name, pool_preset, saturate, Saturation, SaturationStatus, POOL_PRESETS};
pub use scripted::{linear_part, reduce_to_degree_one, scripted_closure, vandermonde_extract};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("seed is a scalar; its span is already stable")]
    ScalarSeed,
    #[error("scripted closure needs characteristic 0 (got {0})")]
    CharacteristicPositive(u64),
    #[error("scripted closure supports polynomial or Weyl signatures, not {0}")]
    UnsupportedSignature(String),
    #[error("signature requires m >= 2 commutative variables")]
    NeedsTwoVariables,
    #[error("no variable satisfies the selection rule for {0}")]
    SelectionFailed(String),
    #[error("expected a degree-one element, got {0}")]
    InputNotDegreeOne(String),
    #[error("degree-one input has zero linear part")]
    ZeroLinearPart,
    #[error("pencil images do not determine the targets")]
    SingularSystem,
    #[error("internal: monomial {0} left uncovered")]
    CoverageIncomplete(String),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
