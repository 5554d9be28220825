use thiserror::Error;

pub type Result<T> = std::result::Result<T, RbaError>;

/// Errors raised by the analysis pipeline.
///
/// [`RbaError::code`] gives a stable machine-readable identifier and
/// [`RbaError::is_input_error`] separates malformed input from
/// mathematical failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RbaError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("invalid tolerance configuration: {0}")]
    Tolerance(String),

    #[error("axiom violation: {0}")]
    Axiom(String),

    #[error("no positive degree map")]
    NoPositiveDegreeMap,

    #[error("internal inconsistency: {0} all-positive one-dimensional representations found")]
    MultipleDegreeMaps(usize),

    #[error("center rank ambiguous (singular value {sigma:e} near threshold {threshold:e}); adjust eps_cluster")]
    CenterRankAmbiguous { sigma: f64, threshold: f64 },

    #[error("idempotent separation failed after {0} attempts")]
    IdempotentSeparation(usize),

    #[error("multiplicity inconsistency for character {index}: routes give {via_idempotent} and {via_trace}")]
    MultiplicityInconsistency {
        index: usize,
        via_idempotent: f64,
        via_trace: f64,
    },

    #[error("irreducible subspace extraction failed: {0}")]
    Extraction(String),

    #[error("matrix A is not positive definite: eigenvalue {eigenvalue:e} at position {index}")]
    NotPositiveDefinite { index: usize, eigenvalue: f64 },

    #[error("representation residual {residual:e} exceeds tolerance: {what}")]
    Representation { what: String, residual: f64 },

    #[error("indicator out of range for character {index}: raw value {raw}")]
    IndicatorOutOfRange { index: usize, raw: f64 },

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("lemma violation: {0}")]
    LemmaViolation(String),

    #[error("inconsistency: {0}")]
    Inconsistency(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not a valid group table: {0}")]
    NotAGroup(String),

    #[error("not a scheme: {0}")]
    NotAScheme(String),
}

impl RbaError {
    pub fn code(&self) -> &'static str {
        match self {
            RbaError::Parse { .. } => "parse",
            RbaError::Structural(_) => "structural",
            RbaError::Tolerance(_) => "tolerance",
            RbaError::Axiom(_) => "axiom",
            RbaError::NoPositiveDegreeMap => "no_positive_degree_map",
            RbaError::MultipleDegreeMaps(_) => "multiple_degree_maps",
            RbaError::CenterRankAmbiguous { .. } => "center_rank_ambiguous",
            RbaError::IdempotentSeparation(_) => "idempotent_separation",
            RbaError::MultiplicityInconsistency { .. } => "multiplicity_inconsistency",
            RbaError::Extraction(_) => "extraction",
            RbaError::NotPositiveDefinite { .. } => "not_positive_definite",
            RbaError::Representation { .. } => "representation",
            RbaError::IndicatorOutOfRange { .. } => "indicator_out_of_range",
            RbaError::Precondition(_) => "precondition",
            RbaError::LemmaViolation(_) => "lemma_violation",
            RbaError::Inconsistency(_) => "inconsistency",
            RbaError::Domain(_) => "domain",
            RbaError::NotAGroup(_) => "not_a_group",
            RbaError::NotAScheme(_) => "not_a_scheme",
        }
    }

    /// True for errors caused by malformed input rather than a negative
    /// mathematical verdict.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            RbaError::Parse { .. }
                | RbaError::Structural(_)
                | RbaError::Tolerance(_)
                | RbaError::Domain(_)
                | RbaError::NotAGroup(_)
                | RbaError::NotAScheme(_)
                | RbaError::Precondition(_)
        )
    }
}
