use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// Mixture means collapse to a single point, so no spike directions exist.
    #[error("degenerate spike: population spike eigenvalues are zero")]
    DegenerateSpike,

    #[error("requested {requested} components but the fit has rank {rank}")]
    RankExceeded { requested: usize, rank: usize },

    #[error("dimension mismatch: expected {expected} rows, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Signal not separable from noise: an estimated spike variance was
    /// non-positive, so no scaling factor can be formed for that component.
    #[error("degenerate signal for component {component}: {detail}")]
    DegenerateSignal { component: usize, detail: String },

    /// Repeated spike variances make the eigenvalue-inflation expansion blow up.
    #[error("degenerate spectrum: spike variances must be distinct")]
    DegenerateSpectrum,

    /// Every leave-one-out prediction score fell below the exclusion threshold.
    #[error("degenerate scores for component {component}: all leave-one-out ratios excluded")]
    DegenerateScore { component: usize },

    /// Procrustes target with linearly dependent score rows.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid score kind: expected {expected}, got {got}")]
    InvalidKind { expected: String, got: String },

    #[error("parse error at line {line}: {detail}")]
    ParseError { line: usize, detail: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
