use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("the zero octonion has no inverse")]
    ZeroOctonion,

    #[error("{0} is undefined at the origin")]
    ZeroVector(&'static str),

    #[error("expected a unit vector, got squared norm {norm_sqr}")]
    NotUnit { norm_sqr: f64 },

    #[error("matrix is not a skew complex structure (residual {residual:e})")]
    NotComplexStructure { residual: f64 },

    #[error("matrix is not orthogonal (residual {residual:e})")]
    NotOrthogonal { residual: f64 },

    #[error("+1 eigenspace has dimension {dim}, expected 8")]
    EigenspaceDimension { dim: usize },

    #[error("invariant form space has dimension {dim}, expected 1")]
    NullspaceDimension { dim: usize },

    #[error("triality companion nullspace has dimension {dim}, expected 1")]
    CompanionNullspace { dim: usize },

    #[error("group closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("normalization mismatch: expected `{expected}`, found `{found}`")]
    NormalizationMismatch { expected: String, found: String },

    #[error("invalid group preset: {0}")]
    InvalidPreset(String),

    #[error("invalid option: {0}")]
    InvalidOption(String),

    #[error("{condition} failed (residual {residual:e})")]
    InvariantFailure { condition: &'static str, residual: f64 },

    #[error("line family check failed: {0}")]
    FamilyMismatch(String),

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
