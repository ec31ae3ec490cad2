use thiserror::Error;

/// Errors reported by the library.
///
/// `is_syntax` distinguishes malformed input text from domain failures so
/// callers (the CLI in particular) can map them to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("syntax error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("generator index {index} out of range 1..={n}")]
    GeneratorOutOfRange { index: u32, n: u32 },

    #[error("the algebra has no central generator (even number of coordinates)")]
    NoCentralGenerator,

    #[error("symbolic phase literal is not allowed in numeric mode")]
    PhaseInNumericMode,

    #[error("negative exponent is only allowed on phase literals")]
    NegativeExponent,

    #[error("numeric mode requires a deformation matrix")]
    MissingTheta,

    #[error("not a projector: {0}")]
    NotAProjector(String),

    #[error("matrix is not hermitian: {0}")]
    NotHermitian(String),

    #[error("exact trivialization requires a scalar part that diagonalizes over Q(i); {0}")]
    ExactDiagonalizationUnavailable(String),

    #[error("unitary completion failed at degree {degree}: residual {residual}")]
    UnitaryCompletionFailure { degree: u32, residual: String },

    #[error("duplicate matrix cell [{row},{col}] on line {line}")]
    DuplicateCell { row: usize, col: usize, line: usize },

    #[error("non-finite numeric coefficient produced")]
    NonFinite,

    #[error("internal identity violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by malformed input text rather than by the
    /// mathematical content of the request.
    pub fn is_syntax(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::DuplicateCell { .. } | Error::NegativeExponent
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
