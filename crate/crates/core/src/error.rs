use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("{n} molecules requested but at most {max} are supported (2^{max} = {blocks} solvent configurations)")]
    TooManyMolecules { n: usize, max: usize, blocks: usize },

    #[error("solvent configuration index {index} out of range for {n} molecules (must be < {bound})")]
    ConfigOutOfRange { index: usize, n: usize, bound: usize },

    #[error("matrix is not Hermitian: max |H - H^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("length mismatch: expected {expected}, got {actual} ({what})")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("index {index} out of range for {what} (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("generator dimension {dim} exceeds the dense eigensolver limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("eigendecomposition failed: {0}")]
    Eigensolver(String),

    #[error("Liouvillian eigenvector matrix is singular (condition estimate {condition:e}); the generator is defective, use the RK4 integrator")]
    DefectiveGenerator { condition: f64 },

    #[error("Liouvillian eigenvector matrix is ill-conditioned (condition estimate {condition:e} > {limit:e}); use the RK4 integrator instead")]
    IllConditioned { condition: f64, limit: f64 },

    #[error("negative time {0} ps")]
    NegativeTime(f64),

    #[error("times must be ascending and non-negative")]
    UnorderedTimes,

    #[error("RK4 step {dt} ps exceeds the stability bound; use dt <= {suggested} ps")]
    StepTooLarge { dt: f64, suggested: f64 },

    #[error("{0} is not supported by this routine")]
    Unsupported(String),

    #[error("empty frequency grid")]
    EmptyGrid,

    #[error("non-finite value in the {0} pathway")]
    NonFinite(&'static str),

    #[error("state invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}
