use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (relative defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("Bloch vector {r:?} lies outside the unit ball")]
    BlochOutOfBall { r: [f64; 3] },

    #[error("Bloch vector is zero; use the spectral path")]
    ZeroBloch,

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("rank {rank} is not in 1..={dim}")]
    BadRank { rank: usize, dim: usize },

    #[error("unitary is {got}x{got} but the channel has {needed} Kraus operators")]
    SizeMismatch { needed: usize, got: usize },

    #[error("channel has no Kraus operators")]
    EmptyChannel,

    #[error("channel is not trace preserving (defect {defect:.3e})")]
    NotTracePreserving { defect: f64 },

    #[error("channel is not unital (defect {defect:.3e})")]
    NotUnital { defect: f64 },

    #[error("closed form needs a Bloch vector")]
    MissingBloch,

    #[error("closed form does not cover channel kind {0}")]
    UnsupportedKind(String),

    #[error("eigendecomposition did not converge")]
    NoConvergence,

    #[error("invalid input: {0}")]
    Schema(String),

    #[error("grid {0} is empty")]
    EmptyGrid(&'static str),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema(_)
            | Error::EmptyGrid(_)
            | Error::OutOfRange { .. }
            | Error::MissingBloch
            | Error::UnsupportedKind(_)
            | Error::BadRank { .. }
            | Error::NotSquare { .. }
            | Error::NonFinite => 2,
            Error::Io { .. } => 4,
            _ => 3,
        }
    }

    pub(crate) fn out_of_range(name: &'static str, value: f64, range: &'static str) -> Self {
        Error::OutOfRange { name, value, range }
    }
}
