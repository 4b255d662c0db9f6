use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum QrfError {
    #[error("amplitude count {len} is not a power of two >= 2")]
    NotPowerOfTwo { len: usize },

    #[error("state norm^2 = {norm_sq} deviates from 1 by more than {tol}")]
    NormOutOfTolerance { norm_sq: f64, tol: f64 },

    #[error("partial trace must keep at least one subsystem")]
    EmptyKeepSet,

    #[error("subsystem {index} out of range for a {n_qubits}-qubit system")]
    InvalidSubsystem { index: usize, n_qubits: usize },

    #[error("matrix is not diagonal: largest off-diagonal modulus {max_offdiag}")]
    NotDiagonal { max_offdiag: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("perspective assignment needs at least 2 qubits, got {n_qubits}")]
    TooFewQubits { n_qubits: usize },

    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expected a {expected}-qubit state, found {found} qubits")]
    WrongQubitCount { expected: usize, found: usize },

    #[error("expected strictly positive finite input, got {name} = {value}")]
    NonPositiveInput { name: &'static str, value: f64 },

    #[error("grid out of domain: {0}")]
    GridOutOfDomain(String),

    #[error("unknown quantity `{0}`")]
    UnknownQuantity(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

// serde_json wraps writer failures; report those as plain i/o.
impl From<serde_json::Error> for QrfError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            QrfError::Io(e.into())
        } else {
            QrfError::Json(e)
        }
    }
}

impl QrfError {
    /// Coarse category used for CLI error reports and exit codes.
    pub fn kind(&self) -> ErrorKind {
        use QrfError::*;
        match self {
            Io(_) | Json(_) | Csv(_) => ErrorKind::Io,
            NotPowerOfTwo { .. }
            | EmptyKeepSet
            | InvalidSubsystem { .. }
            | InvalidBipartition(_)
            | TooFewQubits { .. }
            | DimensionMismatch { .. }
            | WrongQubitCount { .. } => ErrorKind::Shape,
            NonPositiveInput { .. } | GridOutOfDomain(_) | UnknownQuantity(_) | Config(_) => {
                ErrorKind::Domain
            }
            NormOutOfTolerance { .. } | NotDiagonal { .. } | InvalidDensityMatrix(_) => {
                ErrorKind::Numeric
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Io,
    Shape,
    Domain,
    Numeric,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Io => "io",
            ErrorKind::Shape => "shape",
            ErrorKind::Domain => "domain",
            ErrorKind::Numeric => "numeric",
        }
    }

    /// 2 io, 3 shape, 4 domain, 5 numeric.
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Io => 2,
            ErrorKind::Shape => 3,
            ErrorKind::Domain => 4,
            ErrorKind::Numeric => 5,
        }
    }
}

pub type Result<T, E = QrfError> = std::result::Result<T, E>;
