use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("order {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("invalid Bloch sequence: {0}")]
    InvalidSequence(String),

    #[error("perturbation order must be at least 1, got {0}")]
    InvalidOrder(usize),

    #[error("invalid crossing numbers: {0}")]
    InvalidCrossingNumbers(String),

    #[error("string ordering is only defined on distinct strings")]
    EqualStrings,

    #[error("perturbation is not Hermitian (max deviation {deviation:e}, allowed {allowed:e})")]
    NotHermitian { deviation: f64, allowed: f64 },

    #[error(
        "target level {target} is degenerate: gap {gap:e} to level {other} is below {gap_tol:e}"
    )]
    DegenerateTarget {
        target: usize,
        other: usize,
        gap: f64,
        gap_tol: f64,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("coefficient routes disagree for {sequence}: {detail}")]
    Inconsistent { sequence: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag, used in JSON error objects and by the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::CapExceeded { .. } => "CapExceeded",
            Error::InvalidSequence(_) => "InvalidSequence",
            Error::InvalidOrder(_) => "InvalidOrder",
            Error::InvalidCrossingNumbers(_) => "InvalidCrossingNumbers",
            Error::EqualStrings => "EqualStrings",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::DegenerateTarget { .. } => "DegenerateTarget",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::Parse(_) => "Parse",
            Error::Inconsistent { .. } => "Inconsistent",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}
