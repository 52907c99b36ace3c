use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Two elements that must share a block structure do not.
    #[error("shape mismatch at block {block}: expected {expected}, found {found}")]
    ShapeMismatch {
        block: usize,
        expected: String,
        found: String,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A mathematical precondition failed; `measured` is the quantity that
    /// violated it (a norm, a residual, an eigenvalue).
    #[error("{what} (measured {measured:e})")]
    Precondition { what: String, measured: f64 },

    #[error("not completely positive: minimum Choi eigenvalue {min_choi_eig}")]
    NotCompletelyPositive { min_choi_eig: f64 },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// JSON document does not follow the expected schema. `pointer` is an
    /// RFC 6901 JSON pointer to the offending value.
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn precondition(what: impl Into<String>, measured: f64) -> Self {
        Error::Precondition {
            what: what.into(),
            measured,
        }
    }

    /// True for failures of a mathematical precondition, as opposed to I/O or
    /// malformed input files.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Schema { .. } | Error::Io(_) | Error::Json(_))
    }

    /// Short machine-readable tag used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ShapeMismatch { .. } => "shape_mismatch",
            Error::Dimension(_) => "dimension_mismatch",
            Error::Precondition { .. } => "precondition",
            Error::NotCompletelyPositive { .. } => "not_completely_positive",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::Invalid(_) => "invalid_input",
            Error::Numerical(_) => "numerical",
            Error::Schema { .. } => "schema",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
