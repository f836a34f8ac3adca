use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("row {row} has zero sum; cannot normalize")]
    ZeroRowSum { row: usize },

    #[error("matrix already has self-loops on the diagonal")]
    AlreadySelfLooped,

    #[error("index {index} out of range for {n} nodes")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("shape mismatch in {op}: {detail}")]
    ShapeMismatch { op: &'static str, detail: String },

    #[error("window size must be odd and >= 1, got {0}")]
    InvalidWindow(usize),

    #[error("backward requires a scalar tensor, got shape {0:?}")]
    NonScalarLoss(Vec<usize>),

    #[error("parameter `{0}` has no gradient")]
    MissingGradient(String),

    #[error("parameter `{0}` registered more than once")]
    DuplicateParameter(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    #[error("function is not deterministic: two evaluations differ")]
    NonDeterministic,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn shape(op: &'static str, detail: impl Into<String>) -> Self {
        Error::ShapeMismatch {
            op,
            detail: detail.into(),
        }
    }
}
