use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree cap {cap} exceeded: degree {degree} produced by {op}")]
    DegreeCap { op: String, degree: u32, cap: u32 },

    #[error("polynomial variable count mismatch ({left} vs {right})")]
    NvarsMismatch { left: usize, right: usize },

    #[error("unsupported rank parameter n = {0} (need 3 <= n <= 6)")]
    UnsupportedN(usize),

    #[error("slot mismatch: {0}")]
    Slot(String),

    #[error("representation mismatch: {0}")]
    Representation(String),

    #[error("codifferential degree {0} not supported (expected 1 or 2)")]
    CodiffDegree(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("singular pointwise system in {0}")]
    Singular(String),

    #[error("inconsistent linear system in {op}: {detail}")]
    Inconsistent { op: String, detail: String },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("parse error at {path}: {msg}")]
    Parse { path: String, msg: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), msg: msg.into() }
    }
}
