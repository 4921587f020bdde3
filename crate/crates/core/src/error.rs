use thiserror::Error;

pub type Result<T, E = RigError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum RigError {
    /// A document failed to parse or violates its schema. `path` points at the
    /// offending field (e.g. `moore.delta[3].move`).
    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("unknown move `{0}`")]
    UnknownMove(String),

    #[error("move index {0} is out of range")]
    MoveOutOfRange(usize),

    #[error("game is invalid: {0}")]
    InvalidGame(String),

    #[error("morphism is invalid: {0}")]
    InvalidMorphism(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("strategy is invalid: {0}")]
    InvalidStrategy(String),

    #[error("initial abstract state is not almost-sure winning")]
    NotWinning,

    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl RigError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        RigError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}
