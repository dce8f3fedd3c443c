use thiserror::Error;

/// Errors raised by parsing, validation and the geometric engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {context} (offset {pos}): {msg}")]
    Parse { context: String, pos: usize, msg: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("invalid extended origami: {0}")]
    Invalid(String),
    #[error("inconsistent moduli: walk {word} returns to its start with K = {product}")]
    Inconsistent { word: String, product: String },
    #[error("directions {0} and {1} are parallel")]
    DegenerateDirections(String, String),
    #[error("matrix {0} is singular")]
    SingularMatrix(String),
    #[error("side lengths {0} and {1} are incommensurable")]
    Incommensurable(String, String),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("sign normalization impossible: x-orbit through {0} is invariant under negation")]
    SignNormalization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(context: impl Into<String>, pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { context: context.into(), pos, msg: msg.into() }
    }
}
