use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring specification: {0}")]
    InvalidSpec(String),
    #[error("incompatible rings: {left} vs {right}")]
    SpecMismatch { left: String, right: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("substitution not supported at truncation: inner series {0} has a nonzero constant term")]
    NonZeroConstant(String),
    #[error("argument outside the maximal ideal: {0}")]
    OutsideMaximalIdeal(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("enumeration size {size} exceeds bound {bound}")]
    BoundExceeded { size: u128, bound: u128 },
    #[error("exact representation required: {0}")]
    ExactRepresentationRequired(String),
    #[error("unknown name: {0}")]
    Unknown(String),
    #[error("invalid transversal data: {0}")]
    Transversal(String),
    #[error("not a formal group law: {0}")]
    NotALaw(String),
    #[error("unsupported coefficient map: {0}")]
    Map(String),
    #[error("grid precondition violated: {0}")]
    Grid(String),
    #[error("{0}")]
    Invalid(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::parse(e.column(), format!("json line {}: {}", e.line(), e))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
