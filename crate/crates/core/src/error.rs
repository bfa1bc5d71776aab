use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("variable context mismatch: arity {left} vs {right}")]
    ContextMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },

    #[error("invalid variable context: {0}")]
    InvalidContext(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown identifier `{name}` at line {line}, column {column}")]
    UnknownIdentifier { name: String, line: usize, column: usize },

    #[error("bad exponent at line {line}, column {column}: {message}")]
    BadExponent {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("division by a non-constant or zero expression at line {line}, column {column}")]
    BadDivision { line: usize, column: usize },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("in {object}: {source}")]
    InObject {
        object: String,
        #[source]
        source: Box<Error>,
    },

    #[error("arity mismatch in {object}: expected {expected} entries, got {got}")]
    ArityMismatch {
        object: String,
        expected: usize,
        got: usize,
    },

    #[error("form degree {got} not allowed here (expected {expected})")]
    WrongDegree { expected: usize, got: usize },

    #[error("arity {0} exceeds the supported envelope of 16 variables")]
    TooManyVariables(usize),

    #[error("need at least one {0}")]
    Empty(&'static str),

    #[error("quotient algebra is not finite-dimensional (ideal dimension {0})")]
    NotZeroDimensional(i64),

    #[error("local degree undefined: infinite Milnor number")]
    InfiniteMilnorNumber,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("component {index} does not exist (map has {count} components)")]
    NoSuchComponent { index: usize, count: usize },

    #[error("no map named `{0}` in problem")]
    NoSuchMap(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub(crate) fn in_object(self, object: impl Into<String>) -> Error {
        Error::InObject {
            object: object.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
