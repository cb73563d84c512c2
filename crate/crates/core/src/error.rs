use crate::geometry::Point;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("zero-length segment at {0:?}")]
    DegenerateSegment(Box<Point>),

    #[error("polygon is not simple: {0}")]
    NonSimplePolygon(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error at {field}: {message}")]
    Schema { field: String, message: String },

    #[error("drawing is not in general position ({0} violations)")]
    InvalidDrawing(usize),

    #[error("parallel edges {0} and {1} cross")]
    CrossingParallelPair(usize, usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("instance too small: {0}")]
    TooSmall(String),

    #[error("drawing is not separated")]
    NotSeparated,

    #[error("drawing is not single-crossing")]
    NotSingleCrossing,

    #[error("vertex {vertex} has degree {degree} > {limit}")]
    DegreeTooHigh {
        vertex: usize,
        degree: usize,
        limit: usize,
    },

    #[error("discretization produced an invalid drawing: {0}")]
    DegenerateDiscretization(String),

    #[error("no valid instance found: {0}")]
    GenerationExhausted(String),

    #[error("log comparison undecided at {0} bits")]
    Undecided(u32),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateSegment(_) => "DegenerateSegment",
            Error::NonSimplePolygon(_) => "NonSimplePolygon",
            Error::Parse(_) => "ParseError",
            Error::Schema { .. } => "SchemaError",
            Error::InvalidDrawing(_) => "InvalidDrawing",
            Error::CrossingParallelPair(..) => "CrossingParallelPair",
            Error::Domain(_) => "DomainError",
            Error::TooLarge(_) => "TooLarge",
            Error::TooSmall(_) => "TooSmall",
            Error::NotSeparated => "NotSeparated",
            Error::NotSingleCrossing => "NotSingleCrossing",
            Error::DegreeTooHigh { .. } => "DegreeTooHigh",
            Error::DegenerateDiscretization(_) => "DegenerateDiscretization",
            Error::GenerationExhausted(_) => "GenerationExhausted",
            Error::Undecided(_) => "Undecided",
            Error::Io { .. } => "IoError",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
