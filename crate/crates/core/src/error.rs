use thiserror::Error;

/// Errors produced anywhere in the labeling pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(
        "predicate is not symmetric: term {term} has no mirrored partner with the same coefficient"
    )]
    Asymmetric { term: String },
    #[error("predicate is the zero polynomial")]
    ZeroPolynomial,
    #[error("predicate reduces to a constant (bilinear form has rank 0)")]
    ConstantPredicate,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("general position violated: f(x{0}, x{1}) = 0")]
    GeneralPosition(usize, usize),
    #[error("partition provider exhausted at node {node} after {attempts} attempts: {detail}")]
    ProviderExhausted {
        node: usize,
        attempts: usize,
        detail: String,
    },
    #[error("missing uniformity certificate at node {node} for vertex {vertex}")]
    MissingCertificate { node: usize, vertex: usize },
    #[error("{count} decoded pairs disagree with direct evaluation")]
    Mismatch { count: u64 },
    #[error("label headers do not match")]
    HeaderMismatch,
    #[error("malformed label: {0}")]
    MalformedLabel(String),
    #[error("bit stream truncated")]
    Truncated,
    #[error("unsupported format version {0}")]
    Version(u8),
    #[error("a vertex cannot be queried against itself (id {0})")]
    SelfQuery(u32),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
