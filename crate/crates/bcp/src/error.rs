use thiserror::Error;

/// Crate-wide error type. The CLI maps these onto exit codes by kind.
#[derive(Debug, Error)]
pub enum Error {
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("graph on {n} vertices exceeds the vertex cap of {cap}")]
    GraphTooLarge { n: usize, cap: usize },

    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },

    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },

    #[error("vertex set is not independent: edge ({u}, {v}) is inside it")]
    NotIndependent { u: usize, v: usize },

    #[error("exact search over {size} vertices exceeds the cap of {cap}")]
    ExactCapExceeded { size: usize, cap: usize },

    #[error("estimated work {estimate:.3e} exceeds the cap of {cap:.1e} elementary checks")]
    WorkCapExceeded { estimate: f64, cap: f64 },

    #[error("invalid family parameters: {0}")]
    BadParams(String),

    #[error("no family member found within {attempts} sampling attempts")]
    SampleExhausted { attempts: u64 },

    #[error("witness is not an induced family member of the host graph: {0}")]
    NotMember(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    InvalidInput(String),
}

/// Why an edge-list document failed to parse.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected header `p <n> <m>`")]
    MalformedHeader,
    #[error("missing header line `p <n> <m>`")]
    MissingHeader,
    #[error("expected edge record `e <u> <v>`")]
    MalformedEdge,
    #[error("vertex {v} is not below the declared vertex count {n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("self-loop at vertex {v}")]
    SelfLoop { v: usize },
    #[error("edge endpoints must satisfy u < v, got ({u}, {v})")]
    EndpointOrder { u: usize, v: usize },
    #[error("declared {declared} edges but found {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("unexpected content after the declared edge records")]
    TrailingData,
}

pub type Result<T> = std::result::Result<T, Error>;
