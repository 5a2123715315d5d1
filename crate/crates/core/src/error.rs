use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("vertex {vertex} has degree {degree}, exceeding the bound {delta}")]
    DegreeExceeded { vertex: usize, degree: usize, delta: usize },

    #[error("infeasible instance: {0}")]
    Infeasible(String),

    #[error("graph is not a valid {0}")]
    FamilyMismatch(&'static str),

    #[error("value {value} does not fit in {width} bits")]
    FieldOverflow { value: u64, width: u32 },

    #[error("bit string of length {len} has no room for padding to {target}")]
    NoRoomForPadding { len: usize, target: usize },

    #[error("invalid padding")]
    BadPadding,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("corrupt label: {0}")]
    CorruptLabel(String),

    #[error("separator of size {size} exceeds budget {budget} on a {m}-vertex subgraph")]
    SeparatorBudget { size: usize, budget: usize, m: usize },

    #[error("cluster at level {level}, position {pos} overflows: {needed} > {capacity}")]
    ClusterOverflow { level: u32, pos: u64, needed: usize, capacity: u64 },

    #[error("embedding contract violated: {0}")]
    EmbeddingContract(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
