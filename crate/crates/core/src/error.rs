use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("digit {digit} is out of range for an alphabet of size {q}")]
    DigitOutOfRange { digit: u64, q: u64 },

    #[error("malformed input: {0}")]
    Syntax(String),

    #[error("values belong to different fields")]
    FieldMismatch,

    #[error("dataset contains the same value twice (indices {first} and {second})")]
    DuplicateValue { first: usize, second: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("operation needs at least {needed} data points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("index {0} is not a member of the dataset")]
    UnknownMember(usize),

    #[error("subset is empty")]
    EmptySubset,

    #[error("clusters overlap at member {0}")]
    OverlappingClusters(usize),

    #[error("clusterings do not partition the same ground set")]
    GroundSetMismatch,

    #[error("center {center} is not a member of cluster {cluster}")]
    CenterNotInCluster { center: usize, cluster: usize },

    #[error("expected {expected} centers, one per cluster, got {got}")]
    CenterCount { expected: usize, got: usize },

    #[error("tree is not realizable: a vertex has {children} children but the alphabet has {q} symbols")]
    Unrealizable { children: usize, q: u64 },

    #[error("malformed tree: {0}")]
    InvalidTree(String),

    #[error("tree has no vertices")]
    NoVertices,

    #[error("invalid threshold: {0}")]
    InvalidThreshold(String),

    #[error("cluster budget must be at least 1")]
    InvalidBudget,
}
