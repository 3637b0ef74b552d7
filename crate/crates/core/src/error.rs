use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set is empty")]
    EmptyGround,
    #[error("duplicate ground element `{0}`")]
    DuplicateElement(String),
    #[error("unknown ground element `{0}`")]
    UnknownElement(String),
    #[error("ground set has {size} elements, limit is {limit}")]
    GroundTooLarge { size: usize, limit: usize },
    #[error("empty block")]
    EmptyBlock,
    #[error("missing singleton block {0}")]
    MissingSingleton(String),
    #[error("blocks {0} and {1} intersect but their union is not a block")]
    UnionMissing(String, String),
    #[error("not connected: {0}")]
    NotConnected(String),
    #[error("building set is not closed under intersection ({0} and {1})")]
    NotIntersectionClosed(String, String),
    #[error("{0} is not a block of the building set")]
    BlockNotInBuildingSet(String),
    #[error("the full ground set cannot be a member of a nested set")]
    GroundSetMember,
    #[error("not a nested set: {0}")]
    NotNested(String),
    #[error("expected a maximal nested set or tree")]
    NotMaximal,
    #[error("no flip found removing {0}")]
    NoFlipFound(String),
    #[error("several flips found removing {0}")]
    MultipleFlipsFound(String),
    #[error("trees are not adjacent")]
    NotAdjacent,
    #[error("cross-check failed: {0}")]
    CrossCheckFailed(String),
    #[error("gamma must be greater than 2, got {0}")]
    GammaTooSmall(String),
    #[error("functional is not generic for summand {0}")]
    NonGenericFunctional(String),
    #[error("summands are not generating (block {block}, element {element})")]
    NotGenerating { block: String, element: String },
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    Empty,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
