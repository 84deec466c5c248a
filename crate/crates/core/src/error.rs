use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown group descriptor `{0}`")]
    UnknownSpec(String),
    #[error("group order {order} exceeds the degree limit {limit}")]
    OrderOverflow { order: usize, limit: usize },
    #[error("degree {degree} exceeds the limit {limit}")]
    DegreeTooLarge { degree: usize, limit: usize },

    #[error("table is not a latin square: {0}")]
    NotLatinSquare(String),
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("elements {0:?} do not form a subgroup")]
    NotASubgroup(Vec<usize>),
    #[error("invalid subgroup chain: {0}")]
    BadChain(String),
    #[error("subgroup chain has fewer than two steps (the group is trivial or of prime order)")]
    ChainTooShort,

    #[error("value {value} out of range 0..{bound}")]
    OutOfRange { value: usize, bound: usize },
    #[error("block {block} is not injective (element {element} repeated)")]
    NotInjectiveBlock { block: usize, element: usize },
    #[error("blocks do not factor the group uniquely (element {element} produced {count} times)")]
    NotExactCover { element: usize, count: usize },
    #[error("{0} is not prime")]
    NotPrime(usize),

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("bad block shape lambda={lambda} mu={mu}")]
    BadShape { lambda: usize, mu: usize },
    #[error("element {0} is not in the subgroup")]
    NotInSubgroup(usize),
    #[error("block index {index} out of range 0..{lambda}")]
    BadBlockIndex { index: usize, lambda: usize },
    #[error("generators do not act transitively")]
    NotTransitive,
    #[error("invalid generating set configuration: {0}")]
    BadConfig(String),

    #[error("a secondary subgroup K is required for this case")]
    MissingSecondarySubgroup,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("construction requires odd degree, got {0}")]
    EvenDegree(usize),
    #[error("bad block coordinates: {0}")]
    BadBlockCoordinates(String),
    #[error("no odd permutation among the generators")]
    NoOddGenerator,
    #[error("construction failed: {0}")]
    Construction(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
