use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid character {ch:?} at position {pos} for rank {rank}")]
    InvalidCharacter { ch: char, pos: usize, rank: usize },
    #[error("word reduces to the identity")]
    TrivialWord,
    #[error("empty word")]
    EmptyWord,
    #[error("rank {0} is outside the supported range 1..=26")]
    InvalidRank(usize),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("curve is a proper power (exponent {exponent})")]
    NonPrimitive { exponent: usize },
    #[error("strands failed to diverge within {bound} steps")]
    NonDivergent { bound: usize },
    #[error("ribbon graph is malformed: {0}")]
    MalformedGraph(String),
    #[error("base ribbon graph must have exactly one vertex, found {0}")]
    NotARose(usize),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("elliptic element with trace {trace}")]
    Elliptic { trace: f64 },
    #[error("cuff {0} is a cusp and has no orthogeodesic foot")]
    CuspedCuff(usize),
    #[error("no real solution for cuff lengths {0:?}")]
    NoRealSolution([f64; 3]),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("n = {0} exceeds the supported cap 2^62")]
    CapExceeded(f64),
    #[error("threshold not reached for n <= {0}")]
    NotReached(u64),
    #[error("catalog error: {0}")]
    Catalog(String),
}

pub type Result<T> = std::result::Result<T, Error>;
