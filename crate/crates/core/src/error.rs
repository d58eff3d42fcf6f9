use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("node {node} is outside [1, {rank}]")]
    NodeOutOfRange { node: i64, rank: u32 },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(u32, u32),
    #[error("rank {rank} exceeds the configured cap {cap}")]
    RankCap { rank: u32, cap: u32 },
    #[error("character would exceed {cap} terms")]
    CharacterTooLarge { cap: usize },
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("invalid segment: {0}")]
    InvalidSegment(String),
    #[error("not a prime snake: {0}")]
    NotPrimeSnake(String),
    #[error("not dominant: {0}")]
    NotDominant(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("path error: {0}")]
    Path(String),
    #[error("invalid inflation triple: {0}")]
    Inflation(String),
    #[error("not in the image of the inflation map: {0}")]
    NotInImage(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
