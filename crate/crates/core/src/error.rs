use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("generator x{index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: u32, rank: u32 },

    #[error("invalid degree: {0}")]
    InvalidDegree(String),

    #[error("framing violation: longitude {component} has exponent sum {sum} in its own meridian")]
    Framing { component: usize, sum: i64 },

    #[error("inconsistent PD code: {0}")]
    InvalidPdCode(String),

    #[error("mismatched chain ring parameters: ({0}) vs ({1})")]
    RingMismatch(String, String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("missing Milnor number for index {0}")]
    MissingMilnor(String),

    #[error("insufficient precision for index {index}: known mod {have}, need mod {need}")]
    Precision { index: String, have: u64, need: u64 },

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("infinite order: {0}")]
    InfiniteOrder(String),

    #[error("relator {index} does not map to the identity under rho_{multi_index}")]
    RelatorNotKilled { index: usize, multi_index: String },
}

pub type Result<T> = std::result::Result<T, Error>;
