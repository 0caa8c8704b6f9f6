use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("stopping time is only defined for x >= 2 (got {0})")]
    StoppingTimeUndefined(BigUint),

    #[error("level {got} is below the minimum {min}")]
    LevelTooSmall { got: u32, min: u32 },

    #[error("row k={k} is not covered by a triangle built to n={max_n}")]
    RowOutOfRange { k: u32, max_n: u32 },

    #[error("column n={n} is not covered by a triangle built to n={max_n}")]
    ColumnOutOfRange { n: u32, max_n: u32 },

    #[error("malformed parity vector {vector}: {reason}")]
    MalformedVector { vector: String, reason: &'static str },

    #[error("parity vector of {x} does not match {vector}")]
    ParityMismatch { x: BigUint, vector: String },

    #[error("no lambda in {{1,3,5,7}} solves the step-1 child {vector} of x={x_prev}")]
    NoLambda { x_prev: BigUint, vector: String },

    #[error("step-2 pair ({parent}, {child}) is not congruent modulo 2^{shift}")]
    InexactDelta {
        parent: BigUint,
        child: BigUint,
        shift: u32,
    },

    #[error("explicit step-2 rule is only stated for 2 <= n <= 8 (got {0})")]
    ExplicitRuleRange(u32),

    #[error("tree export would produce {nodes} nodes, limit is {limit}")]
    TreeTooLarge { nodes: u64, limit: u64 },

    #[error("sieve depth k={k} would produce {records} surviving residues, limit is {limit}")]
    SieveTooLarge { k: u32, records: BigUint, limit: u64 },

    #[error("unknown sequence id {0}")]
    UnknownSequence(String),

    #[error("{id}: {requested} terms requested, feasibility bound is {limit}")]
    TooManyTerms {
        id: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("modulus 2^{0} exceeds the 63-bit prediction table")]
    PredictionTableTooWide(u32),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
