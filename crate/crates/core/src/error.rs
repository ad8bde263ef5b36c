use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("index {index} out of range for sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("duplicate index {0} in index set")]
    DuplicateIndex(usize),

    #[error("subsequence length {length} exceeds sequence length {len}")]
    LengthExceedsSequence { length: usize, len: usize },

    #[error("q = {0} is outside [0, 1]")]
    ProbabilityOutOfRange(Rational),

    #[error("Q = {q_zero} >= 1: every length is admissible only vacuously (below {length})")]
    VacuousBound { q_zero: Rational, length: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("DP state budget exceeded: {needed} state entries > cap {cap}")]
    StateBudget { needed: u128, cap: u64 },

    #[error("oracle work budget of {budget} verifier calls exhausted; s > {lower_bound}")]
    WorkBudget { budget: u64, lower_bound: usize },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("no witness after {attempts} attempts (exact E[Z] = {expected_zero_sums})")]
    WitnessNotFound {
        attempts: u64,
        expected_zero_sums: Rational,
    },

    #[error("verifier failed for n={n} r={r} k={k} N={len}: {source}")]
    Verifier {
        n: u32,
        r: usize,
        k: u32,
        len: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Budget and size failures, as opposed to bad input.
    pub fn is_resource(&self) -> bool {
        match self {
            Error::StateBudget { .. } | Error::WorkBudget { .. } | Error::SizeLimit(_) => true,
            Error::Verifier { source, .. } => source.is_resource(),
            _ => false,
        }
    }
}
