use thiserror::Error;

/// Errors surfaced by the library. Honest inconclusiveness (bounded searches
/// that neither prove nor refute) is reported through statuses, not here;
/// `Inconclusive` is reserved for operations that cannot return a partial
/// result.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown generator symbol {0:?}")]
    UnknownGenerator(char),

    #[error("coefficient domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("scalar {0} is not invertible in this domain")]
    NotInvertible(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("operation requires a nonempty input: {0}")]
    Empty(String),

    #[error("point {0} lies outside the graph oracle's vertex set")]
    OutOfDomain(String),

    #[error("support leaves the certified region of the graph oracle: {0}")]
    UncertifiedSupport(String),

    #[error("enumeration exceeds the configured cap ({0} > {1})")]
    ResourceLimit(usize, usize),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("displacement hypothesis not satisfied: {0}")]
    HypothesisNotMet(String),

    #[error("torsion-freeness fails at p={p}: witness {witness} lies in the module with all coefficients divisible by {p} but is not {p} times a member")]
    StarFailure { p: u64, witness: String },

    #[error("bounded search inconclusive: {0}")]
    Inconclusive(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
