use thiserror::Error;

/// Errors raised by constructors and verifiers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generator set is empty")]
    EmptyGenerators,
    #[error("generators have gcd {0}; the gap set would be infinite")]
    InfiniteGapSet(u64),
    #[error("0 is not allowed as a generator or gap")]
    ZeroElement,
    #[error("gap set is not the complement of a semigroup: {0} + {1} = {2} is a gap")]
    ClosureViolation(u64, u64, u64),
    #[error("{0} is not a nonzero member of the semigroup")]
    NotAMember(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("function table covers 0..={have} but {need} is required")]
    DomainTooSmall { need: u64, have: u64 },
    #[error("undefined fraction: {0}")]
    UndefinedFraction(String),
    #[error("confluent nodes unsupported: node {0} is repeated")]
    ConfluentNodes(String),
    #[error("f is not injective: f({0}) = f({1})")]
    NotInjective(u64, u64),
    #[error("sample point z = {0} hits a pole")]
    PoleHit(String),
    #[error("enumeration of {count} subsets exceeds the limit {limit}")]
    EnumerationTooLarge { count: u128, limit: u128 },
    #[error("series did not converge within {max_terms} terms (last term {last_term:e})")]
    Convergence { max_terms: usize, last_term: f64 },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
