use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("infeasible rate: {0}")]
    InfeasibleRate(String),
    #[error("horizon too short: {0}")]
    HorizonTooShort(String),
    #[error("resonant spacing: m = {m} gives an integer multiple (m*mu/theta = {ratio})")]
    Resonance { m: u32, ratio: f64 },
    #[error("degenerate layout: {0}")]
    DegenerateLayout(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("inconsistent overlap triple: {0}")]
    InconsistentTriple(String),
    #[error("too many states: {count} exceeds the limit of {limit}")]
    TooManyStates { count: u128, limit: u128 },
    #[error("bisection failed: {0}")]
    Bracketing(String),
    #[error("empty active set")]
    EmptyActiveSet,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("codebook too large: {0} codewords (limit 65536)")]
    CodebookTooLarge(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
