use alloc::string::String;

use crate::ppa::Certificate;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{value} is not divisible by {divisor}")]
    NonIntegralResult { value: String, divisor: String },
    #[error("empty set")]
    EmptySet,
    #[error("roots do not form a complete residue system modulo {modulus}")]
    NotAResidueSystem { modulus: u64 },
    #[error("root {root} is divisible by {modulus}, the polynomial would vanish at zero")]
    CoversZero { root: i64, modulus: u64 },
    #[error("the kept set must contain 0")]
    ZeroMissing,
    #[error("elements {0} and {1} coincide modulo p")]
    NotDistinctModP(u64, u64),
    #[error("0 cannot be covered by polynomials that are units at 0")]
    ZeroInSet,
    #[error("digit position {position} is outside 0..{d}")]
    RangeViolation { position: u32, d: u32 },
    #[error("degree bound violated: m = {m} but the covering product has degree {degree}")]
    DegreeBoundViolated { m: usize, degree: usize },
    #[error("a covering polynomial vanishes modulo p at 0")]
    ZeroUnitViolated,
    #[error("coefficient of the full monomial is zero")]
    FullCoefficientZero,
    #[error("no solution")]
    NoSolution,
    #[error("capacity exceeded: {0}")]
    CapExceeded(String),
    #[error("engine does not support p = {0}")]
    EngineUnsupported(u64),
    #[error("column {column} has sum {sum}, not divisible by {p}")]
    ColumnSumNotDivisible { column: usize, sum: i64, p: u64 },
    #[error("malformed node: {0}")]
    MalformedNode(String),
    #[error("edge is not incident to the node")]
    NotIncident,
    #[error("invalid instance: {0}")]
    InvalidInstance(Certificate),
    #[error("path exceeded {0} steps")]
    StepCapExceeded(u64),
    #[error("pairing is not an involution at step {0}")]
    PairingBroken(u64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}
