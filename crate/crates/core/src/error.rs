use thiserror::Error;

/// Errors shared across the whole library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("division by zero in finite field")]
    DivideByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("m = {m} does not divide q - 1 = {qm1}")]
    OrderMismatch { m: u64, qm1: u64 },
    #[error("cyclotomic elements have different m")]
    ModulusMismatch,
    #[error("{t} is not a unit mod {m}")]
    NonUnit { t: u64, m: u64 },
    #[error("p = m = {0} is ramified in Z[eps_m]")]
    RamifiedPrime(u64),
    #[error("valuation of zero element is undefined")]
    ZeroElement,
    #[error("p-adic precision {0} exhausted while computing a valuation")]
    PrecisionExhausted(u32),
    #[error("exponent {a} out of range (0, {m})")]
    BadExponent { a: u64, m: u64 },
    #[error("divisor support meets the ramification locus T")]
    SupportMeetsT,
    #[error("enumeration of {0} terms exceeds the configured budget")]
    DegreeTooLarge(u128),
    #[error("point-count budget exceeded ({0} points)")]
    BudgetExceeded(u128),
    #[error("hypothesis of the split-case criterion violated: some orbit sum O_t = 0")]
    HypothesisViolated,
    #[error("this criterion requires the base curve to be P^1")]
    BaseNotP1,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("Cartier-Manin matrices require odd characteristic")]
    EvenCharacteristic,
    #[error("expected genus {expected}, curve has genus {got}")]
    WrongGenus { expected: usize, got: usize },
    #[error("curve does not have the required shape: {0}")]
    WrongShape(String),
    #[error("functional equation violated; point counts are inconsistent")]
    InconsistentCounts,
    #[error("no m-th root of unity matches the constant term")]
    NoUnitMatch,
    #[error("invalid curve specification: {0}")]
    BadCurve(String),
}

pub type Result<T> = std::result::Result<T, Error>;
