use thiserror::Error;

/// Errors raised by the arithmetic kernels, decision procedures and the
/// reduction pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(String),
    #[error("{a} is not invertible modulo {m}")]
    NotCoprime { a: String, m: String },
    #[error("factoring budget exhausted on cofactor {0}")]
    FactorBudgetExceeded(String),
    #[error("expected an odd residue, got {0}")]
    EvenUnit(String),
    #[error("p = 2 has no quadratic non-residues")]
    NoQnrForTwo,
    #[error("division is not exact")]
    InexactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("intermediate term count exceeded cap {0}")]
    TermCapExceeded(usize),
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCapExceeded { degree: String, cap: u64 },
    #[error("required p-adic precision {required} exceeds cap {cap}")]
    PrecisionCapExceeded { required: String, cap: u32 },
    #[error("candidate residue set exceeded cap {0}")]
    CandidateCapExceeded(usize),
    #[error("invalid Hensel seed: {0}")]
    InvalidSeed(String),
    #[error("{m} does not divide p - 1 = {p_minus_one}")]
    NotDividingGroupOrder { m: String, p_minus_one: String },
    #[error("variable index {index} out of range 1..={num_vars}")]
    VariableOutOfRange { index: usize, num_vars: usize },
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no prime found in progression after {trials} trials")]
    PrimeSearchExhausted { trials: u64 },
    #[error("sieve bound {x} exceeds cap {cap}")]
    SieveCapExceeded { x: u64, cap: u64 },
    #[error("instance exceeds cap: {0}")]
    InstanceTooLarge(String),
}

impl Error {
    /// True for failures caused by a configured resource cap rather than bad
    /// input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::FactorBudgetExceeded(_)
                | Error::TermCapExceeded(_)
                | Error::DegreeCapExceeded { .. }
                | Error::PrecisionCapExceeded { .. }
                | Error::CandidateCapExceeded(_)
                | Error::PrimeSearchExhausted { .. }
                | Error::SieveCapExceeded { .. }
                | Error::InstanceTooLarge(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
