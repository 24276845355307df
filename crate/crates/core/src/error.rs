use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 256")]
    NotPrime(u32),
    #[error("modulus must be monic of degree {expected}, got {got:?}")]
    BadModulus { expected: usize, got: Vec<u32> },
    #[error("modulus {0:?} is reducible")]
    ReducibleModulus(Vec<u32>),
    #[error("field of size {p}^{degree} exceeds the enumeration budget of {budget} elements")]
    BudgetExceeded { p: u32, degree: usize, budget: u64 },
    #[error("degree {source_degree} does not divide degree {target_degree}")]
    DegreeMismatch { source_degree: usize, target_degree: usize },
    #[error("no embedding declared from the source field into the target field")]
    NoEmbedding,
    #[error("operands live over different coefficient rings")]
    RingMismatch,
    #[error("leading coefficient of the divisor is not a unit")]
    NonUnitLeading,
    #[error("coefficient {0} has no q-power root in the coefficient ring")]
    NoFrobeniusRoot(String),
    #[error("skew polynomial is not finite (no unit coefficient)")]
    NotFinite,
    #[error("no normalizing automorphism exists: {0}")]
    NotNormalizable(String),
    #[error("the zero ideal is not allowed here")]
    ZeroIdeal,
    #[error("ideal {0} is not prime")]
    NotPrimeIdeal(String),
    #[error("invalid Drinfeld module: {0}")]
    InvalidModule(String),
    #[error("operation needs a module of rank {expected}, got rank {got}")]
    WrongRank { expected: usize, got: usize },
    #[error("module has generic characteristic")]
    GenericCharacteristic,
    #[error("extension too small: kernel has dimension {found}, expected {expected}")]
    ExtensionTooSmall { found: usize, expected: usize },
    #[error("splitting field degree exceeds the cap of {cap}")]
    SplittingCapExceeded { cap: usize },
    #[error("kernel subgroup is invalid: {0}")]
    InvalidKernel(String),
    #[error("quotient does not exist: {0}")]
    HeightCondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("isogeny endpoints do not match")]
    EndpointMismatch,
    #[error("matrix is not invertible modulo the level")]
    SingularMatrix,
    #[error("level {level} is not coprime to {other}")]
    NotCoprime { level: String, other: String },
    #[error("not supported: {0}")]
    Unsupported(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
