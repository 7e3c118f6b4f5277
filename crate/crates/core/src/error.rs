use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("size budget exceeded: {what} needs {needed}, budget is {budget}")]
    SizeBudgetExceeded {
        what: &'static str,
        needed: String,
        budget: u64,
    },

    #[error("zero has no discrete logarithm")]
    ZeroHasNoLog,

    #[error("{base} and {modulus} are not coprime")]
    NotCoprime { base: u64, modulus: u64 },

    #[error("no representation: {0}")]
    NoRepresentation(String),

    #[error("bad discriminant: -{0} is not the discriminant of a supported imaginary quadratic field")]
    BadDiscriminant(u64),

    #[error("{divisor} does not divide {value}")]
    NotADivisor { divisor: String, value: String },

    #[error("operation requires odd characteristic")]
    EvenCharacteristic,

    #[error("operation requires an odd prime, got {0}")]
    EvenPrime(u64),

    #[error("Gaussian period is not a rational integer: {0}")]
    IrrationalPeriod(String),

    #[error("{0}")]
    NotDivisible(String),

    #[error("{p} is not semi-primitive modulo {modulus}")]
    NotSemiprimitive { p: u64, modulus: u64 },

    #[error("not an index-2 case: {0}")]
    NotIndexTwo(String),

    #[error("weight is not a nonnegative integer: {0}")]
    NonIntegralWeight(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{0} is not an odd prime power")]
    OrderNotPrimePower(String),

    #[error("element does not belong to the source field of this map: {0}")]
    DomainMismatch(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
