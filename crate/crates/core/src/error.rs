use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus {modulus:?} is reducible over F_{p}")]
    ReduciblePolynomial { p: u64, modulus: Vec<u64> },
    #[error("modulus must be monic of degree {expected}, got coefficients {modulus:?}")]
    DegreeMismatch { expected: u32, modulus: Vec<u64> },
    #[error("field of order {0} exceeds the supported size")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("expected dimension {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension must be at least {min}, got {found}")]
    DimensionTooSmall { min: usize, found: usize },
    #[error("space of {0} points exceeds the supported size")]
    SpaceTooLarge(u128),
    #[error("line direction must be nonzero")]
    ZeroDirection,
    #[error("parameter must be nonzero")]
    ZeroParameter,
    #[error("point set is empty")]
    EmptySet,
    #[error("point set does not lie on a single sphere")]
    NotOnSphere,
    #[error("set contains zero")]
    ZeroInSet,
    #[error("dimension {0} is odd")]
    DimensionOdd(usize),
    #[error("dimension {0} is even")]
    DimensionEven(usize),
    #[error("no null vector exists in dimension {0} over this field")]
    NoNullVector(usize),
    #[error(
        "F_q^{dimension} has no totally isotropic subspace of dimension {requested} \
         (largest available: {available}); {reason}"
    )]
    IsotropicDimensionUnavailable {
        dimension: usize,
        requested: usize,
        available: usize,
        reason: String,
    },
    #[error("progression of length {n} does not fit in the prime subfield of order {p}")]
    ProgressionTooLong { n: usize, p: u64 },
    #[error("{divisor} does not divide {target}")]
    NotDivisor { divisor: u64, target: u64 },
    #[error("divisor must be at least 2")]
    DivisorTooSmall,
    #[error("-1 is a square in this field")]
    MinusOneIsSquare,
    #[error("-1 is not a square in this field")]
    MinusOneNotSquare,
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("progression elements collide")]
    CollisionDetected,
    #[error("requested {size} points from a space of {available}")]
    SizeOutOfRange { size: usize, available: usize },
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("census of {census} exceeds the cap {cap}")]
    CapExceeded { census: u128, cap: u128 },
    #[error("unknown format {0:?}")]
    UnknownFormat(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}
