use thiserror::Error;

/// Every failure the pipeline can surface. Each variant maps to a stable
/// machine-readable code through [`Error::code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("field Q(sqrt {0}) is not in the supported list {{1, 2, 5, 13, 17}}")]
    UnsupportedField(i64),
    #[error("prime {p} ramifies in Q(sqrt {d})")]
    RamifiedPrime { p: i64, d: i64 },
    #[error("{0} is not a prime")]
    CompositeP(i64),
    #[error("ramification mismatch: found {found:?}, expected {expected:?}")]
    RamificationMismatch { found: Vec<String>, expected: Vec<String> },
    #[error("not an order: {0}")]
    NotAnOrder(String),
    #[error("bad auxiliary prime: {0}")]
    BadPrime(String),
    #[error("class enumeration stopped at mass {found}, expected {expected}")]
    MassMismatch { found: String, expected: String },
    #[error("level one is impossible: a prime above {0} has odd residue degree")]
    LevelOneImpossible(i64),
    #[error("lattice level {found} differs from expected {expected}")]
    LevelMismatch { found: String, expected: String },
    #[error("enumeration exceeded the safety cap of {0} lattice points")]
    BoundTooLarge(u64),
    #[error("theta series have different bounds ({0} vs {1})")]
    IncompatibleBounds(i64, i64),
    #[error("coefficient index of trace {trace} exceeds the computed bound {bound}")]
    CoefficientOutOfRange { trace: i64, bound: i64 },
    #[error("internal verification failed: {0}")]
    Verification(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnsupportedField(_) => "UnsupportedField",
            Error::RamifiedPrime { .. } => "RamifiedPrime",
            Error::CompositeP(_) => "CompositeP",
            Error::RamificationMismatch { .. } => "RamificationMismatch",
            Error::NotAnOrder(_) => "NotAnOrder",
            Error::BadPrime(_) => "BadPrime",
            Error::MassMismatch { .. } => "MassMismatch",
            Error::LevelOneImpossible(_) => "LevelOneImpossible",
            Error::LevelMismatch { .. } => "LevelMismatch",
            Error::BoundTooLarge(_) => "BoundTooLarge",
            Error::IncompatibleBounds(..) => "IncompatibleBounds",
            Error::CoefficientOutOfRange { .. } => "CoefficientOutOfRange",
            Error::Verification(_) => "Verification",
            Error::Config(_) => "Config",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
