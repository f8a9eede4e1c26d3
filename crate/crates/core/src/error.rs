use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("characteristic {0} is not supported (2 and 5 are excluded)")]
    BadCharacteristic(u64),
    #[error("modulus is not irreducible over F_{0}")]
    NotIrreducible(u64),
    #[error("tower level {level} is not etale")]
    NotEtale { level: usize },
    #[error("zero input")]
    ZeroInput,
    #[error("element is not a unit ({0})")]
    NotAUnit(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("degenerate bilinear form")]
    Degenerate,
    #[error("series is zero within precision {0}")]
    ZeroWithinPrecision(usize),
    #[error("equality over Q is undecided by rank, signature and discriminant")]
    UndecidedOverQ,
    #[error("exact division failed")]
    DivisionFailed,
    #[error("quadratics share a root; no degree-2 cover")]
    DegenerateCover,
    #[error("line is not on the quintic; nonzero restriction coefficients {0:?}")]
    LineNotOnQuintic(Vec<String>),
    #[error("span has rank below 2")]
    RankDeficient,
    #[error("line is not simple: det A = 0, relation {relation}")]
    NotSimple { relation: String },
    #[error("double point multiplicities sum to {0}, expected 3")]
    InconsistentMultiplicity(usize),
    #[error("residual pencil has a base point")]
    BasePointFound,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("non-generic deformation: {0}")]
    NonGenericDeformation(String),
    #[error("series solve failed at order {0}")]
    SolveFailed(usize),
    #[error("jacobian determinant vanishes to precision {0}")]
    PrecisionExhausted(usize),
    #[error("total mismatch: {0}")]
    TotalMismatch(String),
    #[error("cannot factor {0} within the trial/rho limits")]
    FactorizationFailed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 1,
            Error::LineNotOnQuintic(_) => 2,
            Error::NotSimple { .. } => 3,
            Error::NonGenericDeformation(_) => 4,
            _ => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
