use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid monomial: {0}")]
    InvalidMonomial(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("variable count mismatch: expected {expected}, found {found}")]
    VariableMismatch { expected: usize, found: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("conductor {small} does not divide {big}")]
    ConductorMismatch { small: u32, big: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("elimination did not terminate within {0} rewrites")]
    EliminationCycle(usize),

    #[error("operation requires an exact coefficient domain")]
    FloatDomainRefused,

    #[error("operation requires k = n generators (k = {k}, n = {n})")]
    IncompleteIdeal { k: usize, n: usize },

    #[error("multiplication matrices do not commute")]
    CommutationFailure,

    #[error("ideal is not radical")]
    NotRadical,

    #[error("linear system is inconsistent (residual {residual:e})")]
    Inconsistent { residual: f64 },

    #[error("linear system is rank deficient: rank {rank} for {unknowns} unknowns")]
    RankDeficient { rank: usize, unknowns: usize },

    #[error("point clustering is ambiguous at tolerance {tol:e} (closest separation {separation:e})")]
    ClusteringAmbiguity { tol: f64, separation: f64 },

    #[error("eigenvalue computation failed: {0}")]
    Eigen(String),

    #[error("verification failed: residual {residual:e} exceeds tolerance {tol:e}")]
    VerificationFailed { residual: f64, tol: f64 },

    #[error("torus normalization requires equal exponents")]
    UnequalExponents,

    #[error("phi entry {0} is zero")]
    ZeroPhi(usize),

    #[error("expected {expected} points, found {found}")]
    PointCount { expected: usize, found: usize },

    #[error("Groebner basis computation exceeded the configured size cap ({0} elements)")]
    SizeCap(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
