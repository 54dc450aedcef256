use thiserror::Error;

/// Crate-wide error type.
///
/// Domain errors (constraint violations, unsupported inputs) are kept distinct
/// from parse/I-O errors so the CLI can map them to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unbound variable `{0}` in specialization")]
    UnboundVariable(String),

    #[error("element is not invertible")]
    NonInvertible,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("incompatible quadratic rings (distinct minimal polynomials)")]
    IncompatibleRings,

    #[error("valuation is not determined on this element (equal-slope split ring)")]
    ValuationUndetermined,

    #[error("degenerate quadratic ring: {0}")]
    DegenerateRing(String),

    #[error("descriptor mismatch: {0}")]
    DescriptorMismatch(String),

    #[error("unknown representation case `{0}`")]
    UnknownCase(String),

    #[error("wrong parameter count: expected {expected}, got {got}")]
    WrongParameterCount { expected: usize, got: usize },

    #[error("not tabulated: {0}")]
    NotTabulated(String),

    #[error("construction not applicable: no spherical vector (dim = 0)")]
    NoSphericalVector,

    #[error("no separating generator between the target and a competing eigen-tuple")]
    NoSeparatingGenerator,

    #[error("target tuple is not in the eigen-system")]
    TargetNotFound,

    #[error("matrices do not commute pairwise")]
    NonCommutingMatrices,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("inconsistent stabilization choice: {0}")]
    InconsistentChoice(String),

    #[error("T_{p} is not defined at p | N (level {level}); use the U_p operator instead")]
    HeckeAtBadPrime { p: u64, level: u64 },

    #[error("U_{p} requested but p does not divide the level {level}")]
    UpWithoutPInLevel { p: u64, level: u64 },

    #[error("truncation too small: need at least {needed} coefficients, have {have}")]
    TruncationTooSmall { needed: u64, have: u64 },

    #[error("missing closure entry for index ({0}, {1}, {2})")]
    MissingClosure(i64, i64, i64),

    #[error("coefficient at index ({0}, {1}, {2}) is not p-integral")]
    NotPIntegral(i64, i64, i64),

    #[error("degenerate Hecke polynomial: trace and norm both vanish")]
    DegenerateHeckePolynomial,

    #[error("torus element is not positive: {0}")]
    NotPositive(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
