//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by a non-unit: {0}")]
    DivisionByNonUnit(String),
    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("series constant term is not the identity")]
    NonUnitConstantTerm,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("weight list is empty")]
    EmptyWeights,
    #[error("first weight must be 1, got {0}")]
    FirstWeightNotOne(u32),
    #[error("non-resonance violated: d - (c_j - c_i) = 0 at d={d}, i={i}, j={j}")]
    NonResonanceViolated { d: u32, i: usize, j: usize },
    #[error("tau-degree exceeded the termination bound {bound} at x-degree {degree:?}")]
    TerminationBoundExceeded { bound: usize, degree: Vec<u32> },
    #[error("pairing is not adapted: row {0} does not have a single nonzero entry")]
    PairingNotAdapted(usize),
    #[error("system is not flat: M0 does not vanish")]
    NotFlat,
    #[error("primitive hypothesis fails for log coordinate {0}")]
    PrimitiveHypothesisFails(usize),
    #[error("pairing matrix is singular")]
    SingularPairing,
    #[error("degenerate limit pairing")]
    DegeneratePairing,
    #[error("Deligne exponent out of range at entry ({0}, {1})")]
    ExponentOutOfRange(usize, usize),
    #[error("gamma series requires a positive argument, got {0}")]
    NonPositiveArgument(f64),
    #[error("constant flat vectors do not span the fiber")]
    VectorsDoNotSpan,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix is not invertible over this ring")]
    NotInvertible,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
