use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("unknown measurement `{0}`")]
    UnknownMeasurement(String),
    #[error("unknown outcome `{0}`")]
    UnknownOutcome(String),
    #[error("measurements {target:?} are not a subset of context {context:?}")]
    NotSubset { target: Vec<usize>, context: Vec<usize> },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("semiring mismatch: expected {expected}, found {found}")]
    SemiringMismatch { expected: String, found: String },
    #[error("no semiring homomorphism from signed weights to the booleans")]
    SignedToBoolean,
    #[error("model is not compatible: {0}")]
    Incompatible(String),
    #[error("scenario mismatch: {0}")]
    ScenarioMismatch(String),
    #[error("size bound exceeded: {needed} columns requested, limit is {limit}")]
    SizeBound { needed: u128, limit: usize },
    #[error("cover is not homogeneous")]
    NotHomogeneous,
    #[error("outcomes are not dichotomic ({0} outcomes)")]
    NotDichotomic(usize),
    #[error("hidden-variable model is not factorizable")]
    NotFactorizable,
    #[error("invalid hidden-variable model: {0}")]
    InvalidHiddenVariableModel(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid vector family: {0}")]
    InvalidVectors(String),
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("observables {0} and {1} share a context but do not commute")]
    NonCommuting(String, String),
    #[error("Born weight {weight} for context {context} is negative beyond tolerance")]
    NegativeWeight { context: usize, weight: f64 },
    #[error("cannot convert float model to an exact one: {0}")]
    Conversion(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }
}
