use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {n} out of range [{min}, {max}]")]
    DimensionOutOfRange { n: usize, min: usize, max: usize },
    #[error("all-zero vector is not a direction")]
    ZeroVector,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("directions have overlapping support")]
    OverlappingSupport,
    #[error("base vertex incompatible with rectangle: {0}")]
    IncompatibleBaseVertex(String),
    #[error("edge does not cross coordinate 0")]
    NotCrossingEdge,
    #[error("invalid parameter map: {0}")]
    InvalidParameterMap(String),
    #[error("enumeration infeasible: {0}")]
    Infeasible(String),
    #[error("coloring or model is partial: {0}")]
    PartialAssignment(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("external solver process failed: {0}")]
    ExternalProcess(String),
    #[error("unparsable external solver output: {0}")]
    ExternalParse(String),
    #[error("external model failed local verification")]
    ExternalModelInvalid,
    #[error("solver disagreement: {0}")]
    Disagreement(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("argument out of validity range: {0}")]
    OutOfValidity(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
