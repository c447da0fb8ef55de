use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScaleError {
    #[error("value {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("not a finite number: {0}")]
    InvalidNumber(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error("unknown operator family `{0}`")]
    UnknownFamily(String),
    #[error("generator shape: {0}")]
    GeneratorShape(String),
    #[error("operator `{0}` has no additive generator")]
    MissingGenerator(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("operator `{0}` is not built from a strict t-conorm")]
    NotStrict(String),
    #[error("uninorm neutral element is {0}, expected 0.5")]
    WrongNeutral(f64),
    #[error("strong negation is not involutive-compatible at the endpoint {0}")]
    BoundaryInput(f64),
    #[error("empty argument list")]
    EmptyList,
    #[error("size {size} exceeds the limit {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("{0} lies outside the generator's domain")]
    OutOfGeneratorDomain(f64),
    #[error("law `{law}` expects {expected} operands, got {got}")]
    Arity { law: String, expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
