use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown operator `{name}` at {pos}")]
    UnknownOperator { name: String, pos: usize },
    #[error("unknown operator spec `{0}`")]
    UnknownSpec(String),
    #[error("in `{at}`: {source}")]
    Eval {
        at: String,
        #[source]
        source: bipolar_core::Error,
    },
    #[error("in `{at}`: undefined aggregate [{low}, {high}] used as an operand")]
    UndefinedOperand { at: String, low: f64, high: f64 },
    #[error("config: {0}")]
    Config(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] bipolar_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type CliResult<T> = Result<T, CliError>;
