use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alist parse error at line {line}: {message}")]
    Alist { line: usize, message: String },

    #[error("local-code file error at line {line}: {message}")]
    LocalCodeFile { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid local code: {0}")]
    InvalidLocalCode(String),

    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),

    #[error("no graph with girth >= {girth} found after {attempts} attempts")]
    RetryBudgetExhausted { girth: usize, attempts: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid channel parameter: {0}")]
    InvalidChannel(String),

    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    #[error("degree parameter d = {d} is invalid: {reason}")]
    InvalidDegree { d: usize, reason: String },

    #[error("explicit tree would have {estimated} nodes, above the cap of {cap}; use the dynamic program instead")]
    NodeCapExceeded { estimated: u128, cap: usize },

    #[error("enumeration would produce {estimated} trees, above the cap of {cap}")]
    EnumerationCapExceeded { estimated: u128, cap: usize },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("input is not a codeword of the Tanner code")]
    NotACodeword,

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("code dimension {dimension} exceeds the enumeration cap {cap}")]
    DimensionCapExceeded { dimension: usize, cap: usize },

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
