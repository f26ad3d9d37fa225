use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision-mode error: {0}")]
    Precision(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("confluence failure: {0}")]
    Confluence(String),
    #[error("presentation inconsistency: {0}")]
    Inconsistent(String),
    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),
    #[error("element outside the span: {0}")]
    Span(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("not an Hermitian structure: {0}")]
    NotHermitian(String),
    #[error("rank mismatch: {0}")]
    Rank(String),
    #[error("convention error: {0}")]
    Convention(String),
    #[error("build error in block {block}: {identity} failed")]
    Build { block: String, identity: String },
    #[error("cutoff too small: {0}")]
    Cutoff(String),
}

pub type Result<T> = std::result::Result<T, Error>;
