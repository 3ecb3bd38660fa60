use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which side of the Cayley table a Latin-square violation was found on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row,
    Column,
}

impl std::fmt::Display for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Line::Row => f.write_str("row"),
            Line::Column => f.write_str("column"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("index 0 is not a two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NotInvertible(usize),
    #[error("table is not a Latin square: {line} {index} repeats value {value}")]
    NotLatin { line: Line, index: usize, value: usize },
    #[error("not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("order {order} exceeds the {what} cap of {cap}")]
    OrderBound { what: &'static str, order: usize, cap: usize },
    #[error("invalid recipe: {0}")]
    InvalidRecipe(String),
    #[error("invalid semidirect action: {0}")]
    InvalidAction(String),
    #[error("quotient generators are not central (element {0})")]
    NotCentral(usize),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("factors do not form a direct splitting")]
    NotASplitting,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("recipe syntax error at byte {pos}: {msg}")]
    RecipeSyntax { pos: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}
