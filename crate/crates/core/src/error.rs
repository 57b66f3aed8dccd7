use thiserror::Error;

/// Axiom violated by a candidate Cayley table.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("declared order {declared} does not match table size {actual}")]
    OrderMismatch { declared: usize, actual: usize },
    #[error("table row {row} has length {len}, expected {order}")]
    RaggedRow {
        row: usize,
        len: usize,
        order: usize,
    },
    #[error("entry ({row}, {col}) = {value} is out of range")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
    },
    #[error("not a Latin square: value {value} repeats in {line}")]
    NotLatinSquare { line: String, value: usize },
    #[error("missing identity: no element acts as identity on both sides")]
    MissingIdentity,
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("empty group table")]
    Empty,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("group load error: {0}")]
    Load(#[from] LoadError),
    #[error("invalid subgroup: {0}")]
    Subgroup(String),
    #[error("incomplete irrep catalog for {group}: sum of squared dimensions is {sum}, group order is {order} (deficit {deficit})")]
    IncompleteCatalog {
        group: String,
        sum: usize,
        order: usize,
        deficit: i64,
    },
    #[error("invalid representation {label}: {reason}")]
    Irrep { label: String, reason: String },
    #[error("objects live on different coset spaces")]
    SpaceMismatch,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid generating set: {0}")]
    Generators(String),
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },
    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
