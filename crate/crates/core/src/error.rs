use thiserror::Error;

/// Errors raised by the library.
///
/// Variants that describe a failed verification carry the witness that
/// caused it, so callers can report it without rerunning the check.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("composition {parts:?} sums to {actual}, expected {expected}")]
    SumMismatch {
        parts: Vec<u32>,
        actual: u64,
        expected: u64,
    },
    #[error("cyclotomic orders differ: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("element or label does not belong to {group}: {detail}")]
    SpecMismatch { group: String, detail: String },
    #[error("invalid shell label: {0}")]
    BadLabel(String),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("no nonpositive value found: {0}")]
    NotFound(String),
    #[error("divisibility requirement failed: {0}")]
    Divisibility(String),
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),
    #[error("size guard exceeded: {0}")]
    SizeExceeded(String),
    #[error("spectrum has no negative eigenvalue")]
    NoNegativeEigenvalue,
    #[error("eigenvalue at shell {shell} is not real")]
    NonRealEigenvalue { shell: String },
    #[error("graph is directed; its eigenvalues are not ordered")]
    DirectedGraph,
    #[error("could not separate eigenvalues at shells {left} and {right} after {levels} precision escalations")]
    PrecisionEscalation {
        left: String,
        right: String,
        levels: u32,
    },
    #[error("bound is irrational: minimum eigenvalue at shell {shell} is not a rational integer")]
    IrrationalBound { shell: String },
    #[error("linear program infeasible: {0}")]
    Infeasible(String),
    #[error("LP constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("rows {x} and {y} are adjacent but not orthogonal (inner product {inner})")]
    NotOrthogonal { x: String, y: String, inner: String },
    #[error("entry at row {row}, column {col} is not a root of unity: {value}")]
    NotUnitModulus {
        row: String,
        col: usize,
        value: String,
    },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
