use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dataset has no records")]
    EmptyDataset,

    #[error("non-finite {field} at row {row}")]
    NonFiniteValue { row: usize, field: &'static str },

    #[error("duplicate instance id `{0}`")]
    DuplicateId(String),

    #[error("alpha must be finite and > 0, got {0}")]
    InvalidAlpha(f64),

    #[error("costs must be finite (cost_accept={cost_accept}, cost_reject={cost_reject})")]
    NonFiniteCosts { cost_accept: f64, cost_reject: f64 },

    #[error("cost_accept ({cost_accept}) must exceed cost_reject ({cost_reject}) to reduce to beta")]
    DegenerateCosts { cost_accept: f64, cost_reject: f64 },

    #[error("beta must be >= 0, got {0}")]
    NegativeBeta(f64),

    #[error("theta must be finite, got {0}")]
    NonFiniteTheta(f64),

    #[error("normalized impact undefined: {0}")]
    NormalizationUndefined(String),

    #[error("no lines given")]
    EmptyInput,

    #[error("line {index} has a non-finite coefficient")]
    NonFiniteLine { index: usize },

    #[error("domain [{lo}, {hi}] must be finite with lo < hi")]
    DegenerateDomain { lo: f64, hi: f64 },

    #[error("theta {theta} outside domain [{lo}, {hi}]")]
    OutOfDomain { theta: f64, lo: f64, hi: f64 },

    #[error("curve domains differ: [{a_lo}, {a_hi}] vs [{b_lo}, {b_hi}]")]
    DomainMismatch { a_lo: f64, a_hi: f64, b_lo: f64, b_hi: f64 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("no default domain: {0}")]
    NoDefaultDomain(String),

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("cannot parse `{value}` in row {row}, column `{column}`")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("malformed csv: {0}")]
    Csv(String),

    #[error("malformed json: {0}")]
    Json(String),

    #[error("plot has no series")]
    EmptySpec,

    #[error("non-finite coordinate: {0}")]
    NonFiniteCoordinate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
