use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),

    #[error("operator with periodic boundary is not supported here: {0}")]
    PeriodicUnsupported(&'static str),

    #[error("bisection for eigenvalue {index} did not converge after {iterations} steps (tolerance {tolerance:e} is below rounding)")]
    NoConvergence {
        index: usize,
        iterations: usize,
        tolerance: f64,
    },

    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    JacobiNoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension {dim} exceeds the dense solver limit of {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("inverse iteration broke down near shift {shift}")]
    InverseIterationBreakdown { shift: f64 },

    #[error("at grid point p = {p}: {source}")]
    AtGridPoint {
        p: i64,
        #[source]
        source: Box<Error>,
    },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("malformed table: {0}")]
    Format(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at_grid_point(self, p: i64) -> Self {
        Error::AtGridPoint {
            p,
            source: Box::new(self),
        }
    }
}
