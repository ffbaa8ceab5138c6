use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),

    #[error("side length {length} on axis {axis} is below the minimum {minimum} for {boundary} boundaries")]
    SideTooShort {
        axis: usize,
        length: usize,
        minimum: usize,
        boundary: &'static str,
    },

    #[error("expected {expected} side lengths, got {got}")]
    SideCount { expected: usize, got: usize },

    #[error("a cell cover requires periodic boundary conditions")]
    NonPeriodicCover,

    #[error("length mismatch: expected {expected} {what}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("site index {site} out of range for {sites} sites")]
    InvalidSite { site: usize, sites: usize },

    #[error("coupling on bond {0} is zero; its sign is undefined")]
    ZeroCoupling(usize),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("distribution is not centered: {0}")]
    NotCentered(String),

    #[error("operation requires a discrete distribution")]
    NotDiscrete,

    #[error("enumeration of {configurations} coupling configurations exceeds the guard of {limit}")]
    EnumerationTooLarge { configurations: String, limit: u64 },

    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    #[error("the XZ gauge symmetry only holds for alpha_y = 0 (got {0})")]
    AnisotropyNotCovered(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cell inequality violated on sample {sample}: lattice energy {lattice} < cell sum {cells}")]
    CellInequalityViolated {
        sample: u64,
        lattice: String,
        cells: String,
    },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Guard violations are reported separately from configuration errors.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::GuardExceeded(_) | Error::EnumerationTooLarge { .. }
        )
    }
}
