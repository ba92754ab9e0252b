use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: permutations of {left} and {right} points")]
    SizeMismatch { left: usize, right: usize },

    #[error("not a permutation of 1..{n}: {images:?}")]
    InvalidPermutation { n: usize, images: Vec<usize> },

    #[error("{what}: n = {n} exceeds the limit of {cap}{hint}")]
    ResourceLimit { what: &'static str, n: usize, cap: usize, hint: &'static str },

    #[error("minimum distance {dmin} out of range 1..={max} for n = {n}")]
    DistanceOutOfRange { n: usize, dmin: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("cutting-plane loop did not converge after {rounds} rounds (objective {last_objective}, min eigenvalue {last_min_eigenvalue})")]
    Convergence { rounds: usize, last_objective: f64, last_min_eigenvalue: f64, last_iterate: Vec<f64> },

    #[error("not a code: distance({first}, {second}) = {distance} < {dmin}")]
    NotACode { first: String, second: String, distance: usize, dmin: usize },

    #[error("matrix is not symmetric (|a[{row}][{col}] - a[{col}][{row}]| = {gap})")]
    NotSymmetric { row: usize, col: usize, gap: f64 },

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag, used by the CLI and the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SizeMismatch { .. } => "size_mismatch",
            Error::InvalidPermutation { .. } => "invalid_permutation",
            Error::ResourceLimit { .. } => "cap_exceeded",
            Error::DistanceOutOfRange { .. } => "dmin_out_of_range",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Solver(_) => "solver_failure",
            Error::Convergence { .. } => "no_convergence",
            Error::NotACode { .. } => "not_a_code",
            Error::NotSymmetric { .. } => "not_symmetric",
            Error::Cache(_) => "cache",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    /// True for failures caused by the request itself (caps, ranges, malformed input).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::SizeMismatch { .. }
                | Error::InvalidPermutation { .. }
                | Error::ResourceLimit { .. }
                | Error::DistanceOutOfRange { .. }
                | Error::InvalidArgument(_)
                | Error::NotACode { .. }
                | Error::NotSymmetric { .. }
        )
    }

    /// True for numerical failures of the LP/SDP machinery.
    pub fn is_solver(&self) -> bool {
        matches!(self, Error::Solver(_) | Error::Convergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dmin(n: usize, dmin: usize) -> Result<()> {
    let max = n * n.saturating_sub(1) / 2;
    if dmin == 0 || dmin > max {
        return Err(Error::DistanceOutOfRange { n, dmin, max });
    }
    Ok(())
}
