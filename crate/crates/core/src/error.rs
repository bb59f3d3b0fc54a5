use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("root refinement for L_{degree}^(1/2) did not converge after {iterations} iterations")]
    RootFinding { degree: usize, iterations: usize },

    #[error("no ring placement for L = {band_limit} met condition bound {bound} (best {best:.3e})")]
    GridDesign {
        band_limit: usize,
        best: f64,
        bound: f64,
    },

    #[error("linear system is numerically singular (condition number {condition:.3e})")]
    SingularSystem { condition: f64 },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("band-limit mismatch: coefficients have L = {coefficients}, target supports L = {target}")]
    BandLimitMismatch { coefficients: usize, target: usize },

    #[error("ODF kernel quadrature did not converge (error estimate {estimate:.3e}, tolerance {tolerance:.3e})")]
    KernelNotConverged { estimate: f64, tolerance: f64 },

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures caused by the inputs rather than by the numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_)
                | Error::Config(_)
                | Error::UnsupportedFormat(_)
                | Error::ShapeMismatch { .. }
                | Error::BandLimitMismatch { .. }
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
