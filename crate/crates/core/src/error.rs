use num_complex::Complex64;
use thiserror::Error;

use crate::rmt::DetectorKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("aspect ratio must be positive and finite, got {0}")]
    AspectRatio(f64),

    #[error("probability must lie strictly inside (0, 1), got {0}")]
    Probability(f64),

    #[error("{0} has no closed-form null distribution")]
    NoClosedForm(DetectorKind),

    #[error("moment order {0} outside the supported range 1..=30")]
    MomentOrder(u32),

    #[error("inverse Stieltjes transform has a pole at m = {0}")]
    StieltjesPole(Complex64),

    #[error("non-finite sample at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("invalid contour: {0}")]
    Contour(String),

    #[error("statistic stream is empty")]
    EmptyStream,

    #[error("spectrum is identically zero")]
    ZeroSpectrum,

    #[error("resource exhausted: {0}")]
    Resource(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
