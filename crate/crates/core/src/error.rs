use thiserror::Error;

/// Errors produced by the numerical kernel, solvers and sweep machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |A - A†| = {max_dev:.3e}")]
    NotHermitian { max_dev: f64 },

    #[error("linear solve failed or residual bound not met ({detail})")]
    SingularSystem { detail: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("steady-state solver did not converge: {0}")]
    NonConvergence(String),

    #[error("steady state has negative eigenvalue {min_eig:.3e} below the -1e-6 slack")]
    NonPositive { min_eig: f64 },

    #[error("integration step size underflowed (dt = {dt:.3e})")]
    StepSizeUnderflow { dt: f64 },

    #[error("truncation would exceed its cap ({0}); parameters are outside the weak-drive regime")]
    TruncationExplosion(String),

    #[error("degenerate denominator in {context}")]
    DegenerateDenominator { context: String },

    #[error("mean phonon occupation {occupation:.3e} below 1e-12; g2(0) is undefined")]
    InsufficientOccupation { occupation: f64 },

    #[error("non-positive denominator in the two-phonon-resonance closed form: {value:.3e}")]
    NegativeDenominator { value: f64 },

    #[error("unsupported result shape for plotting: {0}")]
    UnsupportedShape(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short symbolic code used in CSV error columns and CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "NotHermitian",
            Error::SingularSystem { .. } => "SingularSystem",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NonConvergence(_) => "NonConvergence",
            Error::NonPositive { .. } => "NonPositive",
            Error::StepSizeUnderflow { .. } => "StepSizeUnderflow",
            Error::TruncationExplosion(_) => "TruncationExplosion",
            Error::DegenerateDenominator { .. } => "DegenerateDenominator",
            Error::InsufficientOccupation { .. } => "InsufficientOccupation",
            Error::NegativeDenominator { .. } => "NegativeDenominator",
            Error::UnsupportedShape(_) => "UnsupportedShape",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::Io(_) => "IoFailure",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
