use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The transformation was asked for the wrong branch (e.g. case a with A₀ ≠ 0).
    #[error("wrong transformation case: {0}")]
    WrongCase(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// The χ-operator has a vanishing Fourier symbol on some nonzero mode.
    #[error("degenerate elliptic operator: {0}")]
    DegenerateOperator(String),

    /// Pointwise fixed-point solve for ∂ₜ²u failed; the artifact's blow-up proxy.
    #[error(
        "Picard iteration for u_tt did not converge at t = {t} (worst grid point {point:?}, residual {residual:e})"
    )]
    NonConvergence {
        t: f64,
        point: (usize, usize),
        residual: f64,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
