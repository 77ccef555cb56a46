use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Verblunsky coefficient (or a parameter forcing one) left the open unit disk.
    #[error("coefficient at index {index} has modulus {modulus} >= 1")]
    Admissibility { index: usize, modulus: f64 },

    /// A parameter violated its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A custom coefficient table was read past its stored length.
    #[error("coefficient table has {len} entries, index {index} requested")]
    TableExhausted { index: usize, len: usize },

    /// The moment oracle produced a reflection coefficient too close to the unit circle.
    #[error("numerical breakdown at step {step}: reflection coefficient modulus {modulus}")]
    NumericalBreakdown { step: usize, modulus: f64 },

    /// The sampling grid cannot resolve the band structure.
    #[error("grid too coarse: {0}")]
    Resolution(String),

    /// Eigenvalue moduli are not separated (parabolic or elliptic matrix).
    #[error("degenerate eigenvalues: |lambda1| - |lambda2| = {gap:e}")]
    Degenerate { gap: f64 },

    /// The evaluation point is not strictly inside a spectral gap.
    #[error("point at angle {theta} is not strictly inside the gap")]
    OutOfGap { theta: f64 },

    /// A transfer matrix in the tracked range is not hyperbolic.
    #[error("transfer matrix at index {index} is not hyperbolic (|Tr| = {trace_abs})")]
    Hyperbolicity { index: usize, trace_abs: f64 },

    /// A Cesàro–Stolz denominator was not strictly increasing.
    #[error("denominator not strictly increasing at index {index}")]
    Monotonicity { index: usize },
}

impl Error {
    /// Stable error name, used on the CLI's stderr.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Admissibility { .. } => "AdmissibilityError",
            Error::InvalidParameter(_) => "InvalidParameterError",
            Error::TableExhausted { .. } => "TableExhaustedError",
            Error::NumericalBreakdown { .. } => "NumericalBreakdown",
            Error::Resolution(_) => "ResolutionError",
            Error::Degenerate { .. } => "DegenerateError",
            Error::OutOfGap { .. } => "OutOfGapError",
            Error::Hyperbolicity { .. } => "HyperbolicityError",
            Error::Monotonicity { .. } => "MonotonicityError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
