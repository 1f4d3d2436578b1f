//! Error type shared by all modules.

use thiserror::Error;

/// Everything that can go wrong across the library.
#[derive(Debug, Error)]
pub enum PassError {
    /// Invalid physical description or scenario field.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Normalized frequency at or above π/2: the slab supports more than the
    /// fundamental even TE mode.
    #[error("multimode slab: V = {v:.6} >= pi/2; only the single-mode regime (V < pi/2) is supported")]
    Multimode { v: f64 },

    /// Normalized frequency is not positive, so no guided mode exists.
    #[error("no guided mode: V = {v:.6} must be positive")]
    NoGuidedMode { v: f64 },

    /// Root solver failed to converge.
    #[error("mode solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    SolverFailure { iterations: usize, residual: f64 },

    /// Coordinate outside the range an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// The closed-form amplitude solution requires phase matching (Δ = 0).
    #[error("phase mismatch Δ = {delta:.6e} rad/m: the closed-form solution is only implemented for Δ = 0 (identical slab widths)")]
    PhaseMismatch { delta: f64 },

    /// Pattern or integral degenerated to zero where a normalization is needed.
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    /// File or serialization failure in the CLI layer.
    #[error("i/o error: {0}")]
    Io(String),
}

/// Coarse classification used by the CLI to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Solver,
    Degeneracy,
    Io,
}

impl PassError {
    pub fn category(&self) -> ErrorCategory {
        match self {
            PassError::Config(_) => ErrorCategory::Config,
            PassError::Multimode { .. }
            | PassError::NoGuidedMode { .. }
            | PassError::SolverFailure { .. }
            | PassError::Domain(_)
            | PassError::PhaseMismatch { .. } => ErrorCategory::Solver,
            PassError::Degenerate(_) => ErrorCategory::Degeneracy,
            PassError::Io(_) => ErrorCategory::Io,
        }
    }
}

impl From<std::io::Error> for PassError {
    fn from(e: std::io::Error) -> Self {
        PassError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, PassError>;

/// Finite and strictly positive, or a config error naming the field.
pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(PassError::Config(format!(
            "{name} must be positive, got {value}"
        )))
    }
}
