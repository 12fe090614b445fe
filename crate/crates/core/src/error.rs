use thiserror::Error;

pub type Result<T> = std::result::Result<T, FwmError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FwmError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("scattering pair is not unitary (defect {defect:.3e})")]
    NonUnitary { defect: f64 },

    #[error("boundary-value inversion is ill-conditioned (|Phi_22| = {pivot:.3e})")]
    IllConditioned { pivot: f64 },

    #[error("shooting solution does not have the symmetric S1/S2 structure (mismatch {mismatch:.3e})")]
    StructureMismatch { mismatch: f64 },

    #[error("integrator failed: {0}")]
    Integration(String),

    #[error("closed form requires {0}")]
    UnsupportedInput(String),

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("state norm drifted by {drift:.3e}")]
    NormDrift { drift: f64 },

    #[error("Fock truncation populated: {population:.3e} at the cutoff")]
    Truncation { population: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

impl FwmError {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        FwmError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
