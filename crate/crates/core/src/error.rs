use thiserror::Error;

use crate::polycore::PurePoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CrnfError {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    /// Δ admits a nontrivial syzygy (L_1..L_N) with ΣL_kΔ_k = 0.
    #[error("degenerate leading pure term; witness {}", fmt_witness(.witness))]
    Degenerate { witness: Vec<PurePoly> },

    #[error("gradient split not unique: Δ is degenerate")]
    GradientNotUnique,

    #[error("kernel parameter system is singular at degree {degree} ({kind})")]
    SingularSystem { degree: u32, kind: String },

    #[error("random generation gave up after {0} attempts")]
    RetryBudget(u32),

    #[error("i/o error: {0}")]
    Io(String),
}

fn fmt_witness(w: &[PurePoly]) -> String {
    let parts: Vec<String> = w.iter().map(|p| p.to_string()).collect();
    format!("({})", parts.join(", "))
}

impl CrnfError {
    /// Domain errors map to exit code 2, everything else to 1.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            CrnfError::Degenerate { .. }
                | CrnfError::GradientNotUnique
                | CrnfError::SingularSystem { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, CrnfError>;
