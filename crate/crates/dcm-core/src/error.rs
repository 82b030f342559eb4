//! Error type shared across the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DcmError {
    #[error("invalid {what}: {detail}")]
    InvalidInput { what: &'static str, detail: String },

    #[error("infeasible battery step: {0}")]
    InfeasibleStep(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "discrete option space too large ({combinations} combinations); \
         reduce the targeted horizon (lower x or disable the horizon strategy)"
    )]
    SearchSpaceTooLarge { combinations: u128 },

    #[error(
        "dispatch search exceeded its node budget ({nodes} nodes); \
         reduce the targeted horizon (lower x or disable the horizon strategy)"
    )]
    SearchBudgetExceeded { nodes: usize },

    #[error("missing or inconsistent day data: {0}")]
    MissingDayData(String),
}

impl DcmError {
    pub fn invalid(what: &'static str, detail: impl Into<String>) -> Self {
        DcmError::InvalidInput { what, detail: detail.into() }
    }
}
