use thiserror::Error;

use crate::kinematics::Branch;

pub type Result<T> = std::result::Result<T, Error>;

/// An off-pattern Fano entry that blocks projection onto the seven-parameter class.
#[derive(Debug, Clone, PartialEq)]
pub struct OffPattern {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state has a negative eigenvalue {min_eigenvalue:e} (tolerance {tol:e})")]
    NonPositive { min_eigenvalue: f64, tol: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("not in the seven-parameter class: {}", format_off_pattern(.0))]
    NotD7Class(Vec<OffPattern>),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pseudo-time of branch {branch} is stationary at theta={theta} (rate {rate:e})")]
    DegenerateClock { theta: f64, branch: Branch, rate: f64 },

    #[error("malformed table: {0}")]
    MalformedTable(String),
}

fn format_off_pattern(entries: &[OffPattern]) -> String {
    entries
        .iter()
        .map(|e| format!("|{}|={:e}", e.name, e.value.abs()))
        .collect::<Vec<_>>()
        .join(", ")
}
