use thiserror::Error;

use crate::model::ValidationError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario: {}", join(.0))]
    Validation(Vec<ValidationError>),

    #[error("transfer function has a pole at the evaluation point (|D(z)| = {magnitude:e})")]
    PoleEvaluation { magnitude: f64 },

    #[error("invalid transfer function: {0}")]
    InvalidTransfer(&'static str),

    #[error("passivity condition is singular at omega = {omega} rad/s (1 - cos(omega T) ~ 0)")]
    Singularity { omega: f64 },

    #[error("singular coupling Z_s + C_s{}", at(*.omega))]
    SingularCoupling { omega: Option<f64> },

    #[error("H + I is singular{}", at(*.omega))]
    SingularScattering { omega: Option<f64> },

    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),

    #[error("simulation diverged at t = {time} s")]
    Divergence { time: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn at(omega: Option<f64>) -> String {
    omega
        .map(|w| format!(" at omega = {w} rad/s"))
        .unwrap_or_default()
}

fn join(errors: &[ValidationError]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
