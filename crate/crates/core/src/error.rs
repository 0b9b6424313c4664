use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error(
        "commensuration error: level {level} (E = {energy}) targets s = {target}, \
         off the clock ladder by {deviation}"
    )]
    Commensuration {
        level: usize,
        energy: f64,
        target: f64,
        deviation: f64,
    },

    #[error("contract error: {0}")]
    Contract(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("axis mismatch: {0}")]
    AxisMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
