use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {field}: {reason}")]
    Config { field: String, reason: String },
    #[error("shape mismatch: expected length {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("admissibility lost at t = {time}: {reason}")]
    Admissibility { time: f64, reason: String },
    #[error("geometry violation: {0}")]
    Geometry(String),
    #[error("insufficient context: {0}")]
    Context(String),
}

impl Error {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
        if expected == got {
            Ok(())
        } else {
            Err(Error::Shape { expected, got })
        }
    }
}
