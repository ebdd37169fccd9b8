use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("tensor is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("degenerate ensemble: {0}")]
    DegenerateEnsemble(&'static str),

    #[error("invalid temperature-tensor spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("time step violates stability bound: dt/tau = {ratio} > {limit}")]
    StabilityViolation { ratio: f64, limit: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("|T{component}{component} - T| changes sign inside the fit window near t = {t}")]
    SignChange { component: usize, t: f64 },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: malformed CSV at line {line}: {message}")]
    Csv {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Self {
        Error::Step {
            step,
            source: Box::new(self),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
