use besov_core::{CalcError, FnError, QuadError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("input: {0}")]
    Input(String),
    #[error(transparent)]
    Calc(#[from] CalcError),
}

impl From<FnError> for CliError {
    fn from(e: FnError) -> Self {
        CliError::Calc(e.into())
    }
}

impl From<QuadError> for CliError {
    fn from(e: QuadError) -> Self {
        CliError::Calc(e.into())
    }
}

impl CliError {
    /// 2 for anything the caller got wrong, 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Calc(e) => match e {
                CalcError::Shape
                | CalcError::DimensionMismatch { .. }
                | CalcError::NotCommuting { .. }
                | CalcError::SpectrumOutside { .. }
                | CalcError::Fn(_) => 2,
                _ => 1,
            },
        }
    }
}
