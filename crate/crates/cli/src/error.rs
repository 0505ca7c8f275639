use noncoherent::capacity::CapacityError;
use noncoherent::channel::ChannelError;
use noncoherent::formats::ParseError;
use noncoherent::mac::MacError;
use noncoherent::matrix::MatrixError;
use noncoherent::subspace::SubspaceError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or inputs, including regime violations.
    #[error("{0}")]
    Usage(String),
    #[error("optimizer did not converge: KT residual {residual:.3e} after {iterations} iterations")]
    NotConverged { residual: f64, iterations: usize },
    /// An exhaustive check found a disagreement.
    #[error("{0}")]
    CheckFailed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::NotConverged { .. } => 3,
            CliError::CheckFailed(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<CapacityError> for CliError {
    fn from(e: CapacityError) -> Self {
        match e {
            CapacityError::NotConverged { residual, iterations, .. } => CliError::NotConverged { residual, iterations },
            other => CliError::Usage(other.to_string()),
        }
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Usage(e.to_string())
            }
        }
    )*};
}

usage_from!(ChannelError, ParseError, MacError, MatrixError, SubspaceError);
