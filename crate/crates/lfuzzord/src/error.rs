use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error in {origin} at line {line}, column {column}: {message}")]
    Parse { origin: String, line: usize, column: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("unknown claim {0:?}")]
    UnknownClaim(String),
    #[error("claim {claim} has no weakening {weakening:?}")]
    UnknownWeakening { claim: String, weakening: String },
    #[error("{what} needs {needed} candidates, over the guard {guard}")]
    GuardExceeded { what: String, needed: u128, guard: u64 },
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    /// 2 for usage and input errors, 3 for guard overruns.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::GuardExceeded { .. } => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::Usage(_) => "UsageError",
            CliError::UnknownClaim(_) => "UnknownClaim",
            CliError::UnknownWeakening { .. } => "UnknownWeakening",
            CliError::GuardExceeded { .. } => "GuardExceeded",
            CliError::Invalid(_) => "InvalidInput",
        }
    }
}

macro_rules! invalid_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Invalid(e.to_string())
            }
        }
    )*};
}

invalid_from!(
    lfuzzord_core::FrameError,
    lfuzzord_core::OrderError,
    lfuzzord_core::OgroupError,
    lfuzzord_core::SubgroupError,
    lfuzzord_core::group::GroupError
);
