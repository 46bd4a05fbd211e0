use abssep::Error;

/// Exit status for a verdict-negative result.
pub const EXIT_NEGATIVE: i32 = 2;
/// Exit status for bad input (files, flags, parameters).
pub const EXIT_INPUT: i32 = 3;
/// Exit status for numerical failures that are not the input's fault.
pub const EXIT_INTERNAL: i32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => EXIT_INPUT,
            CliError::Core(e) => match e {
                Error::NoInteriorPoint(_) | Error::MaxIterations(_) | Error::CertificateRejected(_) => EXIT_INTERNAL,
                _ => EXIT_INPUT,
            },
        }
    }
}
