use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] capmarkov::Error),

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input, 1 for failures while running.
    pub fn exit_code(&self) -> u8 {
        use capmarkov::Error as E;
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Core(
                E::Parse { .. }
                | E::InvalidArgument(_)
                | E::NotMonic { .. }
                | E::Disconnected { .. }
                | E::DegreeTooLow { .. }
                | E::ZeroPolynomial,
            ) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}
