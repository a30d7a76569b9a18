use std::process::ExitCode;

use subsmooth_core::Error as CoreError;

/// Process exit codes.
pub mod code {
    pub const HOLDS: u8 = 0;
    pub const FAILS: u8 = 1;
    pub const INCONCLUSIVE: u8 = 2;
    pub const USAGE: u8 = 64;
    pub const ESTIMATION: u8 = 65;
    pub const NO_INPUT: u8 = 66;
    pub const IO: u8 = 74;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] crate::expr::ParseError),
    /// An input file could not be opened or read.
    #[error("cannot read {0}")]
    Input(String),
    /// An input file was read but its content is malformed.
    #[error("bad data in {0}")]
    Data(String),
    #[error("cannot write {0}")]
    Output(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) | CliError::Parse(_) => code::USAGE,
            CliError::Input(_) => code::NO_INPUT,
            CliError::Data(_) => code::ESTIMATION,
            CliError::Output(_) => code::IO,
            CliError::Core(e) => match e {
                CoreError::Config(_) | CoreError::Precondition(_) | CoreError::Contract(_) | CoreError::Lookup(_) => {
                    code::USAGE
                }
                _ => code::ESTIMATION,
            },
        })
    }
}
