//! CLI failure classification: every error is either a configuration
//! problem (exit 2) or an exceeded enumeration budget (exit 3).

use latticeforge_cf::CfError;
use latticeforge_channel::ChannelError;
use latticeforge_core::LatticeError;
use latticeforge_stc::StcError;
use latticeforge_wiretap::WiretapError;
use std::fmt;

/// Terminal error of a CLI run, tagged with its exit code class.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file, or argument values. Exit code 2.
    Config(String),
    /// An enumeration or codebook scan exceeded its cap. Exit code 3.
    Capacity(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Capacity(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Capacity(msg) => write!(f, "capacity error: {msg}"),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Capacity { .. } => CliError::Capacity(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<StcError> for CliError {
    fn from(e: StcError) -> Self {
        match e {
            StcError::Lattice(inner) => inner.into(),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<ChannelError> for CliError {
    fn from(e: ChannelError) -> Self {
        match e {
            ChannelError::Lattice(inner) => inner.into(),
            ChannelError::Stc(inner) => inner.into(),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<CfError> for CliError {
    fn from(e: CfError) -> Self {
        match e {
            CfError::Lattice(inner) => inner.into(),
            CfError::Capacity(msg) => CliError::Capacity(msg),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<WiretapError> for CliError {
    fn from(e: WiretapError) -> Self {
        match e {
            WiretapError::Lattice(inner) => inner.into(),
            WiretapError::Stc(inner) => inner.into(),
            _ => CliError::Config(e.to_string()),
        }
    }
}
