use std::io;
use std::path::PathBuf;

use spooky_core::Error as CoreError;

/// Everything `run` can fail with, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },

    /// Ill-formed or invalid JSON, located by line and column.
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    /// Well-formed JSON whose content fails validation.
    #[error("{}: {message}", path.display())]
    Invalid { path: PathBuf, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },

    #[error("output: {0}")]
    Output(#[from] io::Error),

    /// The sweep found scenarios on which the three conditions disagree.
    #[error("{0} divergent scenarios")]
    Divergence(usize),
}

impl CliError {
    /// 2 for bad input, 3 for unmet preconditions, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. }
            | CliError::Parse { .. }
            | CliError::Invalid { .. }
            | CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                CoreError::Validation(_) | CoreError::Size { .. } => 2,
                CoreError::Precondition(_)
                | CoreError::NotSpooky { .. }
                | CoreError::NoWitness
                | CoreError::NotApplicable(_)
                | CoreError::DegenerateAssemblage => 3,
                CoreError::Internal(_) => 1,
            },
            CliError::Write { .. } | CliError::Output(_) | CliError::Divergence(_) => 1,
        }
    }

    /// Syntax and type errors keep serde's position; content errors raised
    /// after a document is read come without one.
    pub(crate) fn parse(path: impl Into<PathBuf>, e: &serde_json::Error) -> Self {
        if e.line() == 0 {
            return CliError::Invalid {
                path: path.into(),
                message: e.to_string(),
            };
        }
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let message = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
        CliError::Parse {
            path: path.into(),
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}
