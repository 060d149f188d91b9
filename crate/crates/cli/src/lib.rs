//! Library side of the `pmc` command-line tool.

pub mod commands;
pub mod config;
pub mod report;

use pmc_core::Error;
use report::{resolve, write_atomic, Report};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("stage {stage}: {error}")]
    Core { stage: &'static str, error: Error },
    /// A failure after which a partial report is still written.
    #[error("{error}")]
    WithReport { report: Box<Report>, error: Box<CliError> },
}

impl CliError {
    /// 0 success, 1 usage or config, 2 no root, 3 infeasible, 4 geometry, 5 solver.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::WithReport { error, .. } => error.exit_code(),
            CliError::Core { error, .. } => match error {
                Error::NoRoot | Error::DegenerateRoot(_) => 2,
                Error::Infeasible(_) => 3,
                Error::EmbeddingFailure(_)
                | Error::SelfIntersection(_)
                | Error::GeometryTooTight(_)
                | Error::PoleSingularity(_) => 4,
                Error::Syntax { .. } | Error::InvalidArgument(_) | Error::OutOfRange(_) => 1,
                _ => 5,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Moments,
    Balance,
    Assemble,
    Validate,
}

/// Runs one command and writes its report; the report is also written when a stage
/// fails after partial results exist.
pub fn run(cmd: Command, config: &Path, out: &Path) -> Result<(), CliError> {
    let loaded = config::load(config).map_err(CliError::Config)?;
    let outcome = match cmd {
        Command::Moments => commands::moments(&loaded, out),
        Command::Balance => commands::balance(&loaded, out),
        Command::Assemble => commands::assemble(&loaded, out),
        Command::Validate => commands::validate(&loaded, out),
    };
    let path = resolve(out, &loaded.config.outputs.report_path);
    let write = |rep: &Report| {
        write_atomic(&path, &rep.to_json()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    };
    match outcome {
        Ok(rep) => write(&rep),
        Err(CliError::WithReport { report, error }) => {
            write(&report)?;
            Err(*error)
        }
        Err(e) => Err(e),
    }
}
