//! Command-line front end for `homsol`: subcommands, configuration files,
//! stream-function contours and CSV/JSON/SVG output.

pub mod commands;
pub mod config;
pub mod figures;
pub mod render;
pub mod stream;

use std::io::Write;

use clap::{CommandFactory, Parser};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] homsol::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("render spec does not match payload: {0}")]
    SpecMismatch(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    /// 2 for usage and domain errors, 1 for internal failures.
    pub fn exit_code(&self) -> i32 {
        use homsol::Error as E;
        match self {
            CliError::Usage(_) | CliError::SpecMismatch(_) => 2,
            CliError::Core(E::NoConvergence(_) | E::ToleranceFailure(_) | E::GridTooCoarse(_)) => 1,
            CliError::Core(_) => 2,
            CliError::Io(_) | CliError::Internal(_) => 1,
        }
    }

    pub fn tag(&self) -> &'static str {
        use homsol::Error as E;
        match self {
            CliError::Usage(_) => "Usage",
            CliError::SpecMismatch(_) => "SpecMismatch",
            CliError::Io(_) => "IoError",
            CliError::Internal(_) => "Internal",
            CliError::Core(e) => match e {
                E::Domain(_) => "Domain",
                E::DegenerateC => "DegenerateC",
                E::NoConvergence(_) => "NoConvergence",
                E::ToleranceFailure(_) => "ToleranceFailure",
                E::GridTooCoarse(_) => "GridTooCoarse",
                E::EndpointNotReached => "EndpointNotReached",
                E::NotInJ => "NotInJ",
                E::CriticalSurface => "CriticalSurface",
                E::Inconclusive(_) => "Inconclusive",
                E::SingularPoint => "SingularPoint",
                E::NotEulerAdmissible(_) => "NotEulerAdmissible",
                E::SelectionFailure => "SelectionFailure",
                E::GridTouchesAxis => "GridTouchesAxis",
                E::OutOfScope(_) => "OutOfScope",
            },
        }
    }
}

/// Moves `--config FILE` out of `argv` and splices the file's settings in
/// right after the subcommand name, so explicit flags override them.
fn expand_config(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(k) = argv
        .iter()
        .position(|a| a == "--config" || a.starts_with("--config="))
    else {
        return Ok(argv);
    };
    let mut argv = argv;
    let path = match argv[k].strip_prefix("--config=") {
        Some(p) => {
            let p = p.to_string();
            argv.remove(k);
            p
        }
        None => {
            if k + 1 >= argv.len() {
                return Err(CliError::Usage("--config needs a file".into()));
            }
            argv.remove(k);
            argv.remove(k)
        }
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
    let extra = config::as_args(&config::parse(&text)?);
    let at = argv.len().min(2);
    argv.splice(at..at, extra);
    Ok(argv)
}

/// Runs one invocation and returns the process exit code.
pub fn run(argv: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let argv = match expand_config(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.tag());
            let _ = writeln!(err, "{}", commands::Cli::command().render_usage());
            return 2;
        }
    };
    let cli = match commands::Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };
    match commands::dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.tag());
            if matches!(e, CliError::Usage(_)) {
                let _ = writeln!(err, "{}", commands::Cli::command().render_usage());
            }
            e.exit_code()
        }
    }
}
