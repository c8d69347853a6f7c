mod args;
mod commands;
mod literal;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use tetrablock::domains::DEFAULT_TOL;

use args::{Cli, Command};
use report::{CliError, CliResult, Outcome, EXIT_USAGE};

const TOL_VAR: &str = "TETRA_DEFAULT_TOL";

fn default_tol() -> CliResult<f64> {
    match std::env::var(TOL_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_TOL),
        Err(e) => Err(CliError::Usage(format!("{TOL_VAR}: {e}"))),
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| *t > 0.0 && t.is_finite())
            .ok_or_else(|| CliError::Usage(format!("{TOL_VAR} must be a positive number, got {s:?}"))),
    }
}

fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    let tol = default_tol()?;
    match &cli.command {
        Command::Member(a) => commands::member::run(a, tol),
        Command::Distance(a) => commands::distance::run(a),
        Command::Geodesic(g) => commands::geodesic::run(g, tol),
        Command::VerifyPaper(a) => commands::verify::run(a),
        Command::Sweep(a) => commands::sweep::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            // A sweep without --output has already written its artifact to stdout.
            let artifact_on_stdout = matches!(&cli.command, Command::Sweep(a) if a.output.is_none());
            if !artifact_on_stdout {
                let body = if cli.json {
                    serde_json::to_string_pretty(&outcome.envelope).expect("serializable")
                } else {
                    outcome.text
                };
                if !body.is_empty() {
                    if let Err(e) = writeln!(std::io::stdout().lock(), "{body}") {
                        if e.kind() != std::io::ErrorKind::BrokenPipe {
                            eprintln!("tetra: i/o error: {e}");
                            return ExitCode::from(report::EXIT_IO as u8);
                        }
                    }
                }
            }
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("tetra: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
