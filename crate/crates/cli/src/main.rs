// `!(x > 0.0)` is used on purpose: it rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod checks;
mod compare;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("incompatible scenarios: {0}")]
    IncompatibleScenarios(String),
    #[error("i/o error: {0}")]
    Io(String),
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "dynbc", version, about = "Reduced-form diagnostics for problems with dynamic boundary conditions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of one configuration; writes report.json and CSV series.
    Run {
        config: PathBuf,
        #[arg(long, default_value = "dynbc-out")]
        out: PathBuf,
    },
    /// Sweep the coupling scale of two configurations and diff the tables.
    Compare { a: PathBuf, b: PathBuf },
    /// Print the JSON schema of configuration files.
    Schema,
}

/// Caps the rayon pool at `DYNBC_THREADS` when set.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("DYNBC_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::ConfigInvalid(format!("DYNBC_THREADS must be a positive integer, got \"{raw}\"")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::ConfigInvalid(format!("thread pool: {e}")))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json serialises")
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Schema => {
            println!("{}", pretty(&config::schema_json()));
            Ok(0)
        }
        Command::Run { config: path, out } => {
            configure_threads()?;
            let cfg = config::load(&path)?;
            let outcome = report::run(&cfg, &out)?;
            for e in &outcome.entries {
                let status = serde_json::to_value(e.status).expect("status serialises");
                let reason = e.reason.as_deref().map(|r| format!(" ({r})")).unwrap_or_default();
                println!("{:<22} {}{reason}", e.name, status.as_str().unwrap_or("?"));
            }
            println!("report: {}", out.join("report.json").display());
            let code = outcome.exit_code();
            if code != 0 {
                let names: Vec<&str> = outcome
                    .entries
                    .iter()
                    .filter(|e| e.status == checks::Status::Fail)
                    .map(|e| e.name)
                    .collect();
                eprintln!("check failed: {}", names.join(", "));
                return Ok(EXIT_CHECK_FAILED);
            }
            Ok(0)
        }
        Command::Compare { a, b } => {
            configure_threads()?;
            let (ca, cb) = (config::load(&a)?, config::load(&b)?);
            let cmp = compare::compare(&ca, &cb)?;
            println!("{}", pretty(&cmp.report));
            if !cmp.continuous {
                eprintln!("check failed: spectral abscissa jumps along the coupling sweep");
                return Ok(EXIT_CHECK_FAILED);
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
