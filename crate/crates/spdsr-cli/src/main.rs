//! Command-line front end for the scaling-rotation geometry library:
//! batch distances, interpolation trajectories, version enumeration, and
//! sweeps of the rotation weight, reading JSON or CSV batches and
//! writing plot-ready JSON or CSV reports.

use std::env;
use std::fmt;

use clap::Parser;

mod commands;
mod input;
mod report;

#[derive(Parser)]
#[command(
    name = "spdsr",
    version,
    about = "Scaling-rotation distances and interpolation for 2x2 and 3x3 SPD matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: commands::Command,
}

/// Failure categories, one per process exit code: I/O 1, input or
/// configuration parsing 2, mathematical domain 3, non-convergence 4.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Domain(String),
    Convergence(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Convergence(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m)
            | CliError::Parse(m)
            | CliError::Domain(m)
            | CliError::Convergence(m) => f.write_str(m),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.code());
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    init_thread_pool()?;
    cli.command.run()
}

/// Caps the worker count at SPDSR_THREADS when the variable is set;
/// otherwise rayon picks its default.
fn init_thread_pool() -> Result<(), CliError> {
    let Some(raw) = env::var_os("SPDSR_THREADS") else {
        return Ok(());
    };
    let text = raw.to_string_lossy();
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            CliError::Parse(format!(
                "SPDSR_THREADS must be a positive integer, got {text:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .expect("the global thread pool is built once, before any parallel work");
    Ok(())
}
