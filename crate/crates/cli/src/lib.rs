//! Command surface of the `natgrid` binary. Every command prints a JSON report
//! (the `bench` command prints a table) and returns a process exit code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use natgrid_core::Error;

mod bench;
mod count;
mod extract;
mod gen;
mod verify;

pub use bench::{BenchArgs, Family};
pub use count::{BoundArgs, CountArgs};
pub use extract::ExtractArgs;
pub use gen::GenKind;
pub use verify::VerifyKind;

/// Property holds, or artifact produced.
pub const EXIT_OK: i32 = 0;
/// A counterexample was found.
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
/// Search budget exhausted, or extraction produced nothing.
pub const EXIT_INCONCLUSIVE: i32 = 2;
/// Bad arguments, unreadable or malformed input.
pub const EXIT_INPUT: i32 = 3;
/// An emitted witness failed re-verification. Never expected.
pub const EXIT_INTERNAL: i32 = 4;

const EXIT_HELP: &str = "\
Exit codes:
  verify   0 property holds, 1 counterexample found, 2 budget exhausted, 3 bad input
  extract  0 witness produced, 2 no grid extracted, 3 bad input
  others   0 success, 3 bad input";

#[derive(Debug, Parser)]
#[command(name = "natgrid", version, about = "Grids in point-line arrangements", after_help = EXIT_HELP)]
pub struct Cli {
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an arrangement or red/blue input file.
    #[command(subcommand)]
    Gen(GenKind),
    /// Check a property; exit 1 with a counterexample when it fails.
    #[command(subcommand, after_help = EXIT_HELP)]
    Verify(VerifyKind),
    /// Count incidences and compare with the incidence bounds.
    Count(CountArgs),
    /// Extract a natural grid from a red/blue line file.
    #[command(after_help = EXIT_HELP)]
    Extract(ExtractArgs),
    /// Evaluate the incidence bounds for given sizes.
    Bound(BoundArgs),
    /// Time a generator family and fit its incidence exponent.
    Bench(BenchArgs),
}

/// Everything needed to replay a run.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<PathBuf>,
    pub output: Option<PathBuf>,
    pub t: Option<usize>,
    pub c: Option<usize>,
    pub k: Option<u32>,
    pub seed: Option<u64>,
    pub budget: Option<u64>,
    pub report: Option<PathBuf>,
}

impl RunConfig {
    fn new(command: &str, report: &Option<PathBuf>) -> Self {
        RunConfig {
            command: command.to_string(),
            report: report.clone(),
            ..Default::default()
        }
    }
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    config: &'a RunConfig,
    result: T,
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = write!(out, "{}", e.render());
            code
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Gen(kind) => gen::run(kind, cli, out),
        Command::Verify(kind) => verify::run(kind, cli, out),
        Command::Count(args) => count::run_count(args, cli, out),
        Command::Extract(args) => extract::run(args, cli, out),
        Command::Bound(args) => count::run_bound(args, cli, out),
        Command::Bench(args) => bench::run(args, cli, out),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        EXIT_INPUT
    })
}

/// Prints the report and mirrors it to `config.report` when set.
fn emit<T: Serialize>(config: &RunConfig, result: T, out: &mut dyn Write) -> Result<(), Error> {
    let text = to_json(&Report { config, result });
    writeln!(out, "{text}").map_err(|e| io_err("<stdout>", e))?;
    if let Some(path) = &config.report {
        write_file(path, &(text + "\n"))?;
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn io_err(path: impl Into<PathBuf>, source: std::io::Error) -> Error {
    Error::Io {
        path: path.into(),
        source,
    }
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}
