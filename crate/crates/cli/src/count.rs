use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use serde::Serialize;

use natgrid_core::arrangement::{count_incidences, read_arrangement};
use natgrid_core::constructions::{bound_report, st_bound, thm_bound, BoundReport};
use natgrid_core::{CountStrategy, Error};

use crate::{elapsed_ms, emit, Cli, RunConfig, EXIT_OK};

#[derive(Debug, Args)]
pub struct CountArgs {
    pub arrangement: PathBuf,
    /// naive or grouped.
    #[arg(long, default_value = "grouped")]
    pub strategy: CountStrategy,
    /// Grid size for the grid-free bound.
    #[arg(long, default_value_t = 2)]
    pub t: u32,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Number of points.
    #[arg(long)]
    pub m: u64,
    /// Number of lines.
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 2)]
    pub t: u32,
}

#[derive(Serialize)]
struct CountResult {
    m: usize,
    n: usize,
    incidences: u64,
    strategy: CountStrategy,
    elapsed_ms: u64,
    /// Absent when the arrangement has no points or no lines.
    bounds: Option<BoundReport>,
}

pub(crate) fn run_count(args: &CountArgs, cli: &Cli, out: &mut dyn Write) -> Result<i32, Error> {
    let mut config = RunConfig::new("count", &cli.report);
    config.inputs = vec![args.arrangement.clone()];
    config.t = Some(args.t as usize);
    let arr = read_arrangement(&args.arrangement)?;
    let start = Instant::now();
    let incidences = count_incidences(&arr, args.strategy);
    let elapsed = elapsed_ms(start);
    let (m, n) = (arr.num_points(), arr.num_lines());
    let bounds = if m == 0 || n == 0 {
        None
    } else {
        Some(bound_report(m as u64, n as u64, args.t, Some(incidences))?)
    };
    let result = CountResult {
        m,
        n,
        incidences,
        strategy: args.strategy,
        elapsed_ms: elapsed,
        bounds,
    };
    emit(&config, &result, out)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct BoundResult {
    st_formula: String,
    thm_formula: String,
    #[serde(flatten)]
    report: BoundReport,
}

pub(crate) fn run_bound(args: &BoundArgs, cli: &Cli, out: &mut dyn Write) -> Result<i32, Error> {
    let mut config = RunConfig::new("bound", &cli.report);
    config.t = Some(args.t as usize);
    let result = BoundResult {
        st_formula: st_bound(args.m, args.n)?.formula(),
        thm_formula: thm_bound(args.t, args.m, args.n)?.formula(),
        report: bound_report(args.m, args.n, args.t, None)?,
    };
    emit(&config, &result, out)?;
    Ok(EXIT_OK)
}
