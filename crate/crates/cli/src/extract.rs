use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use serde::Serialize;

use natgrid_core::grid_detect::{verify_natural_witness, verify_witness, write_witness};
use natgrid_core::grid_extract::{extract_natural_grid, read_redblue, ExtractionReport, DEFAULT_CAPACITY};
use natgrid_core::Error;

use crate::verify::grid_json;
use crate::{elapsed_ms, emit, Cli, RunConfig, EXIT_INCONCLUSIVE, EXIT_INTERNAL, EXIT_OK};

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// File with `red` and `blue` line sections.
    pub input: PathBuf,
    #[arg(long)]
    pub t: usize,
    /// Capacity factor: at most C·t² lines of each color are used.
    #[arg(long = "c", default_value_t = DEFAULT_CAPACITY)]
    pub c: usize,
    /// Chooses the lines kept when a color has more than C·t².
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ExtractResult {
    lines_per_color: usize,
    sampled: bool,
    status: &'static str,
    witness: Option<serde_json::Value>,
    stages: ExtractionReport,
    elapsed_ms: u64,
}

pub(crate) fn run(args: &ExtractArgs, cli: &Cli, out: &mut dyn Write) -> Result<i32, Error> {
    let mut config = RunConfig::new("extract", &cli.report);
    config.inputs = vec![args.input.clone()];
    config.output = args.witness_out.clone();
    config.t = Some(args.t);
    config.c = Some(args.c);
    config.seed = Some(args.seed);
    if args.c == 0 {
        return Err(Error::InvalidParams("C must be positive".into()));
    }
    let full = read_redblue(&args.input)?;
    let count = (args.c * args.t * args.t).min(full.red().len()).min(full.blue().len());
    let sampled = count < full.red().len() || count < full.blue().len();
    let input = if sampled { full.sample(count, args.seed)? } else { full };

    let start = Instant::now();
    let extraction = extract_natural_grid(&input, args.t)?;
    let elapsed = elapsed_ms(start);
    let (status, code, witness) = match &extraction.witness {
        None => ("absent", EXIT_INCONCLUSIVE, None),
        Some(w) => {
            let arr = input.arrangement();
            let recheck = verify_witness(&arr, &w.grid).and_then(|_| verify_natural_witness(&arr, w));
            match recheck {
                Ok(()) => {
                    if let Some(dest) = &args.witness_out {
                        write_witness(&w.grid, dest)?;
                    }
                    ("found", EXIT_OK, Some(grid_json(&w.grid)))
                }
                Err(defect) => {
                    eprintln!("internal error: extracted witness fails verification: {defect}");
                    ("internal_error", EXIT_INTERNAL, Some(grid_json(&w.grid)))
                }
            }
        }
    };
    let result = ExtractResult {
        lines_per_color: count,
        sampled,
        status,
        witness,
        stages: extraction.report,
        elapsed_ms: elapsed,
    };
    emit(&config, &result, out)?;
    Ok(code)
}
