use std::io::Write;
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde::Serialize;

use natgrid_core::arrangement::count_incidences;
use natgrid_core::constructions::{asymptotic_params, generate_grid_free, lattice_rich_lines, loglog_slope};
use natgrid_core::{Arrangement, CountStrategy, Error};

use crate::{elapsed_ms, io_err, to_json, write_file, Cli, RunConfig, EXIT_OK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Sizes are the lattice parameter s.
    Lattice,
    /// Sizes are n of the asymptotic grid-free schedule.
    Gridfree,
}

impl Family {
    fn default_sizes(self) -> Vec<u64> {
        match self {
            Family::Lattice => vec![4, 8, 16, 32],
            Family::Gridfree => vec![1 << 8, 1 << 10, 1 << 12, 1 << 14],
        }
    }

    /// Exponent the incidence count is measured against, as (p, q) = p/q.
    fn target(self) -> (u32, u32) {
        match self {
            Family::Lattice => (4, 3),
            Family::Gridfree => (15, 14),
        }
    }

    fn build(self, size: u64) -> Result<Arrangement, Error> {
        match self {
            Family::Lattice => {
                if size == 0 {
                    return Err(Error::InvalidParams("lattice size must be positive".into()));
                }
                Ok(lattice_rich_lines(size))
            }
            Family::Gridfree => generate_grid_free(&asymptotic_params(size)?.params),
        }
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Comma-separated sizes [lattice: 4,8,16,32; gridfree: 256,1024,4096,16384].
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<u64>,
    /// Recorded for replay; both families are deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Serialize)]
struct Row {
    size: u64,
    points: usize,
    lines: usize,
    incidences: u64,
    elapsed_ms: u64,
}

#[derive(Serialize)]
struct BenchResult {
    family: Family,
    rows: Vec<Row>,
    /// Least-squares slope of ln |I| against ln max(|P|, |L|).
    slope: Option<f64>,
    target: String,
}

pub(crate) fn run(args: &BenchArgs, cli: &Cli, out: &mut dyn Write) -> Result<i32, Error> {
    let mut config = RunConfig::new("bench", &cli.report);
    config.seed = Some(args.seed);
    let sizes = if args.sizes.is_empty() {
        args.family.default_sizes()
    } else {
        args.sizes.clone()
    };
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in &sizes {
        let arr = args.family.build(size)?;
        let start = Instant::now();
        let incidences = count_incidences(&arr, CountStrategy::Grouped);
        rows.push(Row {
            size,
            points: arr.num_points(),
            lines: arr.num_lines(),
            incidences,
            elapsed_ms: elapsed_ms(start),
        });
    }
    let samples: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.points.max(r.lines) as f64, r.incidences as f64))
        .collect();
    let (p, q) = args.family.target();
    let result = BenchResult {
        family: args.family,
        slope: loglog_slope(&samples),
        target: format!("{p}/{q}"),
        rows,
    };
    write_table(&result, p as f64 / q as f64, out).map_err(|e| io_err("<stdout>", e))?;
    if let Some(path) = &config.report {
        let text = to_json(&crate::Report {
            config: &config,
            result: &result,
        });
        write_file(path, &(text + "\n"))?;
    }
    Ok(EXIT_OK)
}

fn write_table(r: &BenchResult, target: f64, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{:>8} {:>10} {:>10} {:>12} {:>10}", "size", "points", "lines", "incidences", "ms")?;
    for row in &r.rows {
        writeln!(
            out,
            "{:>8} {:>10} {:>10} {:>12} {:>10}",
            row.size, row.points, row.lines, row.incidences, row.elapsed_ms
        )?;
    }
    match r.slope {
        Some(s) => writeln!(out, "slope {s:.4} (target {} = {target:.4})", r.target),
        None => writeln!(out, "slope absent: fewer than two sizes (target {} = {target:.4})", r.target),
    }
}
