use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Subcommand};
use serde::Serialize;
use serde_json::json;

use natgrid_core::arrangement::read_arrangement;
use natgrid_core::format::read_int_set;
use natgrid_core::grid_detect::{
    check_natural, find_natural_grid, find_txt_grid, read_witness, verify_witness, write_witness, GridWitness,
    Search, DEFAULT_NODE_BUDGET,
};
use natgrid_core::sidon::{is_kfold_sidon, sidon_counterexample};
use natgrid_core::Error;

use crate::{elapsed_ms, emit, write_file, Cli, RunConfig, EXIT_COUNTEREXAMPLE, EXIT_INCONCLUSIVE, EXIT_INTERNAL, EXIT_OK};

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Node budget of the grid search.
    #[arg(long, env = "NATGRID_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Where to write a counterexample, if one is found.
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyKind {
    /// The arrangement contains no 2×2 grid.
    #[command(name = "gridfree-t2")]
    GridfreeT2 {
        arrangement: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// The arrangement contains no natural t×t grid.
    NaturalFree {
        arrangement: PathBuf,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// The set is Sidon.
    Sidon {
        set: PathBuf,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// The set is k-fold Sidon.
    Kfold {
        set: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// The witness file describes a grid of the arrangement.
    Witness {
        arrangement: PathBuf,
        witness: PathBuf,
        /// Also require the grid to be natural.
        #[arg(long)]
        natural: bool,
    },
}

#[derive(Serialize)]
struct VerifyResult {
    property: String,
    status: &'static str,
    counterexample: Option<serde_json::Value>,
    diagnostic: Option<String>,
    elapsed_ms: u64,
}

enum Verdict {
    Holds,
    Fails {
        counterexample: Option<serde_json::Value>,
        diagnostic: Option<String>,
    },
    Budget,
    /// The search returned a witness that fails re-verification.
    Internal(String),
}

pub(crate) fn run(kind: &VerifyKind, cli: &Cli, out: &mut dyn Write) -> Result<i32, Error> {
    let mut config = RunConfig::new("verify", &cli.report);
    let start = Instant::now();
    let (property, verdict) = match kind {
        VerifyKind::GridfreeT2 { arrangement, search } => {
            config.inputs = vec![arrangement.clone()];
            config.t = Some(2);
            grid_search(&mut config, arrangement, 2, search, false)?
        }
        VerifyKind::NaturalFree { arrangement, t, search } => {
            config.inputs = vec![arrangement.clone()];
            config.t = Some(*t);
            grid_search(&mut config, arrangement, *t, search, true)?
        }
        VerifyKind::Sidon { set, witness_out } => {
            config.inputs = vec![set.clone()];
            config.output = witness_out.clone();
            let a = read_int_set(set)?;
            let verdict = match sidon_counterexample(&a) {
                None => Verdict::Holds,
                Some(x) => equation_counterexample([1, 1, -1, -1], x, witness_out)?,
            };
            ("sidon".to_string(), verdict)
        }
        VerifyKind::Kfold { set, k, witness_out } => {
            config.inputs = vec![set.clone()];
            config.output = witness_out.clone();
            config.k = Some(*k);
            let a = read_int_set(set)?;
            let verdict = match is_kfold_sidon(&a, *k) {
                Ok(()) => Verdict::Holds,
                Err(c) => equation_counterexample(c.u.get(), c.x, witness_out)?,
            };
            (format!("{k}-fold sidon"), verdict)
        }
        VerifyKind::Witness {
            arrangement,
            witness,
            natural,
        } => {
            config.inputs = vec![arrangement.clone(), witness.clone()];
            let arr = read_arrangement(arrangement)?;
            let w = read_witness(witness)?;
            config.t = Some(w.t());
            let checked = if *natural {
                check_natural(&arr, &w).map(|_| ())
            } else {
                verify_witness(&arr, &w)
            };
            let verdict = match checked {
                Ok(()) => Verdict::Holds,
                Err(defect) => Verdict::Fails {
                    counterexample: None,
                    diagnostic: Some(defect.to_string()),
                },
            };
            let property = if *natural { "natural grid witness" } else { "grid witness" };
            (property.to_string(), verdict)
        }
    };
    let (status, code, counterexample, diagnostic) = match verdict {
        Verdict::Holds => ("holds", EXIT_OK, None, None),
        Verdict::Fails {
            counterexample,
            diagnostic,
        } => ("counterexample", EXIT_COUNTEREXAMPLE, counterexample, diagnostic),
        Verdict::Budget => ("budget_exceeded", EXIT_INCONCLUSIVE, None, None),
        Verdict::Internal(d) => ("internal_error", EXIT_INTERNAL, None, Some(d)),
    };
    let result = VerifyResult {
        property,
        status,
        counterexample,
        diagnostic,
        elapsed_ms: elapsed_ms(start),
    };
    emit(&config, &result, out)?;
    Ok(code)
}

fn grid_search(
    config: &mut RunConfig,
    path: &Path,
    t: usize,
    search: &SearchArgs,
    natural: bool,
) -> Result<(String, Verdict), Error> {
    config.budget = Some(search.budget);
    config.output = search.witness_out.clone();
    let arr = read_arrangement(path)?;
    let found = if natural {
        find_natural_grid(&arr, t, search.budget)?.map(|w| w.grid)
    } else {
        find_txt_grid(&arr, t, search.budget)?
    };
    let property = if natural {
        format!("no natural {t}x{t} grid")
    } else {
        format!("no {t}x{t} grid")
    };
    let verdict = match found {
        Search::Absent => Verdict::Holds,
        Search::BudgetExceeded => Verdict::Budget,
        Search::Found(w) => {
            let recheck = if natural {
                check_natural(&arr, &w).map(|_| ())
            } else {
                verify_witness(&arr, &w)
            };
            if let Err(defect) = recheck {
                return Ok((property, Verdict::Internal(format!("search produced an invalid witness: {defect}"))));
            }
            if let Some(dest) = &search.witness_out {
                write_witness(&w, dest)?;
            }
            Verdict::Fails {
                counterexample: Some(grid_json(&w)),
                diagnostic: None,
            }
        }
    };
    Ok((property, verdict))
}

fn equation_counterexample(u: [i64; 4], x: [u64; 4], dest: &Option<PathBuf>) -> Result<Verdict, Error> {
    let value = json!({ "u": u, "x": x });
    if let Some(dest) = dest {
        write_file(dest, &(crate::to_json(&value) + "\n"))?;
    }
    Ok(Verdict::Fails {
        counterexample: Some(value),
        diagnostic: None,
    })
}

pub(crate) fn grid_json(w: &GridWitness) -> serde_json::Value {
    let strs = |v: &[_]| v.iter().map(|x: &natgrid_core::Line| x.to_string()).collect::<Vec<_>>();
    json!({
        "t": w.t(),
        "l1": strs(&w.l1),
        "l2": strs(&w.l2),
        "points": w.points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    })
}
