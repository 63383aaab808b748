use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use serde::Serialize;
use serde_json::json;

use natgrid_core::arrangement::{count_incidences, write_arrangement};
use natgrid_core::constructions::{
    asymptotic_params, generate_grid_free, lattice_rich_lines, GridFreeParamFile, GridFreeParams,
};
use natgrid_core::format::{read_int_set, write_int_set};
use natgrid_core::grid_extract::{write_redblue, RedBlueInput, DEFAULT_CAPACITY};
use natgrid_core::sidon::{is_sidon, CertificateReport, KFoldCertificate};
use natgrid_core::{Arrangement, CountStrategy, Error};

use crate::{emit, io_err, Cli, RunConfig, EXIT_OK};

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output file.
    #[arg(long)]
    pub out: PathBuf,
    /// Generation manifest [default: <out>.manifest.json].
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Points [1..s] × [1..2s²] with the s³ lines y = c·x + d.
    Lattice {
        #[arg(long)]
        s: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Grid-free arrangement from set files, or from a JSON parameter file.
    Gridfree {
        /// File of the k-fold Sidon abscissae.
        #[arg(long = "A", value_name = "FILE")]
        a_file: Option<PathBuf>,
        /// File of the Sidon slopes.
        #[arg(long = "M", value_name = "FILE")]
        m_file: Option<PathBuf>,
        #[arg(long)]
        h: Option<u64>,
        #[arg(long)]
        k: Option<u32>,
        /// JSON with a_file, m_file, h, k; set paths resolve against its directory.
        #[arg(long, conflicts_with_all = ["a_file", "m_file", "h", "k"])]
        params: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Grid-free arrangement on the asymptotic parameter schedule for n.
    /// The sets are also written to <out>.A and <out>.M.
    Asymptotic {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Random red/blue lines, C·t² of each color.
    Redblue {
        #[arg(long)]
        t: usize,
        #[arg(long = "c", default_value_t = DEFAULT_CAPACITY)]
        c: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Slopes of both colors anywhere in [−2, 2] instead of two pencils.
        #[arg(long)]
        general: bool,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Serialize)]
struct SetCertificates {
    m_is_sidon: bool,
    a: CertificateReport,
}

#[derive(Serialize)]
struct GenResult {
    kind: &'static str,
    params: serde_json::Value,
    points: Option<usize>,
    lines: usize,
    incidences: Option<u64>,
    certificates: Option<SetCertificates>,
    files: Vec<PathBuf>,
}

pub(crate) fn run(kind: &GenKind, cli: &Cli, out: &mut dyn Write) -> Result<i32, Error> {
    let mut config = RunConfig::new("gen", &cli.report);
    let (result, dest) = match kind {
        GenKind::Lattice { s, out } => {
            if *s == 0 {
                return Err(Error::InvalidParams("s must be positive".into()));
            }
            let arr = lattice_rich_lines(*s);
            write_arrangement(&arr, &out.out)?;
            (arrangement_result("lattice", json!({ "s": s }), &arr, None, &out.out), out)
        }
        GenKind::Gridfree {
            a_file,
            m_file,
            h,
            k,
            params,
            out,
        } => {
            let p = match params {
                Some(path) => load_param_file(path)?,
                None => {
                    let need = |name: &str| Error::InvalidParams(format!("missing --{name} (or use --params)"));
                    let a_file = a_file.as_ref().ok_or_else(|| need("A"))?;
                    let m_file = m_file.as_ref().ok_or_else(|| need("M"))?;
                    config.inputs = vec![a_file.clone(), m_file.clone()];
                    GridFreeParams {
                        a: read_int_set(a_file)?,
                        m: read_int_set(m_file)?,
                        h: h.ok_or_else(|| need("h"))?,
                        k: k.ok_or_else(|| need("k"))?,
                    }
                }
            };
            if let Some(path) = params {
                config.inputs = vec![path.clone()];
            }
            config.k = Some(p.k);
            let arr = generate_grid_free(&p)?;
            write_arrangement(&arr, &out.out)?;
            let certs = certificates(&p)?;
            (gridfree_result("gridfree", &p, &arr, certs, vec![out.out.clone()]), out)
        }
        GenKind::Asymptotic { n, out } => {
            let ap = asymptotic_params(*n)?;
            let p = &ap.params;
            config.k = Some(p.k);
            let arr = generate_grid_free(p)?;
            write_arrangement(&arr, &out.out)?;
            let a_path = with_suffix(&out.out, ".A");
            let m_path = with_suffix(&out.out, ".M");
            write_int_set(&p.a, &a_path)?;
            write_int_set(&p.m, &m_path)?;
            let certs = certificates(p)?;
            let mut res = gridfree_result("asymptotic", p, &arr, certs, vec![out.out.clone(), a_path, m_path]);
            res.params["n"] = json!(n);
            res.params["a_cap"] = json!(ap.a_cap);
            (res, out)
        }
        GenKind::Redblue {
            t,
            c,
            seed,
            general,
            out,
        } => {
            if *t < 2 || *c == 0 {
                return Err(Error::InvalidParams("need t ≥ 2 and C ≥ 1".into()));
            }
            config.t = Some(*t);
            config.c = Some(*c);
            config.seed = Some(*seed);
            let count = c * t * t;
            let input = if *general {
                RedBlueInput::random_general_seeded(count, *seed)
            } else {
                RedBlueInput::random_pencils_seeded(count, *seed)
            };
            write_redblue(&input, &out.out)?;
            let res = GenResult {
                kind: "redblue",
                params: json!({ "t": t, "c": c, "seed": seed, "general": general }),
                points: None,
                lines: input.red().len() + input.blue().len(),
                incidences: None,
                certificates: None,
                files: vec![out.out.clone()],
            };
            (res, out)
        }
    };
    config.output = Some(dest.out.clone());
    let manifest = dest
        .manifest
        .clone()
        .unwrap_or_else(|| with_suffix(&dest.out, ".manifest.json"));
    let text = crate::to_json(&crate::Report {
        config: &config,
        result: &result,
    });
    crate::write_file(&manifest, &(text + "\n"))?;
    emit(&config, &result, out)?;
    Ok(EXIT_OK)
}

fn load_param_file(path: &Path) -> Result<GridFreeParams, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let file: GridFreeParamFile =
        serde_json::from_str(&text).map_err(|e| Error::InvalidParams(format!("{}: {e}", path.display())))?;
    file.load(path.parent().unwrap_or(Path::new(".")))
}

fn certificates(p: &GridFreeParams) -> Result<SetCertificates, Error> {
    let cert = KFoldCertificate::verify(&p.a, p.k)
        .map_err(|c| Error::InvalidParams(format!("A is not {}-fold Sidon: u = {}, x = {:?}", p.k, c.u, c.x)))?;
    Ok(SetCertificates {
        m_is_sidon: is_sidon(&p.m),
        a: cert.report(),
    })
}

fn arrangement_result(
    kind: &'static str,
    params: serde_json::Value,
    arr: &Arrangement,
    certificates: Option<SetCertificates>,
    path: &Path,
) -> GenResult {
    GenResult {
        kind,
        params,
        points: Some(arr.num_points()),
        lines: arr.num_lines(),
        incidences: Some(count_incidences(arr, CountStrategy::Grouped)),
        certificates,
        files: vec![path.to_path_buf()],
    }
}

fn gridfree_result(
    kind: &'static str,
    p: &GridFreeParams,
    arr: &Arrangement,
    certs: SetCertificates,
    files: Vec<PathBuf>,
) -> GenResult {
    let params = json!({ "a": p.a, "m": p.m, "h": p.h, "k": p.k });
    let mut res = arrangement_result(kind, params, arr, Some(certs), &files[0]);
    res.files = files;
    res
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}
