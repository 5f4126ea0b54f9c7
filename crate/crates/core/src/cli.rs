//! The `edenlab` command line: one subcommand per experiment, CSV or JSON
//! tables on stdout or `--out`.
//!
//! Every command is a deterministic function of its flags. Runs are farmed
//! out to a rayon pool (capped by `EDENLAB_THREADS`) but rows are collected
//! in run order, so the output bytes do not depend on the thread count.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::bounds::{fit_scaling, theorem1_exponent, ScalingSample};
use crate::eden::{eden_grow_with, GrowthOptions};
use crate::error::{Error, Result};
use crate::fpp::{coupling_test, fpp_grow_in, EdgeWeightField};
use crate::histories::{
    brute_force_linear_extensions, branching_tree, centred_path_tree, contrast_table,
    count_linear_extensions, DEFAULT_MAX_HISTORIES,
};
use crate::lattice::PerimeterMetric;
use crate::rng::derive_seed;
use crate::stats::mean_stderr;

pub const THREADS_ENV: &str = "EDENLAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "edenlab", version, about = "Eden growth and first-passage percolation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grow Eden clusters; one row per run.
    Grow(GrowArgs),
    /// First-passage percolation growth, or the coupling test with --couple.
    Fpp(FppArgs),
    /// Exact history averages next to exact Eden expectations.
    Histories(HistoriesArgs),
    /// Perimeter scaling sweep and log-log fit.
    Scaling(ScalingArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Edges,
    Sites,
}

impl From<Metric> for PerimeterMetric {
    fn from(m: Metric) -> Self {
        match m {
            Metric::Edges => PerimeterMetric::Edges,
            Metric::Sites => PerimeterMetric::Sites,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Lattice dimension.
    #[arg(short = 'd', long = "dim", default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    pub dim: u64,
    /// Base seed; run i draws from substream i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    #[arg(long, value_enum, default_value_t = Metric::Edges)]
    pub metric: Metric,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value_t = crate::eden::DEFAULT_MAX_SITES)]
    pub max_sites: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_HISTORIES)]
    pub max_histories: u128,
}

impl Common {
    fn dim(&self) -> usize {
        self.dim as usize
    }
}

#[derive(Debug, Clone, Args)]
pub struct GrowArgs {
    /// Number of growth steps (the cluster has n + 1 sites).
    #[arg(short = 'n', default_value_t = 0)]
    pub n: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct FppArgs {
    #[arg(short = 'n', default_value_t = 0)]
    pub n: usize,
    /// Run the chi-square comparison with the exact Eden law instead.
    #[arg(long)]
    pub couple: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct HistoriesArgs {
    /// Largest history length tabulated.
    #[arg(short = 'm', short_alias = 'n', default_value_t = 3)]
    pub m: usize,
    /// Print the ordering counts of the two reference trees instead.
    #[arg(long)]
    pub figure_trees: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ScalingArgs {
    /// Cluster sizes in sites, strictly increasing.
    #[arg(long, value_delimiter = ',', default_values_t = [1_000u64, 10_000, 100_000])]
    pub sizes: Vec<u64>,
    /// Skip simulation and fit an exact power law n^alpha.
    #[arg(long)]
    pub synthetic_exponent: Option<f64>,
    /// Where to write the summary JSON (default: `<out>.summary.json`, or
    /// stderr when writing rows to stdout).
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

/// Exit status for a failed command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Budget { .. } => 3,
        Error::Io(_) => 4,
        Error::Csv(e) if matches!(e.kind(), csv::ErrorKind::Io(_)) => 4,
        Error::Json(e) if e.is_io() => 4,
        Error::ZeroDimension | Error::Domain(_) | Error::Degenerate(_) => 2,
        _ => 1,
    }
}

/// Rows with a fixed header; rendered as CSV or as a JSON array of objects.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(header: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|v| match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    }))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let objs: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Object(
                            self.header
                                .iter()
                                .cloned()
                                .zip(row.iter().cloned())
                                .collect::<Map<String, Value>>(),
                        )
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *out, &objs)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(table: &Table, common: &Common) -> Result<()> {
    let mut out = open_out(common.out.as_deref())?;
    table.write(common.format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn emit_json(value: &Value, path: Option<&Path>) -> Result<()> {
    let mut out = open_out(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| Error::Domain(format!("{THREADS_ENV}={v} is not a thread count")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))
}

pub fn run(cli: Cli) -> Result<()> {
    let pool = thread_pool()?;
    pool.install(|| match cli.command {
        Command::Grow(a) => emit(&grow_table(&a)?, &a.common),
        Command::Fpp(a) if a.couple => emit_json(&couple_json(&a)?, a.common.out.as_deref()),
        Command::Fpp(a) => emit(&fpp_table(&a)?, &a.common),
        Command::Histories(a) => emit(&histories_table(&a)?, &a.common),
        Command::Scaling(a) => {
            let (table, summary) = scaling(&a)?;
            emit(&table, &a.common)?;
            match (&a.summary, &a.common.out) {
                (Some(p), _) => emit_json(&summary, Some(p)),
                (None, Some(out)) => {
                    let mut p = out.clone().into_os_string();
                    p.push(".summary.json");
                    emit_json(&summary, Some(Path::new(&p)))
                }
                (None, None) => {
                    eprintln!("{}", serde_json::to_string_pretty(&summary)?);
                    Ok(())
                }
            }
        }
    })
}

pub fn grow_table(a: &GrowArgs) -> Result<Table> {
    let c = &a.common;
    let opts = GrowthOptions {
        max_sites: c.max_sites,
        log_trajectory: false,
    };
    let rows = (0..c.runs)
        .into_par_iter()
        .map(|i| {
            let run = eden_grow_with(c.dim(), a.n, c.seed, i, opts)?;
            let animal = run.animal();
            let r = animal.radii();
            Ok(vec![
                json!(i),
                json!(c.seed),
                json!(a.n),
                json!(animal.perimeter_edge_count()),
                json!(animal.perimeter_site_count()),
                json!(r.r_in),
                json!(r.r_out),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new([
        "run",
        "seed",
        "n",
        "perimeter_edges",
        "perimeter_sites",
        "r_in",
        "r_out",
    ]);
    t.rows = rows;
    Ok(t)
}

pub fn fpp_table(a: &FppArgs) -> Result<Table> {
    let c = &a.common;
    let d = c.dim();
    let per_run = (0..c.runs)
        .into_par_iter()
        .map(|i| {
            let mut field = EdgeWeightField::new(derive_seed(c.seed, i));
            let tl = fpp_grow_in(&mut field, d, a.n, c.max_sites)?;
            Ok(tl
                .added_sites
                .iter()
                .zip(&tl.jump_times)
                .enumerate()
                .map(|(k, (s, &t))| {
                    let mut row = vec![json!(i), json!(k + 1), json!(t)];
                    row.extend(s.coords().iter().map(|&x| json!(x)));
                    row
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut header: Vec<String> = ["run", "step", "jump_time"].map(String::from).to_vec();
    header.extend((1..=d).map(|k| format!("x{k}")));
    Ok(Table {
        header,
        rows: per_run.into_iter().flatten().collect(),
    })
}

pub fn couple_json(a: &FppArgs) -> Result<Value> {
    let c = &a.common;
    let report = coupling_test(c.dim(), a.n, c.runs, c.seed, c.max_histories)?;
    Ok(serde_json::to_value(report)?)
}

pub fn histories_table(a: &HistoriesArgs) -> Result<Table> {
    let c = &a.common;
    if a.figure_trees {
        let mut t = Table::new(["tree", "edges", "hook_count", "brute_force_count"]);
        for (name, tree) in [("branching", branching_tree()), ("centred_path", centred_path_tree(4))] {
            t.rows.push(vec![
                json!(name),
                json!(tree.edge_count()),
                json!(count_linear_extensions(&tree).to_string()),
                json!(brute_force_linear_extensions(&tree)?),
            ]);
        }
        return Ok(t);
    }
    let mut t = Table::new([
        "m",
        "history_count",
        "pbar_edges",
        "pbar_sites",
        "eden_expected_edges",
        "eden_expected_sites",
    ]);
    for row in contrast_table(c.dim(), a.m, c.max_histories)? {
        t.rows.push(vec![
            json!(row.m),
            json!(row.history_count),
            json!(row.pbar_edges.to_string()),
            json!(row.pbar_sites.to_string()),
            json!(row.eden_expected_edges.to_string()),
            json!(row.eden_expected_sites.to_string()),
        ]);
    }
    Ok(t)
}

/// Per-size rows and the fit summary.
pub fn scaling(a: &ScalingArgs) -> Result<(Table, Value)> {
    let c = &a.common;
    let metric: PerimeterMetric = c.metric.into();
    if a.sizes.contains(&0) {
        return Err(Error::Domain("sizes count sites and must be positive".into()));
    }
    let mut t = Table::new(["n", "runs", "mean_perimeter", "std_error", "mean_r_in", "mean_r_out"]);
    let mut samples = Vec::with_capacity(a.sizes.len());
    for (j, &n) in a.sizes.iter().enumerate() {
        let (mean, se, r_in, r_out, runs) = match a.synthetic_exponent {
            Some(alpha) => ((n as f64).powf(alpha), 0.0, f64::NAN, f64::NAN, 0),
            None => {
                let opts = GrowthOptions {
                    max_sites: c.max_sites,
                    log_trajectory: false,
                };
                let stats = (0..c.runs)
                    .into_par_iter()
                    .map(|i| {
                        let stream = ((j as u64) << 32) | i;
                        let run = eden_grow_with(c.dim(), n - 1, c.seed, stream, opts)?;
                        let r = run.animal().radii();
                        Ok((run.animal().perimeter(metric) as f64, r.r_in, r.r_out))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let per: Vec<f64> = stats.iter().map(|s| s.0).collect();
                let (mean, se) = mean_stderr(&per);
                let k = stats.len() as f64;
                (
                    mean,
                    se,
                    stats.iter().map(|s| s.1).sum::<f64>() / k,
                    stats.iter().map(|s| s.2).sum::<f64>() / k,
                    c.runs,
                )
            }
        };
        let opt = |x: f64| if x.is_nan() { Value::Null } else { json!(x) };
        t.rows.push(vec![json!(n), json!(runs), json!(mean), json!(se), opt(r_in), opt(r_out)]);
        samples.push(ScalingSample {
            n: n as f64,
            mean_perimeter: mean,
            std_error: se,
        });
    }
    let fit = fit_scaling(&samples)?;
    let bound = theorem1_exponent(c.dim());
    let summary = json!({
        "dim": c.dim,
        "metric": match metric { PerimeterMetric::Edges => "edges", PerimeterMetric::Sites => "sites" },
        "sizes": a.sizes,
        "runs": c.runs,
        "seed": c.seed,
        "synthetic": a.synthetic_exponent.is_some(),
        "exponent": fit.exponent,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "theorem1_bound": bound,
        "bound_satisfied": fit.exponent < bound,
    });
    Ok((t, summary))
}
