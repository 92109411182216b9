//! Command-line front end.
//!
//! Settings resolve as flags over the `--config` TOML file over built-in
//! defaults. Exit codes: 0 on success, 2 for unusable input (flags, config,
//! data files), 1 for failures while running.

mod plot;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench::{
    build_meta_dataset, run_sensitivity, st_domain, st_problem, ExperimentConfig, WarmStartCheck, StFamilyParams,
    SweepParam, TestFunction,
};
use crate::error::{Error, Result};
use crate::meta::{meta_run, rho_similarity, zeta_similarity, MetaDataset};
use crate::persistence::{
    load_aggregate, load_meta, save_aggregate, save_meta, save_runlog, save_summary, write_atomic, MetaDatasetFile,
};
use crate::problem::distance;
use crate::smgo::{run, RunLog};

pub use plot::{bar_chart, line_chart, Series};

#[derive(Debug, Parser)]
#[command(name = "meta-smgo", version, about = "Constrained black-box optimization with meta-learned warm starts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Master seed; every random draw derives from it.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file or directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with experiment settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize perturbed benchmark functions and store them as a meta-dataset.
    GenMeta(GenMetaArgs),
    /// Optimize one benchmark function with or without meta-data and write its run log.
    Run(RunArgs),
    /// Repeat the meta-versus-plain comparison over values of M or tau.
    Sweep(SweepArgs),
    /// Render SVG charts from the aggregate tables of a sweep.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct GenMetaArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of tasks.
    #[arg(long)]
    pub m: Option<usize>,
    /// Relative coefficient perturbation in [0, 1].
    #[arg(long)]
    pub delta_max: Option<f64>,
    /// Evaluations per stored run.
    #[arg(long)]
    pub iters: Option<usize>,
    /// Per-task summary table; defaults to the output path with a `.summary.csv` extension.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: Common,
    /// Meta-dataset file for a warm-started run.
    #[arg(long, conflicts_with = "baseline", required_unless_present = "baseline")]
    pub meta: Option<PathBuf>,
    /// Plain run without meta-data.
    #[arg(long)]
    pub baseline: bool,
    /// Discount factor of the meta information.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Number of evaluations.
    #[arg(long)]
    pub iters: Option<usize>,
    /// Start point of a plain run, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "meta")]
    pub x_init: Option<Vec<f64>>,
    /// Objective Lipschitz floor of a plain run.
    #[arg(long, conflicts_with = "meta")]
    pub gamma_f_floor: Option<f64>,
    /// The eight family coefficients, comma separated; nominal when absent.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub params: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// `M` or `tau`.
    #[arg(long)]
    pub param: SweepParam,
    /// Comma-separated values of the swept parameter.
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of test functions.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Evaluations per test run.
    #[arg(long)]
    pub iters: Option<usize>,
    /// Evaluations per stored run.
    #[arg(long)]
    pub meta_iters: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub common: Common,
    /// Directory holding `aggregate_*.csv` files.
    #[arg(long = "in")]
    pub input: PathBuf,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::Parse(_)
        | Error::CorruptFile { .. }
        | Error::VersionedFormat { .. }
        | Error::DimensionMismatch { .. }
        | Error::Domain { .. } => 2,
        _ => 1,
    }
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::GenMeta(a) => gen_meta(a),
        Command::Run(a) => run_cmd(a),
        Command::Sweep(a) => sweep(a),
        Command::Report(a) => report(a),
    }
}

/// Reads the config file named by `common` (defaults when absent) and
/// applies the shared `--seed` flag.
pub fn load_config(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn out_path(common: &Common, default: &str) -> PathBuf {
    common.out.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn gen_meta(a: GenMetaArgs) -> Result<()> {
    let mut cfg = load_config(&a.common)?;
    if let Some(m) = a.m {
        cfg.m = m;
    }
    if let Some(d) = a.delta_max {
        cfg.delta_max = d;
    }
    if let Some(n) = a.iters {
        cfg.n_max_meta_gen = n;
    }
    cfg.validate()?;
    let out = out_path(&a.common, "meta.json");
    let summary = a.summary.unwrap_or_else(|| out.with_extension("summary.csv"));
    let ds = build_meta_dataset(&cfg)?;
    save_meta(&out, &MetaDatasetFile::from_dataset(&ds, Some(cfg)))?;
    write_atomic(&summary, task_summary(&ds)?.as_bytes())?;
    println!(
        "wrote {} tasks to {}: rho = {}, zeta = {}, gamma_f_max = {}",
        ds.len(),
        out.display(),
        rho_similarity(ds.tasks()),
        zeta_similarity(ds.tasks()),
        ds.gamma_f_max()
    );
    println!("summary: {}", summary.display());
    Ok(())
}

/// One row per task; `rho_bar` and `zeta_bar` are the largest pairwise
/// values against the other tasks.
fn task_summary(ds: &MetaDataset) -> Result<String> {
    let dim = ds.domain().dim();
    let s = ds.num_constraints();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head = vec!["task".to_string()];
    head.extend((1..=dim).map(|j| format!("x_star_{j}")));
    head.extend(["z_star".into(), "gamma_f".into()]);
    head.extend((1..=s).map(|j| format!("gamma_g_{j}")));
    head.extend(["rho_bar".into(), "zeta_bar".into()]);
    let csv_err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(&head).map_err(csv_err)?;
    let tasks = ds.tasks();
    for (i, t) in tasks.iter().enumerate() {
        let rho = tasks.iter().map(|o| 0.5 * distance(&o.x_star, &t.x_star)).fold(0.0, f64::max);
        let zeta = tasks.iter().map(|o| (o.gamma_f() - t.gamma_f()).abs()).fold(0.0, f64::max);
        let mut row = vec![(i + 1).to_string()];
        row.extend(t.x_star.iter().map(f64::to_string));
        row.push(t.z_star.to_string());
        row.extend(t.gamma_hat.iter().map(f64::to_string));
        row.extend([rho.to_string(), zeta.to_string()]);
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

fn describe(log: &RunLog) {
    match log.final_best_z() {
        Some(z) => println!("z_best: {z}"),
        None => println!("z_best: none (no feasible sample)"),
    }
    println!("infeasible samples: {} of {}", log.infeasible_count(), log.records.len());
}

fn check_log(log: &RunLog) -> Result<()> {
    let monotone = log
        .records
        .windows(2)
        .all(|w| match (w[0].z_best, w[1].z_best) {
            (Some(a), Some(b)) => b <= a,
            (Some(_), None) => false,
            _ => true,
        });
    if !monotone {
        return Err(Error::Invariant("best value trajectory is not monotone".into()));
    }
    Ok(())
}

fn run_cmd(a: RunArgs) -> Result<()> {
    let mut cfg = load_config(&a.common)?;
    if let Some(t) = a.tau {
        cfg.tau = t;
    }
    if let Some(n) = a.iters {
        cfg.n_max_test = n;
    }
    if let Some(x) = a.x_init {
        cfg.x_init = x;
    }
    cfg.validate()?;
    let params = match &a.params {
        Some(v) => StFamilyParams::from_slice(v).map_err(|e| Error::Config(e.to_string()))?,
        None => StFamilyParams::NOMINAL,
    };
    let problem = st_problem(params);
    let out = out_path(&a.common, "run.csv");
    match a.meta {
        None => {
            let mut scfg = cfg.smgo(cfg.n_max_test, cfg.seed);
            if let Some(g) = a.gamma_f_floor {
                scfg.gamma_f_floor = g;
            }
            scfg.validate(problem.num_constraints())?;
            let result = run(&problem, &scfg, &cfg.x_init)?;
            check_log(&result.log)?;
            save_runlog(&out, &result.log)?;
            describe(&result.log);
        }
        Some(path) => {
            let ds = load_meta(&path)?.dataset()?;
            if ds.domain() != &st_domain() || ds.num_constraints() != problem.num_constraints() {
                return Err(Error::Config(format!(
                    "{} was not generated for the benchmark problem",
                    path.display()
                )));
            }
            let mcfg = cfg.meta(cfg.tau, cfg.seed);
            let result = meta_run(&problem, &ds, &mcfg)?;
            check_log(&result.run.log)?;
            save_runlog(&out, &result.run.log)?;
            describe(&result.run.log);
            println!("meta init: x = {:?}, gamma_f floor = {}", result.x_init, result.gamma_floor_init);
            if let Some(s) = result.final_similarity() {
                println!("similarity: {s:?}");
            }
            let oracle = TestFunction::new(params, cfg.oracle_grid)?;
            let check = WarmStartCheck::new(0, &result, &ds, oracle.oracle_z, &mcfg);
            print_warm_start_check(&check);
            if !check.holds() {
                return Err(Error::Invariant(format!("warm-start bound violated: {check:?}")));
            }
        }
    }
    println!("run log: {}", out.display());
    Ok(())
}

fn print_warm_start_check(c: &WarmStartCheck) {
    let gap = c.gap().map_or("undefined".to_string(), |g| g.to_string());
    let verdict = match (c.applicable(), c.holds()) {
        (false, _) => "not applicable",
        (true, true) => "holds",
        (true, false) => "VIOLATED",
    };
    println!(
        "warm-start bound: z_theta(1) - z* = {gap} <= 2 rho (gamma_f_max + zeta) = {} [rho = {}, gamma_f_max = {}, zeta = {}; init feasible: {}; rho <= v(1) = {}: {}] -> {verdict}",
        c.bound,
        c.rho,
        c.gamma_f_max,
        c.zeta,
        c.init_feasible,
        c.trust_radius_init,
        c.rho <= c.trust_radius_init
    );
}

fn aggregate_name(param: SweepParam, value: f64) -> String {
    format!("aggregate_{}_{value}.csv", param.as_str())
}

fn sweep(a: SweepArgs) -> Result<()> {
    let mut cfg = load_config(&a.common)?;
    if let Some(m) = a.m {
        cfg.m = m;
    }
    if let Some(n) = a.n {
        cfg.n = n;
    }
    if let Some(t) = a.tau {
        cfg.tau = t;
    }
    if let Some(i) = a.iters {
        cfg.n_max_test = i;
    }
    if let Some(i) = a.meta_iters {
        cfg.n_max_meta_gen = i;
    }
    cfg.validate()?;
    for (k, v) in a.values.iter().enumerate() {
        if a.values[..k].contains(v) {
            return Err(Error::Config(format!("value {v} is listed twice")));
        }
    }
    let dir = out_path(&a.common, "sweep");
    let report = run_sensitivity(&cfg, a.param, &a.values)?;
    std::fs::create_dir_all(&dir).map_err(|e| Error::Io { path: dir.clone(), source: e })?;
    for e in &report.entries {
        save_aggregate(&dir.join(aggregate_name(a.param, e.value)), &e.report.aggregate_rows())?;
    }
    let rows = report.summary_rows();
    save_summary(&dir.join("summary.csv"), &rows)?;
    let cell = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.3}"));
    println!("{:>8} {:>22} {:>22} {:>22}", a.param.as_str(), "first gap (meta/plain)", "gap n=6 (meta/plain)", "infeasible (meta/plain)");
    for r in &rows {
        println!(
            "{:>8} {:>10.3}/{:<11.3} {:>10}/{:<11} {:>10.1}/{:<11.1}",
            r.value,
            r.meta_mean_first_gap,
            r.baseline_mean_first_gap,
            cell(r.meta_mean_gap_n6),
            cell(r.baseline_mean_gap_n6),
            r.meta_mean_infeasible,
            r.baseline_mean_infeasible
        );
    }
    println!("wrote {} aggregate tables and summary.csv to {}", report.entries.len(), dir.display());
    Ok(())
}

/// `(label, sort key, path)` of every aggregate table in `dir`.
fn aggregate_files(dir: &Path) -> Result<Vec<(String, f64, PathBuf)>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Io { path: dir.to_path_buf(), source: e })?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::Io { path: dir.to_path_buf(), source: e })?.path();
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else { continue };
        let Some(stem) = name.strip_prefix("aggregate_").and_then(|n| n.strip_suffix(".csv")) else {
            continue;
        };
        let (param, value) = stem.split_once('_').unwrap_or(("", stem));
        let key = value.parse().unwrap_or(f64::NAN);
        let label = if param.is_empty() { value.to_string() } else { format!("{param}={value}") };
        files.push((label, key, path));
    }
    files.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    if files.is_empty() {
        return Err(Error::Config(format!("no aggregate_*.csv files in {}", dir.display())));
    }
    Ok(files)
}

fn report(a: ReportArgs) -> Result<()> {
    let files = aggregate_files(&a.input)?;
    let mut best = Vec::new();
    let mut gamma = Vec::new();
    let mut bars = Vec::new();
    for (label, _, path) in &files {
        let rows = load_aggregate(path)?;
        let line = |name: &str, dashed: bool, f: &dyn Fn(&crate::bench::AggregateRow) -> Option<f64>| Series {
            label: format!("{name} {label}"),
            points: rows.iter().map(|r| (r.n as f64, f(r))).collect(),
            dashed,
        };
        best.push(line("meta", false, &|r| r.meta_mean_best_z));
        best.push(line("plain", true, &|r| r.baseline_mean_best_z));
        gamma.push(line("meta", false, &|r| Some(r.meta_mean_gamma_f)));
        gamma.push(line("plain", true, &|r| Some(r.baseline_mean_gamma_f)));
        let last = rows.last().ok_or_else(|| Error::corrupt(path.display().to_string(), "no rows"))?;
        bars.push((label.clone(), vec![last.meta_mean_infeasible, last.baseline_mean_infeasible]));
    }
    let dir = out_path(&a.common, "figs");
    std::fs::create_dir_all(&dir).map_err(|e| Error::Io { path: dir.clone(), source: e })?;
    let charts = [
        ("best_z.svg", line_chart("Mean best feasible value", "iteration", "mean best z", &best)),
        ("gamma_f.svg", line_chart("Mean objective Lipschitz estimate", "iteration", "mean gamma_f", &gamma)),
        ("violations.svg", bar_chart("Mean infeasible samples per run", "count", &["meta", "plain"], &bars)),
    ];
    for (name, svg) in &charts {
        write_atomic(&dir.join(name), svg.as_bytes())?;
        println!("wrote {}", dir.join(name).display());
    }
    Ok(())
}
