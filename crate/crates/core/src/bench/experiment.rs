//! Meta-dataset generation and head-to-head experiments on the benchmark
//! family. All randomness derives from `ExperimentConfig::seed` through
//! fixed ChaCha streams, and every aggregate is a fold in index order.

use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::SmgoConfig;
use crate::error::{Error, Result};
use crate::meta::{
    meta_run, warm_start_bound, rho_similarity, zeta_similarity, MetaConfig, MetaDataset, MetaRunResult,
    MetaTask,
};
use crate::problem::{distance, seeded_rng};
use crate::smgo::{run, RunResult};

use super::oracle::brute_force_feasible_min;
use super::styblinski::{g1, g2, sample_perturbed_family, st_domain, st_problem, StFamilyParams};

const STREAM_TASK_PARAMS: u64 = 1;
const STREAM_TASK_RUNS: u64 = 2;
const STREAM_TEST_PARAMS: u64 = 3;
const STREAM_TEST_RUNS: u64 = 4;
const STREAM_LIMIT_RUNS: u64 = 5;

/// Settings of the benchmark experiments. Field names match the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Number of stored tasks.
    #[serde(rename = "M", alias = "m")]
    pub m: usize,
    /// Number of fresh test functions.
    #[serde(rename = "N", alias = "n")]
    pub n: usize,
    pub n_max_meta_gen: usize,
    pub n_max_test: usize,
    /// Relative coefficient perturbation, in `[0, 1]`.
    pub delta_max: f64,
    pub tau: f64,
    pub rho_tilde: f64,
    pub zeta_tilde: f64,
    pub seed: u64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    /// Start point of every plain run.
    pub x_init: Vec<f64>,
    /// Lipschitz floors of plain runs.
    pub gamma_floor: f64,
    /// Grid points per axis of the reference oracle.
    pub oracle_grid: usize,
    /// Grid points per axis of the cheaper screening oracle.
    pub screen_grid: usize,
    /// Draws allowed per accepted function before generation gives up.
    pub max_draws_per_function: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            m: 10,
            n: 10,
            n_max_meta_gen: 500,
            n_max_test: 100,
            delta_max: 0.75,
            tau: 0.9,
            rho_tilde: 1.5,
            zeta_tilde: 3000.0,
            seed: 0,
            alpha: 0.1,
            beta: 0.1,
            delta: 0.5,
            x_init: vec![0.4775, 0.0667],
            gamma_floor: 1e-6,
            oracle_grid: 1000,
            screen_grid: 200,
            max_draws_per_function: 200,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.m == 0 || self.n == 0 {
            return bad(format!("M and N must be positive, got M={} N={}", self.m, self.n));
        }
        if self.n_max_meta_gen == 0 || self.n_max_test == 0 {
            return bad("iteration budgets must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.delta_max) {
            return bad(format!("delta_max must lie in [0, 1], got {}", self.delta_max));
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return bad(format!("tau must lie in [0, 1], got {}", self.tau));
        }
        if !(self.rho_tilde > 0.0 && self.zeta_tilde > 0.0) {
            return bad("rho_tilde and zeta_tilde must be positive".into());
        }
        if !(self.gamma_floor > 0.0) {
            return bad("gamma_floor must be positive".into());
        }
        if self.oracle_grid < 100 || self.screen_grid < 100 {
            return bad("oracle grids need at least 100 points per axis".into());
        }
        if self.max_draws_per_function == 0 {
            return bad("max_draws_per_function must be positive".into());
        }
        st_domain().check(&self.x_init)?;
        self.smgo(self.n_max_test, 0).validate(2)
    }

    /// Plain-run settings for `iterations` evaluations with run seed `seed`.
    pub fn smgo(&self, iterations: usize, seed: u64) -> SmgoConfig {
        let mut cfg = SmgoConfig::defaults_for(2).with_iterations(iterations).with_seed(seed);
        cfg.alpha = self.alpha;
        cfg.beta = self.beta;
        cfg.delta = self.delta;
        cfg.gamma_f_floor = self.gamma_floor;
        cfg.gamma_g_floor = vec![self.gamma_floor; 2];
        cfg
    }

    pub fn meta(&self, tau: f64, seed: u64) -> MetaConfig {
        MetaConfig {
            tau,
            base: self.smgo(self.n_max_test, seed),
        }
    }
}

/// The `index`-th seed of a derivation stream.
pub fn run_seed(seed: u64, stream: u64, index: usize) -> u64 {
    let mut rng = seeded_rng(seed, stream);
    let mut v = 0;
    for _ in 0..=index {
        v = rng.random::<u64>();
    }
    v
}

fn is_feasible(x: &[f64]) -> bool {
    g1(x) >= 0.0 && g2(x) >= 0.0
}

/// Pairwise enclosing radius of two points.
fn pair_rho(a: &[f64], b: &[f64]) -> f64 {
    0.5 * distance(a, b)
}

/// Generates the stored tasks by rejection sampling.
///
/// A draw is skipped before optimization when it has no feasible grid point
/// or its grid minimizer is farther than `2 rho_tilde` from an accepted
/// task's minimizer. After optimization it is rejected unless its minimizer
/// and objective Lipschitz estimate are `rho_tilde`/`zeta_tilde` similar to
/// every accepted task.
pub fn build_meta_dataset(cfg: &ExperimentConfig) -> Result<MetaDataset> {
    cfg.validate()?;
    let mut draws = seeded_rng(cfg.seed, STREAM_TASK_PARAMS);
    let mut tasks: Vec<MetaTask> = Vec::with_capacity(cfg.m);
    let budget = cfg.max_draws_per_function * cfg.m;
    let mut attempt = 0;
    while tasks.len() < cfg.m {
        if attempt == budget {
            return Err(Error::Oracle(format!(
                "accepted only {} of {} tasks after {budget} draws",
                tasks.len(),
                cfg.m
            )));
        }
        let params = sample_perturbed_family(&StFamilyParams::NOMINAL, cfg.delta_max, &mut draws);
        let run_seed = run_seed(cfg.seed, STREAM_TASK_RUNS, attempt);
        attempt += 1;
        let Ok((x_grid, _)) = brute_force_feasible_min(&params, cfg.screen_grid) else {
            continue;
        };
        if tasks.iter().any(|t| pair_rho(&t.x_star, &x_grid) > 2.0 * cfg.rho_tilde) {
            continue;
        }
        let result = run(&st_problem(params), &cfg.smgo(cfg.n_max_meta_gen, run_seed), &cfg.x_init)?;
        let Ok(task) = MetaTask::from_run(params.a.to_vec(), &result) else {
            continue;
        };
        let similar = tasks.iter().all(|t| {
            pair_rho(&t.x_star, &task.x_star) <= cfg.rho_tilde
                && (t.gamma_f() - task.gamma_f()).abs() <= cfg.zeta_tilde
        });
        if similar {
            tasks.push(task);
        }
    }
    MetaDataset::new(st_domain(), 2, tasks)
}

/// A fresh benchmark function with its oracle optimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub params: StFamilyParams,
    pub oracle_x: Vec<f64>,
    pub oracle_z: f64,
}

impl TestFunction {
    pub fn new(params: StFamilyParams, grid_n: usize) -> Result<Self> {
        let (oracle_x, oracle_z) = brute_force_feasible_min(&params, grid_n)?;
        Ok(Self { params, oracle_x, oracle_z })
    }
}

/// Draws `cfg.n` functions whose feasible minimizer is `rho_tilde` similar
/// to every stored minimizer.
pub fn draw_test_functions(cfg: &ExperimentConfig, ds: &MetaDataset) -> Result<Vec<TestFunction>> {
    cfg.validate()?;
    let mut draws = seeded_rng(cfg.seed, STREAM_TEST_PARAMS);
    let mut out = Vec::with_capacity(cfg.n);
    let budget = cfg.max_draws_per_function * cfg.n;
    for _ in 0..budget {
        if out.len() == cfg.n {
            break;
        }
        let params = sample_perturbed_family(&StFamilyParams::NOMINAL, cfg.delta_max, &mut draws);
        let Ok((x_grid, _)) = brute_force_feasible_min(&params, cfg.screen_grid) else {
            continue;
        };
        if ds.tasks().iter().any(|t| pair_rho(&t.x_star, &x_grid) > cfg.rho_tilde) {
            continue;
        }
        out.push(TestFunction::new(params, cfg.oracle_grid)?);
    }
    if out.len() < cfg.n {
        return Err(Error::Oracle(format!(
            "found only {} of {} similar test functions after {budget} draws",
            out.len(),
            cfg.n
        )));
    }
    Ok(out)
}

/// One warm-start bound check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarmStartCheck {
    pub function: usize,
    /// Objective lower bound at the first exploitation candidate.
    pub z_theta1: Option<f64>,
    pub z_star_oracle: f64,
    pub rho: f64,
    pub zeta: f64,
    pub gamma_f_max: f64,
    pub bound: f64,
    pub trust_radius_init: f64,
    pub init_feasible: bool,
}

impl WarmStartCheck {
    /// Measures the bound's ingredients on `ds` for one finished run.
    pub fn new(function: usize, result: &MetaRunResult, ds: &MetaDataset, z_star_oracle: f64, mcfg: &MetaConfig) -> Self {
        let rho = rho_similarity(ds.tasks());
        let zeta = zeta_similarity(ds.tasks());
        Self {
            function,
            z_theta1: result.run.first_theta_lower,
            z_star_oracle,
            rho,
            zeta,
            gamma_f_max: ds.gamma_f_max(),
            bound: warm_start_bound(ds, rho, zeta),
            trust_radius_init: mcfg.base.trust_radius_init.unwrap_or(0.5 * ds.domain().diameter()),
            init_feasible: is_feasible(&result.x_init),
        }
    }

    /// Preconditions: feasible warm start, `rho` inside the first trust
    /// region, and an exploitation candidate at the first iteration.
    pub fn applicable(&self) -> bool {
        self.init_feasible && self.rho <= self.trust_radius_init && self.z_theta1.is_some()
    }

    pub fn gap(&self) -> Option<f64> {
        self.z_theta1.map(|z| z - self.z_star_oracle)
    }

    /// `true` when not applicable.
    pub fn holds(&self) -> bool {
        !self.applicable() || self.gap().is_some_and(|g| g <= self.bound)
    }
}

/// Which optimizer a statistic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Meta,
    Baseline,
}

/// Paired META and plain runs on the same test functions.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub m: usize,
    pub tau: f64,
    pub n_max: usize,
    pub functions: Vec<TestFunction>,
    pub meta: Vec<MetaRunResult>,
    pub baseline: Vec<RunResult>,
    pub warm_start: Vec<WarmStartCheck>,
}

/// Per-iteration means over the test functions. Empty cells mark
/// iterations where some run had no feasible sample yet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub n: usize,
    pub meta_mean_best_z: Option<f64>,
    pub baseline_mean_best_z: Option<f64>,
    pub meta_mean_gap: Option<f64>,
    pub baseline_mean_gap: Option<f64>,
    pub meta_mean_gamma_f: f64,
    pub baseline_mean_gamma_f: f64,
    pub meta_mean_infeasible: f64,
    pub baseline_mean_infeasible: f64,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    sum / count as f64
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl ComparisonReport {
    pub fn runs(&self, method: Method) -> Vec<&RunResult> {
        match method {
            Method::Meta => self.meta.iter().map(|r| &r.run).collect(),
            Method::Baseline => self.baseline.iter().collect(),
        }
    }

    /// Mean of `z_best(n) - z_oracle`; `+inf` if any run has no feasible
    /// sample by iteration `n`.
    pub fn mean_gap_at(&self, method: Method, n: usize) -> f64 {
        mean(self.runs(method).iter().zip(&self.functions).map(|(r, f)| {
            r.log.records[n - 1].z_best.map_or(f64::INFINITY, |z| z - f.oracle_z)
        }))
    }

    pub fn mean_best_z_at(&self, method: Method, n: usize) -> f64 {
        mean(self.runs(method).iter().map(|r| r.log.records[n - 1].z_best.unwrap_or(f64::INFINITY)))
    }

    /// Mean of `z(1) - z_oracle`, the first sample's objective whether or
    /// not it is feasible.
    pub fn mean_first_gap(&self, method: Method) -> f64 {
        mean(self.runs(method).iter().zip(&self.functions).map(|(r, f)| r.log.records[0].z - f.oracle_z))
    }

    pub fn mean_infeasible(&self, method: Method) -> f64 {
        mean(self.runs(method).iter().map(|r| r.log.infeasible_count() as f64))
    }

    pub fn mean_gamma_at(&self, method: Method, n: usize) -> f64 {
        mean(self.runs(method).iter().map(|r| r.log.records[n - 1].gamma_f))
    }

    fn mean_infeasible_at(&self, method: Method, n: usize) -> f64 {
        mean(self.runs(method).iter().map(|r| {
            r.log.records[..n].iter().filter(|rec| !rec.is_feasible()).count() as f64
        }))
    }

    pub fn warm_start_violations(&self) -> usize {
        self.warm_start.iter().filter(|c| !c.holds()).count()
    }

    pub fn aggregate_rows(&self) -> Vec<AggregateRow> {
        (1..=self.n_max)
            .map(|n| AggregateRow {
                n,
                meta_mean_best_z: finite(self.mean_best_z_at(Method::Meta, n)),
                baseline_mean_best_z: finite(self.mean_best_z_at(Method::Baseline, n)),
                meta_mean_gap: finite(self.mean_gap_at(Method::Meta, n)),
                baseline_mean_gap: finite(self.mean_gap_at(Method::Baseline, n)),
                meta_mean_gamma_f: self.mean_gamma_at(Method::Meta, n),
                baseline_mean_gamma_f: self.mean_gamma_at(Method::Baseline, n),
                meta_mean_infeasible: self.mean_infeasible_at(Method::Meta, n),
                baseline_mean_infeasible: self.mean_infeasible_at(Method::Baseline, n),
            })
            .collect()
    }
}

/// Plain runs on each test function, seeded per function.
pub fn run_baselines(cfg: &ExperimentConfig, functions: &[TestFunction]) -> Result<Vec<RunResult>> {
    functions
        .iter()
        .enumerate()
        .map(|(j, f)| {
            let seed = run_seed(cfg.seed, STREAM_TEST_RUNS, j);
            run(&st_problem(f.params), &cfg.smgo(cfg.n_max_test, seed), &cfg.x_init)
        })
        .collect()
}

/// META runs with discount `tau` on each test function, with the same
/// per-function seeds as [`run_baselines`].
pub fn compare_on(
    cfg: &ExperimentConfig,
    ds: &MetaDataset,
    functions: &[TestFunction],
    baseline: Vec<RunResult>,
    tau: f64,
) -> Result<ComparisonReport> {
    let mut meta = Vec::with_capacity(functions.len());
    let mut warm_start = Vec::with_capacity(functions.len());
    for (j, f) in functions.iter().enumerate() {
        let seed = run_seed(cfg.seed, STREAM_TEST_RUNS, j);
        let mcfg = cfg.meta(tau, seed);
        let result = meta_run(&st_problem(f.params), ds, &mcfg)?;
        warm_start.push(WarmStartCheck::new(j, &result, ds, f.oracle_z, &mcfg));
        meta.push(result);
    }
    Ok(ComparisonReport {
        m: ds.len(),
        tau,
        n_max: cfg.n_max_test,
        functions: functions.to_vec(),
        meta,
        baseline,
        warm_start,
    })
}

/// Head-to-head on `cfg.n` fresh functions against a given meta-dataset.
pub fn run_comparison_with(cfg: &ExperimentConfig, ds: &MetaDataset) -> Result<ComparisonReport> {
    let functions = draw_test_functions(cfg, ds)?;
    let baseline = run_baselines(cfg, &functions)?;
    compare_on(cfg, ds, &functions, baseline, cfg.tau)
}

/// Generates the meta-dataset and runs the head-to-head.
pub fn run_comparison(cfg: &ExperimentConfig) -> Result<ComparisonReport> {
    let ds = build_meta_dataset(cfg)?;
    run_comparison_with(cfg, &ds)
}

/// Parameter varied by a sensitivity sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    #[serde(rename = "M")]
    M,
    #[serde(rename = "tau")]
    Tau,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::M => "M",
            SweepParam::Tau => "tau",
        }
    }
}

impl FromStr for SweepParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "m" => Ok(SweepParam::M),
            "tau" => Ok(SweepParam::Tau),
            other => Err(Error::Config(format!("unknown sweep parameter `{other}` (expected M or tau)"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SensitivityEntry {
    pub value: f64,
    pub report: ComparisonReport,
}

/// One comparison per swept value, in the order given.
#[derive(Debug, Clone)]
pub struct SensitivityReport {
    pub param: SweepParam,
    pub entries: Vec<SensitivityEntry>,
}

/// One line of the sweep summary. Non-finite means are left empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub param: String,
    pub value: f64,
    pub meta_mean_first_gap: f64,
    pub baseline_mean_first_gap: f64,
    pub meta_mean_gap_n6: Option<f64>,
    pub baseline_mean_gap_n6: Option<f64>,
    pub meta_mean_gap_n10: Option<f64>,
    pub baseline_mean_gap_n10: Option<f64>,
    pub meta_mean_infeasible: f64,
    pub baseline_mean_infeasible: f64,
}

impl SensitivityReport {
    pub fn summary_rows(&self) -> Vec<SummaryRow> {
        self.entries
            .iter()
            .map(|e| {
                let r = &e.report;
                let gap = |m, n: usize| (n <= r.n_max).then(|| r.mean_gap_at(m, n)).and_then(finite);
                SummaryRow {
                    param: self.param.as_str().to_string(),
                    value: e.value,
                    meta_mean_first_gap: r.mean_first_gap(Method::Meta),
                    baseline_mean_first_gap: r.mean_first_gap(Method::Baseline),
                    meta_mean_gap_n6: gap(Method::Meta, 6),
                    baseline_mean_gap_n6: gap(Method::Baseline, 6),
                    meta_mean_gap_n10: gap(Method::Meta, 10),
                    baseline_mean_gap_n10: gap(Method::Baseline, 10),
                    meta_mean_infeasible: r.mean_infeasible(Method::Meta),
                    baseline_mean_infeasible: r.mean_infeasible(Method::Baseline),
                }
            })
            .collect()
    }

    pub fn entry(&self, value: f64) -> Option<&ComparisonReport> {
        self.entries.iter().find(|e| e.value == value).map(|e| &e.report)
    }
}

/// Repeats the head-to-head, varying only `param`.
///
/// For `M` one dataset of the largest size is generated and each value uses
/// its prefix; test functions are screened against the full dataset so every
/// value sees the same functions and seeds.
pub fn run_sensitivity(cfg: &ExperimentConfig, param: SweepParam, values: &[f64]) -> Result<SensitivityReport> {
    if values.is_empty() {
        return Err(Error::Config("a sweep needs at least one value".into()));
    }
    let mut entries = Vec::with_capacity(values.len());
    match param {
        SweepParam::M => {
            let sizes: Vec<usize> = values
                .iter()
                .map(|&v| {
                    if v >= 1.0 && v.fract() == 0.0 {
                        Ok(v as usize)
                    } else {
                        Err(Error::Config(format!("M values must be positive integers, got {v}")))
                    }
                })
                .collect::<Result<_>>()?;
            let largest = ExperimentConfig {
                m: *sizes.iter().max().expect("nonempty"),
                ..cfg.clone()
            };
            let full = build_meta_dataset(&largest)?;
            let functions = draw_test_functions(cfg, &full)?;
            let baseline = run_baselines(cfg, &functions)?;
            for (&v, &m) in values.iter().zip(&sizes) {
                let ds = full.prefix(m)?;
                let report = compare_on(cfg, &ds, &functions, baseline.clone(), cfg.tau)?;
                entries.push(SensitivityEntry { value: v, report });
            }
        }
        SweepParam::Tau => {
            if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::Config(format!("tau values must lie in [0, 1], got {v}")));
            }
            let ds = build_meta_dataset(cfg)?;
            let functions = draw_test_functions(cfg, &ds)?;
            let baseline = run_baselines(cfg, &functions)?;
            for &v in values {
                let report = compare_on(cfg, &ds, &functions, baseline.clone(), v)?;
                entries.push(SensitivityEntry { value: v, report });
            }
        }
    }
    Ok(SensitivityReport { param, entries })
}

/// A META run whose true function is one of the stored tasks.
#[derive(Debug, Clone)]
pub struct LimitCaseRun {
    pub task: usize,
    pub oracle_z: f64,
    pub run: MetaRunResult,
}

impl LimitCaseRun {
    /// Final similarity weight of the true task.
    pub fn true_task_weight(&self) -> f64 {
        self.run.final_similarity().map_or(0.0, |s| s[self.task])
    }

    /// First iteration whose best feasible value is within `rel` of the
    /// oracle minimum, relative to `|oracle|`.
    pub fn first_hit(&self, rel: f64) -> Option<usize> {
        let tol = rel * self.oracle_z.abs();
        self.run
            .run
            .log
            .records
            .iter()
            .find(|r| r.z_best.is_some_and(|z| z - self.oracle_z <= tol))
            .map(|r| r.n)
    }
}

/// Runs META once per stored task, using that task's function as the
/// problem.
pub fn run_limit_case(cfg: &ExperimentConfig, ds: &MetaDataset) -> Result<Vec<LimitCaseRun>> {
    ds.tasks()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let params = StFamilyParams::from_slice(&t.params)?;
            let (_, oracle_z) = brute_force_feasible_min(&params, cfg.oracle_grid)?;
            let seed = run_seed(cfg.seed, STREAM_LIMIT_RUNS, i);
            let run = meta_run(&st_problem(params), ds, &cfg.meta(cfg.tau, seed))?;
            Ok(LimitCaseRun { task: i, oracle_z, run })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            m: 2,
            n: 1,
            n_max_meta_gen: 40,
            n_max_test: 12,
            seed: 3,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn default_matches_table_settings() {
        let c = ExperimentConfig::default();
        assert_eq!((c.m, c.n, c.n_max_meta_gen, c.n_max_test), (10, 10, 500, 100));
        assert_eq!((c.alpha, c.beta, c.delta, c.tau), (0.1, 0.1, 0.5, 0.9));
        assert_eq!((c.rho_tilde, c.zeta_tilde, c.delta_max), (1.5, 3000.0, 0.75));
        assert_eq!(c.x_init, vec![0.4775, 0.0667]);
        c.validate().unwrap();
    }

    #[test]
    fn validation_rejects_bad_values() {
        for c in [
            ExperimentConfig { delta_max: 1.5, ..small() },
            ExperimentConfig { m: 0, ..small() },
            ExperimentConfig { tau: -0.1, ..small() },
            ExperimentConfig { x_init: vec![9.0, 0.0], ..small() },
            ExperimentConfig { oracle_grid: 10, ..small() },
        ] {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn run_seeds_are_stable_and_distinct() {
        assert_eq!(run_seed(5, 2, 3), run_seed(5, 2, 3));
        assert_ne!(run_seed(5, 2, 3), run_seed(5, 2, 4));
        assert_ne!(run_seed(5, 2, 3), run_seed(5, 4, 3));
    }

    #[test]
    fn small_dataset_is_similar() {
        let cfg = small();
        let ds = build_meta_dataset(&cfg).unwrap();
        assert_eq!(ds.len(), 2);
        assert!(rho_similarity(ds.tasks()) <= cfg.rho_tilde);
        assert!(zeta_similarity(ds.tasks()) <= cfg.zeta_tilde);
        for t in ds.tasks() {
            let min_feasible = t
                .samples
                .iter()
                .filter(|s| s.is_feasible())
                .map(|s| s.z)
                .fold(f64::INFINITY, f64::min);
            assert_eq!(t.z_star, min_feasible);
            assert_eq!(t.samples.len(), cfg.n_max_meta_gen);
        }
    }

    #[test]
    fn comparison_logs_have_full_length() {
        let cfg = small();
        let report = run_comparison(&cfg).unwrap();
        assert_eq!(report.meta.len(), 1);
        assert_eq!(report.meta[0].run.log.records.len(), cfg.n_max_test);
        assert_eq!(report.baseline[0].log.records.len(), cfg.n_max_test);
        assert_eq!(report.aggregate_rows().len(), cfg.n_max_test);
        assert_eq!(report.warm_start.len(), 1);
    }

    #[test]
    fn sweep_param_parsing() {
        assert_eq!("M".parse::<SweepParam>().unwrap(), SweepParam::M);
        assert_eq!("tau".parse::<SweepParam>().unwrap(), SweepParam::Tau);
        assert!("beta".parse::<SweepParam>().is_err());
    }
}
