//! Meta-learned warm starts for SMGO-Δ.
//!
//! A [`MetaDataset`] stores the outcome of earlier runs on problems from the
//! same family. A new run starts at the similarity-weighted average of their
//! minimizers with the similarity-weighted average of their objective
//! Lipschitz constants as floor. Every iteration the similarity vector is
//! re-estimated by fitting the observed objective values with interpolations
//! of the stored tasks, blended into the current vector with a geometric
//! discount `tau^(n-1)`, and used to pull the exploitation point toward the
//! weighted minimizer.

mod enclosing;
mod interp;
mod simplex_ls;

use serde::{Deserialize, Serialize};

pub use enclosing::{enclosing_ball, enclosing_circle_radius, Ball};
pub use interp::shepard;
pub use simplex_ls::{solve_similarity_ls, SimplexLeastSquares};

use crate::config::SmgoConfig;
use crate::error::{Error, Result};
use crate::problem::{BoxDomain, Problem, Sample};
use crate::smgo::{RunResult, Smgo};

/// Tolerance on the unit sum of a similarity vector.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// Outcome of one earlier run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaTask {
    /// Parameters of the function that produced the samples, when known.
    #[serde(default)]
    pub params: Vec<f64>,
    pub samples: Vec<Sample>,
    pub x_star: Vec<f64>,
    pub z_star: f64,
    /// `[gamma_f, gamma_g1, ..., gamma_gS]` at the end of the run.
    pub gamma_hat: Vec<f64>,
}

impl MetaTask {
    /// Packages a finished run. Fails if the run never found a feasible sample.
    pub fn from_run(params: Vec<f64>, run: &RunResult) -> Result<Self> {
        let log = &run.evaluations;
        let best = log
            .incumbent()
            .filter(|s| s.is_feasible())
            .ok_or_else(|| Error::Oracle("run produced no feasible sample".into()))?;
        let mut gamma_hat = vec![log.gamma_f()];
        gamma_hat.extend(log.gamma_g());
        Ok(Self {
            params,
            samples: log.samples().to_vec(),
            x_star: best.x.clone(),
            z_star: best.z,
            gamma_hat,
        })
    }

    pub fn gamma_f(&self) -> f64 {
        self.gamma_hat[0]
    }

    /// Interpolated objective value of this task at `x`.
    pub fn interpolate(&self, x: &[f64]) -> f64 {
        shepard(&self.samples, x)
    }
}

/// Interpolated value of a stored task at `x`.
pub fn interpolate_task_value(task: &MetaTask, x: &[f64]) -> f64 {
    task.interpolate(x)
}

/// Stored tasks sharing one domain and one set of constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct MetaDataset {
    domain: BoxDomain,
    n_constraints: usize,
    tasks: Vec<MetaTask>,
}

impl MetaDataset {
    pub fn new(domain: BoxDomain, n_constraints: usize, tasks: Vec<MetaTask>) -> Result<Self> {
        if tasks.is_empty() {
            return Err(Error::Config("a meta-dataset needs at least one task".into()));
        }
        let dim = domain.dim();
        for (i, t) in tasks.iter().enumerate() {
            if t.x_star.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: t.x_star.len() });
            }
            if t.gamma_hat.len() != n_constraints + 1 {
                return Err(Error::DimensionMismatch {
                    expected: n_constraints + 1,
                    found: t.gamma_hat.len(),
                });
            }
            if t.samples.is_empty() {
                return Err(Error::Config(format!("task {i} has no samples")));
            }
            if let Some(s) = t
                .samples
                .iter()
                .find(|s| s.x.len() != dim || s.c.len() != n_constraints)
            {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.x.len(),
                });
            }
        }
        Ok(Self {
            domain,
            n_constraints,
            tasks,
        })
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn num_constraints(&self) -> usize {
        self.n_constraints
    }

    pub fn tasks(&self) -> &[MetaTask] {
        &self.tasks
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    /// The first `m` tasks.
    pub fn prefix(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.tasks.len() {
            return Err(Error::Config(format!(
                "prefix size {m} outside 1..={}",
                self.tasks.len()
            )));
        }
        Self::new(self.domain.clone(), self.n_constraints, self.tasks[..m].to_vec())
    }

    pub fn minimizers(&self) -> Vec<Vec<f64>> {
        self.tasks.iter().map(|t| t.x_star.clone()).collect()
    }

    /// Largest stored objective Lipschitz constant.
    pub fn gamma_f_max(&self) -> f64 {
        self.tasks.iter().map(MetaTask::gamma_f).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Interpolated objective of every task at `x`.
    pub fn interpolate_all(&self, x: &[f64]) -> Vec<f64> {
        self.tasks.iter().map(|t| t.interpolate(x)).collect()
    }
}

/// Weights on the probability simplex, one per stored task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SimilarityVector(Vec<f64>);

impl SimilarityVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config("similarity vector must be nonempty".into()));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Config(format!("similarity entries must be nonnegative, got {v}")));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::Config(format!("similarity entries must sum to 1, got {sum}")));
        }
        Ok(Self(values))
    }

    pub fn uniform(m: usize) -> Self {
        assert!(m > 0, "empty similarity vector");
        Self(vec![1.0 / m as f64; m])
    }

    pub fn indicator(m: usize, i: usize) -> Self {
        let mut v = vec![0.0; m];
        v[i] = 1.0;
        Self(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn dot(&self, values: impl Iterator<Item = f64>) -> f64 {
        self.0.iter().zip(values).map(|(s, v)| s * v).sum()
    }
}

impl TryFrom<Vec<f64>> for SimilarityVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SimilarityVector> for Vec<f64> {
    fn from(s: SimilarityVector) -> Self {
        s.0
    }
}

/// Meta run settings: discount factor plus the underlying SMGO-Δ settings.
/// The base objective floor is ignored; it comes from the meta-dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaConfig {
    pub tau: f64,
    pub base: SmgoConfig,
}

impl MetaConfig {
    pub fn validate(&self, n_constraints: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::Config(format!("tau must lie in [0, 1], got {}", self.tau)));
        }
        self.base.validate(n_constraints)
    }
}

/// Weight `tau^(n-1)` given to the meta information at iteration `n`.
///
/// `tau = 0` switches the steering off at every iteration, including the
/// first, so that the meta information only sets the warm start.
pub fn discount(tau: f64, n: usize) -> f64 {
    if tau == 0.0 {
        0.0
    } else {
        tau.powi((n - 1) as i32)
    }
}

/// Largest pairwise enclosing-circle radius of the stored minimizers.
pub fn rho_similarity(tasks: &[MetaTask]) -> f64 {
    let mut rho = 0.0f64;
    for (j, b) in tasks.iter().enumerate() {
        for a in &tasks[..j] {
            rho = rho.max(enclosing_circle_radius(&[a.x_star.clone(), b.x_star.clone()]));
        }
    }
    rho
}

/// Largest pairwise gap between stored objective Lipschitz constants.
pub fn zeta_similarity(tasks: &[MetaTask]) -> f64 {
    let mut zeta = 0.0f64;
    for (j, b) in tasks.iter().enumerate() {
        for a in &tasks[..j] {
            zeta = zeta.max((a.gamma_f() - b.gamma_f()).abs());
        }
    }
    zeta
}

/// Similarity-weighted average of the stored minimizers.
pub fn meta_init_point(ds: &MetaDataset, s: &SimilarityVector) -> Result<Vec<f64>> {
    if s.len() != ds.len() {
        return Err(Error::DimensionMismatch { expected: ds.len(), found: s.len() });
    }
    let mut x = vec![0.0; ds.domain().dim()];
    for (w, t) in s.as_slice().iter().zip(ds.tasks()) {
        for (xi, v) in x.iter_mut().zip(&t.x_star) {
            *xi += w * v;
        }
    }
    Ok(x)
}

/// Similarity-weighted average of the stored objective Lipschitz constants.
pub fn meta_init_gamma(ds: &MetaDataset, s: &SimilarityVector) -> Result<f64> {
    if s.len() != ds.len() {
        return Err(Error::DimensionMismatch { expected: ds.len(), found: s.len() });
    }
    Ok(s.dot(ds.tasks().iter().map(MetaTask::gamma_f)))
}

/// `2 rho (gamma_f_max + zeta)`: bound on the gap between the lower bound at
/// the first exploitation point of a warm-started run and the true minimum.
pub fn warm_start_bound(ds: &MetaDataset, rho: f64, zeta: f64) -> f64 {
    2.0 * rho * (ds.gamma_f_max() + zeta)
}

/// `normalize(s_prev + tau^(n-1) s_hat)`.
pub fn update_similarity(
    s_prev: &SimilarityVector,
    s_hat: &SimilarityVector,
    tau: f64,
    n: usize,
) -> SimilarityVector {
    let w = discount(tau, n);
    if w == 0.0 {
        return s_prev.clone();
    }
    let raw: Vec<f64> = s_prev
        .as_slice()
        .iter()
        .zip(s_hat.as_slice())
        .map(|(a, b)| a + w * b)
        .collect();
    let sum: f64 = raw.iter().sum();
    SimilarityVector(raw.into_iter().map(|v| v / sum).collect())
}

/// `(1 - w) x_theta + w * sum_i s_i x_star_i` with `w = tau^(n-1)`, clipped
/// to the domain.
pub fn modified_exploitation_point(
    x_theta: &[f64],
    s_theta: &SimilarityVector,
    ds: &MetaDataset,
    tau: f64,
    n: usize,
) -> Vec<f64> {
    let w = discount(tau, n);
    if w == 0.0 {
        return x_theta.to_vec();
    }
    let attractor = meta_init_point(ds, s_theta).expect("similarity sized to the dataset");
    let mut x: Vec<f64> = x_theta
        .iter()
        .zip(&attractor)
        .map(|(t, a)| (1.0 - w) * t + w * a)
        .collect();
    ds.domain().clip(&mut x);
    x
}

/// A meta run plus its similarity diagnostics.
#[derive(Debug, Clone)]
pub struct MetaRunResult {
    pub run: RunResult,
    pub x_init: Vec<f64>,
    pub gamma_floor_init: f64,
    /// Least-squares similarity estimate at each iteration.
    pub similarity_hat: Vec<Vec<f64>>,
}

impl MetaRunResult {
    pub fn final_similarity(&self) -> Option<&[f64]> {
        self.run.log.records.last().and_then(|r| r.similarity.as_deref())
    }
}

/// Warm-started SMGO-Δ with per-iteration similarity re-estimation.
pub fn meta_run(problem: &Problem, ds: &MetaDataset, mcfg: &MetaConfig) -> Result<MetaRunResult> {
    mcfg.validate(problem.num_constraints())?;
    if problem.num_constraints() != ds.num_constraints() {
        return Err(Error::DimensionMismatch {
            expected: ds.num_constraints(),
            found: problem.num_constraints(),
        });
    }
    if problem.dim() != ds.domain().dim() {
        return Err(Error::DimensionMismatch { expected: ds.domain().dim(), found: problem.dim() });
    }
    let m = ds.len();
    let mut similarity = SimilarityVector::uniform(m);
    let x_init = meta_init_point(ds, &similarity)?;
    let gamma_floor_init = meta_init_gamma(ds, &similarity)?;
    let mut cfg = mcfg.base.clone();
    cfg.gamma_f_floor = gamma_floor_init;
    let mut state = Smgo::new(problem, cfg, &x_init)?;
    let mut ls = SimplexLeastSquares::new(m);
    let mut similarity_hat = Vec::with_capacity(mcfg.base.n_max);

    while !state.is_done() {
        let (x, z) = {
            let sample = state.evaluate_pending()?;
            (sample.x.clone(), sample.z)
        };
        let n = state.iteration();
        let zhat = ds.interpolate_all(&x);
        ls.push(z, &zhat);
        let s_hat = SimilarityVector(ls.solve());
        similarity = update_similarity(&similarity, &s_hat, mcfg.tau, n);
        similarity_hat.push(s_hat.0);
        state.set_objective_floor(meta_init_gamma(ds, &similarity)?)?;
        state.record_iteration(Some(similarity.as_slice().to_vec()));
        if state.is_done() {
            break;
        }
        let s_theta = similarity.clone();
        let tau = mcfg.tau;
        let steer = move |theta: Option<&[f64]>, incumbent: &[f64]| {
            if discount(tau, n) == 0.0 {
                return theta.map(<[f64]>::to_vec);
            }
            let base = theta.unwrap_or(incumbent);
            Some(modified_exploitation_point(base, &s_theta, ds, tau, n))
        };
        state.select_next(Some(&steer))?;
    }
    Ok(MetaRunResult {
        run: state.finish(m),
        x_init,
        gamma_floor_init,
        similarity_hat,
    })
}
