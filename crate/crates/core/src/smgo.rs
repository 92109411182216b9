//! The SMGO-Δ iteration.
//!
//! Each iteration evaluates the pending point, refreshes the Lipschitz
//! estimates and the incumbent, grows the candidate set, and picks the next
//! point either by exploitation (best surrogate score inside the trust
//! region, accepted only if the expected-improvement test passes) or by
//! exploration (largest total uncertainty over all candidates).
//!
//! Two pieces are not pinned down by the method itself and are chosen here:
//!
//! * candidates: midpoints between the newest sample and every earlier
//!   sample, plus `5 * dim` uniform points per iteration, accumulated;
//! * exploration merit: the sum of the objective and constraint uncertainties.

use serde::{Deserialize, Serialize};

use crate::config::SmgoConfig;
use crate::error::{Channel, Error, Result};
use crate::log::EvaluationLog;
use crate::problem::{distance, seeded_rng, BoxDomain, Problem, Sample, SeededRng};
use crate::surrogate::{settle, Surrogate};

/// How a sampled point was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Init,
    Exploitation,
    Exploration,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Init => "init",
            Mode::Exploitation => "exploitation",
            Mode::Exploration => "exploration",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "init" => Ok(Mode::Init),
            "exploitation" => Ok(Mode::Exploitation),
            "exploration" => Ok(Mode::Exploration),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

/// Cumulative candidate points, stored flat.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    dim: usize,
    coords: Vec<f64>,
}

impl CandidateSet {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            coords: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn push(&mut self, point: &[f64]) {
        assert_eq!(point.len(), self.dim, "candidate dimension");
        self.coords.extend_from_slice(point);
    }
}

/// Adds the midpoints between the newest sample and every earlier one, then
/// `k_random` uniform draws from the box. Everything is clipped to the box.
pub fn generate_candidates(
    set: &mut CandidateSet,
    log: &EvaluationLog,
    domain: &BoxDomain,
    rng: &mut SeededRng,
    k_random: usize,
) {
    let Some((newest, earlier)) = log.samples().split_last() else {
        return;
    };
    let mut mid = vec![0.0; set.dim()];
    for old in earlier {
        for ((m, a), b) in mid.iter_mut().zip(&newest.x).zip(&old.x) {
            *m = 0.5 * (a + b);
        }
        domain.clip(&mut mid);
        set.push(&mid);
    }
    for _ in 0..k_random {
        let mut p = domain.sample_uniform(rng);
        domain.clip(&mut p);
        set.push(&p);
    }
}

/// Ball around the incumbent that restricts exploitation.
#[derive(Debug, Clone, PartialEq)]
pub struct TrustRegion {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl TrustRegion {
    pub fn contains(&self, x: &[f64]) -> bool {
        distance(&self.center, x) <= self.radius
    }

    /// Doubles the radius after an improving step, halves it otherwise, and
    /// clamps to `[1e-3 * diameter, diameter]`.
    pub fn updated(&self, improved: bool, domain: &BoxDomain, center: &[f64]) -> TrustRegion {
        let diam = domain.diameter();
        let raw = if improved { 2.0 * self.radius } else { 0.5 * self.radius };
        TrustRegion {
            center: center.to_vec(),
            radius: raw.clamp(1e-3 * diam, diam),
        }
    }
}

/// Upper/lower bounds of every candidate on every channel.
///
/// Kept in sync with the log incrementally: while a channel's constant is
/// unchanged only the new samples are folded in; when it changes the channel
/// is recomputed from scratch. Both paths evaluate the identical terms, so
/// the cached values equal a fresh scan bit for bit.
#[derive(Debug, Clone, Default)]
struct BoundCache {
    gammas: Vec<f64>,
    upper: Vec<Vec<f64>>,
    lower: Vec<Vec<f64>>,
    candidates: usize,
    samples: usize,
}

impl BoundCache {
    fn sync(&mut self, log: &EvaluationLog, cands: &CandidateSet) {
        let channels: Vec<Channel> = log.channels().collect();
        let gammas: Vec<f64> = channels.iter().map(|&c| log.gamma(c)).collect();
        if self.upper.len() != channels.len() {
            *self = BoundCache {
                gammas: vec![f64::NAN; channels.len()],
                upper: vec![Vec::new(); channels.len()],
                lower: vec![Vec::new(); channels.len()],
                candidates: 0,
                samples: 0,
            };
        }
        let stale: Vec<bool> = gammas
            .iter()
            .zip(&self.gammas)
            .map(|(g, old)| g != old)
            .collect();
        let samples = log.samples();
        let n = samples.len();
        let values: Vec<Vec<f64>> = channels
            .iter()
            .map(|&c| samples.iter().map(|s| s.value(c)).collect())
            .collect();
        for slot in 0..channels.len() {
            self.upper[slot].resize(cands.len(), f64::INFINITY);
            self.lower[slot].resize(cands.len(), f64::NEG_INFINITY);
        }
        let mut dist = vec![0.0; n];
        for (j, x) in cands.iter().enumerate() {
            let fresh = j >= self.candidates;
            let full: Vec<bool> = stale.iter().map(|&s| s || fresh).collect();
            let from = if full.iter().any(|&f| f) { 0 } else { self.samples };
            for k in from..n {
                dist[k] = distance(x, &samples[k].x);
            }
            for slot in 0..channels.len() {
                let start = if full[slot] { 0 } else { self.samples };
                let (mut u, mut l) = if full[slot] {
                    (f64::INFINITY, f64::NEG_INFINITY)
                } else {
                    (self.upper[slot][j], self.lower[slot][j])
                };
                let g = gammas[slot];
                for k in start..n {
                    let v = values[slot][k];
                    let r = g * dist[k];
                    u = u.min(v + r);
                    l = l.max(v - r);
                }
                self.upper[slot][j] = u;
                self.lower[slot][j] = l;
            }
        }
        self.gammas = gammas;
        self.candidates = cands.len();
        self.samples = n;
    }

    fn bounds(&self, j: usize, slot: usize) -> (f64, f64) {
        settle(self.upper[slot][j], self.lower[slot][j])
    }
}

/// Exploitation score `central - beta * uncertainty`.
fn exploitation_score(upper: f64, lower: f64, beta: f64) -> f64 {
    0.5 * (upper + lower) - beta * (upper - lower)
}

/// Δ-relaxed constraint filter `Δ * central + (1 - Δ) * lower >= 0`.
fn relaxed_feasible(upper: f64, lower: f64, delta: f64) -> bool {
    delta * 0.5 * (upper + lower) + (1.0 - delta) * lower >= 0.0
}

/// Shared scan; `bounds(j, slot)` gives candidate `j`'s bounds on channel
/// `slot` (0 = objective, `1 + s` = constraint `s`).
fn scan_exploitation(
    cands: &CandidateSet,
    n_constraints: usize,
    trust: &TrustRegion,
    beta: f64,
    delta: f64,
    bounds: impl Fn(usize, usize) -> (f64, f64),
) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, x) in cands.iter().enumerate() {
        if !trust.contains(x) {
            continue;
        }
        let ok = (1..=n_constraints).all(|slot| {
            let (u, l) = bounds(j, slot);
            relaxed_feasible(u, l, delta)
        });
        if !ok {
            continue;
        }
        let (u, l) = bounds(j, 0);
        let score = exploitation_score(u, l, beta);
        if best.is_none_or(|(_, b)| score < b) {
            best = Some((j, score));
        }
    }
    best.map(|(j, _)| j)
}

fn scan_exploration(
    cands: &CandidateSet,
    n_constraints: usize,
    bounds: impl Fn(usize, usize) -> (f64, f64),
) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for j in 0..cands.len() {
        let merit: f64 = (0..=n_constraints)
            .map(|slot| {
                let (u, l) = bounds(j, slot);
                u - l
            })
            .sum();
        if best.is_none_or(|(_, b)| merit > b) {
            best = Some((j, merit));
        }
    }
    best.map(|(j, _)| j)
}

fn direct_bounds<'a>(log: &'a EvaluationLog, cands: &'a CandidateSet) -> impl Fn(usize, usize) -> (f64, f64) + 'a {
    move |j, slot| {
        let channel = if slot == 0 {
            Channel::Objective
        } else {
            Channel::Constraint(slot - 1)
        };
        Surrogate::new(log, channel).bounds(cands.point(j))
    }
}

/// Minimizer of the exploitation score over candidates inside the trust
/// region that pass the Δ-relaxed constraint filter. `None` when no
/// candidate qualifies.
pub fn exploitation_select<'c>(
    log: &EvaluationLog,
    candidates: &'c CandidateSet,
    trust: &TrustRegion,
    cfg: &SmgoConfig,
) -> Option<&'c [f64]> {
    scan_exploitation(
        candidates,
        log.num_constraints(),
        trust,
        cfg.beta,
        cfg.delta,
        direct_bounds(log, candidates),
    )
    .map(|j| candidates.point(j))
}

/// `lower_f(x) <= z_incumbent - alpha * gamma_f`.
pub fn expected_improvement_test(log: &EvaluationLog, x: &[f64], alpha: f64) -> bool {
    let Some(inc) = log.incumbent() else {
        return false;
    };
    Surrogate::objective(log).lower_bound(x) <= improvement_threshold(log, inc.z, alpha)
}

fn improvement_threshold(log: &EvaluationLog, incumbent_z: f64, alpha: f64) -> f64 {
    incumbent_z - alpha * log.gamma_f()
}

/// Candidate with the largest total uncertainty, regardless of the trust region.
pub fn exploration_select<'c>(log: &EvaluationLog, candidates: &'c CandidateSet) -> Result<&'c [f64]> {
    scan_exploration(candidates, log.num_constraints(), direct_bounds(log, candidates))
        .map(|j| candidates.point(j))
        .ok_or_else(|| Error::Config("exploration needs at least one candidate".into()))
}

/// One row of a run: the sample taken at iteration `n` and the state after it.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub n: usize,
    pub x: Vec<f64>,
    pub z: f64,
    pub c: Vec<f64>,
    /// Best feasible objective so far.
    pub z_best: Option<f64>,
    pub gamma_f: f64,
    /// How `x` was chosen.
    pub mode: Mode,
    /// Similarity vector after this iteration (meta runs only).
    pub similarity: Option<Vec<f64>>,
}

impl IterationRecord {
    pub fn is_feasible(&self) -> bool {
        self.c.iter().all(|&v| v >= 0.0)
    }
}

/// Per-iteration history of a run, in the shape written to CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLog {
    pub dim: usize,
    pub n_constraints: usize,
    /// Length of the similarity vectors; 0 for baseline runs.
    pub n_tasks: usize,
    pub records: Vec<IterationRecord>,
}

impl RunLog {
    pub fn best_z_trajectory(&self) -> Vec<Option<f64>> {
        self.records.iter().map(|r| r.z_best).collect()
    }

    pub fn gamma_trajectory(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.gamma_f).collect()
    }

    /// Cumulative count of infeasible samples after each iteration.
    pub fn infeasible_trajectory(&self) -> Vec<usize> {
        self.records
            .iter()
            .scan(0, |acc, r| {
                *acc += usize::from(!r.is_feasible());
                Some(*acc)
            })
            .collect()
    }

    pub fn infeasible_count(&self) -> usize {
        self.records.iter().filter(|r| !r.is_feasible()).count()
    }

    pub fn final_best_z(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.z_best)
    }
}

/// What happened when the next point was selected.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionRecord {
    /// Iteration whose state produced the selection.
    pub n: usize,
    /// Exploitation minimizer, before any steering.
    pub theta: Option<Vec<f64>>,
    /// Point submitted to the expected-improvement test.
    pub proposal: Option<Vec<f64>>,
    pub proposal_lower: Option<f64>,
    pub threshold: f64,
    pub mode: Mode,
    pub chosen: Vec<f64>,
}

/// Result of [`Smgo::step`].
#[derive(Debug, Clone, PartialEq)]
pub struct IterationOutcome {
    /// Next point to evaluate; `None` after the last iteration.
    pub chosen_x: Option<Vec<f64>>,
    pub mode: Option<Mode>,
    pub sample: Sample,
    pub incumbent_z: f64,
}

/// Full output of a run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub log: RunLog,
    pub evaluations: EvaluationLog,
    pub selections: Vec<SelectionRecord>,
    /// Objective lower bound at the first exploitation minimizer.
    pub first_theta_lower: Option<f64>,
}

/// Maps the exploitation minimizer (absent when no candidate qualifies) and
/// the incumbent point to the point submitted to the improvement test.
pub type Steer<'a> = dyn Fn(Option<&[f64]>, &[f64]) -> Option<Vec<f64>> + 'a;

/// State of one SMGO-Δ run.
pub struct Smgo<'p> {
    problem: &'p Problem,
    cfg: SmgoConfig,
    log: EvaluationLog,
    candidates: CandidateSet,
    cache: BoundCache,
    trust: TrustRegion,
    rng: SeededRng,
    k_random: usize,
    pending: Option<(Vec<f64>, Mode)>,
    last_mode: Mode,
    incumbent_before: Option<usize>,
    records: Vec<IterationRecord>,
    selections: Vec<SelectionRecord>,
    first_theta_lower: Option<f64>,
}

impl<'p> Smgo<'p> {
    pub fn new(problem: &'p Problem, cfg: SmgoConfig, x_init: &[f64]) -> Result<Self> {
        cfg.validate(problem.num_constraints())?;
        problem.domain().check(x_init)?;
        let log = EvaluationLog::new(cfg.gamma_f_floor, &cfg.gamma_g_floor)?;
        let domain = problem.domain();
        let radius = cfg
            .trust_radius_init
            .unwrap_or(0.5 * domain.diameter())
            .clamp(1e-3 * domain.diameter(), domain.diameter());
        let k_random = cfg.candidates_random_per_iter.unwrap_or(5 * domain.dim());
        Ok(Self {
            problem,
            rng: seeded_rng(cfg.seed, 0),
            cfg,
            log,
            candidates: CandidateSet::new(domain.dim()),
            cache: BoundCache::default(),
            trust: TrustRegion {
                center: x_init.to_vec(),
                radius,
            },
            k_random,
            pending: Some((x_init.to_vec(), Mode::Init)),
            last_mode: Mode::Init,
            incumbent_before: None,
            records: Vec::new(),
            selections: Vec::new(),
            first_theta_lower: None,
        })
    }

    pub fn log(&self) -> &EvaluationLog {
        &self.log
    }

    pub fn config(&self) -> &SmgoConfig {
        &self.cfg
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn trust_region(&self) -> &TrustRegion {
        &self.trust
    }

    /// Number of evaluations performed so far.
    pub fn iteration(&self) -> usize {
        self.log.len()
    }

    pub fn pending(&self) -> Option<&[f64]> {
        self.pending.as_ref().map(|(x, _)| x.as_slice())
    }

    pub fn records(&self) -> &[IterationRecord] {
        &self.records
    }

    /// Evaluates the pending point and appends it to the log.
    pub fn evaluate_pending(&mut self) -> Result<&Sample> {
        let (x, mode) = self
            .pending
            .take()
            .ok_or_else(|| Error::Config("no pending point to evaluate".into()))?;
        let sample = self.problem.evaluate(&x)?;
        self.incumbent_before = self.log.incumbent_index();
        self.log.push(sample)?;
        self.last_mode = mode;
        Ok(self.log.samples().last().expect("just pushed"))
    }

    /// Replaces the objective Lipschitz floor before the next selection.
    pub fn set_objective_floor(&mut self, floor: f64) -> Result<()> {
        self.log.set_floor(Channel::Objective, floor)
    }

    /// Appends the record of the latest evaluation, with the current estimates.
    pub fn record_iteration(&mut self, similarity: Option<Vec<f64>>) {
        let s = self.log.samples().last().expect("record after evaluation");
        self.records.push(IterationRecord {
            n: self.log.len(),
            x: s.x.clone(),
            z: s.z,
            c: s.c.clone(),
            z_best: self.log.best_feasible_z(),
            gamma_f: self.log.gamma_f(),
            mode: self.last_mode,
            similarity,
        });
    }

    /// Chooses the next point. `steer` maps the exploitation minimizer to the
    /// point actually submitted to the expected-improvement test.
    pub fn select_next(&mut self, steer: Option<&Steer>) -> Result<&[f64]> {
        let n = self.log.len();
        let domain = self.problem.domain();
        let inc = self.log.incumbent().expect("selection after evaluation").clone();
        if n > 1 {
            let improved = self.log.incumbent_index() != self.incumbent_before;
            // Improving steps of either kind widen the region; a failed
            // exploitation step narrows it; a failed exploration leaves it.
            self.trust = if self.last_mode == Mode::Exploitation || improved {
                self.trust.updated(improved, domain, &inc.x)
            } else {
                TrustRegion {
                    center: inc.x.clone(),
                    radius: self.trust.radius,
                }
            };
        } else {
            self.trust.center = inc.x.clone();
        }

        generate_candidates(&mut self.candidates, &self.log, domain, &mut self.rng, self.k_random);
        self.cache.sync(&self.log, &self.candidates);

        let cache = &self.cache;
        let theta = scan_exploitation(
            &self.candidates,
            self.log.num_constraints(),
            &self.trust,
            self.cfg.beta,
            self.cfg.delta,
            |j, slot| cache.bounds(j, slot),
        )
        .map(|j| self.candidates.point(j).to_vec());

        let objective = Surrogate::objective(&self.log);
        if n == 1 {
            self.first_theta_lower = theta.as_ref().map(|x| objective.lower_bound(x));
        }
        let proposal = match steer {
            None => theta.clone(),
            Some(f) => f(theta.as_deref(), &inc.x).map(|mut p| {
                domain.clip(&mut p);
                p
            }),
        };
        // A steered point outside the relaxed feasible set falls back to the
        // unsteered candidate, which satisfies it by construction.
        let proposal = match proposal {
            Some(p) if steer.is_some() && !self.passes_constraint_filter(&p) => theta.clone(),
            other => other,
        };
        let threshold = improvement_threshold(&self.log, inc.z, self.cfg.alpha);
        let proposal_lower = proposal.as_ref().map(|p| objective.lower_bound(p));

        let (chosen, mode) = match (&proposal, proposal_lower) {
            (Some(p), Some(lower)) if lower <= threshold => (p.clone(), Mode::Exploitation),
            _ => {
                let j = scan_exploration(&self.candidates, self.log.num_constraints(), |j, slot| {
                    cache.bounds(j, slot)
                })
                .ok_or_else(|| Error::Config("exploration needs at least one candidate".into()))?;
                (self.candidates.point(j).to_vec(), Mode::Exploration)
            }
        };
        self.selections.push(SelectionRecord {
            n,
            theta,
            proposal,
            proposal_lower,
            threshold,
            mode,
            chosen: chosen.clone(),
        });
        self.pending = Some((chosen, mode));
        Ok(self.pending().expect("just set"))
    }

    fn passes_constraint_filter(&self, x: &[f64]) -> bool {
        (0..self.log.num_constraints()).all(|s| {
            let (u, l) = Surrogate::constraint(&self.log, s).bounds(x);
            relaxed_feasible(u, l, self.cfg.delta)
        })
    }

    /// One plain iteration: evaluate, record, and select the next point
    /// unless the evaluation budget is spent.
    pub fn step(&mut self) -> Result<IterationOutcome> {
        let sample = self.evaluate_pending()?.clone();
        self.record_iteration(None);
        let (chosen_x, mode) = if self.log.len() < self.cfg.n_max {
            let x = self.select_next(None)?.to_vec();
            (Some(x), self.selections.last().map(|s| s.mode))
        } else {
            (None, None)
        };
        Ok(IterationOutcome {
            chosen_x,
            mode,
            sample,
            incumbent_z: self.log.incumbent().map(|s| s.z).expect("nonempty log"),
        })
    }

    pub fn is_done(&self) -> bool {
        self.log.len() >= self.cfg.n_max
    }

    pub fn finish(self, n_tasks: usize) -> RunResult {
        RunResult {
            log: RunLog {
                dim: self.problem.dim(),
                n_constraints: self.problem.num_constraints(),
                n_tasks,
                records: self.records,
            },
            evaluations: self.log,
            selections: self.selections,
            first_theta_lower: self.first_theta_lower,
        }
    }
}

/// Runs plain SMGO-Δ for `cfg.n_max` evaluations starting at `x_init`.
pub fn run(problem: &Problem, cfg: &SmgoConfig, x_init: &[f64]) -> Result<RunResult> {
    let mut state = Smgo::new(problem, cfg.clone(), x_init)?;
    while !state.is_done() {
        state.step()?;
    }
    Ok(state.finish(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn domain2() -> BoxDomain {
        BoxDomain::cube(2, -5.0, 5.0).unwrap()
    }

    fn log_2d(points: &[([f64; 2], f64, Vec<f64>)], s: usize) -> EvaluationLog {
        let mut log = EvaluationLog::new(1e-6, &vec![1e-6; s]).unwrap();
        for (x, z, c) in points {
            log.push(Sample { x: x.to_vec(), z: *z, c: c.clone() }).unwrap();
        }
        log
    }

    #[test]
    fn no_midpoints_for_single_sample() {
        let log = log_2d(&[([0.0, 0.0], 0.0, vec![])], 0);
        let mut set = CandidateSet::new(2);
        generate_candidates(&mut set, &log, &domain2(), &mut seeded_rng(1, 0), 0);
        assert!(set.is_empty());
    }

    #[test]
    fn midpoint_added() {
        let log = log_2d(&[([0.0, 0.0], 0.0, vec![]), ([2.0, 2.0], 1.0, vec![])], 0);
        let mut set = CandidateSet::new(2);
        generate_candidates(&mut set, &log, &domain2(), &mut seeded_rng(1, 0), 0);
        assert_eq!(set.len(), 1);
        assert_eq!(set.point(0), &[1.0, 1.0]);
    }

    #[test]
    fn candidate_cardinality() {
        let log = log_2d(
            &[
                ([0.0, 0.0], 0.0, vec![]),
                ([2.0, 2.0], 1.0, vec![]),
                ([-1.0, 3.0], 2.0, vec![]),
            ],
            0,
        );
        let mut set = CandidateSet::new(2);
        set.push(&[4.0, 4.0]);
        generate_candidates(&mut set, &log, &domain2(), &mut seeded_rng(1, 0), 5);
        assert_eq!(set.len(), 8);
        assert!(set.iter().all(|p| domain2().contains(p)));
    }

    #[test]
    fn exploitation_picks_lowest_score() {
        // Single sample at the origin with gamma = floor: every candidate has
        // central = 0 + tiny, so make the scores differ through the data.
        let log = log_2d(&[([0.0, 0.0], 0.0, vec![]), ([4.0, 0.0], -4.0, vec![])], 0);
        let mut set = CandidateSet::new(2);
        set.push(&[1.0, 0.0]);
        set.push(&[3.0, 0.0]);
        let trust = TrustRegion { center: vec![0.0, 0.0], radius: 100.0 };
        let mut cfg = SmgoConfig::defaults_for(0);
        cfg.beta = 0.0;
        // gamma = 1: central is linear along the segment, -1 at x=1, -3 at x=3.
        assert_eq!(exploitation_select(&log, &set, &trust, &cfg), Some(&[3.0, 0.0][..]));
    }

    #[test]
    fn exploitation_respects_trust_region() {
        let log = log_2d(&[([0.0, 0.0], 0.0, vec![]), ([4.0, 0.0], -4.0, vec![])], 0);
        let mut set = CandidateSet::new(2);
        set.push(&[1.0, 0.0]);
        set.push(&[3.0, 0.0]);
        let trust = TrustRegion { center: vec![0.0, 0.0], radius: 2.0 };
        let cfg = SmgoConfig::defaults_for(0);
        assert_eq!(exploitation_select(&log, &set, &trust, &cfg), Some(&[1.0, 0.0][..]));
        let tiny = TrustRegion { center: vec![0.0, 0.0], radius: 0.5 };
        assert_eq!(exploitation_select(&log, &set, &tiny, &cfg), None);
    }

    #[test]
    fn relaxed_constraint_threshold_at_half() {
        // Constraint samples chosen so that at the candidate (1, 0) the
        // central value is +1 and the lower bound is -1 (gamma = 2).
        let log = log_2d(
            &[([0.0, 0.0], 0.0, vec![-1.0]), ([2.0, 0.0], 0.0, vec![3.0])],
            1,
        );
        let s = Surrogate::constraint(&log, 0);
        assert_eq!(s.gamma(), 2.0);
        // Both samples at distance 2: upper = 3, lower = -1.
        let x = [1.0, 3f64.sqrt()];
        let (u, l) = s.bounds(&x);
        assert!((0.5 * (u + l) - 1.0).abs() < 1e-12);
        assert!((l + 1.0).abs() < 1e-12);
        let mut set = CandidateSet::new(2);
        set.push(&x);
        let trust = TrustRegion { center: vec![0.0, 0.0], radius: 100.0 };
        for (delta, admitted) in [(0.0, false), (0.49, false), (0.5, true), (1.0, true)] {
            let mut cfg = SmgoConfig::defaults_for(1);
            cfg.delta = delta;
            assert_eq!(exploitation_select(&log, &set, &trust, &cfg).is_some(), admitted, "delta={delta}");
        }
    }

    #[test]
    fn improvement_test_cases() {
        // One sample with z = -5 at the origin, gamma = 10 (via a second
        // sample), lower bound evaluated at a chosen point.
        let log = log_2d(&[([0.0, 0.0], -5.0, vec![]), ([0.1, 0.0], -4.0, vec![])], 0);
        assert!((log.gamma_f() - 10.0).abs() < 1e-9);
        let gamma = log.gamma_f();
        // lower(x) = -5 - gamma * |x| near the origin side.
        let at = |d: f64| [-d, 0.0];
        // f_lower = -10 -> passes (-10 <= -6)
        assert!(expected_improvement_test(&log, &at(5.0 / gamma), 0.1));
        // f_lower = -5.5 -> fails (-5.5 > -6)
        assert!(!expected_improvement_test(&log, &at(0.5 / gamma), 0.1));
        // alpha = 0 at the incumbent: equality passes
        assert!(expected_improvement_test(&log, &[0.0, 0.0], 0.0));
    }

    #[test]
    fn exploration_cases() {
        let log = log_2d(&[([0.0, 0.0], 0.0, vec![])], 0);
        let mut one = CandidateSet::new(2);
        one.push(&[1.0, 1.0]);
        assert_eq!(exploration_select(&log, &one).unwrap(), &[1.0, 1.0]);

        let mut two = CandidateSet::new(2);
        two.push(&[0.0, 0.0]);
        two.push(&[4.0, 4.0]);
        assert_eq!(exploration_select(&log, &two).unwrap(), &[4.0, 4.0]);

        let mut tie = CandidateSet::new(2);
        tie.push(&[0.0, 2.0]);
        tie.push(&[2.0, 0.0]);
        assert_eq!(exploration_select(&log, &tie).unwrap(), &[0.0, 2.0]);

        assert!(exploration_select(&log, &CandidateSet::new(2)).is_err());
    }

    #[test]
    fn trust_radius_schedule() {
        let d = BoxDomain::cube(1, 0.0, 10.0).unwrap();
        let t = TrustRegion { center: vec![0.0], radius: 1.0 };
        assert_eq!(t.updated(true, &d, &[0.0]).radius, 2.0);
        assert_eq!(t.updated(false, &d, &[0.0]).radius, 0.5);
        let t9 = TrustRegion { center: vec![0.0], radius: 9.0 };
        assert_eq!(t9.updated(true, &d, &[3.0]).radius, 10.0);
        assert_eq!(t9.updated(true, &d, &[3.0]).center, vec![3.0]);
        let small = TrustRegion { center: vec![0.0], radius: 0.01 };
        assert_eq!(small.updated(false, &d, &[0.0]).radius, 0.01);
    }

    fn bowl() -> Problem {
        Problem::new(|x| (x[0] - 1.0).powi(2) + (x[1] + 2.0).powi(2), domain2())
            .with_constraint(|x| 4.0 - x[0] - x[1])
    }

    #[test]
    fn single_iteration_run() {
        let p = bowl();
        let cfg = SmgoConfig::defaults_for(1).with_iterations(1);
        let r = run(&p, &cfg, &[0.0, 0.0]).unwrap();
        assert_eq!(r.log.records.len(), 1);
        assert_eq!(r.log.records[0].mode, Mode::Init);
        assert_eq!(r.evaluations.incumbent_index(), Some(0));
    }

    #[test]
    fn candidates_accumulate_and_incumbent_improves() {
        let p = bowl();
        let cfg = SmgoConfig::defaults_for(1).with_iterations(60).with_seed(3);
        let mut state = Smgo::new(&p, cfg, &[4.0, 4.0]).unwrap();
        let mut prev_len = 0;
        let mut prev_best = f64::INFINITY;
        while !state.is_done() {
            let out = state.step().unwrap();
            assert!(state.candidates().len() >= prev_len);
            prev_len = state.candidates().len();
            assert!(out.incumbent_z <= prev_best || prev_best.is_infinite());
            prev_best = out.incumbent_z;
            if let Some(x) = &out.chosen_x {
                assert!(p.domain().contains(x));
            }
        }
        let r = state.finish(0);
        assert!(r.log.final_best_z().unwrap() < 0.5, "{:?}", r.log.final_best_z());
    }

    #[test]
    fn cached_bounds_match_direct_surrogates() {
        let p = bowl();
        let cfg = SmgoConfig::defaults_for(1).with_iterations(40).with_seed(9);
        let mut state = Smgo::new(&p, cfg, &[4.0, 4.0]).unwrap();
        while !state.is_done() {
            state.step().unwrap();
            if state.is_done() || state.cache.candidates == 0 {
                continue;
            }
            for j in (0..state.candidates.len()).step_by(7) {
                let x = state.candidates.point(j);
                for (slot, ch) in state.log.channels().enumerate() {
                    let direct = Surrogate::new(&state.log, ch).bounds(x);
                    assert_eq!(state.cache.bounds(j, slot), direct);
                }
            }
        }
    }
}
