//! Set-membership surrogates built from Lipschitz cones around the samples.
//!
//! For a channel with values `v_k` at points `x_k` and constant `gamma`:
//!
//! * upper bound `min_k (v_k + gamma * |x - x_k|)`
//! * lower bound `max_k (v_k - gamma * |x - x_k|)`
//! * central approximation: their midpoint
//! * uncertainty: their difference
//!
//! Distances are Euclidean.

use crate::error::{Channel, Error, Result};
use crate::log::EvaluationLog;
use crate::problem::distance;

/// Largest pairwise slope `|v_i - v_j| / |x_i - x_j|`, never below `floor`.
///
/// Coincident points with equal values are skipped; with differing values
/// the slope is infinite and a [`Error::DegeneratePair`] is returned.
pub fn estimate_lipschitz(values: &[(Vec<f64>, f64)], floor: f64) -> Result<f64> {
    if !(floor.is_finite() && floor > 0.0) {
        return Err(Error::Config(format!("Lipschitz floor must be positive, got {floor}")));
    }
    let mut best = floor;
    for (j, (xj, vj)) in values.iter().enumerate() {
        for (i, (xi, vi)) in values[..j].iter().enumerate() {
            let d = distance(xi, xj);
            let dv = (vi - vj).abs();
            if d == 0.0 {
                if dv != 0.0 {
                    return Err(Error::DegeneratePair { first: i, second: j });
                }
                continue;
            }
            best = best.max(dv / d);
        }
    }
    Ok(best)
}

/// Collapses bounds that crossed by rounding to their midpoint.
///
/// With `gamma` at least the largest pairwise slope the exact bounds never
/// cross, so a crossing is at most a few ulps and the true interval is a
/// single point.
pub(crate) fn settle(upper: f64, lower: f64) -> (f64, f64) {
    if lower > upper {
        let mid = 0.5 * (upper + lower);
        (mid, mid)
    } else {
        (upper, lower)
    }
}

/// Read-only view of one channel of a log under a fixed Lipschitz constant.
#[derive(Debug, Clone, Copy)]
pub struct Surrogate<'a> {
    log: &'a EvaluationLog,
    channel: Channel,
    gamma: f64,
}

impl<'a> Surrogate<'a> {
    /// Uses the log's current estimate for `channel`.
    pub fn new(log: &'a EvaluationLog, channel: Channel) -> Self {
        Self {
            log,
            channel,
            gamma: log.gamma(channel),
        }
    }

    pub fn with_gamma(log: &'a EvaluationLog, channel: Channel, gamma: f64) -> Self {
        Self { log, channel, gamma }
    }

    pub fn objective(log: &'a EvaluationLog) -> Self {
        Self::new(log, Channel::Objective)
    }

    pub fn constraint(log: &'a EvaluationLog, s: usize) -> Self {
        Self::new(log, Channel::Constraint(s))
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    /// `(upper, lower)` in one pass over the samples.
    pub fn bounds(&self, x: &[f64]) -> (f64, f64) {
        let mut upper = f64::INFINITY;
        let mut lower = f64::NEG_INFINITY;
        for s in self.log.samples() {
            let v = s.value(self.channel);
            let r = self.gamma * distance(x, &s.x);
            upper = upper.min(v + r);
            lower = lower.max(v - r);
        }
        settle(upper, lower)
    }

    pub fn upper_bound(&self, x: &[f64]) -> f64 {
        self.bounds(x).0
    }

    pub fn lower_bound(&self, x: &[f64]) -> f64 {
        self.bounds(x).1
    }

    pub fn central(&self, x: &[f64]) -> f64 {
        let (u, l) = self.bounds(x);
        0.5 * (u + l)
    }

    pub fn uncertainty(&self, x: &[f64]) -> f64 {
        let (u, l) = self.bounds(x);
        u - l
    }
}
