//! The evaluation log: samples, running Lipschitz estimates and the incumbent.

use std::cmp::Ordering;

use crate::error::{Channel, Error, Result};
use crate::problem::{distance, Sample};

/// Ordered samples of one run plus everything derived from them.
///
/// Lipschitz estimates are maintained incrementally: each new sample is
/// compared against every earlier one and the running maximum slope is kept
/// per channel. The estimate reported for a channel is `max(floor, slope)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationLog {
    samples: Vec<Sample>,
    n_constraints: usize,
    slopes: Vec<f64>,
    floors: Vec<f64>,
    incumbent: Option<usize>,
}

impl EvaluationLog {
    /// `floors[0]` is the objective floor, `floors[1 + s]` the floor of constraint `s`.
    pub fn new(gamma_f_floor: f64, gamma_g_floor: &[f64]) -> Result<Self> {
        let mut floors = Vec::with_capacity(1 + gamma_g_floor.len());
        floors.push(gamma_f_floor);
        floors.extend_from_slice(gamma_g_floor);
        if let Some(bad) = floors.iter().find(|f| !(f.is_finite() && **f > 0.0)) {
            return Err(Error::Config(format!(
                "Lipschitz floors must be positive, got {bad}"
            )));
        }
        Ok(Self {
            samples: Vec::new(),
            n_constraints: gamma_g_floor.len(),
            slopes: vec![0.0; floors.len()],
            floors,
            incumbent: None,
        })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn num_constraints(&self) -> usize {
        self.n_constraints
    }

    pub fn channels(&self) -> impl Iterator<Item = Channel> {
        std::iter::once(Channel::Objective).chain((0..self.n_constraints).map(Channel::Constraint))
    }

    fn slot(channel: Channel) -> usize {
        match channel {
            Channel::Objective => 0,
            Channel::Constraint(s) => 1 + s,
        }
    }

    /// Current Lipschitz estimate of a channel.
    pub fn gamma(&self, channel: Channel) -> f64 {
        let i = Self::slot(channel);
        self.floors[i].max(self.slopes[i])
    }

    pub fn gamma_f(&self) -> f64 {
        self.gamma(Channel::Objective)
    }

    pub fn gamma_g(&self) -> Vec<f64> {
        (0..self.n_constraints)
            .map(|s| self.gamma(Channel::Constraint(s)))
            .collect()
    }

    /// Largest pairwise slope seen so far, without the floor.
    pub fn max_slope(&self, channel: Channel) -> f64 {
        self.slopes[Self::slot(channel)]
    }

    pub fn floor(&self, channel: Channel) -> f64 {
        self.floors[Self::slot(channel)]
    }

    /// Replaces the user lower bound of one channel.
    pub fn set_floor(&mut self, channel: Channel, floor: f64) -> Result<()> {
        if !(floor.is_finite() && floor > 0.0) {
            return Err(Error::Config(format!(
                "Lipschitz floor for {channel} must be positive, got {floor}"
            )));
        }
        self.floors[Self::slot(channel)] = floor;
        Ok(())
    }

    pub fn incumbent_index(&self) -> Option<usize> {
        self.incumbent
    }

    pub fn incumbent(&self) -> Option<&Sample> {
        self.incumbent.map(|i| &self.samples[i])
    }

    /// Best feasible objective value, if any sample is feasible.
    pub fn best_feasible_z(&self) -> Option<f64> {
        self.incumbent().filter(|s| s.is_feasible()).map(|s| s.z)
    }

    pub fn infeasible_count(&self) -> usize {
        self.samples.iter().filter(|s| !s.is_feasible()).count()
    }

    /// Appends a sample, refreshing slopes and the incumbent.
    pub fn push(&mut self, sample: Sample) -> Result<()> {
        if sample.c.len() != self.n_constraints {
            return Err(Error::DimensionMismatch {
                expected: self.n_constraints,
                found: sample.c.len(),
            });
        }
        let newest = self.samples.len();
        let mut slopes = self.slopes.clone();
        for (k, old) in self.samples.iter().enumerate() {
            let d = distance(&old.x, &sample.x);
            for (slot, channel) in self.channels().enumerate() {
                let dv = (old.value(channel) - sample.value(channel)).abs();
                if d == 0.0 {
                    if dv != 0.0 {
                        return Err(Error::DegeneratePair {
                            first: k,
                            second: newest,
                        });
                    }
                    continue;
                }
                slopes[slot] = slopes[slot].max(dv / d);
            }
        }
        self.slopes = slopes;
        self.samples.push(sample);
        let better = match self.incumbent {
            None => true,
            Some(i) => compare_for_incumbent(&self.samples[newest], &self.samples[i]) == Ordering::Less,
        };
        if better {
            self.incumbent = Some(newest);
        }
        Ok(())
    }

    /// Recomputes the incumbent by a full scan.
    pub fn update_incumbent(&mut self) {
        self.incumbent = select_incumbent(&self.samples);
    }
}

/// Orders two samples by incumbent preference: feasible before infeasible,
/// then lower objective for feasible samples, or lower total violation
/// (objective as tie-break) for infeasible ones.
fn compare_for_incumbent(a: &Sample, b: &Sample) -> Ordering {
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (true, true) => a.z.total_cmp(&b.z),
        (false, false) => a
            .violation()
            .total_cmp(&b.violation())
            .then(a.z.total_cmp(&b.z)),
    }
}

/// Index of the incumbent among `samples`, earliest index on ties.
pub fn select_incumbent(samples: &[Sample]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, s) in samples.iter().enumerate() {
        match best {
            Some(b) if compare_for_incumbent(s, &samples[b]) != Ordering::Less => {}
            _ => best = Some(i),
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(x: f64, z: f64, c: &[f64]) -> Sample {
        Sample {
            x: vec![x],
            z,
            c: c.to_vec(),
        }
    }

    fn log_of(samples: Vec<Sample>, s: usize) -> EvaluationLog {
        let mut log = EvaluationLog::new(1e-6, &vec![1e-6; s]).unwrap();
        for smp in samples {
            log.push(smp).unwrap();
        }
        log
    }

    #[test]
    fn incumbent_is_argmin() {
        let log = log_of(
            vec![sample(0.0, 3.0, &[]), sample(1.0, 1.0, &[]), sample(2.0, 2.0, &[])],
            0,
        );
        assert_eq!(log.incumbent_index(), Some(1));
    }

    #[test]
    fn incumbent_filters_infeasible() {
        let log = log_of(vec![sample(0.0, 1.0, &[-1.0]), sample(1.0, 2.0, &[0.0])], 1);
        assert_eq!(log.incumbent_index(), Some(1));
    }

    #[test]
    fn incumbent_tie_keeps_earliest() {
        let log = log_of(vec![sample(0.0, 1.0, &[]), sample(1.0, 1.0, &[])], 0);
        assert_eq!(log.incumbent_index(), Some(0));
    }

    #[test]
    fn incumbent_without_feasible_uses_least_violation() {
        let log = log_of(
            vec![
                sample(0.0, -5.0, &[-2.0]),
                sample(1.0, 4.0, &[-0.5]),
                sample(2.0, 3.0, &[-0.5]),
            ],
            1,
        );
        assert_eq!(log.incumbent_index(), Some(2));
        assert_eq!(log.best_feasible_z(), None);
    }

    #[test]
    fn gammas_start_at_floor() {
        let log = log_of(vec![sample(0.0, 5.0, &[1.0])], 1);
        assert_eq!(log.gamma_f(), 1e-6);
        assert_eq!(log.gamma_g(), vec![1e-6]);
    }

    #[test]
    fn duplicate_point_with_same_value_is_ignored() {
        let log = log_of(vec![sample(0.0, 1.0, &[]), sample(0.0, 1.0, &[])], 0);
        assert_eq!(log.gamma_f(), 1e-6);
    }

    #[test]
    fn duplicate_point_with_new_value_is_an_error() {
        let mut log = log_of(vec![sample(0.0, 1.0, &[])], 0);
        assert!(matches!(
            log.push(sample(0.0, 2.0, &[])),
            Err(Error::DegeneratePair { first: 0, second: 1 })
        ));
    }

    fn arb_samples() -> impl Strategy<Value = Vec<Sample>> {
        prop::collection::vec(
            (-10.0..10.0f64, -10.0..10.0f64, prop::collection::vec(-1.0..1.0f64, 2)),
            1..30,
        )
        .prop_map(|v| {
            v.into_iter()
                .enumerate()
                .map(|(i, (x, z, c))| Sample {
                    x: vec![x, i as f64],
                    z,
                    c,
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn incremental_incumbent_matches_scan(samples in arb_samples()) {
            let log = log_of(samples.clone(), 2);
            prop_assert_eq!(log.incumbent_index(), select_incumbent(&samples));
            if let Some(best) = log.best_feasible_z() {
                for s in samples.iter().filter(|s| s.is_feasible()) {
                    prop_assert!(s.z >= best);
                }
            }
        }

        #[test]
        fn gamma_is_nondecreasing_with_fixed_floor(samples in arb_samples()) {
            let mut log = EvaluationLog::new(1e-6, &[1e-6, 1e-6]).unwrap();
            let mut prev = 0.0;
            for s in samples {
                log.push(s).unwrap();
                prop_assert!(log.gamma_f() >= prev);
                prev = log.gamma_f();
            }
        }
    }
}
