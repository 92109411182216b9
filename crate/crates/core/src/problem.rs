//! Problems, domains and evaluated samples.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Channel, Error, Result};

/// A black-box map from a point to a real value.
pub type BlackBox = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Random source used everywhere in the crate.
///
/// ChaCha with 8 rounds, seeded through `SeedableRng::seed_from_u64`
/// (the seed is expanded with PCG32 as documented by `rand_core`).
/// Independent streams of the same seed are selected with
/// [`ChaCha8Rng::set_stream`], see [`seeded_rng`].
pub type SeededRng = ChaCha8Rng;

/// Builds the random source for `(seed, stream)`.
pub fn seeded_rng(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Axis-aligned box `lower <= x <= upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::Config("domain must have at least one dimension".into()));
        }
        for (j, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Config(format!(
                    "domain bound {j}: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Euclidean length of the main diagonal.
    pub fn diameter(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| (hi - lo) * (hi - lo))
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.first_violation(x).is_none()
    }

    fn first_violation(&self, x: &[f64]) -> Option<usize> {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .position(|(v, (lo, hi))| !(v >= lo && v <= hi))
    }

    pub fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        match self.first_violation(x) {
            Some(index) => Err(Error::Domain {
                point: x.to_vec(),
                index,
            }),
            None => Ok(()),
        }
    }

    pub fn clip(&self, x: &mut [f64]) {
        for ((v, lo), hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(*lo, *hi);
        }
    }

    /// Uniform draw from the box.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| lo + (hi - lo) * rng.random::<f64>())
            .collect()
    }
}

/// Minimize `objective` over `domain` subject to `constraints[s](x) >= 0`.
#[derive(Clone)]
pub struct Problem {
    objective: BlackBox,
    constraints: Vec<BlackBox>,
    domain: BoxDomain,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("constraints", &self.constraints.len())
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl Problem {
    pub fn new<F>(objective: F, domain: BoxDomain) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            objective: Arc::new(objective),
            constraints: Vec::new(),
            domain,
        }
    }

    /// Adds a constraint `g(x) >= 0`.
    pub fn with_constraint<G>(mut self, g: G) -> Self
    where
        G: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.constraints.push(Arc::new(g));
        self
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Queries every black box once at `x`.
    pub fn evaluate(&self, x: &[f64]) -> Result<Sample> {
        self.domain.check(x)?;
        let z = (self.objective)(x);
        if !z.is_finite() {
            return Err(Error::Evaluation {
                channel: Channel::Objective,
                point: x.to_vec(),
            });
        }
        let mut c = Vec::with_capacity(self.constraints.len());
        for (s, g) in self.constraints.iter().enumerate() {
            let v = g(x);
            if !v.is_finite() {
                return Err(Error::Evaluation {
                    channel: Channel::Constraint(s),
                    point: x.to_vec(),
                });
            }
            c.push(v);
        }
        Ok(Sample {
            x: x.to_vec(),
            z,
            c,
        })
    }
}

/// One evaluated point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub x: Vec<f64>,
    pub z: f64,
    pub c: Vec<f64>,
}

impl Sample {
    pub fn is_feasible(&self) -> bool {
        self.c.iter().all(|&v| v >= 0.0)
    }

    /// `sum_s max(0, -c_s)`.
    pub fn violation(&self) -> f64 {
        self.c.iter().map(|&v| (-v).max(0.0)).sum()
    }

    pub fn value(&self, channel: Channel) -> f64 {
        match channel {
            Channel::Objective => self.z,
            Channel::Constraint(s) => self.c[s],
        }
    }
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}
