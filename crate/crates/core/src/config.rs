use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tuning of one SMGO-Δ run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmgoConfig {
    /// Expected-improvement margin, in units of the objective Lipschitz estimate.
    pub alpha: f64,
    /// Weight of the uncertainty bonus in the exploitation score.
    pub beta: f64,
    /// Blend between central (1) and lower (0) constraint surrogates.
    pub delta: f64,
    /// Number of black-box evaluations.
    pub n_max: usize,
    pub gamma_f_floor: f64,
    /// One floor per constraint.
    pub gamma_g_floor: Vec<f64>,
    /// Initial trust-region radius; `None` means half the domain diameter.
    pub trust_radius_init: Option<f64>,
    /// Uniform candidates drawn per iteration; `None` means `5 * dim`.
    pub candidates_random_per_iter: Option<usize>,
    pub seed: u64,
}

impl SmgoConfig {
    /// Settings used to build meta-datasets: 500 iterations, Δ = 0.5, β = 0.1, α = 0.1.
    pub fn defaults_for(n_constraints: usize) -> Self {
        Self {
            alpha: 0.1,
            beta: 0.1,
            delta: 0.5,
            n_max: 500,
            gamma_f_floor: 1e-6,
            gamma_g_floor: vec![1e-6; n_constraints],
            trust_radius_init: None,
            candidates_random_per_iter: None,
            seed: 0,
        }
    }

    pub fn with_iterations(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self, n_constraints: usize) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("alpha", self.alpha)?;
        positive("beta", self.beta)?;
        positive("gamma_f_floor", self.gamma_f_floor)?;
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(Error::Config(format!("delta must lie in [0, 1], got {}", self.delta)));
        }
        if self.n_max == 0 {
            return Err(Error::Config("n_max must be at least 1".into()));
        }
        if self.gamma_g_floor.len() != n_constraints {
            return Err(Error::DimensionMismatch {
                expected: n_constraints,
                found: self.gamma_g_floor.len(),
            });
        }
        for &g in &self.gamma_g_floor {
            positive("gamma_g_floor", g)?;
        }
        if let Some(r) = self.trust_radius_init {
            positive("trust_radius_init", r)?;
        }
        if self.candidates_random_per_iter == Some(0) {
            return Err(Error::Config("candidates_random_per_iter must be positive".into()));
        }
        Ok(())
    }
}
