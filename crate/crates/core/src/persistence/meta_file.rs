use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bench::ExperimentConfig;
use crate::error::{Error, Result};
use crate::log::select_incumbent;
use crate::meta::{MetaDataset, MetaTask};
use crate::problem::BoxDomain;

use super::{read_to_string, write_atomic};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainRecord {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// JSON document holding a meta-dataset plus how it was generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetaDatasetFile {
    pub schema_version: u32,
    pub domain: DomainRecord,
    /// Number of constraints.
    #[serde(rename = "S")]
    pub n_constraints: usize,
    /// Number of tasks.
    #[serde(rename = "M")]
    pub m: usize,
    pub tasks: Vec<MetaTask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generation: Option<ExperimentConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl MetaDatasetFile {
    pub fn from_dataset(ds: &MetaDataset, generation: Option<ExperimentConfig>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            domain: DomainRecord {
                lower: ds.domain().lower().to_vec(),
                upper: ds.domain().upper().to_vec(),
            },
            n_constraints: ds.num_constraints(),
            m: ds.len(),
            tasks: ds.tasks().to_vec(),
            seed: generation.as_ref().map(|g| g.seed),
            generation,
        }
    }

    pub fn dataset(&self) -> Result<MetaDataset> {
        let domain = BoxDomain::new(self.domain.lower.clone(), self.domain.upper.clone())
            .map_err(|e| Error::corrupt("domain", e.to_string()))?;
        MetaDataset::new(domain, self.n_constraints, self.tasks.clone())
            .map_err(|e| Error::corrupt("tasks", e.to_string()))
    }

    /// Checks every invariant of the stored types, reporting the first
    /// violation with its field path.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::VersionedFormat {
                found: self.schema_version,
                supported: SCHEMA_VERSION,
            });
        }
        let dim = self.domain.lower.len();
        if dim == 0 || self.domain.upper.len() != dim {
            return Err(Error::corrupt("domain", "lower and upper must be nonempty and of equal length"));
        }
        for (j, (lo, hi)) in self.domain.lower.iter().zip(&self.domain.upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::corrupt(format!("domain.lower[{j}]"), format!("need finite lower < upper, got {lo} and {hi}")));
            }
        }
        let inside = |x: &[f64]| {
            x.iter()
                .zip(self.domain.lower.iter().zip(&self.domain.upper))
                .all(|(v, (lo, hi))| v.is_finite() && lo <= v && v <= hi)
        };
        if self.m != self.tasks.len() {
            return Err(Error::corrupt("M", format!("declares {} tasks but {} are stored", self.m, self.tasks.len())));
        }
        if self.tasks.is_empty() {
            return Err(Error::corrupt("tasks", "a meta-dataset needs at least one task"));
        }
        for (i, t) in self.tasks.iter().enumerate() {
            let at = |f: &str| format!("tasks[{i}].{f}");
            if let Some(v) = t.params.iter().find(|v| !v.is_finite()) {
                return Err(Error::corrupt(at("params"), format!("non-finite value {v}")));
            }
            if t.samples.is_empty() {
                return Err(Error::corrupt(at("samples"), "no samples"));
            }
            for (k, s) in t.samples.iter().enumerate() {
                let here = at(&format!("samples[{k}]"));
                if s.x.len() != dim || !inside(&s.x) {
                    return Err(Error::corrupt(here, "point has wrong length or lies outside the domain"));
                }
                if s.c.len() != self.n_constraints {
                    return Err(Error::corrupt(here, format!("expected {} constraint values, got {}", self.n_constraints, s.c.len())));
                }
                if !s.z.is_finite() || s.c.iter().any(|v| !v.is_finite()) {
                    return Err(Error::corrupt(here, "non-finite value"));
                }
            }
            if t.gamma_hat.len() != self.n_constraints + 1 {
                return Err(Error::corrupt(at("gamma_hat"), format!("expected {} entries, got {}", self.n_constraints + 1, t.gamma_hat.len())));
            }
            if let Some((j, v)) = t.gamma_hat.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
                return Err(Error::corrupt(at(&format!("gamma_hat[{j}]")), format!("must be positive, got {v}")));
            }
            let best = select_incumbent(&t.samples)
                .map(|k| &t.samples[k])
                .filter(|s| s.is_feasible())
                .ok_or_else(|| Error::corrupt(at("samples"), "no feasible sample"))?;
            if best.z != t.z_star {
                return Err(Error::corrupt(at("z_star"), format!("best feasible sample has z = {}, file says {}", best.z, t.z_star)));
            }
            if best.x != t.x_star {
                return Err(Error::corrupt(at("x_star"), "does not match the best feasible sample"));
            }
        }
        if let Some(g) = &self.generation {
            g.validate().map_err(|e| Error::corrupt("generation", e.to_string()))?;
        }
        Ok(())
    }
}

pub fn save_meta(path: &Path, file: &MetaDatasetFile) -> Result<()> {
    file.validate()?;
    let mut text = serde_json::to_string_pretty(file).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Reads and validates a meta-dataset file.
pub fn load_meta(path: &Path) -> Result<MetaDatasetFile> {
    let text = read_to_string(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::corrupt("<document>", e.to_string()))?;
    let version = value
        .get("schema_version")
        .ok_or_else(|| Error::corrupt("schema_version", "missing"))?;
    let version = version
        .as_u64()
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| Error::corrupt("schema_version", format!("expected an unsigned integer, got {version}")))?;
    if version != SCHEMA_VERSION {
        return Err(Error::VersionedFormat {
            found: version,
            supported: SCHEMA_VERSION,
        });
    }
    let file: MetaDatasetFile =
        serde_json::from_value(value).map_err(|e| Error::corrupt("<document>", e.to_string()))?;
    file.validate()?;
    Ok(file)
}
