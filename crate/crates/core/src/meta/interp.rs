//! Scattered interpolation of a stored task's objective samples.

use crate::problem::{distance, Sample};

/// Points closer than this to a sample return that sample's value.
pub const COINCIDENCE_TOL: f64 = 1e-12;

/// Inverse-squared-distance (Shepard) interpolation of the objective values
/// in `samples` at `x`. Exact at the data points. Panics on an empty slice.
pub fn shepard(samples: &[Sample], x: &[f64]) -> f64 {
    assert!(!samples.is_empty(), "interpolation needs at least one sample");
    let mut num = 0.0;
    let mut den = 0.0;
    for s in samples {
        let d = distance(x, &s.x);
        if d < COINCIDENCE_TOL {
            return s.z;
        }
        let w = 1.0 / (d * d);
        num += w * s.z;
        den += w;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smp(x: f64, y: f64, z: f64) -> Sample {
        Sample { x: vec![x, y], z, c: vec![] }
    }

    #[test]
    fn exact_at_data() {
        let s = vec![smp(0.0, 0.0, 1.0), smp(1.0, 0.0, 7.0)];
        assert_eq!(shepard(&s, &[1.0, 0.0]), 7.0);
    }

    #[test]
    fn single_sample_is_constant() {
        let s = vec![smp(0.0, 0.0, 4.5)];
        assert_eq!(shepard(&s, &[3.0, -2.0]), 4.5);
    }

    #[test]
    fn symmetric_weights() {
        let s = vec![smp(0.0, 0.0, 0.0), smp(2.0, 0.0, 2.0)];
        assert!((shepard(&s, &[1.0, 5.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stays_within_data_range() {
        let s = vec![smp(0.0, 0.0, -3.0), smp(2.0, 1.0, 2.0), smp(-1.0, 4.0, 9.0)];
        for x in [[0.3, 0.2], [5.0, 5.0], [-4.0, 1.0]] {
            let v = shepard(&s, &x);
            assert!((-3.0..=9.0).contains(&v));
        }
    }
}
