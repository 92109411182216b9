//! Grid-scan oracles for the benchmark optimum.

use crate::error::{Error, Result};
use crate::problem::BoxDomain;

use super::styblinski::{g1, g2, st_domain, st_objective, StFamilyParams};

/// Number of zoom rounds after the coarse scan. Each round scans a 21-point
/// per axis grid spanning one coarse cell on either side of the best point,
/// i.e. ten times finer.
pub const REFINE_ROUNDS: usize = 6;

/// Minimum of `f` over points of a `grid_n`-per-axis grid of `domain` that
/// satisfy `feasible`, followed by [`REFINE_ROUNDS`] local zooms.
pub fn grid_min(
    domain: &BoxDomain,
    grid_n: usize,
    f: impl Fn(&[f64]) -> f64,
    feasible: impl Fn(&[f64]) -> bool,
) -> Result<(Vec<f64>, f64)> {
    if grid_n < 2 {
        return Err(Error::Config(format!("grid needs at least 2 points per axis, got {grid_n}")));
    }
    let dim = domain.dim();
    let spacing: Vec<f64> = domain
        .lower()
        .iter()
        .zip(domain.upper())
        .map(|(lo, hi)| (hi - lo) / (grid_n - 1) as f64)
        .collect();
    let mut best: Option<(Vec<f64>, f64)> = None;
    scan(domain.lower(), &spacing, grid_n, domain, &f, &feasible, &mut best);
    let Some(_) = best else {
        return Err(Error::Oracle(format!("no feasible point on the {grid_n}-per-axis grid")));
    };
    let mut h = spacing;
    for _ in 0..REFINE_ROUNDS {
        let center = best.as_ref().expect("checked").0.clone();
        let start: Vec<f64> = center.iter().zip(&h).map(|(c, hj)| c - hj).collect();
        let fine: Vec<f64> = h.iter().map(|hj| hj / 10.0).collect();
        scan(&start, &fine, 21, domain, &f, &feasible, &mut best);
        h = fine;
    }
    debug_assert_eq!(best.as_ref().map(|b| b.0.len()), Some(dim));
    Ok(best.expect("checked"))
}

fn scan(
    start: &[f64],
    step: &[f64],
    count: usize,
    domain: &BoxDomain,
    f: &impl Fn(&[f64]) -> f64,
    feasible: &impl Fn(&[f64]) -> bool,
    best: &mut Option<(Vec<f64>, f64)>,
) {
    let dim = start.len();
    let mut idx = vec![0usize; dim];
    let mut x = vec![0.0; dim];
    loop {
        for j in 0..dim {
            x[j] = start[j] + step[j] * idx[j] as f64;
        }
        if domain.contains(&x) && feasible(&x) {
            let v = f(&x);
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                *best = Some((x.clone(), v));
            }
        }
        // odometer
        let mut j = 0;
        loop {
            if j == dim {
                return;
            }
            idx[j] += 1;
            if idx[j] < count {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Feasible minimum of a benchmark function (both constraints `>= 0`).
pub fn brute_force_feasible_min(p: &StFamilyParams, grid_n: usize) -> Result<(Vec<f64>, f64)> {
    if grid_n < 100 {
        return Err(Error::Config(format!("oracle grid must have at least 100 points per axis, got {grid_n}")));
    }
    grid_min(
        &st_domain(),
        grid_n,
        |x| st_objective(p, x),
        |x| g1(x) >= 0.0 && g2(x) >= 0.0,
    )
}

/// Minimum of a benchmark function with the constraints dropped.
pub fn brute_force_unconstrained_min(p: &StFamilyParams, grid_n: usize) -> Result<(Vec<f64>, f64)> {
    if grid_n < 100 {
        return Err(Error::Config(format!("oracle grid must have at least 100 points per axis, got {grid_n}")));
    }
    grid_min(&st_domain(), grid_n, |x| st_objective(p, x), |_| true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_nominal_optimum() {
        let (x, v) = brute_force_unconstrained_min(&StFamilyParams::NOMINAL, 200).unwrap();
        assert!((x[0] + 2.903534).abs() < 1e-4 && (x[1] + 2.903534).abs() < 1e-4, "{x:?}");
        assert!((v + 38.332331).abs() < 1e-5, "{v}");
    }

    #[test]
    fn constrained_is_not_better() {
        let (x, fv) = brute_force_feasible_min(&StFamilyParams::NOMINAL, 200).unwrap();
        let (_, uv) = brute_force_unconstrained_min(&StFamilyParams::NOMINAL, 200).unwrap();
        assert!(fv >= uv);
        assert!(g1(&x) >= 0.0 && g2(&x) >= 0.0);
    }

    #[test]
    fn deterministic() {
        let a = brute_force_feasible_min(&StFamilyParams::NOMINAL, 150).unwrap();
        let b = brute_force_feasible_min(&StFamilyParams::NOMINAL, 150).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn infeasible_everywhere_is_an_error() {
        let d = BoxDomain::cube(1, 0.0, 1.0).unwrap();
        assert!(matches!(grid_min(&d, 10, |x| x[0], |_| false), Err(Error::Oracle(_))));
        assert!(brute_force_feasible_min(&StFamilyParams::NOMINAL, 50).is_err());
    }

    #[test]
    fn one_dimensional_zoom_is_accurate() {
        let d = BoxDomain::cube(1, -1.0, 2.0).unwrap();
        let (x, v) = grid_min(&d, 31, |x| (x[0] - 0.123456789).powi(2), |_| true).unwrap();
        assert!((x[0] - 0.123456789).abs() < 1e-7, "{x:?}");
        assert!(v < 1e-13);
    }
}
