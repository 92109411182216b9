//! Parameterized Styblinski-Tang objective with two fixed constraints.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{BoxDomain, Problem};

/// Coefficients `a1..a8` of the family.
///
/// `a4..a6` are carried for completeness but do not enter the objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StFamilyParams {
    pub a: [f64; 8],
}

impl StFamilyParams {
    pub const NOMINAL: StFamilyParams = StFamilyParams {
        a: [1.0, 16.0, 5.0, 1.0, 16.0, 5.0, 2.0, 80.0],
    };

    pub fn new(a: [f64; 8]) -> Result<Self> {
        if a[6] == 0.0 || a.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config(format!("invalid Styblinski-Tang coefficients {a:?}")));
        }
        Ok(Self { a })
    }

    pub fn from_slice(a: &[f64]) -> Result<Self> {
        let arr: [f64; 8] = a
            .try_into()
            .map_err(|_| Error::DimensionMismatch { expected: 8, found: a.len() })?;
        Self::new(arr)
    }
}

/// `(a1 x1^4 - a2 x1^2 + a3 x1 + a1 x2^4 - a2 x2^2 + a3 x2 + a8) / a7`.
pub fn st_objective(p: &StFamilyParams, x: &[f64]) -> f64 {
    let a = &p.a;
    let term = |v: f64| a[0] * v.powi(4) - a[1] * v * v + a[2] * v;
    (term(x[0]) + term(x[1]) + a[7]) / a[6]
}

/// Outside the disk of radius 4 around (-2.90, 2.90).
pub fn g1(x: &[f64]) -> f64 {
    -4.0 + ((x[0] + 2.90).powi(2) + (x[1] - 2.90).powi(2)).sqrt()
}

/// Rings around (2.90, 2.90).
pub fn g2(x: &[f64]) -> f64 {
    (2.0 * ((x[0] - 2.90).powi(2) + (x[1] - 2.90).powi(2)).sqrt()).cos()
}

/// The benchmark box `[-5, 5]^2`.
pub fn st_domain() -> BoxDomain {
    BoxDomain::cube(2, -5.0, 5.0).expect("static bounds")
}

/// The constrained benchmark problem for one member of the family.
pub fn st_problem(p: StFamilyParams) -> Problem {
    Problem::new(move |x| st_objective(&p, x), st_domain())
        .with_constraint(g1)
        .with_constraint(g2)
}

/// Same objective without constraints.
pub fn st_problem_unconstrained(p: StFamilyParams) -> Problem {
    Problem::new(move |x| st_objective(&p, x), st_domain())
}

/// `a_j = a_j0 * (1 + u_j * delta_max)` with `u_j ~ U(-1, 1)`.
pub fn sample_perturbed_family<R: Rng + ?Sized>(
    nominal: &StFamilyParams,
    delta_max: f64,
    rng: &mut R,
) -> StFamilyParams {
    let mut a = nominal.a;
    for v in &mut a {
        let u: f64 = rng.random_range(-1.0..1.0);
        *v *= 1.0 + u * delta_max;
    }
    StFamilyParams { a }
}
