//! Smallest enclosing ball (Welzl's recursion) in any dimension.

use nalgebra::{DMatrix, DVector};

use crate::problem::distance;

#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    fn contains(&self, p: &[f64]) -> bool {
        distance(&self.center, p) <= self.radius * (1.0 + 1e-12) + 1e-12
    }
}

/// Ball whose boundary passes through every point of `support`, centered in
/// their affine hull. `None` for an empty support.
fn circumball(support: &[&[f64]]) -> Option<Ball> {
    let (first, rest) = support.split_first()?;
    if rest.is_empty() {
        return Some(Ball {
            center: first.to_vec(),
            radius: 0.0,
        });
    }
    // center = first + sum_j lambda_j (p_j - first), with
    // 2 <p_i - first, p_j - first> lambda_j = |p_i - first|^2.
    let k = rest.len();
    let diffs: Vec<Vec<f64>> = rest
        .iter()
        .map(|p| p.iter().zip(*first).map(|(a, b)| a - b).collect())
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let gram = DMatrix::from_fn(k, k, |i, j| 2.0 * dot(&diffs[i], &diffs[j]));
    let rhs = DVector::from_fn(k, |i, _| dot(&diffs[i], &diffs[i]));
    let lambda = gram
        .clone()
        .lu()
        .solve(&rhs)
        .filter(|l| l.iter().all(|v| v.is_finite()))
        .or_else(|| gram.svd(true, true).solve(&rhs, 1e-14).ok())?;
    let mut center = first.to_vec();
    for (l, d) in lambda.iter().zip(&diffs) {
        for (c, v) in center.iter_mut().zip(d) {
            *c += l * v;
        }
    }
    let radius = support
        .iter()
        .map(|p| distance(&center, p))
        .fold(0.0, f64::max);
    Some(Ball { center, radius })
}

fn welzl<'a>(points: &[&'a [f64]], support: &mut Vec<&'a [f64]>, dim: usize) -> Option<Ball> {
    if points.is_empty() || support.len() == dim + 1 {
        return circumball(support);
    }
    let (p, rest) = points.split_last().expect("nonempty");
    if let Some(ball) = welzl(rest, support, dim) {
        if ball.contains(p) {
            return Some(ball);
        }
    }
    support.push(p);
    let ball = welzl(rest, support, dim);
    support.pop();
    ball
}

/// Minimum enclosing ball of a nonempty point set.
pub fn enclosing_ball(points: &[Vec<f64>]) -> Option<Ball> {
    let dim = points.first()?.len();
    let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
    welzl(&refs, &mut Vec::with_capacity(dim + 1), dim)
}

/// Radius of the smallest circle (ball) enclosing `points`; 0 for a single point.
pub fn enclosing_circle_radius(points: &[Vec<f64>]) -> f64 {
    enclosing_ball(points).map_or(0.0, |b| b.radius)
}
