//! Least squares over the probability simplex.
//!
//! Minimizes `sum_k (z_k - s . zhat_k)^2` subject to `s >= 0`, `sum s = 1`
//! with a primal active-set method. A tiny ridge term (relative weight
//! `1e-10`) makes the problem strictly convex, so among co-optimal fits the
//! one with the smallest Euclidean norm is returned.
//!
//! Each equality-constrained subproblem is solved in the null space of
//! `sum s = 1` as a stacked least-squares system with an SVD, which avoids
//! squaring the condition number through normal equations.

use nalgebra::{DMatrix, DVector};

const RIDGE: f64 = 1e-10;

/// Accumulated rows `(z_k, zhat_k)`.
#[derive(Debug, Clone, Default)]
pub struct SimplexLeastSquares {
    m: usize,
    z: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

impl SimplexLeastSquares {
    pub fn new(m: usize) -> Self {
        assert!(m >= 1, "simplex dimension must be positive");
        Self {
            m,
            z: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn push(&mut self, z: f64, zhat: &[f64]) {
        assert_eq!(zhat.len(), self.m, "row length");
        self.z.push(z);
        self.rows.push(zhat.to_vec());
    }

    /// `sum_k (z_k - s . zhat_k)^2`.
    pub fn objective(&self, s: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(&self.z)
            .map(|(row, z)| {
                let fit: f64 = row.iter().zip(s).map(|(a, b)| a * b).sum();
                (z - fit).powi(2)
            })
            .sum()
    }

    fn ridge(&self) -> f64 {
        let trace: f64 = self.rows.iter().flatten().map(|v| v * v).sum();
        if trace > 0.0 {
            RIDGE * trace / self.m as f64
        } else {
            RIDGE
        }
    }

    /// Gradient of `1/2 |A s - z|^2 + 1/2 mu |s|^2`.
    fn gradient(&self, s: &[f64], mu: f64) -> Vec<f64> {
        let mut g: Vec<f64> = s.iter().map(|v| mu * v).collect();
        for (row, z) in self.rows.iter().zip(&self.z) {
            let r: f64 = row.iter().zip(s).map(|(a, b)| a * b).sum::<f64>() - z;
            for (gi, a) in g.iter_mut().zip(row) {
                *gi += a * r;
            }
        }
        g
    }

    /// Minimizer over `{s : s_i = 0 for inactive i, sum s = 1}`.
    fn subspace_min(&self, free: &[usize], mu: f64) -> Vec<f64> {
        let mut s = vec![0.0; self.m];
        let k = free.len();
        let base = 1.0 / k as f64;
        if k == 1 {
            s[free[0]] = 1.0;
            return s;
        }
        // s_F = base * 1 + N t with N = [e_i - e_last], i < k - 1.
        let n_rows = self.rows.len();
        let root = mu.sqrt();
        let cols = k - 1;
        let mut a = DMatrix::<f64>::zeros(n_rows + k, cols);
        let mut b = DVector::<f64>::zeros(n_rows + k);
        let last = free[k - 1];
        for (r, (row, z)) in self.rows.iter().zip(&self.z).enumerate() {
            let fit0: f64 = free.iter().map(|&i| row[i]).sum::<f64>() * base;
            b[r] = z - fit0;
            for (c, &i) in free[..cols].iter().enumerate() {
                a[(r, c)] = row[i] - row[last];
            }
        }
        for c in 0..cols {
            a[(n_rows + c, c)] = root;
            a[(n_rows + cols, c)] = -root;
        }
        for r in 0..k {
            b[n_rows + r] = -root * base;
        }
        let t = a
            .svd(true, true)
            .solve(&b, 1e-15)
            .expect("svd with both factors");
        let mut last_v = base;
        for (c, &i) in free[..cols].iter().enumerate() {
            s[i] = base + t[c];
            last_v -= t[c];
        }
        s[last] = last_v;
        s
    }

    /// Simplex-constrained minimizer.
    pub fn solve(&self) -> Vec<f64> {
        let m = self.m;
        if m == 1 {
            return vec![1.0];
        }
        let mu = self.ridge();
        let mut s = vec![1.0 / m as f64; m];
        let mut active = vec![false; m];
        let mut at_min = false;
        for _ in 0..(20 * m + 100) {
            let free: Vec<usize> = (0..m).filter(|&i| !active[i]).collect();
            if at_min {
                let g = self.gradient(&s, mu);
                let nu = -free.iter().map(|&i| g[i]).sum::<f64>() / free.len() as f64;
                let scale = g.iter().fold(1e-300f64, |a, v| a.max(v.abs()));
                let release = (0..m)
                    .filter(|&i| active[i])
                    .map(|i| (i, g[i] + nu))
                    .filter(|&(_, lambda)| lambda < -1e-12 * scale)
                    .min_by(|a, b| a.1.total_cmp(&b.1));
                match release {
                    None => break,
                    Some((i, _)) => {
                        active[i] = false;
                        at_min = false;
                        continue;
                    }
                }
            }
            let p = self.subspace_min(&free, mu);
            let mut step = 1.0;
            let mut blocking = None;
            for &i in &free {
                if p[i] < 0.0 {
                    let a = s[i] / (s[i] - p[i]);
                    if a < step {
                        step = a;
                        blocking = Some(i);
                    }
                }
            }
            for &i in &free {
                s[i] += step * (p[i] - s[i]);
            }
            match blocking {
                Some(i) => {
                    active[i] = true;
                    s[i] = 0.0;
                }
                None => at_min = true,
            }
        }
        for v in &mut s {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let total: f64 = s.iter().sum();
        s.iter_mut().for_each(|v| *v /= total);
        s
    }
}

/// Minimizer over the simplex of `sum_k (z_k - s . zhat_k)^2` for aligned
/// histories.
pub fn solve_similarity_ls(z_history: &[f64], zhat_history: &[Vec<f64>]) -> Vec<f64> {
    assert_eq!(z_history.len(), zhat_history.len(), "histories must align");
    let m = zhat_history.first().map_or(1, Vec::len);
    let mut ls = SimplexLeastSquares::new(m);
    for (z, row) in z_history.iter().zip(zhat_history) {
        ls.push(*z, row);
    }
    ls.solve()
}
