//! Recovering which stored task a new function resembles.
//!
//! Three synthetic tasks are interpolated at points where the new function,
//! here identical to task 2, is observed. The simplex-constrained least
//! squares fit over the growing history and the discounted update converge
//! toward the indicator of task 2.

use meta_smgo::meta::{update_similarity, SimilarityVector, SimplexLeastSquares};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tasks: [fn(f64) -> f64; 3] = [|x| x * x, |x| (x - 1.0).powi(2) + 0.5, |x| -x + 2.0];
    let truth = tasks[1];
    let tau = 0.9;
    let mut ls = SimplexLeastSquares::new(tasks.len());
    let mut s = SimilarityVector::uniform(tasks.len());
    for (k, x) in [0.0, 2.0, -1.0, 0.5, 1.5, -0.5, 1.0, 3.0].into_iter().enumerate() {
        let n = k + 1;
        let zhat: Vec<f64> = tasks.iter().map(|t| t(x)).collect();
        ls.push(truth(x), &zhat);
        let s_hat = SimilarityVector::new(ls.solve())?;
        s = update_similarity(&s, &s_hat, tau, n);
        println!(
            "n={n} x={x:>5.2} s_hat={:?} S={:?}",
            round(s_hat.as_slice()),
            round(s.as_slice())
        );
    }
    Ok(())
}

fn round(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e4).round() / 1e4).collect()
}
