//! Set-membership bounds of a 1-D function from a handful of samples.

use meta_smgo::error::Channel;
use meta_smgo::log::EvaluationLog;
use meta_smgo::problem::Sample;
use meta_smgo::surrogate::{estimate_lipschitz, Surrogate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = |x: f64| (3.0 * x).sin() + 0.5 * x;
    let mut log = EvaluationLog::new(1e-6, &[])?;
    for x in [-2.0, -0.7, 0.4, 1.1, 2.0] {
        log.push(Sample { x: vec![x], z: f(x), c: vec![] })?;
    }
    println!("gamma_f = {:.4} (max pairwise slope)", log.gamma_f());

    let s = Surrogate::objective(&log);
    println!("{:>6} {:>9} {:>9} {:>9} {:>9} {:>9}", "x", "f(x)", "lower", "central", "upper", "lambda");
    for k in 0..=16 {
        let x = -2.0 + 0.25 * k as f64;
        let (u, l) = s.bounds(&[x]);
        println!(
            "{x:>6.2} {:>9.4} {l:>9.4} {:>9.4} {u:>9.4} {:>9.4}",
            f(x),
            s.central(&[x]),
            s.uncertainty(&[x])
        );
    }

    // A larger constant widens the band but keeps it anchored at samples.
    let loose = Surrogate::with_gamma(&log, Channel::Objective, 2.0 * log.gamma_f());
    println!("doubling gamma: lambda(0.0) {:.4} -> {:.4}", s.uncertainty(&[0.0]), loose.uncertainty(&[0.0]));

    let grid: Vec<(Vec<f64>, f64)> = (0..=20).map(|i| i as f64 / 20.0).map(|x| (vec![x], x * x)).collect();
    println!("Lipschitz estimate of x^2 on 21 points of [0, 1]: {}", estimate_lipschitz(&grid, 1e-6)?);
    Ok(())
}
