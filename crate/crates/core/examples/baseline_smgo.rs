//! Plain SMGO-Δ on the nominal constrained Styblinski-Tang problem, compared
//! with the grid oracle.

use std::time::Instant;

use meta_smgo::bench::{brute_force_feasible_min, st_problem, StFamilyParams};
use meta_smgo::config::SmgoConfig;
use meta_smgo::smgo::run;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = st_problem(StFamilyParams::NOMINAL);
    let cfg = SmgoConfig::defaults_for(2).with_iterations(500).with_seed(1);
    let start = Instant::now();
    let result = run(&problem, &cfg, &[0.4775, 0.0667])?;
    let elapsed = start.elapsed();
    let (x_oracle, z_oracle) = brute_force_feasible_min(&StFamilyParams::NOMINAL, 1000)?;

    let best = result.evaluations.incumbent().expect("non-empty log");
    println!("iterations       {}", result.log.records.len());
    println!("best sample      x = ({:.4}, {:.4})  z = {:.5}", best.x[0], best.x[1], best.z);
    println!("oracle optimum   x = ({:.4}, {:.4})  z = {:.5}", x_oracle[0], x_oracle[1], z_oracle);
    println!("infeasible       {}", result.log.infeasible_count());
    println!("gamma_f          {:.3}", result.evaluations.gamma_f());
    for n in [1, 10, 50, 100, 250, 500] {
        let z = result.log.records[n - 1].z_best;
        println!("  best z at n={n:<4} {}", z.map_or("-".into(), |v| format!("{v:.5}")));
    }
    println!("elapsed          {elapsed:.2?}");
    Ok(())
}
