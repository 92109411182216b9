//! Brute-force grid oracles for the benchmark family.

use std::time::Instant;

use meta_smgo::bench::{
    brute_force_feasible_min, brute_force_unconstrained_min, g1, g2, sample_perturbed_family, StFamilyParams,
};
use meta_smgo::problem::seeded_rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = StFamilyParams::NOMINAL;
    let t = Instant::now();
    let (xu, zu) = brute_force_unconstrained_min(&p, 1000)?;
    let (xf, zf) = brute_force_feasible_min(&p, 1000)?;
    println!("nominal, constraints dropped: x = ({:.6}, {:.6}) z = {zu:.6}", xu[0], xu[1]);
    println!("nominal, constrained:         x = ({:.6}, {:.6}) z = {zf:.6}", xf[0], xf[1]);
    println!("  g1 = {:.2e}, g2 = {:.2e} at the constrained optimum", g1(&xf), g2(&xf));
    println!("  g2 at the unconstrained optimum = {:.3}", g2(&xu));
    println!("two 1000x1000 scans with refinement: {:.2?}", t.elapsed());

    let mut rng = seeded_rng(7, 0);
    for k in 0..5 {
        let q = sample_perturbed_family(&p, 0.75, &mut rng);
        match brute_force_feasible_min(&q, 500) {
            Ok((x, z)) => println!("perturbed #{k}: x = ({:.4}, {:.4}) z = {z:.4}", x[0], x[1]),
            Err(e) => println!("perturbed #{k}: {e}"),
        }
    }
    Ok(())
}
