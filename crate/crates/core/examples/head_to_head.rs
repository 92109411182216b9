//! Warm-started versus plain runs on fresh benchmark functions, averaged.
//!
//! Usage: `head_to_head [meta.json]`.

use meta_smgo::bench::{build_meta_dataset, run_comparison_with, ExperimentConfig, Method};
use meta_smgo::meta::MetaDataset;
use meta_smgo::persistence::load_meta;

fn dataset(cfg: &ExperimentConfig) -> Result<MetaDataset, Box<dyn std::error::Error>> {
    Ok(match std::env::args().nth(1) {
        Some(path) => load_meta(path.as_ref())?.dataset()?,
        None => build_meta_dataset(cfg)?,
    })
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig::default();
    let ds = dataset(&cfg)?;
    let report = run_comparison_with(&cfg, &ds)?;
    println!("{} functions, M = {}, tau = {}", report.functions.len(), report.m, report.tau);
    println!("{:>5} {:>12} {:>12} {:>12} {:>12}", "n", "meta gap", "plain gap", "meta gamma", "plain gamma");
    for n in [1, 2, 3, 6, 10, 20, 50, 100] {
        println!(
            "{n:>5} {:>12.3} {:>12.3} {:>12.2} {:>12.2}",
            report.mean_gap_at(Method::Meta, n),
            report.mean_gap_at(Method::Baseline, n),
            report.mean_gamma_at(Method::Meta, n),
            report.mean_gamma_at(Method::Baseline, n)
        );
    }
    println!("(inf: some run has no feasible sample yet)");
    println!(
        "first-sample gap: meta {:.3} plain {:.3}",
        report.mean_first_gap(Method::Meta),
        report.mean_first_gap(Method::Baseline)
    );
    println!(
        "infeasible samples: meta {:.1} plain {:.1}",
        report.mean_infeasible(Method::Meta),
        report.mean_infeasible(Method::Baseline)
    );
    let applicable = report.warm_start.iter().filter(|c| c.applicable()).count();
    println!(
        "warm-start bound: {applicable} applicable runs, {} violations",
        report.warm_start_violations()
    );
    Ok(())
}
