//! Similarity recovery when the new function is one of the stored tasks.
//!
//! Usage: `limit_case [meta.json]`.

use meta_smgo::bench::{build_meta_dataset, run_limit_case, ExperimentConfig};
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
    let runs = run_limit_case(&cfg, &ds)?;
    println!("{:>5} {:>12} {:>16} {:>16}", "task", "weight", "first n at 1%", "final gap");
    for r in &runs {
        let gap = r.run.run.log.final_best_z().map_or(f64::INFINITY, |z| z - r.oracle_z);
        let hit = r.first_hit(0.01).map_or("-".to_string(), |n| n.to_string());
        println!("{:>5} {:>12.3} {hit:>16} {gap:>16.4}", r.task, r.true_task_weight());
    }
    let w: Vec<f64> = runs.iter().map(|r| r.true_task_weight()).collect();
    let mean = w.iter().sum::<f64>() / w.len() as f64;
    let std = (w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / w.len() as f64).sqrt();
    println!("true-task weight: mean {mean:.3}, std {std:.3}");
    Ok(())
}
