//! One warm-started run against a plain run on a fresh benchmark function.
//!
//! Usage: `meta_warm_start [meta.json]`. Without a file the default
//! meta-dataset is generated first (about a minute in release mode).

use meta_smgo::bench::{build_meta_dataset, draw_test_functions, st_problem, ExperimentConfig, WarmStartCheck};
use meta_smgo::meta::{meta_run, MetaDataset};
use meta_smgo::persistence::load_meta;
use meta_smgo::smgo::run;

fn dataset(cfg: &ExperimentConfig) -> Result<MetaDataset, Box<dyn std::error::Error>> {
    Ok(match std::env::args().nth(1) {
        Some(path) => load_meta(path.as_ref())?.dataset()?,
        None => build_meta_dataset(cfg)?,
    })
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig { n: 1, ..ExperimentConfig::default() };
    let ds = dataset(&cfg)?;
    let f = &draw_test_functions(&cfg, &ds)?[0];
    println!("test function a = {:?}", f.params.a);
    println!("oracle: x = ({:.4}, {:.4}) z = {:.4}", f.oracle_x[0], f.oracle_x[1], f.oracle_z);

    let problem = st_problem(f.params);
    let mcfg = cfg.meta(cfg.tau, 1);
    let meta = meta_run(&problem, &ds, &mcfg)?;
    let plain = run(&problem, &cfg.smgo(cfg.n_max_test, 1), &cfg.x_init)?;
    println!("warm start x = {:?}, gamma_f floor = {:.3}", meta.x_init, meta.gamma_floor_init);

    let fmt = |z: Option<f64>| z.map_or("-".to_string(), |z| format!("{:.4}", z - f.oracle_z));
    println!("{:>5} {:>12} {:>12}", "n", "meta gap", "plain gap");
    for n in [1, 2, 5, 10, 20, 50, 100] {
        println!("{n:>5} {:>12} {:>12}", fmt(meta.run.log.records[n - 1].z_best), fmt(plain.log.records[n - 1].z_best));
    }
    println!(
        "infeasible samples: meta {} plain {}",
        meta.run.log.infeasible_count(),
        plain.log.infeasible_count()
    );
    println!("final similarity: {:?}", meta.final_similarity());
    let check = WarmStartCheck::new(0, &meta, &ds, f.oracle_z, &mcfg);
    println!(
        "warm-start bound: gap {:?} <= {:.1}; applicable {} (init feasible {})",
        check.gap(),
        check.bound,
        check.applicable(),
        check.init_feasible
    );
    Ok(())
}
