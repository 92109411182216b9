//! Generating a small meta-dataset, writing it to disk and reading it back.

use meta_smgo::bench::{build_meta_dataset, ExperimentConfig};
use meta_smgo::meta::{rho_similarity, zeta_similarity};
use meta_smgo::persistence::{load_meta, save_meta, MetaDatasetFile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig {
        m: 3,
        n_max_meta_gen: 80,
        seed: 5,
        ..ExperimentConfig::default()
    };
    let ds = build_meta_dataset(&cfg)?;
    for (i, t) in ds.tasks().iter().enumerate() {
        println!(
            "task {i}: x* = ({:.4}, {:.4}) z* = {:.4} gamma_hat = {:?}",
            t.x_star[0], t.x_star[1], t.z_star, t.gamma_hat
        );
    }
    println!("rho = {:.4}, zeta = {:.4}", rho_similarity(ds.tasks()), zeta_similarity(ds.tasks()));

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("meta.json");
    save_meta(&path, &MetaDatasetFile::from_dataset(&ds, Some(cfg)))?;
    let text = std::fs::read_to_string(&path)?;
    println!("{} bytes written; head:\n{}", text.len(), text.lines().take(8).collect::<Vec<_>>().join("\n"));

    let back = load_meta(&path)?;
    assert_eq!(back.dataset()?, ds);
    println!("reloaded dataset is identical, generation seed {:?}", back.seed);
    Ok(())
}
