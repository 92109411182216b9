use meta_smgo::bench::{build_meta_dataset, st_problem, ExperimentConfig, StFamilyParams};
use meta_smgo::error::Error;
use meta_smgo::meta::meta_run;
use meta_smgo::persistence::{
    load_meta, load_runlog, parse_runlog, save_meta, save_runlog, write_runlog, MetaDatasetFile,
};

fn small_cfg() -> ExperimentConfig {
    ExperimentConfig {
        m: 3,
        n_max_meta_gen: 40,
        n_max_test: 25,
        oracle_grid: 100,
        screen_grid: 100,
        ..ExperimentConfig::default()
    }
}

#[test]
fn generated_dataset_and_meta_run_log_round_trip() {
    let cfg = small_cfg();
    let ds = build_meta_dataset(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();

    let meta_path = dir.path().join("meta.json");
    let file = MetaDatasetFile::from_dataset(&ds, Some(cfg.clone()));
    save_meta(&meta_path, &file).unwrap();
    let back = load_meta(&meta_path).unwrap();
    assert_eq!(back, file);
    assert_eq!(back.dataset().unwrap(), ds);
    assert_eq!(back.generation.as_ref(), Some(&cfg));

    let result = meta_run(&st_problem(StFamilyParams::NOMINAL), &ds, &cfg.meta(0.9, 4)).unwrap();
    let log_path = dir.path().join("run.csv");
    save_runlog(&log_path, &result.run.log).unwrap();
    let loaded = load_runlog(&log_path).unwrap();
    assert_eq!(loaded, result.run.log);
    assert_eq!(loaded.records.len(), 25);
    assert_eq!(loaded.n_tasks, 3);
}

#[test]
fn off_simplex_similarity_is_rejected() {
    let cfg = small_cfg();
    let ds = build_meta_dataset(&cfg).unwrap();
    let result = meta_run(&st_problem(StFamilyParams::NOMINAL), &ds, &cfg.meta(0.9, 4)).unwrap();
    let mut log = result.run.log.clone();
    log.records[4].similarity = Some(vec![0.5, 0.5, 0.5]);
    match parse_runlog(&write_runlog(&log).unwrap()) {
        Err(Error::CorruptFile { field, reason }) => {
            assert_eq!(field, "row 5, similarity");
            assert!(reason.contains("1.5"), "{reason}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn newer_schema_is_refused() {
    let cfg = small_cfg();
    let ds = build_meta_dataset(&ExperimentConfig { m: 1, ..cfg }).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("meta.json");
    let mut v = serde_json::to_value(MetaDatasetFile::from_dataset(&ds, None)).unwrap();
    v["schema_version"] = 999.into();
    std::fs::write(&p, serde_json::to_string(&v).unwrap()).unwrap();
    assert!(matches!(load_meta(&p), Err(Error::VersionedFormat { found: 999, supported: 1 })));
}
