use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_meta-smgo");

/// Coarse oracle grids keep the unoptimized binary fast.
const SMALL_CONFIG: &str = "oracle_grid = 100\nscreen_grid = 100\n";

fn cli(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).current_dir(dir).args(args).output().expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = cli(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn workdir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("small.toml"), SMALL_CONFIG).unwrap();
    dir
}

fn gen_meta(dir: &Path, out: &str, extra: &[&str]) {
    let mut args = vec!["gen-meta", "--config", "small.toml", "--seed", "3", "--m", "2", "--iters", "40", "--out", out];
    args.extend_from_slice(extra);
    ok(dir, &args);
}

#[test]
fn single_iteration_baseline_writes_one_row() {
    let dir = workdir();
    ok(dir.path(), &["run", "--baseline", "--iters", "1", "--seed", "0", "--out", "one.csv"]);
    let text = fs::read_to_string(dir.path().join("one.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,x_1,x_2,z,c_1,c_2,z_best,gamma_f,mode");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("1,0.4775,0.0667,"));
    assert!(lines[1].ends_with(",init"));
}

#[test]
fn bad_configuration_exits_with_two() {
    let dir = workdir();
    fs::write(dir.path().join("bad.toml"), "tau = 2.0\n").unwrap();
    let out = cli(dir.path(), &["run", "--baseline", "--config", "bad.toml"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());

    fs::write(dir.path().join("typo.toml"), "n_max_tset = 5\n").unwrap();
    let out = cli(dir.path(), &["run", "--baseline", "--config", "typo.toml"]);
    assert_eq!(out.status.code(), Some(2));

    let out = cli(dir.path(), &["run", "--baseline", "--iters", "0"]);
    assert_eq!(out.status.code(), Some(2));

    let out = cli(dir.path(), &["run"]);
    assert_eq!(out.status.code(), Some(2), "missing --meta or --baseline is a usage error");
}

#[test]
fn unreadable_inputs_are_reported() {
    let dir = workdir();
    let out = cli(dir.path(), &["run", "--meta", "absent.json"]);
    assert_eq!(out.status.code(), Some(1));

    gen_meta(dir.path(), "meta.json", &[]);
    let text = fs::read_to_string(dir.path().join("meta.json")).unwrap();
    fs::write(dir.path().join("future.json"), text.replacen("\"schema_version\": 1", "\"schema_version\": 999", 1)).unwrap();
    let out = cli(dir.path(), &["run", "--meta", "future.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("999"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = workdir();
    let d = dir.path();
    gen_meta(d, "a.json", &[]);
    gen_meta(d, "b.json", &[]);
    assert_eq!(fs::read(d.join("a.json")).unwrap(), fs::read(d.join("b.json")).unwrap());
    assert_eq!(fs::read(d.join("a.summary.csv")).unwrap(), fs::read(d.join("b.summary.csv")).unwrap());

    for out in ["r1.csv", "r2.csv"] {
        ok(d, &["run", "--meta", "a.json", "--config", "small.toml", "--seed", "5", "--iters", "15", "--out", out]);
    }
    let r1 = fs::read(d.join("r1.csv")).unwrap();
    assert_eq!(r1, fs::read(d.join("r2.csv")).unwrap());
    let header = String::from_utf8(r1).unwrap();
    assert!(header.starts_with("n,x_1,x_2,z,c_1,c_2,z_best,gamma_f,mode,S_1,S_2\n"));

    for out in ["s1", "s2"] {
        ok(
            d,
            &[
                "sweep", "--param", "tau", "--values", "0.3,0.9", "--config", "small.toml", "--seed", "1", "--m", "2",
                "--n", "2", "--iters", "12", "--meta-iters", "40", "--out", out,
            ],
        );
    }
    let mut names: Vec<String> = fs::read_dir(d.join("s1"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["aggregate_tau_0.3.csv", "aggregate_tau_0.9.csv", "summary.csv"]);
    for name in &names {
        assert_eq!(fs::read(d.join("s1").join(name)).unwrap(), fs::read(d.join("s2").join(name)).unwrap(), "{name}");
    }

    ok(d, &["report", "--in", "s1", "--out", "figs"]);
    for svg in ["best_z.svg", "gamma_f.svg", "violations.svg"] {
        let text = fs::read_to_string(d.join("figs").join(svg)).unwrap();
        assert!(text.starts_with("<svg") && text.contains("tau=0.9"), "{svg}");
    }
}

#[test]
fn single_unperturbed_task_has_zero_spread() {
    let dir = workdir();
    let d = dir.path();
    ok(d, &["gen-meta", "--config", "small.toml", "--m", "1", "--delta-max", "0", "--iters", "30", "--out", "one.json"]);
    let text = fs::read_to_string(d.join("one.summary.csv")).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert!(lines.next().is_none());
    let col = |name: &str| row[header.iter().position(|h| *h == name).unwrap()].parse::<f64>().unwrap();
    assert_eq!(col("rho_bar"), 0.0);
    assert_eq!(col("zeta_bar"), 0.0);
}
