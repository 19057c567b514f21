use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nsmlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsmlab")).args(args).env("RUST_LOG", "warn").output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SHORT_LINEAR: &str = r#"
mode = "linear-decay"
[[linear.study]]
family = "compatible"
components = ["n", "sigma"]
time = { start = 50.0, end = 300.0, count = 20 }
"#;

const SHORT_RUN: &str = r#"
mode = "nonlinear-run"
[nonlinear]
resolution = 8
t_end = 0.5
stride = 5
"#;

#[test]
fn identical_config_and_seed_give_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text, cmd) in [("lin.toml", SHORT_LINEAR, "linear-decay"), ("run.toml", SHORT_RUN, "nonlinear-run")] {
        let cfg = write(dir.path(), name, text);
        let a = dir.path().join(format!("{name}-a"));
        let b = dir.path().join(format!("{name}-b"));
        for out in [&a, &b] {
            let o = nsmlab(&[cmd, "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", "7", "--quiet"]);
            assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        }
        let mut files: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
        files.sort();
        assert!(files.iter().any(|f| f.to_string_lossy().ends_with(".csv")));
        for f in files {
            assert_eq!(fs::read(a.join(&f)).unwrap(), fs::read(b.join(&f)).unwrap(), "{f:?} differs");
        }
    }
}

#[test]
fn different_seeds_give_different_trajectories() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SHORT_RUN);
    let read = |seed: &str| {
        let out = dir.path().join(seed);
        nsmlab(&["nonlinear-run", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", seed, "--quiet"]);
        fs::read(out.join("trajectory.csv")).unwrap()
    };
    assert_ne!(read("1"), read("2"));
}

#[test]
fn unknown_key_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "mode = \"linear-decay\"\n[linear]\ntolerence = 0.1\n");
    let o = nsmlab(&["linear-decay", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tolerence"));
}

#[test]
fn mode_mismatch_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "lin.toml", SHORT_LINEAR);
    assert_eq!(nsmlab(&["bound-check", "--config", &cfg]).status.code(), Some(1));
}

#[test]
fn failed_check_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let text = SHORT_LINEAR.replace("components = [\"n\", \"sigma\"]", "components = [\"n\"]\nexpected = { n = -3.0 }");
    let cfg = write(dir.path(), "fail.toml", &text);
    let o = nsmlab(&["linear-decay", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL compatible n exponent"));
}

#[test]
fn fit_subcommand_reads_decay_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("t,value,component\n");
    for i in 0..20 {
        let t = 10.0 * 1.2f64.powi(i);
        csv.push_str(&format!("{t},{},x\n", 2.0 * (1.0 + t).powf(-1.25)));
        csv.push_str(&format!("{t},1.0,y\n"));
    }
    let path = write(dir.path(), "series.csv", &csv);
    let o = nsmlab(&["fit", &path, "--component", "x"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("p = -1.250000"));
    assert_eq!(nsmlab(&["fit", &path, "--model", "cubic"]).status.code(), Some(1));
}

#[test]
fn single_row_invocation() {
    let dir = tempfile::tempdir().unwrap();
    let o = nsmlab(&["accept", "--row", "6", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(dir.path().join("row6/summary.md").exists());
    assert_eq!(nsmlab(&["accept", "--row", "10"]).status.code(), Some(1));
}
