use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuzzy-noise"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn fuzzy-noise")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn err(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert_eq!(out.status.code(), Some(1), "{args:?} should fail");
    String::from_utf8(out.stderr).unwrap()
}

fn value<'a>(stdout: &'a str, key: &str) -> &'a str {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
        .unwrap_or_else(|| panic!("no {key} in {stdout}"))
}

#[test]
fn gen_is_byte_deterministic() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(
        d,
        &[
            "gen", "--n", "50", "--noise", "0.1", "--seed", "9", "--out", "a.csv",
        ],
    );
    ok(
        d,
        &[
            "gen", "--n", "50", "--noise", "0.1", "--seed", "9", "--out", "b.csv",
        ],
    );
    let a = fs::read(d.join("a.csv")).unwrap();
    assert_eq!(a, fs::read(d.join("b.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,z"));
    assert_eq!(text.lines().count(), 51);
}

#[test]
fn gen_rejects_negative_noise() {
    let tmp = TempDir::new().unwrap();
    let msg = err(tmp.path(), &["gen", "--noise", "-0.1", "--out", "a.csv"]);
    assert!(msg.contains("noise level must be non-negative"), "{msg}");
    assert!(!tmp.path().join("a.csv").exists());
}

#[test]
fn train_reports_a_full_grid_and_rejects_wrong_kinds() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(
        d,
        &[
            "gen", "--n", "400", "--dist", "uniform", "--out", "data.csv",
        ],
    );
    let out = ok(
        d,
        &[
            "train",
            "--algo",
            "cluster",
            "--mf",
            "triangular",
            "--sets",
            "9",
            "data.csv",
            "m.txt",
        ],
    );
    assert!(out.contains("shape=[9, 9]"), "{out}");
    assert_eq!(out.split_whitespace().next(), Some("rules=81"));

    let msg = err(
        d,
        &[
            "train",
            "--algo",
            "simplified",
            "--mf",
            "gaussian",
            "data.csv",
            "m2.txt",
        ],
    );
    assert!(
        msg.contains("simplified requires triangular membership functions"),
        "{msg}"
    );
    let msg = err(
        d,
        &[
            "train",
            "--algo",
            "neurofuzzy",
            "--mf",
            "triangular",
            "data.csv",
            "m2.txt",
        ],
    );
    assert!(
        msg.contains("neurofuzzy requires gaussian membership functions"),
        "{msg}"
    );

    let eval = ok(d, &["eval", "m.txt"]);
    let rmse: f64 = value(&eval, "rmse").parse().unwrap();
    assert!(rmse < 0.5, "{eval}");
}

#[test]
fn self_diff_is_zero_and_blank() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(d, &["gen", "--n", "200", "--out", "data.csv"]);
    ok(
        d,
        &["train", "--algo", "cluster-gauss", "data.csv", "m.txt"],
    );
    let out = ok(d, &["diff", "m.txt", "m.txt", "--resolution", "20"]);
    assert_eq!(value(&out, "rmse"), "0");
    assert_eq!(value(&out, "max_abs"), "0");
    let map: Vec<&str> = out.lines().take(20).collect();
    assert!(
        map.iter().all(|l| l.len() == 20 && l.trim().is_empty()),
        "{out}"
    );

    let csv = fs::read_to_string(d.join("diff.csv")).unwrap();
    assert!(csv.contains("# clean_model=m.txt"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 401);
}

#[test]
fn diff_rejects_mismatched_domains() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(d, &["gen", "--n", "100", "--out", "data.csv"]);
    ok(d, &["train", "--algo", "cluster-tri", "data.csv", "a.txt"]);
    ok(
        d,
        &[
            "train",
            "--algo",
            "cluster-tri",
            "--hi",
            "12",
            "data.csv",
            "b.txt",
        ],
    );
    let msg = err(d, &["diff", "a.txt", "b.txt"]);
    assert!(msg.starts_with("error:"), "{msg}");
    assert!(msg.contains("domain"), "{msg}");
}

#[test]
fn sweep_row_counts_and_unknown_presets() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let csv = ok(
        d,
        &[
            "sweep",
            "partition-sweep",
            "--algo",
            "simplified",
            "--trials",
            "2",
        ],
    );
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.starts_with("preset,algorithm,input_sets,"));
    let csv = ok(
        d,
        &["sweep", "alpha-sweep", "--trials", "1", "--epochs", "2"],
    );
    assert_eq!(csv.lines().count(), 4);

    let msg = err(d, &["sweep", "bogus"]);
    assert!(msg.contains("unknown preset 'bogus'"), "{msg}");
    assert!(msg.contains("algorithm-ladder"), "{msg}");
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    fs::write(
        d.join("gen.conf"),
        "# generator\nn=30\nseed=5\nout=conf.csv\n",
    )
    .unwrap();
    ok(d, &["gen", "--config", "gen.conf"]);
    assert_eq!(
        fs::read_to_string(d.join("conf.csv"))
            .unwrap()
            .lines()
            .count(),
        31
    );

    let out = ok(d, &["gen", "--config", "gen.conf", "--n", "12"]);
    assert!(out.starts_with("n=12 seed=5"), "{out}");

    fs::write(d.join("bad.conf"), "resolution=3\n").unwrap();
    let msg = err(d, &["gen", "--config", "bad.conf"]);
    assert!(msg.contains("'resolution' is not a flag of 'gen'"), "{msg}");
}

// A one-trial sweep cell is exactly gen + train + diff on seed 0.
#[test]
fn sweep_cell_matches_manual_pipeline() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let csv = ok(
        d,
        &[
            "sweep",
            "partition-sweep",
            "--algo",
            "simplified",
            "--trials",
            "1",
        ],
    );
    let row = csv
        .lines()
        .find(|l| l.starts_with("partition-sweep,simplified,9,"))
        .unwrap();
    let median_rmse = row.split(',').nth(11).unwrap();

    ok(
        d,
        &["gen", "--n", "100", "--seed", "0", "--out", "clean.csv"],
    );
    ok(
        d,
        &[
            "gen",
            "--n",
            "100",
            "--seed",
            "0",
            "--noise",
            "0.1",
            "--out",
            "noisy.csv",
        ],
    );
    ok(
        d,
        &["train", "--algo", "simplified", "clean.csv", "clean.txt"],
    );
    ok(
        d,
        &["train", "--algo", "simplified", "noisy.csv", "noisy.txt"],
    );
    let out = ok(d, &["diff", "clean.txt", "noisy.txt"]);
    assert_eq!(value(&out, "rmse"), median_rmse);
}
