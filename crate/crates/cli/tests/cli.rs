//! End-to-end tests driving the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weyl-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "expected success, got {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn gram_identity_csv() {
    let out = run(&["gram", "--group", "C2", "--weights", "e1,e1+e2,2e1,0"]);
    let text = stdout(&out);
    let mut data = text.lines().skip_while(|l| l.starts_with('#'));
    assert_eq!(data.next(), Some("row,col,re,im"));
    let mut seen = 0;
    for line in data {
        let cells: Vec<&str> = line.split(',').collect();
        let (i, j): (usize, usize) = (cells[0].parse().unwrap(), cells[1].parse().unwrap());
        let re: f64 = cells[2].parse().unwrap();
        let im: f64 = cells[3].parse().unwrap();
        let expect = if i == j { 1.0 } else { 0.0 };
        assert!((re - expect).abs() <= 1e-9, "entry ({i},{j}) re = {re}");
        assert!(im.abs() <= 1e-9, "entry ({i},{j}) im = {im}");
        seen += 1;
    }
    assert_eq!(seen, 16);
}

#[test]
fn moments_g2_short_fund() {
    let out = run(&["moments", "--group", "G2", "--weight", "short-fund"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["first_re"].as_f64().unwrap().abs() <= 1e-9);
    assert!(v["first_im"].as_f64().unwrap().abs() <= 1e-9);
    assert!((v["second"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
}

#[test]
fn clt_rerun_is_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let base = [
        "clt", "--group", "C2", "--hp", "e1", "--x", "300", "--n", "300", "--seed", "7",
    ];
    let out1 = bin()
        .args(base)
        .args(["--output", a.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out1.status.success());
    let out2 = bin()
        .args(base)
        .args(["--threads", "2", "--output", b.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out2.status.success());
    let (ba, bb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ba, bb, "thread count changed the artifact bytes");
    let v: serde_json::Value = serde_json::from_slice(&ba).unwrap();
    assert_eq!(v["report"]["seed"], 7);
    assert_eq!(v["report"]["family_size"], 300);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(
        &cfg,
        "[clt]\ngroup = \"C2\"\nhp = \"e1\"\nx = 300\nn = 300\nseed = 5\n",
    )
    .unwrap();
    let from_cfg = stdout(&run(&["clt", "--config", cfg.to_str().unwrap()]));
    let v: serde_json::Value = serde_json::from_str(&from_cfg).unwrap();
    assert_eq!(v["report"]["seed"], 5);
    // flag wins over the config value
    let overridden = stdout(&run(&[
        "clt",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "9",
    ]));
    let v: serde_json::Value = serde_json::from_str(&overridden).unwrap();
    assert_eq!(v["report"]["seed"], 9);
}

#[test]
fn repro_line_regenerates_identical_output() {
    let first = stdout(&run(&["dims", "--group", "sp4", "--k-range", "4..8", "--level", "3"]));
    let repro = first
        .lines()
        .next()
        .unwrap()
        .trim_start_matches("# ")
        .split(" | ")
        .next()
        .unwrap()
        .to_string();
    let args: Vec<&str> = repro.split_whitespace().skip(1).collect();
    let second = stdout(&run(&args));
    assert_eq!(first, second);
}

#[test]
fn h_table_matches_known_coefficients() {
    let text = stdout(&run(&["sympow", "--h-table", "3"]));
    let rows: Vec<&str> = text
        .lines()
        .skip_while(|l| l.starts_with('#'))
        .skip(1)
        .collect();
    // H_2 = x^2 - 1, H_3 = x^3 - 2x
    assert!(rows.contains(&"2,0,-1"));
    assert!(rows.contains(&"2,2,1"));
    assert!(rows.contains(&"3,1,-2"));
    assert!(rows.contains(&"3,3,1"));
}

#[test]
fn invalid_inputs_exit_2_without_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.csv");
    let out = bin()
        .args(["gram", "--group", "Q7", "--weights", "e1"])
        .args(["--output", target.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!Path::new(&target).exists(), "partial output left behind");

    let out = run(&["clt", "--group", "C2", "--hp", "e1", "--x", "2", "--n", "300"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["gram", "--group", "C2", "--weights", "e9"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["dims", "--group", "sp4", "--k-range", "4..8"]);
    assert_eq!(out.status.code(), Some(2), "missing level must fail");
}

#[test]
fn density_rows_are_positive_and_grid_sized() {
    let text = stdout(&run(&["density", "--group", "A1", "--grid", "9"]));
    let rows: Vec<&str> = text
        .lines()
        .skip_while(|l| l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 9);
    for row in rows {
        let d: f64 = row.split(',').next_back().unwrap().parse().unwrap();
        assert!(d >= 0.0);
    }
}
