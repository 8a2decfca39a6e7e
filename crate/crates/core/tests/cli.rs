use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use polarity::histogram::build_histogram;
use polarity::imageio::{encode_pgm, read_gray};
use polarity::otsu::otsu_threshold;
use polarity::sweep::GammaCurve;
use polarity::synth::SynthSpec;
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polarity"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn polarity")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_pgm(dir: &TempDir, name: &str, w: usize, h: usize, px: &[u8]) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, encode_pgm(w, h, px)).unwrap();
    path
}

fn synth(dir: &TempDir, preset: &str, seed: u64) -> PathBuf {
    let path = dir.path().join(format!("{preset}-{seed}.pgm"));
    let out = run(&["synth", "--preset", preset, "--seed", &seed.to_string(), "-o", s(&path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn polarity_text_output() {
    let dir = TempDir::new().unwrap();
    let img = synth(&dir, "case-i", 42);
    let out = run(&["polarity", s(&img)]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("polarity: BrightOnDark"), "{text}");
    assert!(text.contains("case_i: true"));
    assert!(text.contains("(default)"));
}

#[test]
fn json_fields_round_trip() {
    let dir = TempDir::new().unwrap();
    let img = synth(&dir, "case-ii", 9);
    let out = run(&["polarity", "--json", "--delta", "0.55", s(&img)]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.trim().lines().count(), 1);
    let v: Value = serde_json::from_str(&stdout).unwrap();

    let image = read_gray(&img).unwrap();
    let cfg = polarity::sweep::SweepConfig {
        conditions: polarity::conditions::ConditionConfig {
            delta: 0.55,
            ..Default::default()
        },
        ..Default::default()
    };
    let report = polarity::sweep::detect_polarity(&image, &cfg).unwrap();

    assert_eq!(v["polarity"], "DarkOnBright");
    assert_eq!(v["trend"], "Decreasing");
    assert_eq!(v["monotone_fraction"].as_f64().unwrap(), report.monotone_fraction);
    assert_eq!(v["otsu"]["mbcv"].as_f64().unwrap(), report.otsu.mbcv);
    assert_eq!(v["otsu"]["t_star"].as_u64().unwrap(), u64::from(report.otsu.t_star));
    assert_eq!(
        v["conditions"]["mean_gap_norm"].as_f64().unwrap(),
        report.conditions.mean_gap_norm
    );
    assert_eq!(v["conditions"]["w1"].as_f64().unwrap(), report.conditions.w1);
    let samples = v["curve"]["samples"].as_array().unwrap();
    for (js, s) in samples.iter().zip(&report.curve.samples) {
        assert_eq!(js["mbcv"].as_f64().unwrap(), s.mbcv);
        assert_eq!(js["power"].as_f64().unwrap(), s.power);
    }
    assert_eq!(v["trend_threshold"].as_f64().unwrap(), 0.9);
    let defaults: Vec<&str> = v["condition_defaults"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert!(!defaults.contains(&"delta"));
    assert_eq!(defaults.len(), 4);
}

#[test]
fn exit_code_matrix() {
    let dir = TempDir::new().unwrap();
    let good = synth(&dir, "case-i", 1);
    let flat = write_pgm(&dir, "flat.pgm", 4, 4, &[77; 16]);
    let garbage = dir.path().join("garbage.pgm");
    fs::write(&garbage, b"P5\n4 4\n255\nabc").unwrap();
    let missing = dir.path().join("missing.pgm");
    let out_pgm = dir.path().join("o.pgm");

    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["polarity", s(&good)], 0),
        (vec!["polarity", "--gammas", "1,2,3", s(&good)], 0),
        (vec!["polarity", "--gammas", "1,0.5,2", s(&good)], 1),
        (vec!["polarity", "--gammas", "1,2", s(&good)], 1),
        (vec!["polarity", "--trend-threshold", "0.5", s(&good)], 1),
        (vec!["polarity", "--epsilon", "0.7", s(&good)], 1),
        (vec!["polarity", "--unknown-flag", s(&good)], 1),
        (vec!["polarity"], 1),
        (vec!["frobnicate"], 1),
        (vec!["polarity", s(&flat)], 2),
        (vec!["polarity", s(&garbage)], 2),
        (vec!["polarity", s(&missing)], 2),
        (vec!["binarize", s(&good), "-o", s(&out_pgm)], 0),
        (vec!["binarize", s(&good)], 1),
        (vec!["binarize", s(&flat), "-o", s(&out_pgm)], 2),
        (vec!["binarize", s(&good), "-o", "/nonexistent-dir/x.pgm"], 2),
        (vec!["sweep", s(&good)], 0),
        (vec!["sweep", s(&missing)], 2),
        (vec!["synth", "-o", s(&out_pgm), "--weight1", "1.5"], 1),
        (vec!["--help"], 0),
    ];
    for (args, want) in cases {
        let out = run(&args);
        assert_eq!(code(&out), want, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }

    let out = run(&["polarity", s(&flat)]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate histogram"));
}

#[test]
fn binarize_layout_idempotence_and_invert() {
    let dir = TempDir::new().unwrap();
    let px = [0, 255, 255, 0, 0, 255];
    let input = write_pgm(&dir, "spikes.pgm", 3, 2, &px);
    let once = dir.path().join("once.pgm");
    let twice = dir.path().join("twice.pgm");
    let inv = dir.path().join("inv.pgm");

    assert_eq!(code(&run(&["binarize", s(&input), "-o", s(&once)])), 0);
    assert_eq!(read_gray(&once).unwrap().pixels(), &px);

    assert_eq!(code(&run(&["binarize", s(&once), "-o", s(&twice)])), 0);
    assert_eq!(fs::read(&once).unwrap(), fs::read(&twice).unwrap());

    assert_eq!(code(&run(&["binarize", s(&once), "-o", s(&inv), "--invert"])), 0);
    let complement: Vec<u8> = px.iter().map(|v| 255 - v).collect();
    assert_eq!(read_gray(&inv).unwrap().pixels(), complement.as_slice());

    let gray = synth(&dir, "case-ii", 3);
    let b = dir.path().join("b.pgm");
    assert_eq!(code(&run(&["binarize", s(&gray), "-o", s(&b)])), 0);
    let out = read_gray(&b).unwrap();
    assert!(out.pixels().iter().all(|&v| v == 0 || v == 255));
}

#[test]
fn sweep_csv_contract() {
    let dir = TempDir::new().unwrap();
    let img = synth(&dir, "unimodal", 4);
    let csv = dir.path().join("curve.csv");
    assert_eq!(code(&run(&["sweep", s(&img), "--csv", s(&csv)])), 0);
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("gamma,power,mbcv"));
    assert_eq!(text.lines().count(), 10);
    let curve = GammaCurve::from_csv(&text).unwrap();
    assert_eq!(curve.samples[0].gamma, 1.0);
    let plain = otsu_threshold(&build_histogram(&read_gray(&img).unwrap())).unwrap();
    assert_eq!(curve.samples[0].mbcv, plain.mbcv);

    let spikes = write_pgm(&dir, "two.pgm", 2, 2, &[0, 255, 255, 0]);
    let out = run(&["sweep", s(&spikes), "--gammas", "1,1.7,2.9,4"]);
    assert_eq!(code(&out), 0);
    let curve = GammaCurve::from_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(curve.samples.len(), 4);
    assert!(curve.samples.iter().all(|s| s.mbcv == curve.samples[0].mbcv));
}

#[test]
fn synth_writes_sidecar() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("page.pgm");
    let status = run(&[
        "synth",
        "--preset",
        "case-i",
        "--seed",
        "7",
        "--width",
        "32",
        "--height",
        "16",
        "-o",
        s(&out),
    ]);
    assert_eq!(code(&status), 0);
    let img = read_gray(&out).unwrap();
    assert_eq!((img.width(), img.height()), (32, 16));
    let spec: SynthSpec = fs::read_to_string(dir.path().join("page.spec.txt"))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(spec.seed, 7);
    assert_eq!(polarity::synth::generate(&spec).unwrap(), img);
}

#[test]
fn sequential_env_gives_identical_output() {
    let dir = TempDir::new().unwrap();
    let img = synth(&dir, "case-ii", 11);
    let par = run(&["polarity", "--json", s(&img)]);
    let seq = bin()
        .args(["polarity", "--json", s(&img)])
        .env("POLARITY_NO_PARALLEL", "1")
        .output()
        .unwrap();
    assert_eq!(code(&seq), 0);
    assert_eq!(par.stdout, seq.stdout);
}
