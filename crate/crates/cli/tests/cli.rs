use std::process::{Command, Output};

use padic_tiles::encoding::JsonCodec;
use padic_tiles::tiling::verify_tiling;
use padic_tiles::{CompactOpenSet, LevelSet, PointSet, TilingReport};

const OMEGA: &str = r#"{"p":2,"level":2,"members":[0,1]}"#;
const T_GOOD: &str = r#"{"p":2,"precision":2,"points":[0,2]}"#;
const T_BAD: &str = r#"{"p":2,"precision":2,"points":[0,1]}"#;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-tiles"))
        .args(args)
        .env_remove("PADIC_TILES_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn verify_tiling_pair() {
    let o = cli(&["verify", "--omega", OMEGA, "--t", T_GOOD]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "tiling: true\ncoverage: 1x4\n");
}

#[test]
fn verify_non_tiling_exits_3_with_witness() {
    let o = cli(&["verify", "--format", "json", "--omega", OMEGA, "--t", T_BAD]);
    assert_eq!(o.status.code(), Some(3));
    let report: TilingReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!report.is_tiling);
    assert!(report.witness.is_some());
    assert_eq!(report.coverage_histogram.values().sum::<u64>(), 4);
}

#[test]
fn json_report_matches_library() {
    let omega = LevelSet::from_json(OMEGA).unwrap();
    let t = PointSet::from_json(T_BAD).unwrap();
    let expected = serde_json::to_string(&verify_tiling(&omega, &t).unwrap()).unwrap();
    let o = cli(&["verify", "--format", "json", "--omega", OMEGA, "--t", T_BAD]);
    assert_eq!(stdout(&o).trim_end(), expected);
}

#[test]
fn spectral_agrees_with_verify() {
    let good = cli(&["spectral", "--omega", OMEGA, "--t", T_GOOD]);
    assert_eq!(good.status.code(), Some(0));
    let bad = cli(&[
        "spectral", "--format", "json", "--omega", OMEGA, "--t", T_BAD,
    ]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(stdout(&bad).contains(r#""frequency":{"k":2,"u":1}"#));
}

#[test]
fn regularize_emits_canonical_set() {
    let o = cli(&[
        "regularize",
        "--format",
        "json",
        "--omega",
        OMEGA,
        "--t",
        T_GOOD,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let set = CompactOpenSet::from_json(stdout(&o).trim_end()).unwrap();
    assert_eq!(set.to_json(), stdout(&o).trim_end());
    assert_eq!(
        set.to_level_set(2).unwrap(),
        LevelSet::from_json(OMEGA).unwrap()
    );
}

#[test]
fn regularize_ambiguous_cell_is_domain_error() {
    let o = cli(&["regularize", "--omega", OMEGA, "--t", T_BAD]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: ambiguous-cell: "));
    assert_eq!(stderr(&o).lines().count(), 1);
}

#[test]
fn complements_lines_round_trip() {
    let o = cli(&[
        "complements",
        "--format",
        "json",
        "--omega",
        r#"{"p":2,"level":2,"members":[0,2]}"#,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let found: Vec<Vec<u64>> = stdout(&o)
        .lines()
        .map(|l| PointSet::from_json(l).unwrap().points().to_vec())
        .collect();
    assert_eq!(found, vec![vec![0, 1], vec![0, 3]]);
}

#[test]
fn enumerate_examples() {
    let o = cli(&[
        "enumerate",
        "--format",
        "json",
        "--p",
        "2",
        "--n",
        "2",
        "--size",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with(r#"{"omega":[0,2],"complements":[[0,1],[0,3]],"gamma_t":0"#));

    let empty = cli(&[
        "enumerate",
        "--format",
        "json",
        "--p",
        "2",
        "--n",
        "2",
        "--size",
        "3",
    ]);
    assert_eq!(empty.status.code(), Some(0));
    assert!(stdout(&empty).is_empty());
}

#[test]
fn enumerate_is_deterministic_across_job_counts() {
    let args = [
        "enumerate",
        "--format",
        "json",
        "--p",
        "2",
        "--n",
        "4",
        "--size",
        "4",
    ];
    let one = cli(&[&args[..], &["--jobs", "1"]].concat());
    let four = cli(&[&args[..], &["--jobs", "4"]].concat());
    let env = Command::new(env!("CARGO_BIN_EXE_padic-tiles"))
        .args(args)
        .env("PADIC_TILES_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert!(!one.stdout.is_empty());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, env.stdout);
}

#[test]
fn ft_reports_exact_and_float_values() {
    let o = cli(&["ft", "--format", "json", "--omega", OMEGA, "--xi", "1/4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coeffs"], serde_json::json!(["1/4", "0", "0", "1/4"]));
    // (1/4)(1 + e^{-2πi/4}) = 1/4 - i/4
    assert!((v["re"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!((v["im"].as_f64().unwrap() + 0.25).abs() < 1e-12);
    assert_eq!(v["zero"], false);

    let half = cli(&["ft", "--format", "json", "--omega", OMEGA, "--xi", "1/2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&half)).unwrap();
    assert_eq!(v["zero"], true);
}

#[test]
fn ft_of_ball_and_point_measure() {
    let ball = cli(&[
        "ft",
        "--set",
        r#"{"p":2,"balls":[{"level":1,"center":1}]}"#,
        "--xi",
        "1/2",
    ]);
    assert!(stdout(&ball).contains("approx: -0.500000000000 +0.000000000000i"));
    let points = cli(&["ft", "--t", T_GOOD, "--xi", "-3/4"]);
    assert!(stdout(&points).contains("zero: true"));
}

#[test]
fn zeroset_lists_vanishing_frequencies() {
    let o = cli(&["zeroset", "--format", "json", "--t", T_GOOD]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "{\"checked\":4,\"vanishing\":[{\"k\":2,\"u\":1},{\"k\":2,\"u\":3}]}\n"
    );
}

#[test]
fn lemmas_pass_for_small_primes() {
    for p in ["2", "3"] {
        let o = cli(&["lemmas", "--p", p, "--max-gamma", "2"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(stdout(&o).lines().count(), 4);
    }
}

#[test]
fn malformed_inline_json_reports_offset() {
    let o = cli(&[
        "verify",
        "--omega",
        r#"{"p":2,"level":2,"members":[0,1"#,
        "--t",
        T_GOOD,
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("<inline --omega>"), "{err}");
    assert!(err.contains("at byte 30"), "{err}");
}

#[test]
fn malformed_file_reports_path() {
    let path = std::env::temp_dir().join(format!("padic-tiles-cli-{}.json", std::process::id()));
    std::fs::write(&path, "{\"p\":2,\n \"precision\": }").unwrap();
    let o = cli(&["verify", "--omega", OMEGA, "--t", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(path.to_str().unwrap()));
    assert!(stderr(&o).contains("at byte 22"), "{}", stderr(&o));
}

#[test]
fn file_input_matches_inline() {
    let path = std::env::temp_dir().join(format!("padic-tiles-omega-{}.json", std::process::id()));
    std::fs::write(&path, OMEGA).unwrap();
    let from_file = cli(&["verify", "--omega", path.to_str().unwrap(), "--t", T_GOOD]);
    std::fs::remove_file(&path).unwrap();
    let inline = cli(&["verify", "--omega", OMEGA, "--t", T_GOOD]);
    assert_eq!(from_file.stdout, inline.stdout);
}

#[test]
fn invalid_values_are_domain_errors() {
    let o = cli(&[
        "verify",
        "--omega",
        r#"{"p":4,"level":2,"members":[0,1]}"#,
        "--t",
        T_GOOD,
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr(&o), "error: domain: 4 is not prime\n");
    let mismatch = cli(&[
        "verify",
        "--omega",
        OMEGA,
        "--t",
        r#"{"p":3,"precision":1,"points":[0]}"#,
    ]);
    assert_eq!(mismatch.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&["bogus"]).status.code(), Some(2));
    assert_eq!(cli(&["verify", "--omega", OMEGA]).status.code(), Some(2));
    assert_eq!(
        cli(&["ft", "--omega", OMEGA, "--xi", "1/0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cli(&["ft", "--omega", OMEGA, "--t", T_GOOD, "--xi", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
}

#[test]
fn in_process_runner_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = padic_tiles_cli::run(
        ["padic-tiles", "verify", "--omega", OMEGA, "--t", T_BAD],
        &mut out,
        &mut err,
    );
    let bin = cli(&["verify", "--omega", OMEGA, "--t", T_BAD]);
    assert_eq!(Some(code), bin.status.code());
    assert_eq!(out, bin.stdout);
}

#[test]
fn census_lines_round_trip() {
    let o = cli(&[
        "enumerate",
        "--format",
        "json",
        "--p",
        "3",
        "--n",
        "2",
        "--size",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let base = padic_tiles::PrimeBase::new(3).unwrap();
    let text = stdout(&o);
    assert!(text.lines().count() > 0);
    for line in text.lines() {
        let record = padic_tiles::CensusRecord::from_json(base, 2, line).unwrap();
        assert_eq!(record.to_json(), line);
    }
}

#[test]
fn documented_examples() {
    let o = cli(&[
        "verify",
        "--omega",
        r#"{"p":2,"level":2,"members":[0,3]}"#,
        "--t",
        T_GOOD,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("tiling: true\n"));
    let lemmas = cli(&["lemmas", "--p", "2", "--max-gamma", "3"]);
    assert_eq!(lemmas.status.code(), Some(0));
}
