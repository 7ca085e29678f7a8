use std::process::Command;

use serde_json::Value;

fn opuc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_opuc")).args(args).output().expect("binary runs")
}

#[test]
fn identical_config_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, extra: &[&str]| {
        let path = dir.path().join(name);
        let mut args = vec!["wedge", "--trials", "12", "--seed", "5", "--out", path.to_str().unwrap()];
        args.extend_from_slice(extra);
        assert!(opuc(&args).status.success());
        std::fs::read(path).unwrap()
    };
    let a = run("a.json", &[]);
    let b = run("b.json", &[]);
    let seq = run("c.json", &["--sequential"]);
    assert_eq!(a, b);
    assert_eq!(a, seq);
    let csv1 = run("a.csv", &["--format", "csv"]);
    let csv2 = run("b.csv", &["--format", "csv"]);
    assert_eq!(csv1, csv2);
}

#[test]
fn json_has_config_results_pass() {
    let out = opuc(&["figure1"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let obj = v.as_object().unwrap();
    assert_eq!(obj.keys().collect::<Vec<_>>(), ["config", "pass", "results"]);
    assert_eq!(v["results"]["zeros"]["args"].as_array().unwrap().len(), 34);
    assert_eq!(v["config"]["n"], 34);
}

#[test]
fn csv_headers() {
    for (cmd, header) in [
        ("figure1", "k,arg,re,im"),
        ("clock", "k,arg,normalized_spacing"),
        ("resolvent", "n,min_distance,bound,inner_bound,pass"),
        ("validate-profile", "condition,pass,value"),
    ] {
        let out = opuc(&[cmd, "--format", "csv", "--n", "200"]);
        let text = String::from_utf8(out.stdout).unwrap();
        assert_eq!(text.lines().next(), Some(header), "{cmd}");
    }
}

#[test]
fn exit_code_tracks_assertions() {
    assert_eq!(opuc(&["resolvent", "--n-list", "50,100"]).status.code(), Some(0));
    // b = 3/4 stays above 2.2 n^{-b} at n = 10³
    assert_eq!(opuc(&["residual", "--seq", "power:1,0.75", "--n", "1000"]).status.code(), Some(1));
    assert_eq!(opuc(&["clock", "--seq", "power:1,0.25", "--n", "2000", "--eps", "0.01"]).status.code(), Some(1));
    let bad = opuc(&["figure1", "--seq", "power:2"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("error"));
}

#[test]
fn free_override_and_gap_trend() {
    let out = opuc(&["figure1", "--seq", "zeros", "--n", "4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let args: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(args.len(), 4);
    assert!((args[0] - std::f64::consts::FRAC_PI_4).abs() < 1e-12);

    let out = opuc(&["gap-trend", "--n-list", "100,1000", "--k", "3"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["rows"].as_array().unwrap().len(), 2);
    assert!(v["config"]["eps_tilde"].as_f64().unwrap() > 0.0);
}

#[test]
fn purepoints_flags_violating_sequence() {
    let out = opuc(&["purepoints", "--seq", "zeros", "--n", "20"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"][0]["hypothesis_ok"], false);
}

#[test]
fn validate_profile_reports_divergence_branch() {
    let out = opuc(&["validate-profile", "--seq", "log"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["cond_i_branch"], "divergence");
    assert_eq!(v["results"]["cond_i"], true);
}
