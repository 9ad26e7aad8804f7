//! End-to-end runs of the `hawkdove` binary.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hawkdove"))
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str], config: Option<&Path>) -> Output {
    let mut c = bin();
    c.args(args);
    if let Some(p) = config {
        c.arg("--config").arg(p);
    }
    c.output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const THREE_ACTION: &str = r#"{"game":{"g":0.25,"l":0.25},"theta":"degenerate:3","dynamics":"action"}"#;
const THREE_PAYOFF: &str = r#"{"game":{"g":0.25,"l":0.25},"theta":"degenerate:3","dynamics":"payoff"}"#;

#[test]
fn analyze_homogeneous_action_sampling() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", THREE_ACTION);
    let v = json(&run(&["analyze"], Some(&cfg)));
    let states = v["states"].as_array().unwrap();
    assert_eq!(states.len(), 3);
    for s in states {
        let interior = s["p1"].as_f64().unwrap() > 0.0 && s["p1"].as_f64().unwrap() < 1.0;
        let want = if interior { "Unstable" } else { "AsymptoticallyStable" };
        assert_eq!(s["label"], want);
    }
    assert_eq!(v["pure_stability"], "Stable");
    assert_eq!(v["global_verdict"], "PureReachable");
}

#[test]
fn analyze_payoff_sampling_finds_polynomial_fixed_point() {
    // w(p) = (1−p)^3 + 3p^4(1−p)^2 for this environment; its fixed point by bisection
    let w = |p: f64| (1.0 - p).powi(3) + 3.0 * p.powi(4) * (1.0 - p).powi(2);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let m = 0.5 * (lo + hi);
        if w(m) > m {
            lo = m;
        } else {
            hi = m;
        }
    }
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", THREE_PAYOFF);
    let v = json(&run(&["analyze"], Some(&cfg)));
    let found = v["states"].as_array().unwrap().iter().any(|s| {
        let (p1, p2) = (s["p1"].as_f64().unwrap(), s["p2"].as_f64().unwrap());
        (p1 - lo).abs() < 1e-8 && (p2 - lo).abs() < 1e-8
    });
    assert!(found, "symmetric state {lo} missing: {v}");
}

#[test]
fn analyze_unit_samples_reports_continuum() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", r#"{"game":{"g":0.25,"l":0.25},"theta":"degenerate:1"}"#);
    let v = json(&run(&["analyze"], Some(&cfg)));
    assert_eq!(v["continuum"], true);
    assert_eq!(v["states"][0]["label"], "Continuum");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write_config(&dir, "bad.json", r#"{"game":{"g":2.0,"l":0.25},"theta":"degenerate:3"}"#);
    assert_eq!(run(&["analyze"], Some(&bad)).status.code(), Some(2));
    assert_eq!(run(&["analyze"], None).status.code(), Some(2));
    let missing = dir.path().join("nope.json");
    assert_eq!(run(&["analyze"], Some(&missing)).status.code(), Some(3));
    let good = write_config(&dir, "c.json", THREE_ACTION);
    let out = bin()
        .args(["plot", "--out"])
        .arg(dir.path().join("no/such/dir/x.svg"))
        .arg("--config")
        .arg(&good)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // the printed reference table has entries off by more than the tolerance
    let out = run(&["tables"], None);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stdout).contains("0.578616"));
}

#[test]
fn plot_markers_and_nullclines() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", THREE_ACTION);
    let a = run(&["plot"], Some(&cfg));
    assert!(a.status.success());
    let svg = String::from_utf8(a.stdout.clone()).unwrap();
    assert_eq!(svg.matches(r#"class="state stable""#).count(), 2);
    assert_eq!(svg.matches(r#"class="state unstable""#).count(), 1);
    // both nullclines start or end at the (0,1) and (1,0) corners: pixel (50,50) and (550,550)
    for class in ["nullcline-p1", "nullcline-p2"] {
        let line = svg.lines().find(|l| l.contains(class)).unwrap();
        assert!(line.contains("50.00,50.00"), "{class}");
        assert!(line.contains("550.00,550.00"), "{class}");
    }
    let b = run(&["plot"], Some(&cfg));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn outputs_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "c.json",
        r#"{"game":{"g":0.25,"l":0.25},"theta":"1:0.75,3:0.25","seed":3,
            "abm":{"N":50,"horizon":5,"replicates":3},"basin_samples":50}"#,
    );
    for args in [
        vec!["analyze"],
        vec!["trajectory"],
        vec!["trajectory", "--format", "json"],
        vec!["basins"],
        vec!["basins", "--format", "csv"],
        vec!["abm"],
        vec!["abm", "--format", "json"],
    ] {
        let a = run(&args, Some(&cfg));
        let b = run(&args, Some(&cfg));
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let other = run(&["abm", "--seed", "4"], Some(&cfg));
    assert_ne!(other.stdout, run(&["abm"], Some(&cfg)).stdout);
}

#[test]
fn csv_headers() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "c.json",
        r#"{"game":{"g":0.25,"l":0.25},"theta":"degenerate:2","abm":{"N":20,"horizon":2,"replicates":2}}"#,
    );
    let first = |args: &[&str]| {
        let out = run(args, Some(&cfg));
        String::from_utf8(out.stdout).unwrap().lines().next().unwrap().to_string()
    };
    assert_eq!(first(&["trajectory"]), "t,p1,p2");
    assert_eq!(first(&["abm"]), "event_block,p1_hat,p2_hat,replicate_id");
    assert_eq!(first(&["analyze", "--format", "csv"]), "p1,p2,slope_product,label");
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", THREE_ACTION);
    let target = dir.path().join("report.json");
    let out = bin()
        .args(["analyze", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&target)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["states"].as_array().unwrap().len(), 3);
}
