use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn opuc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opuc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_config(dir: &Path, config: &str, out: &str) -> Output {
    let path = dir.join(format!("{out}.json"));
    std::fs::write(&path, config).unwrap();
    let out_dir = dir.join(out);
    opuc(&[
        "run",
        path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ])
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

const THEOREM1: &str = r#"{"scenario":"theorem1",
 "sequence":{"kind":"constant","limit":-0.5},
 "points":[{"omega":0,"gamma":0.5}],
 "n_max":2000,"checkpoints":[10,100,1000,2000]}"#;

#[test]
fn theorem1_reaches_one() {
    let tmp = TempDir::new().unwrap();
    let out = run_config(tmp.path(), THEOREM1, "t1");
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let s = summary(&tmp.path().join("t1"));
    assert_eq!(s["passed"], Value::Bool(true));
    let (re, im) = complex(&s["details"]["stages"][0]["final_delta"]);
    assert!(((re - 1.0).powi(2) + im * im).sqrt() < 1e-6);

    let csv = std::fs::read_to_string(tmp.path().join("t1/table.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("# opuc table v1 scenario=theorem1"));
    assert_eq!(
        lines.next().unwrap(),
        "stage,n,re_delta,im_delta,abs_err,bv_partial,log_scale,flags"
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn identical_config_gives_identical_csv() {
    let tmp = TempDir::new().unwrap();
    run_config(tmp.path(), THEOREM1, "a");
    run_config(tmp.path(), THEOREM1, "b");
    let a = std::fs::read(tmp.path().join("a/table.csv")).unwrap();
    let b = std::fs::read(tmp.path().join("b/table.csv")).unwrap();
    assert_eq!(a, b);
    assert!(!a.contains(&b'\r'));
}

#[test]
fn bands_edges_at_third_of_pi() {
    let out = opuc(&["bands", "--period", "1", "--beta", "-0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines().skip(2);
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .filter_map(|f| f.parse().ok())
        .collect();
    assert!(lines.next().is_none());
    assert!(row.iter().any(|e| (e - FRAC_PI_3).abs() < 1e-8), "{row:?}");
    assert!(row.iter().any(|e| (e + FRAC_PI_3).abs() < 1e-8), "{row:?}");
}

#[test]
fn bands_rejects_length_mismatch() {
    let out = opuc(&["bands", "--period", "2", "--beta", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("ConfigError:"));
}

#[test]
fn oracle_agrees() {
    let omega = FRAC_PI_3.to_string();
    let out = opuc(&["oracle", "--gamma", "0.3", "--omega", &omega, "--n", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("max discrepancy over n <= 30:"));
    assert!(text.trim_end().ends_with("PASS"));
}

#[test]
fn malformed_config_exits_with_error_name() {
    let tmp = TempDir::new().unwrap();
    let bad = r#"{"scenario":"theorem1","n_max":0,"points":[{"omega":0,"gamma":0.5}],
                 "sequence":{"kind":"constant","limit":-0.5}}"#;
    let out = run_config(tmp.path(), bad, "bad");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("ConfigError:"));

    let out = run_config(tmp.path(), r#"{"scenario":"theorem1","bogus":1}"#, "bogus");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("ConfigError:"));
}

#[test]
fn domain_error_is_named() {
    let tmp = TempDir::new().unwrap();
    let cfg = r#"{"scenario":"theorem1","sequence":{"kind":"constant","limit":-0.5},
                 "points":[{"omega":0,"gamma":1.5}],"n_max":100}"#;
    let out = run_config(tmp.path(), cfg, "gamma");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        !err.starts_with("IoError") && err.contains("Error:"),
        "{err}"
    );
}

#[test]
fn failing_gate_exits_one() {
    let tmp = TempDir::new().unwrap();
    let cfg = r#"{"scenario":"corollary1",
                 "sequence":{"kind":"constant_plus_decay","limit":-0.5,"decay":{"form":"harmonic","amplitude":1}},
                 "points":[{"omega":0,"gamma":0.5}],"n_max":100,"tolerance":1e-9}"#;
    let out = run_config(tmp.path(), cfg, "strict");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        summary(&tmp.path().join("strict"))["passed"],
        Value::Bool(false)
    );
}

#[test]
fn two_points_in_the_gap() {
    let tmp = TempDir::new().unwrap();
    let cfg = format!(
        r#"{{"scenario":"theorem1","sequence":{{"kind":"constant","limit":-0.5}},
            "points":[{{"omega":0,"gamma":0.5}},{{"omega":{FRAC_PI_6},"gamma":0.3}}],
            "n_max":2000,"tolerance":1e-4}}"#
    );
    let out = run_config(tmp.path(), &cfg, "two");
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let s = summary(&tmp.path().join("two"));
    let stage = &s["details"]["stages"][1];
    assert_eq!(stage["regime"], "gap");
    let (lr, li) = complex(&stage["base_limit"]);
    let (dr, di) = complex(&stage["final_delta"]);
    let modulus = (lr * lr + li * li).sqrt();
    assert!((modulus - 0.5).abs() < 1e-12);
    assert!((((dr + lr).powi(2) + (di + li).powi(2)).sqrt() - modulus).abs() < 1e-4);
}

#[test]
fn repeated_point_decays() {
    let tmp = TempDir::new().unwrap();
    let cfg = r#"{"scenario":"theorem1","sequence":{"kind":"constant","limit":-0.5},
                 "points":[{"omega":0,"gamma":0.5},{"omega":0,"gamma":0.5}],
                 "n_max":300,"checkpoints":[50,100,200,300],"tolerance":1e-10}"#;
    let out = run_config(tmp.path(), cfg, "same");
    assert_eq!(out.status.code(), Some(0));
    let s = summary(&tmp.path().join("same"));
    assert_eq!(s["details"]["stages"][1]["regime"], "pure_point");
    let csv = std::fs::read_to_string(tmp.path().join("same/table.csv")).unwrap();
    let sizes: Vec<f64> = csv
        .lines()
        .skip(2)
        .filter(|l| l.starts_with("1,"))
        .map(|l| {
            let f: Vec<f64> = l
                .split(',')
                .skip(2)
                .take(2)
                .map(|x| x.parse().unwrap())
                .collect();
            f[0].hypot(f[1])
        })
        .collect();
    assert_eq!(sizes.len(), 4);
    assert!(sizes.windows(2).all(|w| w[1] < 1e-3 * w[0]), "{sizes:?}");
}

#[test]
fn batch_is_independent_of_worker_count() {
    let tmp = TempDir::new().unwrap();
    let cfg = format!(
        r#"{{"runs":[
          {{"name":"gap","scenario":"theorem1","sequence":{{"kind":"constant","limit":-0.5}},
            "points":[{{"omega":0,"gamma":0.5}}],"n_max":500}},
          {{"name":"periodic","scenario":"theorem2","sequence":{{"kind":"periodic","betas":[0.5,-0.5]}},
            "points":[{{"omega":{PI},"gamma":0.5}}],"n_max":1000}},
          {{"name":"edges","scenario":"bands","sequence":{{"kind":"constant","limit":-0.5}}}}
        ]}}"#
    );
    let path = tmp.path().join("batch.json");
    std::fs::write(&path, cfg).unwrap();
    let mut outputs = Vec::new();
    for jobs in ["1", "3"] {
        let dir = tmp.path().join(format!("jobs{jobs}"));
        let out = opuc(&[
            "run",
            path.to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
            "--jobs",
            jobs,
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let index = summary(&dir);
        let names: Vec<&str> = index["runs"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["name"].as_str().unwrap())
            .collect();
        assert_eq!(names, ["edges", "gap", "periodic"]);
        let files: Vec<Vec<u8>> = names
            .iter()
            .flat_map(|n| {
                ["summary.json", "table.csv"].map(|f| std::fs::read(dir.join(n).join(f)).unwrap())
            })
            .collect();
        outputs.push(files);
    }
    assert_eq!(outputs[0], outputs[1]);
}
