use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracdirac"))
}

fn sample(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("specs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Rows of a CSV file after the header, split into cells.
fn rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn write_spec(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("spec.json");
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn wave_forward_matches_the_closed_form_and_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let spec = sample("wave.json");
    for out in [&a, &b] {
        let o = run(&["solve-forward", "--spec", spec.to_str().unwrap(), "--out", out.to_str().unwrap(), "--grid", "1024"]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let body_a = std::fs::read(a.join("solution.csv")).unwrap();
    assert_eq!(body_a, std::fs::read(b.join("solution.csv")).unwrap());
    assert!(!body_a.contains(&b'\r'));

    let mut err = 0.0f64;
    for r in rows(&a.join("solution.csv")) {
        let (t, x, w): (f64, f64, f64) = (r[0].parse().unwrap(), r[2].parse().unwrap(), r[3].parse().unwrap());
        let exact = -((x + 2.0 * t).cos() - (x - 2.0 * t).cos()) / 4.0;
        err = err.max((w - exact).abs());
    }
    assert!(err < 1e-4, "{err:e}");

    let m = manifest(&a);
    assert_eq!(m["command"], "solve-forward");
    assert_eq!(m["exit_code"], 0);
    assert_eq!(m["config"]["time"]["steps"], 1024);
    assert_eq!(m["input_digest"].as_str().unwrap().len(), 64);
    assert_eq!(m["outputs"][0]["sha256"], manifest(&b)["outputs"][0]["sha256"]);
}

#[test]
fn csv_numbers_carry_seventeen_digits() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["eval-ml", "--function", "ml", "--params", "alpha=1,beta=1", "--range", "0.1:0.1:1", "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = &rows(&tmp.path().join("table.csv"))[0];
    let mantissa = r[1].split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{}", r[1]);
    assert_eq!(r[1].parse::<f64>().unwrap(), 0.1f64.exp());
}

#[test]
fn decreasing_betas_are_required() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(
        tmp.path(),
        r#"{"schema":"fracdirac.problem/1","betas":[0.5,1.5],"coefficients":[{"constant":1},{"constant":1}],
            "time":{"end":1,"steps":64},"space":{"single_mode":{"xi":[1]}}}"#,
    );
    let o = run(&["solve-forward", "--spec", spec.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr(&o);
    assert!(e.contains("betas must be strictly decreasing"), "{e}");
    assert!(e.contains("code=bad_spec field=betas"), "{e}");
    assert_eq!(e.lines().filter(|l| l.starts_with("error ")).count(), 1);
}

#[test]
fn unknown_fields_and_schemas_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(
        tmp.path(),
        r#"{"schema":"fracdirac.problem/1","betas":[1],"coefficients":[{"constant":1}],
            "time":{"end":1,"steps":64,"stepz":3},"space":{"single_mode":{"xi":[1]}}}"#,
    );
    let o = run(&["solve-forward", "--spec", spec.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("field=time"), "{}", stderr(&o));
    assert!(stderr(&o).contains("stepz"));

    let spec = write_spec(tmp.path(), r#"{"schema":"fracdirac.problem/2","betas":[1],"coefficients":[],"time":{"end":1,"steps":4},"space":{"single_mode":{"xi":[1]}}}"#);
    let o = run(&["solve-forward", "--spec", spec.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("field=schema"));
}

#[test]
fn huge_coefficient_exits_with_a_convergence_report() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(
        tmp.path(),
        r#"{"schema":"fracdirac.problem/1","betas":[2],"coefficients":[{"constant":1e6}],
            "time":{"end":1,"steps":256},"space":{"lattice":{"nodes":[16],"lengths":[6.283185307179586]}},
            "initial_data":["zero",{"modes":[{"wavevector":[1],"sin":1}]}]}"#,
    );
    let out = tmp.path().join("out");
    let o = run(&["solve-forward", "--spec", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("code=convergence"));
    let m = manifest(&out);
    assert_eq!(m["exit_code"], 2);
    assert_eq!(m["convergence"][0]["pass"], false);
    assert!(m["convergence"][0]["c_estimate"].as_f64().unwrap() > 1.0);
}

#[test]
fn dirac_and_closed_form_samples_run() {
    let tmp = tempfile::tempdir().unwrap();
    for name in ["wave_dirac.json", "telegraph_closed_form.json"] {
        let out = tmp.path().join(name);
        let o = run(&["solve-forward", "--spec", sample(name).to_str().unwrap(), "--out", out.to_str().unwrap(), "--threads", "2"]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        assert!(out.join("solution.csv").exists());
    }
    let header = std::fs::read_to_string(tmp.path().join("wave_dirac.json/solution.csv")).unwrap();
    assert!(header.starts_with("t,point,x0,e1_re,e1_im,f_re,f_im,f_plus_re,f_plus_im\n"));
}

fn theta_rows(dir: &Path) -> Vec<(f64, f64, bool)> {
    rows(&dir.join("theta.csv"))
        .into_iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2] == "1"))
        .collect()
}

#[test]
fn inverse_recovers_the_wave_speed() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["solve-inverse", "--spec", sample("inverse_wave.json").to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let worst = theta_rows(tmp.path()).into_iter().filter(|r| !r.2).map(|r| (r.1 - 4.0).abs() / 4.0).fold(0.0, f64::max);
    assert!(worst < 1e-3, "{worst:e}");
    let m = manifest(tmp.path());
    assert_eq!(m["convergence"][0]["conditions"][3]["status"], "pass");
}

#[test]
fn inverse_recovers_a_power_coefficient() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["solve-inverse", "--spec", sample("inverse_power.json").to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let worst = theta_rows(tmp.path())
        .into_iter()
        .filter(|r| !r.2 && r.0 >= 0.1)
        .map(|r| (r.1 - r.0.powf(1.5)).abs() / r.0.powf(1.5))
        .fold(0.0, f64::max);
    assert!(worst < 1e-2, "{worst:e}");
}

#[test]
fn traces_with_a_zero_of_h2_are_masked() {
    let tmp = tempfile::tempdir().unwrap();
    // h2 = |t − 1/2| and h1 = ∫h2, so theta = 1 wherever h2 ≠ 0
    let (mut h1, mut h2) = (String::from("t,h1\n"), String::from("t,h2\n"));
    for k in 0..=200 {
        let t = k as f64 / 200.0;
        let int = if t <= 0.5 { 0.5 * t - t * t / 2.0 } else { 0.125 + (t - 0.5).powi(2) / 2.0 };
        h1 += &format!("{t},{int}\n");
        h2 += &format!("{t},{}\n", (t - 0.5).abs());
    }
    let (p1, p2) = (tmp.path().join("h1.csv"), tmp.path().join("h2.csv"));
    std::fs::write(&p1, h1).unwrap();
    std::fs::write(&p2, h2).unwrap();
    let out = tmp.path().join("out");
    let o = run(&[
        "solve-inverse", "--h1", p1.to_str().unwrap(), "--h2", p2.to_str().unwrap(), "--alpha", "1", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = theta_rows(&out);
    assert!(rows[100].2 && rows[100].1.is_nan());
    let m = manifest(&out);
    assert_eq!(m["convergence"][0]["warning_count"], 1);
    assert_eq!(m["convergence"][0]["masked"]["SmallH2"], 1);
    assert_eq!(m["convergence"][0]["conditions"][2]["status"], "fail");
}

#[test]
fn eval_tables_match_elementary_functions() {
    let table = |args: &[&str]| -> Vec<(f64, f64)> {
        let o = run(args);
        assert!(o.status.success(), "{}", stderr(&o));
        String::from_utf8(o.stdout)
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| {
                let c: Vec<f64> = l.split(',').map(|v| v.parse().unwrap()).collect();
                (c[0], c[1])
            })
            .collect()
    };
    for (x, v) in table(&["eval-ml", "--function", "ml", "--params", "alpha=1,beta=1", "--range", "-1:1:41"]) {
        assert!((v - x.exp()).abs() < 1e-12);
    }
    for (x, v) in table(&["eval-ml", "--function", "kilbas-saigo", "--params", "alpha=1,beta=1,gamma=0,lambda=1", "--range", "-1:1:21"]) {
        assert!((v - x.exp()).abs() < 1e-12);
    }
    for (x, v) in table(&["eval-ml", "--function", "bessel-j", "--params", "nu=0.5", "--range", "0.5:8:16"]) {
        assert!((v - (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sin()).abs() < 1e-12);
    }
    let t = table(&["eval-ml", "--function", "ml-multi", "--params", "a=1;1,b=1,coeffs=1;-1", "--range", "0:1:5"]);
    // E_{(1,1),1}(x, −x) = Σ (x − x)^k = 1
    assert!(t.iter().all(|(_, v)| (v - 1.0).abs() < 1e-12));

    let o = run(&["eval-ml", "--function", "zeta"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("field=function"));
}

#[test]
fn selfcheck_passes_and_isolates_a_corrupted_gamma() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["selfcheck", "--level", "fast", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["pass"], true);
    assert!(tmp.path().join("selfcheck.json").exists());

    let o = run(&["selfcheck", "--inject-fault", "gamma"]);
    assert_eq!(o.status.code(), Some(3));
    let summary: Value = serde_json::from_slice(&o.stdout).unwrap();
    let status = |name: &str| summary["suites"].as_array().unwrap().iter().find(|s| s["suite"] == name).unwrap()["pass"].clone();
    assert_eq!(status("witt"), true);
    assert_eq!(status("timefrac"), false);
    assert!(stderr(&o).contains("code=selfcheck_failed"));
}
