use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ds3kg")).args(args).output().expect("spawn ds3kg")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn verify_clean_case_passes() {
    let o = run(&["verify", "--case", "g3_2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["cases"][0]["case"], "g3_2");
    assert!(v["cases"][0]["checks"]["KGeq"]["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn perturbed_fields_are_detected() {
    for p in ["chi:1e-3", "form:1e-3"] {
        let o = run(&["verify", "--case", "g3_2", "--perturb", p]);
        assert_eq!(code(&o), 1, "{p}");
        assert_eq!(stdout_json(&o)["pass"], false);
    }
}

#[test]
fn reports_are_reproducible() {
    let a = run(&["verify", "--case", "g2_1,g3_3a", "--a", "0.7", "--seed", "9"]);
    let b = run(&["verify", "--case", "g2_1,g3_3a", "--a", "0.7", "--seed", "9"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["verify", "--case", "g1_3a"][..],
        &["chart", "--case", "g3_3a"],
        &["verify", "--case", "nope"],
        &["verify", "--zeta", "0.3", "--case", "g3_1"],
        &["solve", "--case", "g3_4", "--grid", "0:1:1,0:1:2,0:1:2"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn free_field_case_is_refused() {
    let o = run(&["solve", "--case", "g4_1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("out of scope"));
}

#[test]
fn legendre_case_summary_reports_order() {
    let dir = std::env::temp_dir().join(format!("ds3kg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("summary.json");
    let o = run(&["solve", "--case", "g3_4", "--summary", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = String::from_utf8(o.stdout).unwrap();
    assert!(csv.starts_with("q1,q2,u1,re_phi,im_phi,residual"));
    assert_eq!(csv.lines().count(), 1001);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // sigma = sqrt(1 - m^2 - 6 zeta) at m = 0.5
    let sigma = v["record"]["sigma"][0].as_f64().unwrap();
    assert!((sigma - 0.75f64.sqrt()).abs() < 1e-14);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-6);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn chart_points_lie_on_hyperboloid() {
    let o = run(&["chart", "--case", "g3_5", "--n", "7"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut rows = 0;
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let x: Vec<f64> = f[4..8].iter().map(|s| s.parse().unwrap()).collect();
        let r = x[0] * x[0] - x[1] * x[1] - x[2] * x[2] - x[3] * x[3] + 1.0;
        assert!(r.abs() < 1e-12, "{line}");
        assert!(f[8].parse::<f64>().unwrap() < 1e-12);
        rows += 1;
    }
    assert_eq!(rows, 343);
}

#[test]
fn catalog_lists_every_row() {
    let o = run(&["catalog", "--a", "2"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["rows"].as_array().unwrap().len(), 13);
    let g33 = v["rows"].as_array().unwrap().iter().find(|r| r["id"] == "g3_3a").unwrap();
    assert_eq!(g33["parameter_a"], 2.0);
}
