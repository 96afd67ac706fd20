use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn goldens() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn circgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circgeo"))
        .current_dir(fixtures())
        .args(args)
        .output()
        .expect("spawn circgeo")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn failure_manifest_exit_codes() {
    let cases = read_json(&fixtures().join("failures.json"));
    for case in cases.as_array().unwrap() {
        let args: Vec<&str> = case["args"]
            .as_array()
            .unwrap()
            .iter()
            .map(|a| a.as_str().unwrap())
            .collect();
        let out = circgeo(&args);
        assert_eq!(
            out.status.code(),
            Some(case["exit"].as_i64().unwrap() as i32),
            "{}: stderr {}",
            case["case"],
            String::from_utf8_lossy(&out.stderr)
        );
        if case["exit"] != 1 {
            assert!(!out.stderr.is_empty(), "{} printed no diagnostic", case["case"]);
        }
    }
}

#[test]
fn analyze_matches_symbolic_goldens() {
    let mut seen = 0;
    for entry in std::fs::read_dir(goldens()).unwrap() {
        let golden = read_json(&entry.unwrap().path());
        let fixture = golden["fixture"].as_str().unwrap();
        let report = json_of(&circgeo(&["analyze", fixture]));
        for side in ["base", "associated"] {
            let got = &report[side]["curvature"];
            for key in ["riemann", "ricci", "tau", "tau_star"] {
                assert_eq!(got[key], golden[side][key], "{fixture} {side} {key}");
            }
        }
        seen += 1;
    }
    assert!(seen >= 7);
}

#[test]
fn float_mode_tracks_the_goldens() {
    let golden = read_json(&goldens().join("circulant_quadratic.json"));
    let report = json_of(&circgeo(&["analyze", "--float", "circulant_quadratic.json"]));
    let rational = |v: &Value| -> f64 {
        let s = v.as_str().unwrap();
        match s.split_once('/') {
            Some((p, q)) => p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
            None => s.parse().unwrap(),
        }
    };
    for side in ["base", "associated"] {
        let want = golden[side]["riemann"].as_object().unwrap();
        for (k, w) in want {
            let got = report[side]["curvature"]["riemann"][k].as_f64().unwrap();
            let w = rational(w);
            assert!((got - w).abs() <= 1e-9 * (1.0 + w.abs()), "{side} {k}: {got} vs {w}");
        }
        let tau = report[side]["curvature"]["tau"].as_f64().unwrap();
        assert!((tau - rational(&golden[side]["tau"])).abs() < 1e-9);
    }
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        vec!["analyze", "circulant_quadratic.json"],
        vec!["analyze", "--float", "lie_family2_generic.json"],
        vec!["verify", "q-geometry", "--samples", "3", "--seed", "9", "--json"],
        vec!["sectional", "circulant_constant.json", "--vector", "2,-1,1/3"],
    ] {
        let a = circgeo(&args);
        let b = circgeo(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn analyze_out_writes_the_same_report() {
    let dir = std::env::temp_dir().join(format!("circgeo-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = circgeo(&["analyze", "lie_family1.json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let direct = circgeo(&["analyze", "lie_family1.json"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn family_reports_carry_the_closed_forms() {
    let r = json_of(&circgeo(&["analyze", "lie_family1.json"]));
    let a = &r["associated"];
    assert_eq!(a["curvature"]["tau_star"], "0");
    assert_eq!(a["class"]["l2"]["verdict"], "holds");
    assert_eq!(a["class"]["l1"]["verdict"], "fails");
    assert_eq!(a["class"]["einstein"]["verdict"], "holds");
    assert_eq!(r["q_geometry"]["e1"]["planes"][0]["sectional"], "-1/2");

    let r = json_of(&circgeo(&["analyze", "lie_family2.json"]));
    let a = &r["associated"];
    assert_eq!(a["curvature"]["tau"], "12");
    assert_eq!(a["curvature"]["tau_star"], "-12");
    assert_eq!(a["curvature"]["ricci"][0][0], "-4");
    for class in ["l0", "l1", "l2"] {
        assert_eq!(a["class"][class]["verdict"], "holds", "{class}");
    }
    for (name, t) in r["theorems"].as_object().unwrap() {
        assert_ne!(t["status"], "fails", "{name}");
    }
}

#[test]
fn sectional_table_spot_values() {
    let out = circgeo(&["sectional", "lie_family1.json", "--vector", "1,0,0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("cos phi       0"), "{text}");
    let plane = text.lines().find(|l| l.starts_with("x,Qx")).unwrap();
    assert!(plane.contains("-1/2"), "{plane}");

    // the table still prints when a value is undefined
    let out = circgeo(&["sectional", "lie_family2.json", "--vector", "1,1,-1"]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("limit"), "{text}");
}

#[test]
fn verify_json_lists_every_suite() {
    let v = json_of(&circgeo(&["verify", "all", "--samples", "2", "--json"]));
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["suite"].as_str().unwrap())
        .collect();
    assert_eq!(names, circgeo::suites::SUITES);
    assert!(v.as_array().unwrap().iter().all(|s| s["passed"] == true));
}

#[test]
fn failed_checks_carry_a_replay_instance() {
    let out = circgeo(&[
        "verify",
        "con-ae",
        "--samples",
        "2",
        "--seed",
        "3",
        "--tolerance",
        "1e-30",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let failure = &v[0]["failures"][0];
    assert_eq!(failure["instance"]["seed"], 3);
    assert!(failure["instance"]["circulant"]["payload"].is_object(), "{failure}");
}
