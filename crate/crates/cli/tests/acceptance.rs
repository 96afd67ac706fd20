//! End-to-end acceptance run: one pass/fail line per criterion.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};

use circgeo::analyze::{analyze, AnalyzeOptions};
use circgeo::instance::Instance;
use circgeo::suites::{run_suite, SuiteResult, VerifyOptions};
use circulant_geometry::ArithmeticMode;
use serde_json::Value;

const SEED: u64 = 20_240_601;

type Verdict = Result<String, String>;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn suite(name: &str, samples: usize) -> SuiteResult {
    let opts = VerifyOptions {
        samples,
        seed: SEED,
        ..VerifyOptions::default()
    };
    run_suite(name, &opts).expect("known suite").remove(0)
}

/// Every listed check ran and never failed; exact suites also need zero residuals.
fn require(r: &SuiteResult, checks: &[&str]) -> Verdict {
    let mut parts = Vec::new();
    for &name in checks {
        let s = r
            .stats(name)
            .ok_or_else(|| format!("{}: check {name} missing", r.suite))?;
        if s.runs == 0 || s.failures > 0 {
            return Err(format!(
                "{}: {name} failed {}/{} (max residual {:e})",
                r.suite, s.failures, s.runs, s.max_residual
            ));
        }
        if r.mode == ArithmeticMode::Exact && s.max_residual != 0.0 {
            return Err(format!(
                "{}: {name} residual {:e} is not exactly zero",
                r.suite, s.max_residual
            ));
        }
        parts.push(format!("{name} {}x max {:.1e}", s.runs, s.max_residual));
    }
    if let Some(f) = r.failures.first() {
        return Err(format!("{}: sample {} failed {}", r.suite, f.sample, f.check));
    }
    Ok(parts.join(", "))
}

fn report(fixture: &str) -> Value {
    let inst = Instance::read(&fixtures().join(fixture)).expect("fixture");
    analyze(&inst, &AnalyzeOptions::default()).expect("analysis")
}

fn spot(what: &str, got: &Value, want: &str) -> Verdict {
    if got == want {
        Ok(format!("{what} = {want}"))
    } else {
        Err(format!("{what}: expected {want}, got {got}"))
    }
}

fn both(a: Verdict, b: Verdict) -> Verdict {
    Ok(format!("{}; {}", a?, b?))
}

fn criterion1(lie1: &SuiteResult) -> Verdict {
    let r = report("lie_family1.json");
    let mut spots = Vec::new();
    for k in ["1212", "1213", "1313", "1323", "2323"] {
        spots.push(spot(
            &format!("R~{k}"),
            &r["associated"]["curvature"]["riemann"][k],
            "1/2",
        )?);
    }
    // R~1223 = -R~1232
    spots.push(spot(
        "R~1223",
        &r["associated"]["curvature"]["riemann"]["1223"],
        "-1/2",
    )?);
    both(require(lie1, &["components"]), Ok(spots.join(", ")))
}

fn criterion2(lie1: &SuiteResult) -> Verdict {
    let r = report("lie_family1.json");
    let c = &r["associated"]["class"];
    let spots = [
        spot("tau~*", &r["associated"]["curvature"]["tau_star"], "0")?,
        spot("L2", &c["l2"]["verdict"], "holds")?,
        spot("L1", &c["l1"]["verdict"], "fails")?,
    ];
    both(
        require(lie1, &["tau-star-zero", "einstein", "ricci", "l2", "l1-iff-flat"]),
        Ok(spots.join(", ")),
    )
}

fn criterion3(lie1: &SuiteResult) -> Verdict {
    let r = report("lie_family1.json");
    both(
        require(lie1, &["sectional"]),
        spot("k~(e1,Qe1)", &r["q_geometry"]["e1"]["planes"][0]["sectional"], "-1/2"),
    )
}

fn criterion4(lie2: &SuiteResult) -> Verdict {
    let r = report("lie_family2.json");
    let a = &r["associated"];
    let spots = [
        spot("nabla~Q residual", &a["class"]["l0"]["residual"], "0")?,
        spot("tau~", &a["curvature"]["tau"], "12")?,
        spot("tau~*", &a["curvature"]["tau_star"], "-12")?,
        spot("rho~11", &a["curvature"]["ricci"][0][0], "-4")?,
        spot("rho~12", &a["curvature"]["ricci"][0][1], "2")?,
        spot("k~(e1,Qe1)", &r["q_geometry"]["e1"]["planes"][0]["sectional"], "2")?,
    ];
    both(
        require(
            lie2,
            &[
                "nabla-q-zero",
                "components",
                "ricci",
                "tau",
                "tau-star",
                "tau-star-is-minus-tau",
                "sectional",
                "classes",
            ],
        ),
        Ok(spots.join(", ")),
    )
}

fn criterion5(con: &SuiteResult, lie1: &SuiteResult, lie2: &SuiteResult) -> Verdict {
    Ok(format!(
        "{}; {}; {}",
        require(con, &["con-AE", "con-AE-lie-exact"])?,
        require(lie1, &["con-AE"])?,
        require(lie2, &["con-AE"])?
    ))
}

fn criterion6(rec: &SuiteResult) -> Verdict {
    require(
        rec,
        &[
            "reconstruct-definite",
            "reconstruct-indefinite",
            "reconstruct-associated",
            "curvature-symmetries",
        ],
    )
}

fn criterion7(l2: &SuiteResult, lie1: &SuiteResult, lie2: &SuiteResult) -> Verdict {
    Ok(format!(
        "{}; {}; {}",
        require(l2, &["tensor-predicate-agreement", "predicate-agreement", "nesting"])?,
        require(lie1, &["predicate-agreement", "nesting"])?,
        require(lie2, &["predicate-agreement", "nesting"])?
    ))
}

fn criterion8(l0: &SuiteResult) -> Verdict {
    let detail = require(
        l0,
        &[
            "constructed-nabla",
            "constructed-gradient",
            "gradient-iff-nabla",
            "perturbed-leaves-l0",
        ],
    )?;
    let worst = l0.stats("constructed-nabla").map_or(f64::NAN, |s| s.max_residual);
    if worst <= 1e-9 {
        Ok(detail)
    } else {
        Err(format!("nabla Q residual {worst:e} above 1e-9"))
    }
}

fn criterion9(q: &SuiteResult) -> Verdict {
    require(
        q,
        &[
            "grid-nondegenerate",
            "obmu",
            "lem2-location",
            "lem2-degenerate",
            "lem2-gram",
            "limit-sectional",
            "limit-ricci",
        ],
    )
}

fn criterion10(q: &SuiteResult) -> Verdict {
    require(q, &["ricc", "ricci-q-invariance", "obmu-l1", "ricc-l1"])
}

fn criterion11() -> Verdict {
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(fixtures().join("failures.json")).unwrap()).unwrap();
    let mut seen = Vec::new();
    for case in [
        "degenerate-plane",
        "isotropic-direction",
        "non-q-basis",
        "positivity-violation",
    ] {
        let entry = manifest
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["case"] == case)
            .ok_or_else(|| format!("{case} missing from the manifest"))?;
        let args: Vec<&str> = entry["args"]
            .as_array()
            .unwrap()
            .iter()
            .map(|a| a.as_str().unwrap())
            .collect();
        let out = Command::new(env!("CARGO_BIN_EXE_circgeo"))
            .current_dir(fixtures())
            .args(&args)
            .output()
            .map_err(|e| e.to_string())?;
        let want = entry["exit"].as_i64().unwrap() as i32;
        if out.status.code() != Some(want) {
            return Err(format!("{case}: exit {:?}, expected {want}", out.status.code()));
        }
        seen.push(format!("{case} -> {want}"));
    }
    Ok(seen.join(", "))
}

fn main() -> ExitCode {
    let lie1 = suite("lie-family1", 100);
    let lie2 = suite("lie-family2", 100);
    let con = suite("con-ae", 500);
    let rec = suite("reconstruct-r", 500);
    let l2 = suite("l2-equivalence", 200);
    let l0 = suite("l0-pde", 200);
    let q = suite("q-geometry", 20);

    let rows: [(&str, Verdict); 11] = [
        ("family-1 component table", criterion1(&lie1)),
        ("family-1 Einstein verdict", criterion2(&lie1)),
        ("family-1 sectional curvature", criterion3(&lie1)),
        ("family-2 table", criterion4(&lie2)),
        ("con-AE relation", criterion5(&con, &lie1, &lie2)),
        ("dimension-3 reconstruction", criterion6(&rec)),
        ("predicate equivalences", criterion7(&l2, &lie1, &lie2)),
        ("L0 equivalence", criterion8(&l0)),
        ("Q-plane geometry", criterion9(&q)),
        ("Ricci curvature closed form", criterion10(&q)),
        ("failure-path coverage", criterion11()),
    ];
    let mut failed = 0;
    for (i, (name, v)) in rows.iter().enumerate() {
        match v {
            Ok(detail) => println!("criterion {} [{name}]: pass ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", rows.len() - failed, rows.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
