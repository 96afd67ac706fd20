//! Randomised verification suites behind `circgeo verify`.
//!
//! Sample `i` of a run with seed `s` draws from its own stream
//! ([`sample::rng_for`]), so results do not depend on scheduling. Samples run
//! in parallel and are reduced in index order.

use circulant_geometry::classify::{
    check_con_ae, construct_l0_jet, is_l0_gradient, is_l0_nabla, is_l1_components, is_l1_quantified, is_l2_components,
    is_l2_quantified, reconstruct_r, DEFAULT_SAMPLES,
};
use circulant_geometry::jet::{associated_jet, curvature_bundle, CirculantJet, MetricJet2};
use circulant_geometry::lie::{family1_oracle, family2_oracle, nabla_q_invariant, FamilyParams};
use circulant_geometry::qgeom::{
    degenerate_numerator_closed_form, degenerate_plane_numerator, gtilde_gram, gtilde_gram_direct, is_isotropic,
    plane_gram_det, plane_nondegenerate, q_basis_data, q_basis_report, q_plane_curvature_l1, ricci_l1,
    sectional_curvature, vector_with_angle, verify_limit_ricci, verify_limit_sectional, Evaluation,
};
use circulant_geometry::tensor::{compare_rank4, compare_sym};
use circulant_geometry::{
    apply_q, circulant_sym, sample, ArithmeticMode, Check, Rank4Tensor3, Rational, Scalar, SymMatrix3, Tolerance,
    Vector3,
};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analyze::{theorem_table, AnalyzeOptions, Geometry, Theorem, TheoremTable};
use crate::format::{float_json, matrix_json, ReportScalar};
use crate::instance::{Instance, Model, Payload};
use crate::CliError;

pub const SUITES: [&str; 8] = [
    "con-ae",
    "reconstruct-r",
    "l2-equivalence",
    "l1-scalar",
    "l0-pde",
    "q-geometry",
    "lie-family1",
    "lie-family2",
];

/// Points of the `cos φ` grid used by `q-geometry`.
pub const GRID_POINTS: usize = 50;

/// Random vectors per sampled class predicate inside the suites.
const PREDICATE_SAMPLES: usize = 8;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: Tolerance,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 100,
            seed: 0,
            tolerance: Tolerance::default(),
        }
    }
}

/// Result of one named check on one sample.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub check: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub bound: f64,
}

impl Outcome {
    pub fn from_check<S: Scalar>(check: &'static str, c: &Check<S>) -> Self {
        Outcome {
            check,
            passed: c.holds(),
            residual: c.residual.to_f64(),
            bound: c.bound,
        }
    }

    /// A yes/no statement; the residual is `0` or `1`.
    pub fn flag(check: &'static str, passed: bool) -> Self {
        Outcome {
            check,
            passed,
            residual: if passed { 0.0 } else { 1.0 },
            bound: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckStats {
    pub check: &'static str,
    pub runs: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub max_bound: f64,
}

#[derive(Debug, Clone)]
pub struct Failure {
    pub check: &'static str,
    pub sample: usize,
    pub residual: f64,
    pub bound: f64,
    /// Error message when the sample could not be evaluated.
    pub error: Option<String>,
    /// The instance, in the input format where one exists.
    pub instance: Value,
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub mode: ArithmeticMode,
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<CheckStats>,
    pub failures: Vec<Failure>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks.iter().all(|c| c.runs > 0)
    }

    pub fn stats(&self, check: &str) -> Option<&CheckStats> {
        self.checks.iter().find(|c| c.check == check)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "mode": self.mode.as_str(),
            "samples": self.samples,
            "seed": self.seed,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "check": c.check,
                "runs": c.runs,
                "failures": c.failures,
                "max_residual": float_json(c.max_residual),
                "max_bound": float_json(c.max_bound),
            })).collect::<Vec<_>>(),
            "failures": self.failures.iter().map(failure_json).collect::<Vec<_>>(),
        })
    }

    /// Human-readable summary; at most `max_failures` failures are listed.
    pub fn summary(&self, max_failures: usize) -> String {
        let mut out = format!(
            "suite {} ({}, {} samples, seed {}): {}\n",
            self.suite,
            self.mode.as_str(),
            self.samples,
            self.seed,
            if self.passed() { "pass" } else { "FAIL" }
        );
        for c in &self.checks {
            out.push_str(&format!(
                "  {:<28} {:>5}/{:<5} max residual {:<12.3e} max bound {:.3e}\n",
                c.check,
                c.runs - c.failures,
                c.runs,
                c.max_residual,
                c.max_bound
            ));
        }
        for f in self.failures.iter().take(max_failures) {
            out.push_str(&format!(
                "  FAIL {} on sample {}: residual {:e}, bound {:e}\n",
                f.check, f.sample, f.residual, f.bound
            ));
            if let Some(e) = &f.error {
                out.push_str(&format!("    error: {e}\n"));
            }
            out.push_str(&format!(
                "    replay: {}\n",
                serde_json::to_string(&f.instance).unwrap_or_default()
            ));
        }
        if self.failures.len() > max_failures {
            out.push_str(&format!("  ... {} more failures\n", self.failures.len() - max_failures));
        }
        out
    }
}

fn failure_json(f: &Failure) -> Value {
    json!({
        "check": f.check,
        "sample": f.sample,
        "residual": float_json(f.residual),
        "bound": float_json(f.bound),
        "error": f.error,
        "instance": f.instance,
    })
}

struct SampleRun {
    outcomes: Vec<Outcome>,
    error: Option<String>,
    instance: Value,
}

/// Runs `body` on every sample index and reduces in index order.
fn drive<F>(suite: &'static str, mode: ArithmeticMode, opts: &VerifyOptions, body: F) -> SuiteResult
where
    F: Fn(usize, &mut rand_chacha::ChaCha8Rng, &mut Value) -> Result<Vec<Outcome>, CliError> + Sync,
{
    let runs: Vec<SampleRun> = (0..opts.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample::rng_for(opts.seed, i as u64);
            let mut instance = json!({ "seed": opts.seed, "sample": i });
            match body(i, &mut rng, &mut instance) {
                Ok(outcomes) => SampleRun {
                    outcomes,
                    error: None,
                    instance,
                },
                Err(e) => SampleRun {
                    outcomes: vec![Outcome::flag("evaluation", false)],
                    error: Some(e.to_string()),
                    instance,
                },
            }
        })
        .collect();

    let mut checks: Vec<CheckStats> = Vec::new();
    let mut failures = Vec::new();
    for (i, run) in runs.into_iter().enumerate() {
        for o in run.outcomes {
            let pos = match checks.iter().position(|c| c.check == o.check) {
                Some(p) => p,
                None => {
                    checks.push(CheckStats {
                        check: o.check,
                        runs: 0,
                        failures: 0,
                        max_residual: 0.0,
                        max_bound: 0.0,
                    });
                    checks.len() - 1
                }
            };
            let c = &mut checks[pos];
            c.runs += 1;
            c.max_residual = if o.residual.is_nan() {
                f64::NAN
            } else {
                c.max_residual.max(o.residual)
            };
            c.max_bound = c.max_bound.max(o.bound);
            if !o.passed {
                c.failures += 1;
                failures.push(Failure {
                    check: o.check,
                    sample: i,
                    residual: o.residual,
                    bound: o.bound,
                    error: run.error.clone(),
                    instance: run.instance.clone(),
                });
            }
        }
    }
    SuiteResult {
        suite,
        mode,
        samples: opts.samples,
        seed: opts.seed,
        checks,
        failures,
    }
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<Vec<SuiteResult>, CliError> {
    if name == "all" {
        return Ok(SUITES.iter().map(|s| run_one(s, opts)).collect());
    }
    match SUITES.iter().find(|s| **s == name) {
        Some(s) => Ok(vec![run_one(s, opts)]),
        None => Err(CliError::UnknownSuite(name.to_string())),
    }
}

fn run_one(name: &'static str, opts: &VerifyOptions) -> SuiteResult {
    use ArithmeticMode::*;
    match name {
        "con-ae" => drive(name, Float, opts, |i, rng, inst| con_ae(i, rng, inst, &opts.tolerance)),
        "reconstruct-r" => drive(name, Float, opts, |i, rng, inst| {
            reconstruct(i, rng, inst, &opts.tolerance)
        }),
        "l2-equivalence" => drive(name, Float, opts, |i, rng, inst| {
            l2_equivalence(i, rng, inst, &opts.tolerance)
        }),
        "l1-scalar" => drive(name, Float, opts, |i, rng, inst| {
            l1_scalar(i, rng, inst, &opts.tolerance)
        }),
        "l0-pde" => drive(name, Float, opts, |_, rng, inst| l0_pde(rng, inst, &opts.tolerance)),
        "q-geometry" => drive(name, Float, opts, |_, rng, inst| q_geometry(rng, inst, &opts.tolerance)),
        "lie-family1" => drive(name, Exact, opts, |_, rng, inst| {
            lie_family(1, rng, inst, &opts.tolerance)
        }),
        "lie-family2" => drive(name, Exact, opts, |_, rng, inst| {
            lie_family(2, rng, inst, &opts.tolerance)
        }),
        _ => unreachable!("suite names are checked by run_suite"),
    }
}

fn circulant_instance<S: Scalar>(cj: &CirculantJet<S>, mode: ArithmeticMode) -> Value {
    // sampled values are dyadic, so the conversion is exact
    let exact = cj.map(|x| <Rational as Scalar>::from_f64(x.to_f64()).unwrap_or_default());
    let mut inst = Instance::new(Payload::Circulant(exact));
    inst.arithmetic = mode;
    inst.to_json()
}

fn family_instance(params: &FamilyParams<Rational>) -> Value {
    Instance::new(Payload::Family(params.clone())).to_json()
}

fn metric_jet_json(mj: &MetricJet2<f64>) -> Value {
    json!({
        "kind": "metric-jet",
        "metric": matrix_json(mj.metric()),
        "first": mj.first().iter().map(matrix_json).collect::<Vec<_>>(),
        "second": mj.second().iter().map(|r| r.iter().map(matrix_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn l0_jet<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> CirculantJet<S> {
    let base: CirculantJet<S> = sample::circulant_jet(rng);
    construct_l0_jet(base.a, base.b, base.db, base.d2b)
}

fn random_family<S: Scalar, R: Rng + ?Sized>(family: u8, rng: &mut R) -> FamilyParams<S> {
    match family {
        1 => FamilyParams::Family1(std::array::from_fn(|_| sample::scalar(rng, -3, 3))),
        _ => FamilyParams::Family2(std::array::from_fn(|_| sample::scalar(rng, -3, 3))),
    }
}

fn lower_params(p: &FamilyParams<Rational>) -> FamilyParams<f64> {
    match p {
        FamilyParams::Family1(l) => FamilyParams::Family1(l.clone().map(|x| x.to_f64())),
        FamilyParams::Family2(l) => FamilyParams::Family2(l.clone().map(|x| x.to_f64())),
    }
}

fn family_model<S: Scalar>(p: FamilyParams<S>) -> Model<S> {
    Model::Lie {
        algebra: p.algebra(),
        params: Some(p),
    }
}

fn analysis_options(tol: &Tolerance) -> AnalyzeOptions {
    AnalyzeOptions {
        samples: PREDICATE_SAMPLES,
        tolerance: *tol,
        ..AnalyzeOptions::default()
    }
}

/// Theorem table without the angle grid.
fn table<S: ReportScalar>(geo: &Geometry<S>, tol: &Tolerance) -> Result<TheoremTable<S>, CliError> {
    let (base, assoc) = geo.class_reports(&analysis_options(tol));
    theorem_table(geo, &base, &assoc, None, tol)
}

/// The row must exist and hold; a skipped row counts as a failure.
fn required<S: ReportScalar>(check: &'static str, t: &TheoremTable<S>, key: &str) -> Outcome {
    match t.get(key) {
        Some(row @ (Theorem::Checked(_) | Theorem::Grid(_) | Theorem::Agreement { .. })) => {
            let (residual, bound) = row.residual();
            Outcome {
                check,
                passed: row.passed() == Some(true),
                residual,
                bound,
            }
        }
        _ => Outcome::flag(check, false),
    }
}

fn con_ae(
    i: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
    inst: &mut Value,
    tol: &Tolerance,
) -> Result<Vec<Outcome>, CliError> {
    let cj: CirculantJet<f64> = sample::circulant_jet(rng);
    inst["circulant"] = circulant_instance(&cj, ArithmeticMode::Float);
    let geo = Geometry::new(&Model::Circulant(cj), tol)?;
    let mut out = vec![Outcome::from_check(
        "con-AE",
        &check_con_ae(&geo.base, &geo.associated, &geo.g, &geo.gt, tol),
    )];

    let params: FamilyParams<Rational> = random_family(1 + (i % 2) as u8, rng);
    inst["lie"] = family_instance(&params);
    let lie = Geometry::new(&family_model(params), tol)?;
    out.push(Outcome::from_check(
        "con-AE-lie-exact",
        &check_con_ae(&lie.base, &lie.associated, &lie.g, &lie.gt, tol),
    ));
    Ok(out)
}

fn reconstruct(
    i: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
    inst: &mut Value,
    tol: &Tolerance,
) -> Result<Vec<Outcome>, CliError> {
    let (mj, label) = match i % 3 {
        0 => (sample::metric_jet::<f64, _>(rng, false)?, "reconstruct-definite"),
        1 => (sample::metric_jet::<f64, _>(rng, true)?, "reconstruct-indefinite"),
        _ => {
            let cj: CirculantJet<f64> = sample::circulant_jet(rng);
            inst["circulant"] = circulant_instance(&cj, ArithmeticMode::Float);
            (associated_jet(&cj)?, "reconstruct-associated")
        }
    };
    inst["jet"] = metric_jet_json(&mj);
    let b = curvature_bundle(&mj, mj.inverse_metric());
    let (r, s) = compare_rank4(&reconstruct_r(&b.ricci, &b.tau, mj.metric()), &b.riemann);
    Ok(vec![
        Outcome::from_check(label, &tol.judge(&r, &s)),
        Outcome::from_check(
            "curvature-symmetries",
            &tol.judge(&b.symmetry_residual(mj.inverse_metric()), &b.scale_of()),
        ),
    ])
}

/// Algebraic curvature tensors: generic, with the `L2` pattern and with the
/// `L1` pattern.
fn random_curvature_tensor<R: Rng + ?Sized>(kind: usize, rng: &mut R) -> Rank4Tensor3<f64> {
    match kind {
        0 => {
            let g = circulant_sym(sample::scalar(rng, 2, 4), sample::scalar(rng, 0, 1));
            let rho = sample::sym_matrix(rng, -2, 2);
            reconstruct_r(&rho, &sample::scalar(rng, -3, 3), &g)
        }
        1 => {
            let (d, o): (f64, f64) = (sample::scalar(rng, -2, 2), sample::scalar(rng, -2, 2));
            Rank4Tensor3::from_independent([d, d, d, o, -o, o])
        }
        _ => {
            let d: f64 = sample::scalar(rng, -2, 2);
            Rank4Tensor3::from_independent([d, d, d, -d, d, -d])
        }
    }
}

fn predicates_agree<S: Scalar>(r: &Rank4Tensor3<S>, seed: u64, tol: &Tolerance) -> bool {
    let l1 = is_l1_components(r, tol).holds();
    let l2 = is_l2_components(r, tol).holds();
    l1 == is_l1_quantified(r, DEFAULT_SAMPLES, seed, tol).holds()
        && l2 == is_l2_quantified(r, DEFAULT_SAMPLES, seed, tol).holds()
        && (!l1 || l2)
}

fn l2_equivalence(
    i: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
    inst: &mut Value,
    tol: &Tolerance,
) -> Result<Vec<Outcome>, CliError> {
    let mut out = Vec::new();

    let cj: CirculantJet<f64> = sample::circulant_jet(rng);
    inst["generic"] = circulant_instance(&cj, ArithmeticMode::Float);
    let geo = Geometry::new(&Model::Circulant(cj), tol)?;
    let (base, assoc) = geo.class_reports(&analysis_options(tol));
    let t = theorem_table(&geo, &base, &assoc, None, tol)?;
    out.push(required("thL2-l2", &t, "thL2-l2"));
    out.push(required("nesting", &t, "nesting"));
    out.push(Outcome::flag(
        "predicate-agreement",
        base.predicates_agree() && assoc.predicates_agree(),
    ));

    let cj: CirculantJet<f64> = l0_jet(rng);
    inst["l0"] = circulant_instance(&cj, ArithmeticMode::Float);
    let geo = Geometry::new(&Model::Circulant(cj), tol)?;
    let (base, assoc) = geo.class_reports(&analysis_options(tol));
    out.push(Outcome::flag("l2-both-sides", base.l2.holds() && assoc.l2.holds()));
    let t = theorem_table(&geo, &base, &assoc, None, tol)?;
    for key in ["rho51", "rho51-tilde", "fR-tilde", "EM"] {
        out.push(required(key, &t, key));
    }
    out.push(Outcome::flag(
        "predicate-agreement",
        base.predicates_agree() && assoc.predicates_agree(),
    ));

    let kind = i % 3;
    let r = random_curvature_tensor(kind, rng);
    inst["tensor"] = json!({ "kind": kind, "components": r.independent_components().map(|(k, v)| json!([k, v])) });
    out.push(Outcome::flag(
        "tensor-predicate-agreement",
        predicates_agree(&r, i as u64, tol),
    ));
    Ok(out)
}

fn l1_scalar(
    i: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
    inst: &mut Value,
    tol: &Tolerance,
) -> Result<Vec<Outcome>, CliError> {
    let mut out = Vec::new();
    let cj: CirculantJet<f64> = l0_jet(rng);
    inst["l0"] = circulant_instance(&cj, ArithmeticMode::Float);
    let t = table(&Geometry::new(&Model::Circulant(cj), tol)?, tol)?;
    out.push(required("prop-l1", &t, "prop-l1"));
    out.push(required("l1-rho", &t, "l1-rho"));

    // family 2 lies in L1, family 1 in L2 only
    let family = 1 + (i % 2) as u8;
    let params: FamilyParams<Rational> = random_family(family, rng);
    inst["lie"] = family_instance(&params);
    let geo = Geometry::new(&family_model(lower_params(&params)), tol)?;
    let t = table(&geo, tol)?;
    out.push(required("prop-l1", &t, "prop-l1"));
    if family == 2 {
        out.push(required("l1-rho", &t, "l1-rho"));
    }
    Ok(out)
}

fn l0_pde(rng: &mut rand_chacha::ChaCha8Rng, inst: &mut Value, tol: &Tolerance) -> Result<Vec<Outcome>, CliError> {
    let cj: CirculantJet<f64> = l0_jet(rng);
    let k = rng.gen_range(0..3);
    let bump = rng.gen_range(1..=64) as f64 / 64.0 * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let mut off = cj.clone();
    off.da[k] += bump;
    inst["constructed"] = circulant_instance(&cj, ArithmeticMode::Float);
    inst["perturbed"] = circulant_instance(&off, ArithmeticMode::Float);

    let mut out = Vec::new();
    let verdicts = |jet: &CirculantJet<f64>| -> Result<[Check<f64>; 3], CliError> {
        Ok([
            is_l0_gradient(jet, tol),
            is_l0_nabla(&circulant_geometry::jet::circulant_to_jet(jet)?, tol),
            is_l0_nabla(&associated_jet(jet)?, tol),
        ])
    };
    let [grad, nabla, nabla_t] = verdicts(&cj)?;
    out.push(Outcome::from_check("constructed-gradient", &grad));
    out.push(Outcome::from_check("constructed-nabla", &nabla));
    out.push(Outcome::from_check("constructed-nabla-associated", &nabla_t));
    out.push(Outcome::flag(
        "gradient-iff-nabla",
        grad.holds() == nabla.holds() && nabla.holds() == nabla_t.holds(),
    ));
    let [grad, nabla, nabla_t] = verdicts(&off)?;
    out.push(Outcome::flag(
        "perturbed-leaves-l0",
        grad.fails() && nabla.fails() && nabla_t.fails(),
    ));
    out.push(Outcome::flag(
        "gradient-iff-nabla",
        grad.holds() == nabla.holds() && nabla.holds() == nabla_t.holds(),
    ));
    Ok(out)
}

/// `cos φ` at grid point `k`, avoiding `−1/3` and `0`.
pub fn grid_cos(k: usize) -> f64 {
    -0.5 + 1.5 * (k as f64 + 0.5) / GRID_POINTS as f64
}

/// Root of the `g~` Gram determinant of `{x, Qx}` in `cos φ ∈ [−0.45, −0.2]`.
fn degeneracy_root(g: &SymMatrix3<f64>, gt: &SymMatrix3<f64>) -> Result<f64, CliError> {
    let det = |c: f64| -> Result<f64, CliError> {
        let x = vector_with_angle(g, c)?;
        Ok(plane_gram_det(gt, &x, &apply_q(&x)))
    };
    let (mut lo, mut hi) = (-0.45, -0.2);
    let (mut flo, _) = (det(lo)?, det(hi)?);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fm = det(mid)?;
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn q_geometry(rng: &mut rand_chacha::ChaCha8Rng, inst: &mut Value, tol: &Tolerance) -> Result<Vec<Outcome>, CliError> {
    let mut out = Vec::new();
    let cj: CirculantJet<f64> = l0_jet(rng);
    inst["l0"] = circulant_instance(&cj, ArithmeticMode::Float);
    let geo = Geometry::new(&Model::Circulant(cj), tol)?;
    let (g, gt, a) = (&geo.g, &geo.gt, &geo.associated);
    let (_, assoc) = geo.class_reports(&analysis_options(tol));
    out.push(Outcome::flag("associated-l2", assoc.l2.holds()));
    let curv = geo.associated_curvature(assoc.l2.holds());

    let mut obmu = 0.0f64;
    let mut obmu_scale = 0.0f64;
    let mut ricc = 0.0f64;
    let mut ricc_scale = 0.0f64;
    let mut q_spread = 0.0f64;
    let mut gram = 0.0f64;
    let mut gram_scale = 0.0f64;
    let mut angles = 0.0f64;
    let mut all_direct = true;
    for k in 0..GRID_POINTS {
        let x = vector_with_angle(g, grid_cos(k))?;
        let r = q_basis_report(&x, g, gt, curv, tol)?;
        all_direct &= plane_nondegenerate(&r.basis);
        for p in &r.planes {
            let (Ok(v), Some(c)) = (&p.sectional, p.closed_form) else {
                all_direct = false;
                continue;
            };
            all_direct &= p.evaluation == Evaluation::Direct;
            obmu = obmu.max((v - c).abs());
            obmu_scale = obmu_scale.max(v.abs()).max(c.abs());
        }
        let values: Vec<f64> = r
            .directions
            .iter()
            .filter_map(|d| d.ricci.as_ref().ok().copied())
            .collect();
        if values.len() != 3 {
            all_direct = false;
        }
        for (d, v) in r.directions.iter().zip(&values) {
            if let Some(c) = d.closed_form {
                ricc = ricc.max((v - c).abs());
                ricc_scale = ricc_scale.max(v.abs()).max(c.abs());
            }
        }
        for v in &values {
            q_spread = q_spread.max((v - values[0]).abs());
        }
        let (res, s) = compare_sym(&gtilde_gram(&r.basis), &gtilde_gram_direct(&r.basis, gt));
        gram = gram.max(res);
        gram_scale = gram_scale.max(s);
        angles = angles.max(r.basis.angle_spread);
    }
    out.push(Outcome::flag("grid-nondegenerate", all_direct));
    out.push(Outcome::from_check("obmu", &tol.judge(&obmu, &obmu_scale)));
    out.push(Outcome::from_check("ricc", &tol.judge(&ricc, &ricc_scale)));
    out.push(Outcome::from_check(
        "ricci-q-invariance",
        &tol.judge(&q_spread, &ricc_scale),
    ));
    out.push(Outcome::from_check("gram-formula", &tol.judge(&gram, &gram_scale)));
    out.push(Outcome::from_check("angle-equality", &tol.judge(&angles, &1.0)));

    // degeneracy sits at cos φ = −1/3
    let root = degeneracy_root(g, gt)?;
    out.push(Outcome::from_check(
        "lem2-location",
        &tol.judge(&(root + 1.0 / 3.0), &1.0),
    ));
    let x = vector_with_angle(g, -1.0 / 3.0)?;
    let qb = q_basis_data(&x, g, tol)?;
    out.push(Outcome::flag("lem2-degenerate", !plane_nondegenerate(&qb)));
    let gd = plane_gram_det(gt, &x, &apply_q(&x));
    let m = gt.max_abs() * x.max_abs() * x.max_abs();
    out.push(Outcome::from_check("lem2-gram", &tol.judge(&gd, &(m * m))));
    let num = degenerate_plane_numerator(&a.riemann, &qb)?;
    let want = degenerate_numerator_closed_form(&a.tau_star, &qb.norm_g);
    out.push(Outcome::from_check(
        "degenerate-numerator",
        &tol.judge(&(num - want), &(a.riemann.max_abs() * m * m)),
    ));

    // isotropy exactly at φ = π/2, along the whole basis
    let x = vector_with_angle(g, 0.0)?;
    let iso = [x.clone(), apply_q(&x), apply_q(&apply_q(&x))]
        .iter()
        .map(|v| is_isotropic(v, gt, tol))
        .fold(None::<Check<f64>>, |acc, c| Some(acc.map_or(c.clone(), |a| a.worst(c))))
        .expect("three directions");
    out.push(Outcome::from_check("isotropy", &iso));

    // limits need τ~* = 0: family 1 is Einstein
    let p1: FamilyParams<Rational> = random_family(1, rng);
    inst["family1"] = family_instance(&p1);
    let lie = Geometry::new(&family_model(lower_params(&p1)), tol)?;
    let la = &lie.associated;
    let ks = verify_limit_sectional(&la.riemann, &lie.g, &lie.gt, -la.tau / 6.0)?;
    out.push(Outcome {
        check: "limit-sectional",
        passed: ks.converged,
        residual: ks.error,
        bound: circulant_geometry::qgeom::LIMIT_TOLERANCE * (1.0 + ks.limit.abs()),
    });
    let kr = verify_limit_ricci(&la.ricci, &lie.g, &lie.gt, la.tau / 3.0)?;
    out.push(Outcome {
        check: "limit-ricci",
        passed: kr.converged,
        residual: kr.error,
        bound: circulant_geometry::qgeom::LIMIT_TOLERANCE * (1.0 + kr.limit.abs()),
    });

    // L1 specialisation on family 2
    let p2: FamilyParams<Rational> = random_family(2, rng);
    inst["family2"] = family_instance(&p2);
    let lie = Geometry::new(&family_model(lower_params(&p2)), tol)?;
    let la = &lie.associated;
    let mut k_err = 0.0f64;
    let mut r_err = 0.0f64;
    let mut scale = la.tau.abs();
    for k in 0..GRID_POINTS {
        let c = grid_cos(k);
        let x = vector_with_angle(&lie.g, c)?;
        let qb = q_basis_data(&x, &lie.g, tol)?;
        let k_direct = sectional_curvature(&la.riemann, &lie.gt, &qb.x, &qb.qx, tol)?;
        let k_closed = q_plane_curvature_l1(&la.tau, &qb.cos_phi)?;
        let r_direct = circulant_geometry::qgeom::ricci_curvature(&la.ricci, &lie.gt, &qb.x, tol)?;
        let r_closed = ricci_l1(&la.tau, &qb.cos_phi)?;
        k_err = k_err.max((k_direct - k_closed).abs());
        r_err = r_err.max((r_direct - r_closed).abs());
        scale = scale.max(k_direct.abs()).max(r_direct.abs());
    }
    out.push(Outcome::from_check("obmu-l1", &tol.judge(&k_err, &scale)));
    out.push(Outcome::from_check("ricc-l1", &tol.judge(&r_err, &scale)));
    Ok(out)
}

fn lie_family(
    family: u8,
    rng: &mut rand_chacha::ChaCha8Rng,
    inst: &mut Value,
    tol: &Tolerance,
) -> Result<Vec<Outcome>, CliError> {
    let params: FamilyParams<Rational> = random_family(family, rng);
    inst["lie"] = family_instance(&params);
    let geo = Geometry::new(&family_model(params.clone()), tol)?;
    let a = &geo.associated;
    let mut out = Vec::new();
    let riemann = |check, want: &Rank4Tensor3<Rational>| {
        let (r, s) = compare_rank4(want, &a.riemann);
        Outcome::from_check(check, &tol.judge(&r, &s))
    };
    let sym = |check, want: &SymMatrix3<Rational>, got: &SymMatrix3<Rational>| {
        let (r, s) = compare_sym(want, got);
        Outcome::from_check(check, &tol.judge(&r, &s))
    };
    let scalar = |check, want: &Rational, got: &Rational| {
        Outcome::from_check(
            check,
            &tol.judge(
                &(got.clone() - want.clone()),
                &<Rational as Scalar>::max_of(want.clone(), -want.clone()),
            ),
        )
    };
    let planes: Vec<(usize, usize)> = vec![(0, 1), (0, 2), (1, 2)];
    let sectional =
        |i: usize, j: usize| sectional_curvature(&a.riemann, &geo.gt, &Vector3::basis(i), &Vector3::basis(j), tol);

    let (base, assoc) = geo.class_reports(&analysis_options(tol));
    match family {
        1 => {
            let o = family1_oracle(&params)?;
            out.push(riemann("components", &o.riemann()));
            out.push(sym("ricci", &o.ricci(), &a.ricci));
            out.push(scalar("tau", &o.tau, &a.tau));
            out.push(Outcome::flag("tau-star-zero", a.tau_star == Rational::default()));
            let einstein = geo.gt.scale(&(a.tau.clone() / Rational::from_integer(3.into())));
            out.push(sym("einstein", &einstein, &a.ricci));
            for (i, j) in planes {
                out.push(scalar("sectional", &o.k, &sectional(i, j)?));
            }
            out.push(Outcome::flag("l2", assoc.l2.holds()));
            out.push(Outcome::flag(
                "l1-iff-flat",
                assoc.l1.holds() == (o.r_value == Rational::default()),
            ));
        }
        _ => {
            let o = family2_oracle(&params)?;
            out.push(Outcome::flag(
                "nabla-q-zero",
                nabla_q_invariant(&circulant_geometry::lie::koszul_connection(&params.algebra(), &geo.gt)?)
                    == Rational::default(),
            ));
            out.push(riemann("components", &o.riemann()));
            out.push(sym("ricci", &o.ricci(), &a.ricci));
            out.push(scalar("tau", &o.tau, &a.tau));
            out.push(scalar("tau-star", &o.tau_star, &a.tau_star));
            out.push(Outcome::flag("tau-star-is-minus-tau", a.tau_star == -a.tau.clone()));
            out.push(scalar("sectional", &o.k, &sectional(0, 1)?));
            out.push(Outcome::flag(
                "classes",
                assoc.l0.holds() && assoc.l1.holds() && assoc.l2.holds(),
            ));
        }
    }
    let t = theorem_table(&geo, &base, &assoc, None, tol)?;
    for key in [
        "con-AE",
        "loc-R-tilde",
        "fR-tilde",
        "nesting",
        "prop-l1",
        "EM",
        "rho51-tilde",
        "lie-oracle",
    ] {
        out.push(required(key, &t, key));
    }
    if family == 2 {
        out.push(required("l1-rho", &t, "l1-rho"));
    }
    out.push(Outcome::flag(
        "predicate-agreement",
        base.predicates_agree() && assoc.predicates_agree(),
    ));
    Ok(out)
}
