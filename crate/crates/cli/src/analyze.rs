//! The `analyze` report.

use std::collections::BTreeMap;

use circulant_geometry::classify::{
    check_con_ae, check_l1_ricci_degenerate, check_l1_ricci_pattern, check_l1_scalar_relation, is_l0_gradient,
    is_l0_nabla, l2_associated_curvature, reconstruct_r, ClassReport, EinsteinDecomposition, Side, DEFAULT_SAMPLES,
};
use circulant_geometry::jet::{associated_jet, circulant_to_jet, curvature_bundle, CurvatureBundle};
use circulant_geometry::lie::{family1_oracle, family2_oracle, nabla_q_invariant, FamilyParams, LieInstance};
use circulant_geometry::qgeom::{
    find_orthonormal_q_basis, gtilde_gram, gtilde_gram_direct, plane_gram_det, plane_nondegenerate, q_basis_report,
    sectional_curvature, vector_with_angle, AssociatedCurvature, Evaluation, QBasisReport,
};
use circulant_geometry::tensor::{compare_rank4, compare_sym};
use circulant_geometry::{
    ArithmeticMode, Check, GeometryError, Rank4Tensor3, Rational, Scalar, SymMatrix3, Tolerance, Vector3,
};
use serde_json::{json, Map, Value};

use crate::format::{check_json, float_json, matrix_json, riemann_json, vector_json, ReportScalar};
use crate::instance::{Instance, Model};
use crate::CliError;

/// Seed of the sampled class predicates, fixed so reports are reproducible.
pub const ANALYZE_SEED: u64 = 0;

/// `cos φ` values of the angle grid. `−1/3` is the degenerate plane and `0`
/// the isotropic direction.
pub const PHI_GRID: [f64; 9] = [-0.45, -1.0 / 3.0, -0.2, 0.0, 0.2, 0.4, 0.6, 0.8, 0.95];

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    /// Overrides the instance's own arithmetic.
    pub mode: Option<ArithmeticMode>,
    pub tolerance: Tolerance,
    pub samples: usize,
    pub seed: u64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            mode: None,
            tolerance: Tolerance::default(),
            samples: DEFAULT_SAMPLES,
            seed: ANALYZE_SEED,
        }
    }
}

/// Both metrics of an instance with their curvature and `∇Q` checks.
#[derive(Debug, Clone)]
pub struct Geometry<S> {
    pub g: SymMatrix3<S>,
    pub gt: SymMatrix3<S>,
    pub base: CurvatureBundle<S>,
    pub associated: CurvatureBundle<S>,
    pub l0_base: Check<S>,
    pub l0_associated: Check<S>,
    /// Gradient form of the `L0` condition; circulant jets only.
    pub l0_gradient: Option<Check<S>>,
    pub params: Option<FamilyParams<S>>,
}

impl<S: ReportScalar> Geometry<S> {
    pub fn new(model: &Model<S>, tol: &Tolerance) -> Result<Self, CliError> {
        match model {
            Model::Circulant(cj) => {
                let mj = circulant_to_jet(cj)?;
                let mjt = associated_jet(cj)?;
                Ok(Geometry {
                    g: mj.metric().clone(),
                    gt: mjt.metric().clone(),
                    base: curvature_bundle(&mj, mjt.inverse_metric()),
                    associated: curvature_bundle(&mjt, mj.inverse_metric()),
                    l0_base: is_l0_nabla(&mj, tol),
                    l0_associated: is_l0_nabla(&mjt, tol),
                    l0_gradient: Some(is_l0_gradient(cj, tol)),
                    params: None,
                })
            }
            Model::Lie { algebra, params } => {
                let inst = LieInstance::new(algebra.clone())?;
                let l0 = |c: &circulant_geometry::jet::Connection<S>| tol.judge(&nabla_q_invariant(c), &c.max_abs());
                Ok(Geometry {
                    l0_base: l0(&inst.base_connection),
                    l0_associated: l0(&inst.associated_connection),
                    g: inst.metrics.base,
                    gt: inst.metrics.associated,
                    base: inst.base,
                    associated: inst.associated,
                    l0_gradient: None,
                    params: params.clone(),
                })
            }
        }
    }

    pub fn class_reports(&self, opts: &AnalyzeOptions) -> (ClassReport<S>, ClassReport<S>) {
        let tol = &opts.tolerance;
        let base = ClassReport::assemble(
            Side::Base,
            self.l0_base.clone(),
            &self.base,
            &self.g,
            &self.gt,
            opts.samples,
            opts.seed,
            tol,
        );
        let assoc = ClassReport::assemble(
            Side::Associated,
            self.l0_associated.clone(),
            &self.associated,
            &self.gt,
            &self.g,
            opts.samples,
            opts.seed,
            tol,
        );
        (base, assoc)
    }

    pub fn associated_curvature(&self, in_l2: bool) -> AssociatedCurvature<'_, S> {
        AssociatedCurvature {
            riemann: &self.associated.riemann,
            ricci: &self.associated.ricci,
            tau: &self.associated.tau,
            tau_star: &self.associated.tau_star,
            in_l2,
        }
    }

    pub fn to_f64(&self) -> Geometry<f64> {
        let bundle = |b: &CurvatureBundle<S>| CurvatureBundle {
            gamma: circulant_geometry::jet::Connection::from_fn(|k, i, j| b.gamma.get(k, i, j).to_f64()),
            riemann: b.riemann.to_f64(),
            ricci: b.ricci.to_f64(),
            tau: b.tau.to_f64(),
            tau_star: b.tau_star.to_f64(),
        };
        let check = |c: &Check<S>| Check {
            verdict: c.verdict,
            residual: c.residual.to_f64(),
            bound: c.bound,
        };
        Geometry {
            g: self.g.to_f64(),
            gt: self.gt.to_f64(),
            base: bundle(&self.base),
            associated: bundle(&self.associated),
            l0_base: check(&self.l0_base),
            l0_associated: check(&self.l0_associated),
            l0_gradient: self.l0_gradient.as_ref().map(check),
            params: None,
        }
    }
}

pub fn analyze(inst: &Instance, opts: &AnalyzeOptions) -> Result<Value, CliError> {
    match opts.mode.unwrap_or(inst.arithmetic) {
        ArithmeticMode::Exact => analyze_as::<Rational>(inst, opts),
        ArithmeticMode::Float => analyze_as::<f64>(inst, opts),
    }
}

fn analyze_as<S: ReportScalar>(inst: &Instance, opts: &AnalyzeOptions) -> Result<Value, CliError> {
    let tol = &opts.tolerance;
    let geo = Geometry::<S>::new(&inst.lower::<S>(tol)?, tol)?;
    let (base, assoc) = geo.class_reports(opts);
    let in_l2 = assoc.l2.holds();

    let e1 = q_basis_report(
        &Vector3::basis(0),
        &geo.g,
        &geo.gt,
        geo.associated_curvature(in_l2),
        tol,
    )?;
    let gf = geo.to_f64();
    let orthonormal = find_orthonormal_q_basis(&gf.g)
        .and_then(|x| q_basis_report(&x, &gf.g, &gf.gt, gf.associated_curvature(in_l2), tol));
    let grid = phi_grid(&gf, in_l2, tol)?;

    let mut base_json = side_json(&geo.g, &geo.base, &base);
    if let Some(c) = &geo.l0_gradient {
        base_json["class"]["l0_gradient"] = check_json(c);
    }
    Ok(json!({
        "instance": inst.to_json(),
        "arithmetic": S::MODE.as_str(),
        "tolerance": {
            "eps_rel": float_json(tol.eps_rel),
            "eps_abs": float_json(tol.eps_abs),
        },
        "samples": opts.samples,
        "seed": opts.seed,
        "base": base_json,
        "associated": side_json(&geo.gt, &geo.associated, &assoc),
        "q_geometry": {
            "e1": q_report_json(&e1),
            "orthonormal": match &orthonormal {
                Ok(r) => q_report_json(r),
                Err(e) => json!({ "undefined": e.to_string() }),
            },
            "phi_grid": Value::Array(grid.iter().map(|(_, r)| q_report_json(r)).collect()),
        },
        "theorems": theorems_json(&theorem_table(&geo, &base, &assoc, Some((&grid, &gf.gt)), tol)?),
    }))
}

/// Q-basis reports along [`PHI_GRID`], computed in `f64`.
pub fn phi_grid(gf: &Geometry<f64>, in_l2: bool, tol: &Tolerance) -> Result<Vec<(f64, QBasisReport<f64>)>, CliError> {
    PHI_GRID
        .iter()
        .map(|&c| {
            let x = vector_with_angle(&gf.g, c)?;
            let r = q_basis_report(&x, &gf.g, &gf.gt, gf.associated_curvature(in_l2), tol)?;
            Ok((c, r))
        })
        .collect()
}

fn bundle_json<S: ReportScalar>(b: &CurvatureBundle<S>) -> Value {
    json!({
        "riemann": riemann_json(&b.riemann),
        "ricci": matrix_json(&b.ricci),
        "tau": b.tau.to_json(),
        "tau_star": b.tau_star.to_json(),
    })
}

pub fn class_json<S: ReportScalar>(r: &ClassReport<S>) -> Value {
    let einstein = match (&r.einstein, &r.einstein_verdict) {
        (Some(dec), Some(verdict)) => {
            let mut v = check_json(verdict);
            v["alpha"] = dec.alpha.to_json();
            v["beta"] = dec.beta.to_json();
            v["decomposition_residual"] = dec.residual.to_json();
            v
        }
        _ => Value::Null,
    };
    let residuals: Map<String, Value> = r.residuals.iter().map(|(k, c)| (k.clone(), check_json(c))).collect();
    json!({
        "l0": check_json(&r.l0),
        "l1": check_json(&r.l1),
        "l2": check_json(&r.l2),
        "einstein": einstein,
        "nesting_holds": r.nesting_holds(),
        "predicates_agree": r.predicates_agree(),
        "residuals": residuals,
    })
}

fn side_json<S: ReportScalar>(metric: &SymMatrix3<S>, b: &CurvatureBundle<S>, r: &ClassReport<S>) -> Value {
    json!({
        "metric": matrix_json(metric),
        "curvature": bundle_json(b),
        "class": class_json(r),
    })
}

fn result_json<S: ReportScalar>(r: &Result<S, GeometryError>) -> Value {
    match r {
        Ok(v) => v.to_json(),
        Err(e) => json!({ "undefined": e.to_string() }),
    }
}

fn evaluation_str(e: Evaluation) -> &'static str {
    match e {
        Evaluation::Direct => "direct",
        Evaluation::Limit => "limit",
    }
}

pub fn q_report_json<S: ReportScalar>(r: &QBasisReport<S>) -> Value {
    let b = &r.basis;
    let planes: Vec<Value> = r
        .planes
        .iter()
        .map(|p| {
            json!({
                "plane": p.label,
                "nondegenerate": p.nondegenerate,
                "sectional": result_json(&p.sectional),
                "evaluation": evaluation_str(p.evaluation),
                "closed_form": p.closed_form.as_ref().map_or(Value::Null, |v| v.to_json()),
            })
        })
        .collect();
    let directions: Vec<Value> = r
        .directions
        .iter()
        .map(|d| {
            json!({
                "direction": d.label,
                "isotropic": d.isotropic,
                "ricci": result_json(&d.ricci),
                "evaluation": evaluation_str(d.evaluation),
                "closed_form": d.closed_form.as_ref().map_or(Value::Null, |v| v.to_json()),
            })
        })
        .collect();
    json!({
        "vector": vector_json(&b.x),
        "cos_phi": b.cos_phi.to_json(),
        "phi": float_json(b.phi),
        "phi_in_expected_range": b.phi_in_expected_range(),
        "norm_g": b.norm_g.to_json(),
        "angle_spread": b.angle_spread.to_json(),
        "planes": planes,
        "directions": directions,
    })
}

/// Keys of the theorem table, all present in every report.
pub const THEOREM_KEYS: [&str; 15] = [
    "EM",
    "con-AE",
    "confequiv",
    "fR-tilde",
    "l1-rho",
    "lem2",
    "lie-oracle",
    "loc-R-tilde",
    "nesting",
    "obmu",
    "prop-l1",
    "rho51",
    "rho51-tilde",
    "ricc",
    "thL2-l2",
];

/// One row of the theorem table.
#[derive(Debug, Clone)]
pub enum Theorem<S> {
    Checked(Check<S>),
    /// Float check over the angle grid.
    Grid(Check<f64>),
    /// Two verdicts that must coincide.
    Agreement {
        agree: bool,
        detail: Value,
    },
    Skipped(&'static str),
}

impl<S: ReportScalar> Theorem<S> {
    /// `None` when skipped.
    pub fn passed(&self) -> Option<bool> {
        match self {
            Theorem::Checked(c) => Some(c.holds()),
            Theorem::Grid(c) => Some(c.holds()),
            Theorem::Agreement { agree, .. } => Some(*agree),
            Theorem::Skipped(_) => None,
        }
    }

    /// `(residual, bound)` as doubles; agreements count as `0` or `1`.
    pub fn residual(&self) -> (f64, f64) {
        match self {
            Theorem::Checked(c) => (c.residual.to_f64(), c.bound),
            Theorem::Grid(c) => (c.residual, c.bound),
            Theorem::Agreement { agree, .. } => (if *agree { 0.0 } else { 1.0 }, 0.0),
            Theorem::Skipped(_) => (0.0, 0.0),
        }
    }

    pub fn to_json(&self) -> Value {
        let checked = |verdict: &str, residual: Value, bound: f64| json!({ "status": verdict, "residual": residual, "bound": float_json(bound) });
        match self {
            Theorem::Checked(c) => checked(c.verdict.as_str(), c.residual.to_json(), c.bound),
            Theorem::Grid(c) => checked(c.verdict.as_str(), float_json(c.residual), c.bound),
            Theorem::Agreement { agree, detail } => json!({
                "status": if *agree { "holds" } else { "fails" },
                "detail": detail,
            }),
            Theorem::Skipped(reason) => json!({ "status": "skipped", "reason": reason }),
        }
    }
}

pub type TheoremTable<S> = BTreeMap<&'static str, Theorem<S>>;

pub fn theorems_json<S: ReportScalar>(t: &TheoremTable<S>) -> Value {
    Value::Object(t.iter().map(|(k, v)| (k.to_string(), v.to_json())).collect())
}

fn tensors<S: Scalar>(a: &Rank4Tensor3<S>, b: &Rank4Tensor3<S>, tol: &Tolerance) -> Check<S> {
    let (r, s) = compare_rank4(a, b);
    tol.judge(&r, &s)
}

/// Angle grid in `f64` with the associated metric it was computed for.
pub type Grid<'a> = (&'a [(f64, QBasisReport<f64>)], &'a SymMatrix3<f64>);

/// Every theorem check that applies to the instance. Grid-based rows are
/// skipped when `grid` is `None`.
pub fn theorem_table<S: ReportScalar>(
    geo: &Geometry<S>,
    base: &ClassReport<S>,
    assoc: &ClassReport<S>,
    grid: Option<Grid<'_>>,
    tol: &Tolerance,
) -> Result<TheoremTable<S>, CliError> {
    use Theorem::*;
    let (g, gt) = (&geo.g, &geo.gt);
    let (b, a) = (&geo.base, &geo.associated);
    let mut out: TheoremTable<S> = BTreeMap::new();

    out.insert("con-AE", Checked(check_con_ae(b, a, g, gt, tol)));
    out.insert(
        "loc-R-tilde",
        Checked(
            tensors(&reconstruct_r(&b.ricci, &b.tau, g), &b.riemann, tol).worst(tensors(
                &reconstruct_r(&a.ricci, &a.tau, gt),
                &a.riemann,
                tol,
            )),
        ),
    );

    let three = S::from_i64(3);
    let six = S::from_i64(6);
    let coefficients = |dec: Option<&EinsteinDecomposition<S>>, alpha: S, beta: S, scale: S| match dec {
        Some(d) => {
            let r = S::max_of((d.alpha.clone() - alpha).abs(), (d.beta.clone() - beta).abs());
            Checked(tol.judge(&r, &scale))
        }
        None => Skipped("Ricci tensor is not circulant"),
    };
    out.insert(
        "rho51",
        if base.l2.holds() {
            coefficients(
                base.einstein.as_ref(),
                b.tau.clone() / three.clone(),
                b.tau.clone() / six.clone() + b.tau_star.clone() / three.clone(),
                S::max_of(b.tau.abs(), b.tau_star.abs()),
            )
        } else {
            Skipped("base curvature is not in L2")
        },
    );

    if assoc.l2.holds() {
        out.insert(
            "rho51-tilde",
            coefficients(
                assoc.einstein.as_ref(),
                a.tau_star.clone() / three.clone(),
                a.tau.clone() / three + a.tau_star.clone() / six,
                S::max_of(a.tau.abs(), a.tau_star.abs()),
            ),
        );
        out.insert(
            "fR-tilde",
            Checked(tensors(
                &l2_associated_curvature(&a.tau, &a.tau_star, g, gt),
                &a.riemann,
                tol,
            )),
        );
        let einstein = assoc.einstein_verdict.as_ref().is_some_and(|c| c.holds());
        let tau_star_zero = tol.is_zero(&a.tau_star, &S::max_of(a.tau.abs(), a.tau_star.abs()));
        out.insert(
            "EM",
            Agreement {
                agree: einstein == tau_star_zero,
                detail: json!({ "einstein": einstein, "tau_star_zero": tau_star_zero }),
            },
        );
        let relation = check_l1_scalar_relation(a, tol)?;
        out.insert(
            "prop-l1",
            Agreement {
                agree: relation.holds() == assoc.l1.holds(),
                detail: json!({ "relation": check_json(&relation), "l1": assoc.l1.holds() }),
            },
        );
    } else {
        for key in ["rho51-tilde", "fR-tilde", "EM", "prop-l1"] {
            out.insert(key, Skipped("associated curvature is not in L2"));
        }
    }

    out.insert(
        "l1-rho",
        if assoc.l1.holds() {
            Checked(check_l1_ricci_degenerate(&a.ricci, tol).worst(check_l1_ricci_pattern(&a.ricci, &a.tau, g, tol)))
        } else {
            Skipped("associated curvature is not in L1")
        },
    );
    out.insert(
        "thL2-l2",
        Agreement {
            agree: base.l2.holds() == assoc.l2.holds(),
            detail: json!({ "base": base.l2.holds(), "associated": assoc.l2.holds() }),
        },
    );
    out.insert(
        "confequiv",
        Agreement {
            agree: base.l0.holds() == assoc.l0.holds(),
            detail: json!({ "base": base.l0.holds(), "associated": assoc.l0.holds() }),
        },
    );
    out.insert(
        "nesting",
        Agreement {
            agree: base.nesting_holds() && assoc.nesting_holds(),
            detail: json!({ "base": base.nesting_holds(), "associated": assoc.nesting_holds() }),
        },
    );
    match grid {
        Some((points, gtf)) => {
            out.insert("lem2", Grid(lem2_check(points, gtf, tol)));
            if assoc.l2.holds() {
                out.insert("obmu", Grid(closed_form_check(points, true, tol)));
                out.insert("ricc", Grid(closed_form_check(points, false, tol)));
            } else {
                out.insert("obmu", Skipped("associated curvature is not in L2"));
                out.insert("ricc", Skipped("associated curvature is not in L2"));
            }
        }
        None => {
            for key in ["lem2", "obmu", "ricc"] {
                out.insert(key, Skipped("no angle grid"));
            }
        }
    }
    out.insert(
        "lie-oracle",
        match &geo.params {
            Some(p) => Checked(oracle_check(p, geo, tol)?),
            None => Skipped("not a Lie family instance"),
        },
    );
    debug_assert!(THEOREM_KEYS.iter().all(|k| out.contains_key(k)));
    Ok(out)
}

/// Gram matrix formula on every grid point, degeneracy exactly at `cos φ = −1/3`.
fn lem2_check(grid: &[(f64, QBasisReport<f64>)], gt: &SymMatrix3<f64>, tol: &Tolerance) -> Check<f64> {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (c, r) in grid {
        let formula = gtilde_gram(&r.basis);
        let direct = gtilde_gram_direct(&r.basis, gt);
        let (res, s) = compare_sym(&formula, &direct);
        worst = worst.max(res);
        scale = scale.max(s);
        let degenerate = (c + 1.0 / 3.0).abs() < 1e-12;
        if degenerate == plane_nondegenerate(&r.basis) {
            worst = f64::INFINITY;
        }
        if degenerate {
            let d = &direct;
            let det = d.get(0, 0) * d.get(1, 1) - d.get(0, 1) * d.get(0, 1);
            worst = worst.max(det.abs());
        }
    }
    tol.judge(&worst, &(scale * scale).max(scale))
}

/// Largest gap between direct values and closed forms over the grid, on
/// sectional curvatures or Ricci curvatures.
fn closed_form_check(grid: &[(f64, QBasisReport<f64>)], sectional: bool, tol: &Tolerance) -> Check<f64> {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (_, r) in grid {
        let pairs: Vec<(&Result<f64, GeometryError>, Option<f64>, bool)> = if sectional {
            r.planes
                .iter()
                .map(|p| (&p.sectional, p.closed_form, p.evaluation == Evaluation::Direct))
                .collect()
        } else {
            r.directions
                .iter()
                .map(|d| (&d.ricci, d.closed_form, d.evaluation == Evaluation::Direct))
                .collect()
        };
        for (value, closed, direct) in pairs {
            if let (Ok(v), Some(c), true) = (value, closed, direct) {
                worst = worst.max((v - c).abs());
                scale = scale.max(v.abs()).max(c.abs());
            }
        }
    }
    tol.judge(&worst, &scale)
}

fn oracle_check<S: ReportScalar>(
    p: &FamilyParams<S>,
    geo: &Geometry<S>,
    tol: &Tolerance,
) -> Result<Check<S>, CliError> {
    let a = &geo.associated;
    let (riemann, ricci, tau, tau_star, k) = match p {
        FamilyParams::Family1(_) => {
            let o = family1_oracle(p)?;
            (o.riemann(), o.ricci(), o.tau.clone(), o.tau_star.clone(), o.k.clone())
        }
        FamilyParams::Family2(_) => {
            let o = family2_oracle(p)?;
            (o.riemann(), o.ricci(), o.tau.clone(), o.tau_star.clone(), o.k.clone())
        }
    };
    let mut check = tensors(&riemann, &a.riemann, tol);
    let (r, s) = compare_sym(&ricci, &a.ricci);
    check = check.worst(tol.judge(&r, &s));
    let scalars = S::max_of(tau.abs(), tau_star.abs());
    check = check.worst(tol.judge(&(a.tau.clone() - tau), &scalars));
    check = check.worst(tol.judge(&(a.tau_star.clone() - tau_star), &scalars));
    // the family-2 oracle lists only the plane {x1, x2}
    let planes: &[(usize, usize)] = match p {
        FamilyParams::Family1(_) => &[(0, 1), (0, 2), (1, 2)],
        FamilyParams::Family2(_) => &[(0, 1)],
    };
    for &(i, j) in planes {
        let (u, v) = (Vector3::basis(i), Vector3::basis(j));
        let value = sectional_curvature(&a.riemann, &geo.gt, &u, &v, tol)?;
        debug_assert!(!plane_gram_det(&geo.gt, &u, &v).is_zero());
        check = check.worst(tol.judge(&(value - k.clone()), &S::max_of(k.abs(), S::one())));
    }
    Ok(check)
}
