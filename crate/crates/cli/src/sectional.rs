//! The `sectional` table for one vector.

use std::fmt::Write;

use circulant_geometry::qgeom::{q_basis_report, Evaluation, QBasisReport};
use circulant_geometry::{ArithmeticMode, GeometryError, Rational, Vector3};

use crate::analyze::{AnalyzeOptions, Geometry};
use crate::format::ReportScalar;
use crate::instance::Instance;
use crate::CliError;

/// Rendered table, plus the first undefined value if any.
#[derive(Debug)]
pub struct SectionalOutput {
    pub table: String,
    pub error: Option<GeometryError>,
}

pub fn sectional(inst: &Instance, x: &Vector3<Rational>, opts: &AnalyzeOptions) -> Result<SectionalOutput, CliError> {
    match opts.mode.unwrap_or(inst.arithmetic) {
        ArithmeticMode::Exact => sectional_as::<Rational>(inst, x, opts),
        ArithmeticMode::Float => sectional_as::<f64>(inst, x, opts),
    }
}

fn sectional_as<S: ReportScalar>(
    inst: &Instance,
    x: &Vector3<Rational>,
    opts: &AnalyzeOptions,
) -> Result<SectionalOutput, CliError> {
    let tol = &opts.tolerance;
    let geo = Geometry::<S>::new(&inst.lower::<S>(tol)?, tol)?;
    let (_, assoc) = geo.class_reports(opts);
    let x = x.map(S::from_rational);
    let report = q_basis_report(&x, &geo.g, &geo.gt, geo.associated_curvature(assoc.l2.holds()), tol)?;
    Ok(SectionalOutput {
        table: render(&report, assoc.l2.holds()),
        error: report.first_error().cloned(),
    })
}

fn show<S: ReportScalar>(v: &S) -> String {
    match v.to_json() {
        serde_json::Value::String(s) => s,
        other => other.to_string(),
    }
}

fn value<S: ReportScalar>(r: &Result<S, GeometryError>) -> String {
    match r {
        Ok(v) => show(v),
        Err(_) => "undefined".into(),
    }
}

fn evaluation(e: Evaluation) -> &'static str {
    match e {
        Evaluation::Direct => "direct",
        Evaluation::Limit => "limit",
    }
}

pub fn render<S: ReportScalar>(r: &QBasisReport<S>, in_l2: bool) -> String {
    let b = &r.basis;
    let mut out = String::new();
    let v: Vec<String> = b.x.0.iter().map(show).collect();
    let _ = writeln!(out, "vector        ({})", v.join(", "));
    let _ = writeln!(out, "g(x,x)        {}", show(&b.norm_g));
    let _ = writeln!(out, "cos phi       {}", show(&b.cos_phi));
    let _ = writeln!(out, "phi           {} rad", b.phi);
    let _ = writeln!(out, "associated L2 {}", if in_l2 { "yes" } else { "no" });
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<8} {:<14} {:<26} {:<26} evaluation",
        "plane", "nondegenerate", "k~", "closed form"
    );
    for p in &r.planes {
        let closed = p.closed_form.as_ref().map_or("-".to_string(), show);
        let _ = writeln!(
            out,
            "{:<8} {:<14} {:<26} {:<26} {}",
            p.label,
            if p.nondegenerate { "yes" } else { "no" },
            value(&p.sectional),
            closed,
            evaluation(p.evaluation)
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<8} {:<14} {:<26} {:<26} evaluation",
        "dir", "isotropic", "r~", "closed form"
    );
    for d in &r.directions {
        let closed = d.closed_form.as_ref().map_or("-".to_string(), show);
        let _ = writeln!(
            out,
            "{:<8} {:<14} {:<26} {:<26} {}",
            d.label,
            if d.isotropic { "yes" } else { "no" },
            value(&d.ricci),
            closed,
            evaluation(d.evaluation)
        );
    }
    out
}
