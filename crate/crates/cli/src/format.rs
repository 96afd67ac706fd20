//! JSON encoding of engine values.
//!
//! Rationals become `"p/q"` strings in lowest terms and doubles use the
//! shortest decimal that reads back to the same value. Object keys are
//! sorted, so equal inputs give byte-identical output.

use circulant_geometry::scalar::format_rational;
use circulant_geometry::{Check, Rank4Tensor3, Rational, Scalar, SymMatrix3, Vector3};
use serde_json::{json, Value};

pub trait ReportScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_rational(r: &Rational) -> Self;
}

impl ReportScalar for f64 {
    fn to_json(&self) -> Value {
        float_json(*self)
    }

    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }
}

impl ReportScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

/// Non-finite values are written as strings since JSON has no literal for them.
pub fn float_json(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(x.to_string())
    }
}

pub fn vector_json<S: ReportScalar>(v: &Vector3<S>) -> Value {
    Value::Array(v.0.iter().map(|x| x.to_json()).collect())
}

pub fn matrix_json<S: ReportScalar>(m: &SymMatrix3<S>) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| x.to_json()).collect()))
            .collect(),
    )
}

/// The six independent components, keyed `"1212"`, `"1313"`, ...
pub fn riemann_json<S: ReportScalar>(r: &Rank4Tensor3<S>) -> Value {
    let mut map = serde_json::Map::new();
    for (label, v) in r.independent_components() {
        map.insert(label.to_string(), v.to_json());
    }
    Value::Object(map)
}

pub fn check_json<S: ReportScalar>(c: &Check<S>) -> Value {
    json!({
        "verdict": c.verdict.as_str(),
        "residual": c.residual.to_json(),
        "bound": float_json(c.bound),
    })
}

/// Pretty-printed with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
