//! Instance files.
//!
//! ```json
//! {"kind": "circulant-jet", "payload": {"a": "3", "b": "1", "db": ["1/2", 0, 0]}}
//! {"kind": "lie-family", "payload": {"family": 1, "lambda": [1, 0, 0]}}
//! {"kind": "lie-custom", "payload": {"brackets": {"12": [0, 0, 1]}}}
//! ```
//!
//! Numbers may be JSON numbers or strings such as `"-3/4"` or `"0.125"`;
//! both are read exactly. Omitted derivatives are zero. An optional
//! `"arithmetic"` field (`"exact"` or `"float"`) picks the default backend.

use std::array;
use std::path::Path;

use circulant_geometry::jet::CirculantJet;
use circulant_geometry::lie::{FamilyParams, LieAlgebra3};
use circulant_geometry::scalar::parse_rational;
use circulant_geometry::{ArithmeticMode, Rational, Tolerance, Vector3};
use serde_json::{json, Map, Value};

use crate::format::{vector_json, ReportScalar};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Payload {
    Circulant(CirculantJet<Rational>),
    Family(FamilyParams<Rational>),
    /// Brackets `[x1,x2]`, `[x1,x3]`, `[x2,x3]`.
    Custom([Vector3<Rational>; 3]),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub payload: Payload,
    pub arithmetic: ArithmeticMode,
}

/// An instance lowered to one backend.
#[derive(Debug, Clone)]
pub enum Model<S> {
    Circulant(CirculantJet<S>),
    Lie {
        algebra: LieAlgebra3<S>,
        params: Option<FamilyParams<S>>,
    },
}

impl Instance {
    pub fn new(payload: Payload) -> Self {
        Instance {
            payload,
            arithmetic: ArithmeticMode::Exact,
        }
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self, CliError> {
        let obj = value
            .as_object()
            .ok_or_else(|| CliError::Parse("instance must be a JSON object".into()))?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| CliError::Parse("missing string field `kind`".into()))?;
        for key in obj.keys() {
            if !["kind", "payload", "arithmetic"].contains(&key.as_str()) {
                return Err(CliError::Parse(format!("unexpected top-level field `{key}`")));
            }
        }
        let body = field(obj, "payload")?
            .as_object()
            .ok_or_else(|| CliError::Parse("`payload` must be an object".into()))?;
        let (payload, allowed): (Payload, &[&str]) = match kind {
            "circulant-jet" => (parse_circulant(body)?, &["a", "b", "da", "db", "d2a", "d2b"]),
            "lie-family" => (parse_family(body)?, &["family", "lambda"]),
            "lie-custom" => (parse_custom(body)?, &["brackets"]),
            other => return Err(CliError::Parse(format!("unknown instance kind `{other}`"))),
        };
        for key in body.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::Parse(format!("unexpected field `{key}` for kind `{kind}`")));
            }
        }
        let arithmetic = match obj.get("arithmetic") {
            None => ArithmeticMode::Exact,
            Some(v) => parse_mode(v)?,
        };
        Ok(Instance { payload, arithmetic })
    }

    pub fn kind(&self) -> &'static str {
        match self.payload {
            Payload::Circulant(_) => "circulant-jet",
            Payload::Family(_) => "lie-family",
            Payload::Custom(_) => "lie-custom",
        }
    }

    /// Canonical form; parsing it gives back an equal instance.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        match &self.payload {
            Payload::Circulant(cj) => {
                let arr = |v: &[Rational; 3]| Value::Array(v.iter().map(|x| x.to_json()).collect());
                let mat = |m: &[[Rational; 3]; 3]| Value::Array(m.iter().map(arr).collect());
                obj.insert("a".into(), cj.a.to_json());
                obj.insert("b".into(), cj.b.to_json());
                obj.insert("da".into(), arr(&cj.da));
                obj.insert("db".into(), arr(&cj.db));
                obj.insert("d2a".into(), mat(&cj.d2a));
                obj.insert("d2b".into(), mat(&cj.d2b));
            }
            Payload::Family(p) => {
                obj.insert("family".into(), json!(p.family()));
                obj.insert(
                    "lambda".into(),
                    Value::Array(p.lambdas().iter().map(|x| x.to_json()).collect()),
                );
            }
            Payload::Custom(b) => {
                obj.insert(
                    "brackets".into(),
                    json!({
                        "12": vector_json(&b[0]),
                        "13": vector_json(&b[1]),
                        "23": vector_json(&b[2]),
                    }),
                );
            }
        }
        json!({
            "kind": self.kind(),
            "arithmetic": self.arithmetic.as_str(),
            "payload": Value::Object(obj),
        })
    }

    /// Converts to backend `S`, validating brackets of custom algebras.
    pub fn lower<S: ReportScalar>(&self, tol: &Tolerance) -> Result<Model<S>, CliError> {
        let c = |x: &Rational| S::from_rational(x);
        Ok(match &self.payload {
            Payload::Circulant(cj) => Model::Circulant(cj.map(c)),
            Payload::Family(p) => {
                let params = match p {
                    FamilyParams::Family1(l) => FamilyParams::Family1(array::from_fn(|i| c(&l[i]))),
                    FamilyParams::Family2(l) => FamilyParams::Family2(array::from_fn(|i| c(&l[i]))),
                };
                Model::Lie {
                    algebra: params.algebra(),
                    params: Some(params),
                }
            }
            Payload::Custom(b) => {
                let v = |i: usize| b[i].map(c);
                Model::Lie {
                    algebra: LieAlgebra3::from_brackets(v(0), v(1), v(2), tol)?,
                    params: None,
                }
            }
        })
    }
}

pub fn parse_mode(v: &Value) -> Result<ArithmeticMode, CliError> {
    match v.as_str() {
        Some("exact") => Ok(ArithmeticMode::Exact),
        Some("float") => Ok(ArithmeticMode::Float),
        _ => Err(CliError::Parse(format!(
            "`arithmetic` must be \"exact\" or \"float\", got {v}"
        ))),
    }
}

pub fn parse_number(v: &Value) -> Result<Rational, CliError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(CliError::Parse(format!("expected a number, got {other}"))),
    };
    parse_rational(&text).ok_or_else(|| CliError::Parse(format!("invalid number `{text}`")))
}

/// `"a,b,c"` as used by `sectional --vector`.
pub fn parse_vector_text(text: &str) -> Result<Vector3<Rational>, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Parse(format!(
            "vector needs three comma-separated components, got `{text}`"
        )));
    }
    let mut out = Vec::with_capacity(3);
    for p in parts {
        out.push(parse_rational(p).ok_or_else(|| CliError::Parse(format!("invalid number `{p}`")))?);
    }
    let [x, y, z]: [Rational; 3] = out.try_into().expect("three parts");
    Ok(Vector3::new(x, y, z))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, CliError> {
    obj.get(key)
        .ok_or_else(|| CliError::Parse(format!("missing field `{key}`")))
}

fn numbers<const N: usize>(v: &Value, what: &str) -> Result<[Rational; N], CliError> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == N)
        .ok_or_else(|| CliError::Parse(format!("`{what}` must be an array of {N} numbers")))?;
    let parsed = arr.iter().map(parse_number).collect::<Result<Vec<_>, _>>()?;
    Ok(parsed.try_into().expect("length checked"))
}

fn zeros<const N: usize>() -> [Rational; N] {
    array::from_fn(|_| Rational::from_integer(0.into()))
}

fn parse_circulant(obj: &Map<String, Value>) -> Result<Payload, CliError> {
    let vec3 = |key: &str| match obj.get(key) {
        None => Ok(zeros::<3>()),
        Some(v) => numbers::<3>(v, key),
    };
    let mat3 = |key: &str| -> Result<[[Rational; 3]; 3], CliError> {
        match obj.get(key) {
            None => Ok(array::from_fn(|_| zeros::<3>())),
            Some(v) => {
                let rows = v
                    .as_array()
                    .filter(|a| a.len() == 3)
                    .ok_or_else(|| CliError::Parse(format!("`{key}` must be a 3x3 array")))?;
                let parsed = rows
                    .iter()
                    .map(|r| numbers::<3>(r, key))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(parsed.try_into().expect("length checked"))
            }
        }
    };
    Ok(Payload::Circulant(CirculantJet {
        a: parse_number(field(obj, "a")?)?,
        b: parse_number(field(obj, "b")?)?,
        da: vec3("da")?,
        db: vec3("db")?,
        d2a: mat3("d2a")?,
        d2b: mat3("d2b")?,
    }))
}

fn parse_family(obj: &Map<String, Value>) -> Result<Payload, CliError> {
    let lambda = field(obj, "lambda")?;
    match field(obj, "family")?.as_u64() {
        Some(1) => Ok(Payload::Family(FamilyParams::Family1(numbers::<3>(lambda, "lambda")?))),
        Some(2) => Ok(Payload::Family(FamilyParams::Family2(numbers::<2>(lambda, "lambda")?))),
        _ => Err(CliError::Parse("`family` must be 1 or 2".into())),
    }
}

fn parse_custom(obj: &Map<String, Value>) -> Result<Payload, CliError> {
    let brackets = field(obj, "brackets")?
        .as_object()
        .ok_or_else(|| CliError::Parse("`brackets` must be an object".into()))?;
    for key in brackets.keys() {
        if !["12", "13", "23"].contains(&key.as_str()) {
            return Err(CliError::Parse(format!("unexpected bracket `{key}`")));
        }
    }
    let get = |key: &str| -> Result<Vector3<Rational>, CliError> {
        match brackets.get(key) {
            None => Ok(Vector3(zeros::<3>())),
            Some(v) => Ok(Vector3(numbers::<3>(v, key)?)),
        }
    };
    Ok(Payload::Custom([get("12")?, get("13")?, get("23")?]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for text in [
            r#"{"kind":"circulant-jet","payload":{"a":"3","b":1,"db":["1/2",0,"-0.25"]}}"#,
            r#"{"kind":"lie-family","payload":{"family":2,"lambda":[1,"2/3"]},"arithmetic":"float"}"#,
            r#"{"kind":"lie-custom","payload":{"brackets":{"12":[0,0,1]}}}"#,
        ] {
            let inst = Instance::parse(text).unwrap();
            assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
        }
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_number(&json!(0.1)).unwrap(), Rational::new(1.into(), 10.into()));
        assert_eq!(
            parse_number(&json!("-3/6")).unwrap(),
            Rational::new((-1).into(), 2.into())
        );
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "not json",
            r#"[1,2]"#,
            r#"{"kind":"torus","payload":{}}"#,
            r#"{"kind":"circulant-jet","a":"3","b":1}"#,
            r#"{"kind":"circulant-jet","payload":{"a":"3"}}"#,
            r#"{"kind":"circulant-jet","payload":{"a":"x","b":1}}"#,
            r#"{"kind":"lie-family","payload":{"family":3,"lambda":[1,2,3]}}"#,
            r#"{"kind":"lie-family","payload":{"family":2,"lambda":[1,2,3]}}"#,
            r#"{"kind":"lie-family","payload":{"family":1,"lambda":[1,2,3],"extra":0}}"#,
            r#"{"kind":"lie-family","payload":{"family":1,"lambda":[1,2,3]},"arithmetic":"fast"}"#,
        ] {
            assert!(matches!(Instance::parse(text), Err(CliError::Parse(_))), "{text}");
        }
    }

    #[test]
    fn vector_text() {
        let v = parse_vector_text("1, -1/2,0.5").unwrap();
        assert_eq!(v.0[1], Rational::new((-1).into(), 2.into()));
        assert!(parse_vector_text("1,2").is_err());
    }
}
