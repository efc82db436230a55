use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use super::VerifyError;
use crate::poly::{format_rational, parse_rational, rational_to_f64, Family, Rational, Unknown};

/// A scheme coefficient: exact rational, real float or complex float.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Exact(Rational),
    Real(f64),
    Complex(Complex64),
}

impl Coefficient {
    pub fn ratio(n: i64, d: i64) -> Self {
        Coefficient::Exact(Rational::new(n.into(), d.into()))
    }

    pub fn as_complex(&self) -> Complex64 {
        match self {
            Coefficient::Exact(r) => Complex64::new(rational_to_f64(r), 0.0),
            Coefficient::Real(x) => Complex64::new(*x, 0.0),
            Coefficient::Complex(z) => *z,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Coefficient::Exact(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            Coefficient::Complex(z) => z.im == 0.0,
            _ => true,
        }
    }

    fn parse(v: &Value, what: &str) -> Result<Self, VerifyError> {
        let bad = |msg: &str| VerifyError::Format(format!("{what}: {msg}"));
        match v {
            Value::String(s) => parse_rational(s)
                .map(Coefficient::Exact)
                .map_err(|e| bad(&e.to_string())),
            Value::Number(n) => n
                .as_f64()
                .map(Coefficient::Real)
                .ok_or_else(|| bad("not a finite number")),
            Value::Array(parts) if parts.len() == 2 => {
                let re = parts[0]
                    .as_f64()
                    .ok_or_else(|| bad("complex parts must be numbers"))?;
                let im = parts[1]
                    .as_f64()
                    .ok_or_else(|| bad("complex parts must be numbers"))?;
                Ok(Coefficient::Complex(Complex64::new(re, im)))
            }
            Value::Object(o) => {
                let re = o
                    .get("re")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| bad("missing \"re\""))?;
                let im = o.get("im").and_then(Value::as_f64).unwrap_or(0.0);
                Ok(Coefficient::Complex(Complex64::new(re, im)))
            }
            _ => Err(bad("expected \"p/q\" string, number, [re, im] or {re, im}")),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Coefficient::Exact(r) => Value::String(format_rational(r)),
            Coefficient::Real(x) => json!(x),
            Coefficient::Complex(z) => json!([z.re, z.im]),
        }
    }
}

impl From<Rational> for Coefficient {
    fn from(r: Rational) -> Self {
        Coefficient::Exact(r)
    }
}

impl From<f64> for Coefficient {
    fn from(x: f64) -> Self {
        Coefficient::Real(x)
    }
}

/// Stage coefficients `a`, `b` (and `c` for three operators) of a concrete
/// scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeCoefficients {
    a: Vec<Coefficient>,
    b: Vec<Coefficient>,
    c: Option<Vec<Coefficient>>,
}

impl SchemeCoefficients {
    pub fn new(
        a: Vec<Coefficient>,
        b: Vec<Coefficient>,
        c: Option<Vec<Coefficient>>,
    ) -> Result<Self, VerifyError> {
        if a.is_empty() {
            return Err(VerifyError::Invalid(
                "a scheme needs at least one stage".into(),
            ));
        }
        if b.len() != a.len() || c.as_ref().is_some_and(|c| c.len() != a.len()) {
            return Err(VerifyError::Invalid(format!(
                "coefficient lists differ in length (a: {}, b: {}{})",
                a.len(),
                b.len(),
                c.as_ref()
                    .map(|c| format!(", c: {}", c.len()))
                    .unwrap_or_default()
            )));
        }
        Ok(SchemeCoefficients { a, b, c })
    }

    pub fn from_rationals(a: &[(i64, i64)], b: &[(i64, i64)]) -> Self {
        let conv = |v: &[(i64, i64)]| v.iter().map(|&(n, d)| Coefficient::ratio(n, d)).collect();
        Self::new(conv(a), conv(b), None).expect("equal lengths")
    }

    pub fn from_f64(a: &[f64], b: &[f64]) -> Self {
        let conv = |v: &[f64]| v.iter().map(|&x| Coefficient::Real(x)).collect();
        Self::new(conv(a), conv(b), None).expect("equal lengths")
    }

    /// Builds the coefficient vector from an exact assignment; every
    /// unknown of an `s`-stage, `m`-operator scheme must be present.
    pub fn from_assignment(
        stages: usize,
        operators: usize,
        values: &BTreeMap<Unknown, Rational>,
    ) -> Result<Self, VerifyError> {
        let column = |f: Family| -> Result<Vec<Coefficient>, VerifyError> {
            (1..=stages as u16)
                .map(|j| {
                    let u = Unknown::new(f, j);
                    values
                        .get(&u)
                        .cloned()
                        .map(Coefficient::Exact)
                        .ok_or(VerifyError::Unbound(u))
                })
                .collect()
        };
        let c = if operators == 3 {
            Some(column(Family::C)?)
        } else {
            None
        };
        Self::new(column(Family::A)?, column(Family::B)?, c)
    }

    /// `e^{hB} e^{hA}`.
    pub fn lie_trotter() -> Self {
        Self::from_rationals(&[(1, 1)], &[(1, 1)])
    }

    /// `e^{hA/2} e^{hB} e^{hA/2}` as `a = (1/2, 1/2)`, `b = (1, 0)`.
    pub fn strang() -> Self {
        Self::from_rationals(&[(1, 2), (1, 2)], &[(1, 1), (0, 1)])
    }

    pub fn stages(&self) -> usize {
        self.a.len()
    }

    pub fn operators(&self) -> usize {
        if self.c.is_some() {
            3
        } else {
            2
        }
    }

    /// Coefficient list of one family, `None` for `c` in a two-operator scheme.
    pub fn family(&self, f: Family) -> Option<&[Coefficient]> {
        match f {
            Family::A => Some(&self.a),
            Family::B => Some(&self.b),
            Family::C => self.c.as_deref(),
        }
    }

    pub fn get(&self, u: &Unknown) -> Option<&Coefficient> {
        self.family(u.family)?.get(u.index as usize - 1)
    }

    /// Exact assignment, if every coefficient is a rational.
    pub fn exact_assignment(&self) -> Option<BTreeMap<Unknown, Rational>> {
        self.iter()
            .map(|(u, c)| c.as_exact().map(|r| (u, r.clone())))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Unknown, &Coefficient)> {
        Family::ALL.into_iter().flat_map(move |f| {
            self.family(f)
                .unwrap_or(&[])
                .iter()
                .enumerate()
                .map(move |(i, c)| (Unknown::new(f, i as u16 + 1), c))
        })
    }

    pub fn is_real(&self) -> bool {
        self.iter().all(|(_, c)| c.is_real())
    }

    /// Parses `{"s": …, "m": …, "a": […], "b": […], "c": […]}`. Entries are
    /// `"p/q"` strings (exact), numbers, or `[re, im]` pairs.
    pub fn from_json(text: &str) -> Result<Self, VerifyError> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| VerifyError::Format(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| VerifyError::Format("expected a JSON object".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "s" | "m" | "a" | "b" | "c") {
                return Err(VerifyError::Format(format!("unexpected field {key:?}")));
            }
        }
        let list = |key: &str| -> Result<Option<Vec<Coefficient>>, VerifyError> {
            match obj.get(key) {
                None | Some(Value::Null) => Ok(None),
                Some(Value::Array(items)) => items
                    .iter()
                    .enumerate()
                    .map(|(i, x)| Coefficient::parse(x, &format!("{key}[{}]", i + 1)))
                    .collect::<Result<Vec<_>, _>>()
                    .map(Some),
                Some(_) => Err(VerifyError::Format(format!("\"{key}\" must be a list"))),
            }
        };
        let a = list("a")?.ok_or_else(|| VerifyError::Format("missing \"a\"".into()))?;
        let b = list("b")?.ok_or_else(|| VerifyError::Format("missing \"b\"".into()))?;
        let c = list("c")?;
        let coeffs = Self::new(a, b, c)?;
        if let Some(s) = obj.get("s") {
            if s.as_u64() != Some(coeffs.stages() as u64) {
                return Err(VerifyError::Format(format!(
                    "\"s\" is {s} but {} stages are listed",
                    coeffs.stages()
                )));
            }
        }
        if let Some(m) = obj.get("m") {
            if m.as_u64() != Some(coeffs.operators() as u64) {
                return Err(VerifyError::Format(format!(
                    "\"m\" is {m} but the lists describe {} operators",
                    coeffs.operators()
                )));
            }
        }
        Ok(coeffs)
    }

    pub fn to_json(&self) -> String {
        let mut obj = Map::new();
        obj.insert("s".into(), json!(self.stages()));
        obj.insert("m".into(), json!(self.operators()));
        let list = |v: &[Coefficient]| Value::Array(v.iter().map(Coefficient::to_json).collect());
        obj.insert("a".into(), list(&self.a));
        obj.insert("b".into(), list(&self.b));
        if let Some(c) = &self.c {
            obj.insert("c".into(), list(c));
        }
        serde_json::to_string(&Value::Object(obj)).expect("serializable")
    }

    /// Sum of each family's coefficients, as complex numbers.
    pub fn family_sums(&self) -> Vec<Complex64> {
        Family::ALL
            .iter()
            .filter_map(|&f| self.family(f))
            .map(|v| {
                v.iter()
                    .fold(Complex64::zero(), |acc, c| acc + c.as_complex())
            })
            .collect()
    }
}
