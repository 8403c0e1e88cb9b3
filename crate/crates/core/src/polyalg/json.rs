//! JSON form of polynomials:
//! `{"terms": [{"n": 6, "re": 1.0, "im": 0.0}, ...]}` for Dirichlet
//! polynomials and `{"terms": [{"alpha": [[1,1],[2,1]], "re": ..., "im": ...}]}`
//! for trigonometric ones. Exact rings write `"p/q"` strings.

use serde_json::{json, Map, Value};

use super::{DirichletPoly, MultiIndex, TrigPoly};
use crate::error::{Error, Result};
use crate::scalar::JsonCoeff;

fn terms_array(v: &Value) -> Result<&Vec<Value>> {
    v.get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Format("missing \"terms\" array".into()))
}

fn parts(t: &Value) -> (&Value, &Value) {
    (t.get("re").unwrap_or(&Value::Null), t.get("im").unwrap_or(&Value::Null))
}

fn term_object(key: &str, key_value: Value, re: Value, im: Value) -> Value {
    let mut m = Map::new();
    m.insert(key.to_string(), key_value);
    m.insert("re".into(), re);
    m.insert("im".into(), im);
    Value::Object(m)
}

impl<C: JsonCoeff> DirichletPoly<C> {
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(n, c)| {
                let (re, im) = c.to_json_parts();
                term_object("n", json!(n), re, im)
            })
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let mut d = DirichletPoly::zero();
        for t in terms_array(v)? {
            let n = t
                .get("n")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Format(format!("term without positive integer \"n\": {t}")))?;
            if n == 0 {
                return Err(Error::Format("index n must be positive".into()));
            }
            let (re, im) = parts(t);
            d.add_term(n, C::from_json_parts(re, im)?)?;
        }
        Ok(d)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_json(&v)
    }
}

impl<C: JsonCoeff> TrigPoly<C> {
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(a, c)| {
                let (re, im) = c.to_json_parts();
                let alpha: Vec<Value> = a.entries().iter().map(|&(p, e)| json!([p, e])).collect();
                term_object("alpha", Value::Array(alpha), re, im)
            })
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let mut p = TrigPoly::zero();
        for t in terms_array(v)? {
            let bad = || Error::Format(format!("malformed \"alpha\" in {t}"));
            let alpha = t.get("alpha").and_then(Value::as_array).ok_or_else(bad)?;
            let mut pairs = Vec::with_capacity(alpha.len());
            for pe in alpha {
                let pe = pe.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
                let pos = pe[0].as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(bad)?;
                let exp = pe[1].as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(bad)?;
                pairs.push((pos, exp));
            }
            let (re, im) = parts(t);
            p.add_term(MultiIndex::from_pairs(pairs), C::from_json_parts(re, im)?);
        }
        Ok(p)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_json(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ComplexRational, Rational};
    use num_complex::{Complex, Complex64};

    #[test]
    fn dirichlet_float_format() {
        let d = DirichletPoly::<Complex64>::from_json_str(
            r#"{"terms": [{"n": 6, "re": 1.0, "im": 0.0}, {"n": 2, "re": 0.5, "im": -1}]}"#,
        )
        .unwrap();
        assert_eq!(d.coeff(2), Complex64::new(0.5, -1.0));
        let back = d.to_json();
        assert_eq!(back["terms"][0]["n"], 2);
        assert_eq!(back["terms"][1]["re"], 1.0);
    }

    #[test]
    fn exact_format_uses_fraction_strings() {
        let d = DirichletPoly::<ComplexRational>::from_json_str(
            r#"{"terms": [{"n": 3, "re": "1/3", "im": "0"}, {"n": 5, "re": 0.25}]}"#,
        )
        .unwrap();
        assert_eq!(d.coeff(3).re, Rational::new(1.into(), 3.into()));
        assert_eq!(d.coeff(5).re, Rational::new(1.into(), 4.into()));
        let v = d.to_json();
        assert_eq!(v["terms"][0]["re"], "1/3");
        assert_eq!(DirichletPoly::<ComplexRational>::from_json(&v).unwrap(), d);
    }

    #[test]
    fn trig_format() {
        let p = TrigPoly::<Complex<i128>>::from_json_str(
            r#"{"terms": [{"alpha": [[1,1],[2,1]], "re": 2, "im": 0}, {"alpha": [], "re": 1}]}"#,
        )
        .unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&MultiIndex::from_pairs([(1, 1), (2, 1)])), Complex::new(2, 0));
        assert_eq!(TrigPoly::<Complex<i128>>::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn malformed_inputs() {
        assert!(DirichletPoly::<Complex64>::from_json_str("{}").is_err());
        assert!(DirichletPoly::<Complex64>::from_json_str(r#"{"terms":[{"n":0,"re":1}]}"#).is_err());
        assert!(DirichletPoly::<Complex64>::from_json_str("not json").is_err());
        assert!(TrigPoly::<Complex64>::from_json_str(r#"{"terms":[{"alpha":[[1]],"re":1}]}"#).is_err());
    }
}
