//! Canonical JSON form of polynomials and tensors.
//!
//! A polynomial is an array of `[exponents, "p/q"]` pairs in ascending
//! degree-lexicographic order; a tensor is `{"slots": [...], "components":
//! [...]}` with components in slot-major order.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q};
use crate::tensor::indexed::{IndexedTensor, Slot};
use crate::tensor::poly::{Monomial, Poly, MAX_VARS};

pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.terms().map(|(m, c)| json!([m.exponents(p.nvars()), format_q(c)])).collect())
}

pub fn poly_from_json(v: &Value, nvars: usize, path: &str) -> Result<Poly> {
    let terms =
        v.as_array().ok_or_else(|| Error::parse(path, "polynomial must be an array of [exponents, coefficient]"))?;
    let mut p = Poly::zero(nvars);
    for (i, t) in terms.iter().enumerate() {
        let tp = format!("{path}[{i}]");
        let pair = t
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::parse(&tp, "term must be [exponents, coefficient]"))?;
        let exps = pair[0].as_array().ok_or_else(|| Error::parse(format!("{tp}[0]"), "exponents must be an array"))?;
        if exps.len() != nvars || nvars > MAX_VARS {
            return Err(Error::parse(format!("{tp}[0]"), format!("expected {nvars} exponents, got {}", exps.len())));
        }
        let mut e = Vec::with_capacity(nvars);
        for (k, x) in exps.iter().enumerate() {
            let v = x.as_u64().filter(|&v| v <= u8::MAX as u64).ok_or_else(|| {
                Error::parse(format!("{tp}[0][{k}]"), "exponent must be a small non-negative integer")
            })?;
            e.push(v as u8);
        }
        let c = pair[1]
            .as_str()
            .and_then(parse_q)
            .ok_or_else(|| Error::parse(format!("{tp}[1]"), "coefficient must be a \"p/q\" string"))?;
        p.add_term(Monomial::from_exponents(&e), c);
    }
    Ok(p)
}

pub fn tensor_to_json(t: &IndexedTensor) -> Value {
    json!({
        "slots": t.slots(),
        "components": t.components().iter().map(poly_to_json).collect::<Vec<_>>(),
    })
}

pub fn tensor_from_json(v: &Value, n: usize, nvars: usize, path: &str) -> Result<IndexedTensor> {
    let slots: Vec<Slot> =
        serde_json::from_value(v.get("slots").cloned().ok_or_else(|| Error::parse(path, "missing \"slots\""))?)
            .map_err(|e| Error::parse(format!("{path}.slots"), e.to_string()))?;
    let comps = v
        .get("components")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse(path, "missing \"components\" array"))?;
    let polys = comps
        .iter()
        .enumerate()
        .map(|(i, c)| poly_from_json(c, nvars, &format!("{path}.components[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    IndexedTensor::from_components(n, nvars, &slots, polys).map_err(|e| Error::parse(path, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;
    use proptest::prelude::*;

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec((proptest::collection::vec(0u8..3, 4), -9i64..9, 1i64..9), 0..6).prop_map(|terms| {
            Poly::from_terms(4, terms.into_iter().map(|(e, a, b)| (Monomial::from_exponents(&e), q_frac(a, b))))
        })
    }

    proptest! {
        #[test]
        fn poly_json_round_trip(p in arb_poly()) {
            let back = poly_from_json(&poly_to_json(&p), 4, "p").unwrap();
            prop_assert_eq!(back, p);
        }
    }

    #[test]
    fn bad_coefficient_reports_path() {
        let v: Value = serde_json::from_str(r#"[[[1,0],"1/0"]]"#).unwrap();
        let err = poly_from_json(&v, 2, "gamma_e[0][1][1]").unwrap_err();
        assert!(err.to_string().contains("gamma_e[0][1][1][0][1]"));
    }
}
