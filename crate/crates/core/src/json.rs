//! JSON encodings of fields, scalars, matrices, divisors and certificates.
//!
//! Scalars: ℚ as `"a/b"` or `"a"`, 𝔽_p as an integer, ℚ(√d) as `["a/b", "c/e"]`
//! meaning `a/b + (c/e)·√d`. Parsers also accept plain integers wherever a
//! rational is expected.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::decompose::{Certificate, Check, ObstructionReport, Parts, PeriodWitness, VerifyReport};
use crate::error::{Error, Result};
use crate::matrix::{CanonicalData, ElementaryDivisor, Matrix};
use crate::poly::Polynomial;
use crate::scalar::{Field, Scalar};

fn bad(what: impl Into<String>) -> Error {
    Error::InvalidInput(what.into())
}

fn rational_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => {
            let i: BigInt = n
                .to_string()
                .parse()
                .map_err(|_| bad(format!("not an integer: {n}")))?;
            Ok(BigRational::from_integer(i))
        }
        Value::String(s) => {
            let s = s.trim();
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s, "1"),
            };
            let num: BigInt = num
                .parse()
                .map_err(|_| bad(format!("bad rational {s:?}")))?;
            let den: BigInt = den
                .parse()
                .map_err(|_| bad(format!("bad rational {s:?}")))?;
            if den.is_zero() {
                return Err(bad(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(num, den))
        }
        _ => Err(bad(format!("expected a rational, got {v}"))),
    }
}

pub fn field_to_json(f: Field) -> Value {
    match f {
        Field::Rationals => json!({"kind": "rationals"}),
        Field::Prime(p) => json!({"kind": "prime", "p": p}),
        Field::RealQuadratic(d) => json!({"kind": "real_quadratic", "d": d}),
    }
}

/// Accepts the object form or the `--field` string syntax.
pub fn field_from_json(v: &Value) -> Result<Field> {
    if let Value::String(s) = v {
        return Field::parse(s);
    }
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("field needs a kind"))?;
    match kind {
        "rationals" => Ok(Field::Rationals),
        "prime" => {
            let p = v
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("prime field needs p"))?;
            Field::prime(p)
        }
        "real_quadratic" => {
            let d = v
                .get("d")
                .and_then(Value::as_i64)
                .ok_or_else(|| bad("quadratic field needs d"))?;
            Field::real_quadratic(d)
        }
        other => Err(bad(format!("unknown field kind {other:?}"))),
    }
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Q(r) => Value::String(rational_str(r)),
        Scalar::Fp { v, .. } => json!(v),
        Scalar::Qd { a, b, .. } => json!([rational_str(a), rational_str(b)]),
    }
}

pub fn scalar_from_json(field: Field, v: &Value) -> Result<Scalar> {
    match (field, v) {
        (Field::RealQuadratic(_), Value::Array(ab)) => {
            let [a, b] = ab.as_slice() else {
                return Err(bad(format!("expected [a, b], got {v}")));
            };
            field.quadratic(parse_rational(a)?, parse_rational(b)?)
        }
        _ => field.from_rational(&parse_rational(v)?),
    }
}

pub fn poly_to_json(p: &Polynomial) -> Value {
    Value::Array(p.coeffs().iter().map(scalar_to_json).collect())
}

pub fn poly_from_json(field: Field, v: &Value) -> Result<Polynomial> {
    let cs = v
        .as_array()
        .ok_or_else(|| bad("polynomial must be an array"))?;
    let coeffs = cs
        .iter()
        .map(|c| scalar_from_json(field, c))
        .collect::<Result<_>>()?;
    Ok(Polynomial::new(field, coeffs))
}

pub fn rows_to_json(m: &Matrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(scalar_to_json).collect()))
            .collect(),
    )
}

/// A non-empty square matrix from a rows array.
pub fn rows_from_json(field: Field, v: &Value) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| bad("rows must be an array"))?;
    if rows.is_empty() {
        return Err(bad("empty matrix"));
    }
    let parsed = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| bad("row must be an array"))?
                .iter()
                .map(|c| scalar_from_json(field, c))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_rows(field, parsed)?;
    if !m.is_square() {
        return Err(bad(format!(
            "matrix is {}×{}, not square",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    json!({"field": field_to_json(m.field()), "rows": rows_to_json(m)})
}

/// `{"field": ..., "rows": ...}`; `field_override` wins over the embedded field.
pub fn matrix_from_json(v: &Value, field_override: Option<Field>) -> Result<Matrix> {
    let field = match (field_override, v.get("field")) {
        (Some(f), _) => f,
        (None, Some(f)) => field_from_json(f)?,
        (None, None) => Field::Rationals,
    };
    let rows = v.get("rows").ok_or_else(|| bad("matrix needs rows"))?;
    rows_from_json(field, rows)
}

pub fn divisor_to_json(d: &ElementaryDivisor) -> Value {
    match d {
        ElementaryDivisor::X => json!("x"),
        ElementaryDivisor::NilpotentPower(k) => json!({"nilpotent": k}),
        ElementaryDivisor::TorsionFactor(p) => json!({"torsion": poly_to_json(p)}),
    }
}

pub fn divisor_from_json(field: Field, v: &Value) -> Result<ElementaryDivisor> {
    if v.as_str() == Some("x") {
        return Ok(ElementaryDivisor::X);
    }
    if let Some(k) = v.get("nilpotent").and_then(Value::as_u64) {
        if k < 2 {
            return Err(bad("nilpotent blocks have size at least 2"));
        }
        return Ok(ElementaryDivisor::NilpotentPower(k as usize));
    }
    if let Some(p) = v.get("torsion") {
        return Ok(ElementaryDivisor::TorsionFactor(poly_from_json(field, p)?));
    }
    Err(bad(format!("unknown divisor {v}")))
}

pub fn canonical_to_json(c: &CanonicalData) -> Value {
    json!({
        "divisors": c.divisors.iter().map(divisor_to_json).collect::<Vec<_>>(),
        "transform": rows_to_json(&c.transform),
        "block": rows_to_json(&c.block),
    })
}

/// Orders beyond `u64` are written as decimal strings.
fn order_to_json(s: u128) -> Value {
    match u64::try_from(s) {
        Ok(v) => json!(v),
        Err(_) => json!(s.to_string()),
    }
}

fn order_from_json(v: &Value) -> Result<u128> {
    let parsed = match v {
        Value::Number(n) => n.as_u64().map(u128::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    };
    parsed
        .filter(|&s| s > 0)
        .ok_or_else(|| bad(format!("bad torsion order {v}")))
}

pub fn witness_to_json(w: &PeriodWitness) -> Value {
    json!({
        "n0": order_to_json(w.n0),
        "m0": order_to_json(w.m0),
        "nil_index": w.nil_index,
        "torsion_order": order_to_json(w.torsion_order),
    })
}

pub fn checks_to_json(r: &VerifyReport) -> Value {
    Value::Array(
        r.checks
            .iter()
            .map(|Check { name, passed }| json!({"name": name, "passed": passed}))
            .collect(),
    )
}

/// Certificate for `a`, with the checks that were run on it.
pub fn certificate_to_json(a: &Matrix, c: &Certificate, report: &VerifyReport) -> Value {
    let parts = match &c.parts {
        Parts::Et { e, t } => json!({"E": rows_to_json(e), "T": rows_to_json(t)}),
        Parts::Tn { t, n } => json!({"T": rows_to_json(t), "N": rows_to_json(n)}),
    };
    json!({
        "kind": c.parts.kind(),
        "field": field_to_json(a.field()),
        "matrix": rows_to_json(a),
        "parts": parts,
        "torsion_order": order_to_json(c.torsion_order),
        "transform": rows_to_json(&c.transform),
        "checks": checks_to_json(report),
    })
}

/// Parses a certificate; returns it with the embedded matrix, if any.
pub fn certificate_from_json(v: &Value) -> Result<(Certificate, Option<Matrix>)> {
    let field = field_from_json(
        v.get("field")
            .ok_or_else(|| bad("certificate needs a field"))?,
    )?;
    let get = |obj: &Value, key: &str| -> Result<Matrix> {
        rows_from_json(
            field,
            obj.get(key).ok_or_else(|| bad(format!("missing {key}")))?,
        )
    };
    let parts_v = v
        .get("parts")
        .ok_or_else(|| bad("certificate needs parts"))?;
    let parts = match v.get("kind").and_then(Value::as_str) {
        Some("ET") => Parts::Et {
            e: get(parts_v, "E")?,
            t: get(parts_v, "T")?,
        },
        Some("TN") => Parts::Tn {
            t: get(parts_v, "T")?,
            n: get(parts_v, "N")?,
        },
        _ => return Err(bad("certificate kind must be ET or TN")),
    };
    let torsion_order = order_from_json(
        v.get("torsion_order")
            .ok_or_else(|| bad("missing torsion_order"))?,
    )?;
    let transform = match v.get("transform") {
        Some(t) => rows_from_json(field, t)?,
        None => Matrix::identity(field, parts.torsion().n()),
    };
    let matrix = v
        .get("matrix")
        .map(|m| rows_from_json(field, m))
        .transpose()?;
    Ok((
        Certificate {
            parts,
            torsion_order,
            transform,
        },
        matrix,
    ))
}

pub fn obstruction_to_json(r: &ObstructionReport) -> Value {
    json!({
        "matrix": matrix_to_json(&r.matrix),
        "period_check": r.period_check,
        "rank": r.rank,
        "forced": poly_to_json(&r.forced),
        "quadratic": poly_to_json(&r.quadratic),
        "min_poly": poly_to_json(&r.min_poly),
        "min_poly_trace": scalar_to_json(&r.min_poly_trace),
        "candidates": r.candidates.iter().map(|c| json!({
            "index": c.index,
            "poly": poly_to_json(&c.poly),
            "matches": c.matches,
        })).collect::<Vec<_>>(),
        "obstructed": r.obstructed,
    })
}

/// Pretty printing with arrays of scalars kept on one line, so matrix rows
/// and polynomials read naturally. Ends with a newline.
pub fn to_pretty(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.push_str(&"  ".repeat(d));
    match v {
        Value::Array(xs) if !xs.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Array(xs) => {
            let items: Vec<String> = xs.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&items.join(", "));
            out.push(']');
        }
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
        _ => out.push_str(&v.to_string()),
    }
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_round_trips() {
        let q = Field::Rationals;
        let s = q
            .from_rational(&BigRational::new(BigInt::from(-3), BigInt::from(6)))
            .unwrap();
        assert_eq!(scalar_to_json(&s), json!("-1/2"));
        assert_eq!(scalar_from_json(q, &json!("-1/2")).unwrap(), s);
        assert_eq!(scalar_from_json(q, &json!(4)).unwrap(), q.from_i64(4));

        let f5 = Field::prime(5).unwrap();
        assert_eq!(scalar_from_json(f5, &json!(-1)).unwrap(), f5.from_i64(4));
        assert_eq!(scalar_from_json(f5, &json!("1/2")).unwrap(), f5.from_i64(3));
        assert!(scalar_from_json(f5, &json!("1/5")).is_err());

        let k = Field::real_quadratic(2).unwrap();
        let r2 = k.sqrt_d().unwrap();
        let v = &k.from_i64(1) - &r2;
        assert_eq!(scalar_to_json(&v), json!(["1", "-1"]));
        assert_eq!(scalar_from_json(k, &json!(["1", "-1"])).unwrap(), v);
    }

    #[test]
    fn matrix_and_field_round_trip() {
        let k = Field::real_quadratic(3).unwrap();
        let mut m = Matrix::identity(k, 2);
        m.set(0, 1, k.sqrt_d().unwrap());
        let v = matrix_to_json(&m);
        assert_eq!(matrix_from_json(&v, None).unwrap(), m);
        assert_eq!(field_from_json(&json!("fp:7")).unwrap(), Field::Prime(7));
        assert!(matrix_from_json(&json!({"rows": []}), None).is_err());
        assert!(matrix_from_json(&json!({"rows": [[1, 2]]}), None).is_err());
    }

    #[test]
    fn divisor_tags() {
        let q = Field::Rationals;
        for d in [
            ElementaryDivisor::X,
            ElementaryDivisor::NilpotentPower(3),
            ElementaryDivisor::TorsionFactor(Polynomial::from_i64s(q, &[1, 1, 1])),
        ] {
            assert_eq!(divisor_from_json(q, &divisor_to_json(&d)).unwrap(), d);
        }
    }

    #[test]
    fn pretty_output_parses_back() {
        let m = Matrix::from_i64(Field::Rationals, &[&[1, 2], &[3, 4]]);
        let v = json!({"m": matrix_to_json(&m), "empty": [], "o": {}, "k": "x"});
        let text = to_pretty(&v);
        assert!(text.contains("[\"1\", \"2\"]"));
        assert_eq!(parse(&text).unwrap(), v);
    }

    #[test]
    fn huge_orders_are_strings() {
        let big = u128::from(u64::MAX) + 1;
        assert_eq!(order_from_json(&order_to_json(big)).unwrap(), big);
        assert_eq!(order_to_json(6), json!(6));
    }
}
