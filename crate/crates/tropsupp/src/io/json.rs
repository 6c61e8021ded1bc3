//! JSON encodings. Integers are written as JSON numbers of arbitrary size.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::complex::ConeComplex;
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::Vector;

pub fn int_value(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse().expect("integer literal"))
}

/// Rationals are integers when integral and `"p/q"` strings otherwise.
pub fn rat_value(x: &BigRational) -> Value {
    if x.is_integer() {
        int_value(x.numer())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn vec_value(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

pub fn vecs_value(v: &[Vector]) -> Value {
    Value::Array(v.iter().map(|x| vec_value(x)).collect())
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| perr(format!("missing field `{key}`")))
}

pub fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| perr(format!("`{what}` must be an array")))
}

pub fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| perr(format!("`{what}` must be a non-negative integer")))
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().map_err(|_| perr(format!("not an integer: {n}"))),
        _ => Err(perr(format!("expected an integer, found {v}"))),
    }
}

pub fn parse_rat(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => crate::io::text::parse_rational(s),
        _ => Ok(BigRational::from_integer(parse_int(v)?)),
    }
}

pub fn parse_vec(v: &Value, len: usize) -> Result<Vector> {
    let a = as_array(v, "vector")?;
    if a.len() != len {
        return Err(perr(format!("vector of length {} where {len} expected", a.len())));
    }
    a.iter().map(parse_int).collect()
}

pub fn parse_vecs(v: &Value, len: usize) -> Result<Vec<Vector>> {
    as_array(v, "vector list")?.iter().map(|x| parse_vec(x, len)).collect()
}

pub fn complex_to_json(c: &ConeComplex) -> Value {
    let cones: Vec<Value> = c
        .cones
        .iter()
        .zip(&c.faces)
        .map(|(k, f)| json!({ "rays": vecs_value(&k.rays), "faces": f }))
        .collect();
    json!({ "lattice_rank": c.rank, "cones": cones })
}

/// Parses a complex. Listed faces are checked against the face lattice computed from the rays.
pub fn complex_from_json(v: &Value) -> Result<ConeComplex> {
    let rank = as_usize(get(v, "lattice_rank")?, "lattice_rank")?;
    let items = as_array(get(v, "cones")?, "cones")?;
    let mut cones = vec![];
    let mut declared = vec![];
    for it in items {
        let rays = parse_vecs(get(it, "rays")?, rank)?;
        cones.push(Cone::from_rays(rank, &rays)?);
        let faces = match it.get("faces") {
            Some(f) => as_array(f, "faces")?.iter().map(|x| as_usize(x, "face index")).collect::<Result<Vec<_>>>()?,
            None => vec![],
        };
        declared.push(faces);
    }
    for (i, fs) in declared.iter().enumerate() {
        for &j in fs {
            let ok = j < cones.len() && cones[j].is_face_of(&cones[i]);
            if !ok {
                return Err(Error::Semantic(format!("cone {j} is listed as a face of cone {i} but is not one")));
            }
        }
    }
    let out = ConeComplex::from_cones(rank, cones);
    out.validate()?;
    Ok(out)
}

pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_str(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| perr(format!("invalid JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip_is_bit_exact() {
        let big = "123456789012345678901234567890";
        let src = format!(r#"{{"lattice_rank":2,"cones":[{{"rays":[[1,0],[{big},1]],"faces":[]}}]}}"#);
        let c = complex_from_json(&parse_str(&src).unwrap()).unwrap();
        let out = to_string(&c.to_json());
        assert!(out.contains(big));
        let again = complex_from_json(&parse_str(&out).unwrap()).unwrap();
        assert_eq!(to_string(&again.to_json()), out);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_str("{"), Err(Error::Parse(_))));
        let v = parse_str(r#"{"lattice_rank":2,"cones":[{"rays":[[1,0,0]]}]}"#).unwrap();
        assert!(matches!(complex_from_json(&v), Err(Error::Parse(_))));
        let line = parse_str(r#"{"lattice_rank":1,"cones":[{"rays":[[1],[-1]]}]}"#).unwrap();
        assert!(complex_from_json(&line).is_err());
        let overlap = parse_str(r#"{"lattice_rank":2,"cones":[{"rays":[[1,0],[1,2]]},{"rays":[[1,1],[0,1]]}]}"#).unwrap();
        assert!(matches!(complex_from_json(&overlap), Err(Error::Semantic(_))));
    }
}
