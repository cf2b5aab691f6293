//! JSON interchange for scalars, polytopes and affine maps.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::polytope::{convex_hull, AffineMap, VPolytope, Vector};
use crate::scalar::{format_scalar, from_f64, parse_scalar, Scalar};

/// Accepts `"p/q"` / decimal strings and JSON numbers. Integral numbers are
/// read exactly; other floats via their exact binary expansion.
pub fn scalar_from_json(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => parse_scalar(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Scalar::from_integer(BigInt::from(i)))
            } else if let Some(u) = n.as_u64() {
                Ok(Scalar::from_integer(BigInt::from(u)))
            } else {
                from_f64(n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}")))?)
            }
        }
        other => Err(Error::Parse(format!("expected a number, found {other}"))),
    }
}

pub fn scalar_to_json(x: &Scalar) -> Value {
    Value::String(format_scalar(x))
}

pub fn vector_from_json(v: &Value) -> Result<Vector> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("expected an array of coordinates".into()))?;
    Ok(Vector(arr.iter().map(scalar_from_json).collect::<Result<_>>()?))
}

pub fn vector_to_json(v: &Vector) -> Value {
    Value::Array(v.iter().map(scalar_to_json).collect())
}

/// Integer direction such as `[1, -1, 0]` (numbers or integer strings).
pub fn int_vector_from_json(v: &Value) -> Result<Vec<BigInt>> {
    let x = vector_from_json(v)?;
    x.iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::Parse(format!("expected integer entries in {v}")))
            }
        })
        .collect()
}

pub fn int_vector_to_json(v: &[BigInt]) -> Value {
    Value::Array(
        v.iter()
            .map(|x| match i64::try_from(x) {
                Ok(i) => json!(i),
                Err(_) => json!(x.to_string()),
            })
            .collect(),
    )
}

/// `{"dim": n, "vertices": [[...], ...]}`; `dim` is optional when vertices
/// are present.
pub fn polytope_from_json(v: &Value) -> Result<VPolytope> {
    let verts = v
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("polytope needs a \"vertices\" array".into()))?;
    let pts: Vec<Vector> = verts.iter().map(vector_from_json).collect::<Result<_>>()?;
    if let Some(d) = v.get("dim") {
        let d = d.as_u64().ok_or_else(|| Error::Parse("\"dim\" must be a positive integer".into()))? as usize;
        if let Some(p) = pts.iter().find(|p| p.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
        }
    }
    convex_hull(&pts)
}

pub fn polytope_to_json(p: &VPolytope) -> Value {
    json!({
        "dim": p.dim(),
        "vertices": p.vertices().iter().map(vector_to_json).collect::<Vec<_>>(),
    })
}

pub fn affine_map_from_json(v: &Value) -> Result<AffineMap> {
    let rows = v
        .get("matrix")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("affine map needs a \"matrix\"".into()))?;
    let matrix: Vec<Vec<Scalar>> = rows.iter().map(|r| vector_from_json(r).map(|x| x.0)).collect::<Result<_>>()?;
    let translation = match v.get("translation") {
        Some(t) => vector_from_json(t)?,
        None => Vector::zeros(matrix.len()),
    };
    AffineMap::new(matrix, translation)
}

pub fn affine_map_to_json(t: &AffineMap) -> Value {
    json!({
        "matrix": t.matrix.iter().map(|r| r.iter().map(scalar_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "translation": vector_to_json(&t.translation),
    })
}

pub fn read_json_file(path: &std::path::Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn scalars_from_strings_and_numbers() {
        assert_eq!(scalar_from_json(&json!("2/4")).unwrap(), ratio(1, 2));
        assert_eq!(scalar_from_json(&json!(3)).unwrap(), int(3));
        assert_eq!(scalar_from_json(&json!(0.25)).unwrap(), ratio(1, 4));
        assert!(scalar_from_json(&json!(null)).is_err());
    }

    #[test]
    fn polytope_round_trip() {
        let v = json!({"dim": 2, "vertices": [["0","0"],[1,0],["0","1"],["1/4","1/4"]]});
        let p = polytope_from_json(&v).unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(polytope_from_json(&polytope_to_json(&p)).unwrap(), p);
        let bad = json!({"dim": 3, "vertices": [[0,0]]});
        assert!(matches!(polytope_from_json(&bad), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn affine_map_round_trip() {
        let v = json!({"matrix": [[2,0],[0,"1/2"]], "translation": [1, 0]});
        let t = affine_map_from_json(&v).unwrap();
        assert_eq!(affine_map_from_json(&affine_map_to_json(&t)).unwrap(), t);
        assert!(matches!(affine_map_from_json(&json!({"matrix": [[1,1],[1,1]]})), Err(Error::SingularMap)));
    }
}
