use serde_json::{json, Map, Value};

use super::tensor::{SparseMat, Tensor2, Tensor4};
use super::{Dimension, StructureSet};
use crate::coeff::QScalar;
use crate::error::{Error, Result};
use crate::report::scalar_json;


fn tensor4_json(t: &Tensor4) -> Value {
    let d = t.dim;
    Value::Array(
        t.nonzero()
            .into_iter()
            .map(|(i, j, h, k, v)| {
                json!({
                    "index": [d.index(i), d.index(j), d.index(h), d.index(k)],
                    "value": scalar_json(&v),
                })
            })
            .collect(),
    )
}

/// Exact JSON document for a structure set; entries keyed by index tuples.
pub fn structure_to_json(s: &StructureSet) -> Value {
    let d = s.dim;
    let mut c = Vec::new();
    for i in 0..d.n() {
        for j in 0..d.n() {
            let v = s.c.at(i, j);
            if !v.is_zero() {
                c.push(json!({ "index": [d.index(i), d.index(j)], "value": scalar_json(v) }));
            }
        }
    }
    let mut m = Map::new();
    m.insert("schema".into(), json!(1));
    m.insert("N".into(), json!(d.n()));
    m.insert("C".into(), Value::Array(c));
    m.insert("QN".into(), scalar_json(&s.qn));
    m.insert("Rhat".into(), tensor4_json(&s.rhat));
    m.insert("Rinv".into(), tensor4_json(&s.rinv));
    m.insert("PS".into(), tensor4_json(&s.ps));
    m.insert("PA".into(), tensor4_json(&s.pa));
    m.insert("P1".into(), tensor4_json(&s.p1));
    Value::Object(m)
}

fn bad(msg: &str) -> Error {
    Error::Invalid(format!("structure JSON: {msg}"))
}

fn read_scalar(v: &Value) -> Result<QScalar> {
    let mut v = v.clone();
    if let Some(o) = v.as_object_mut() {
        o.remove("text");
    }
    serde_json::from_value(v).map_err(|e| bad(&e.to_string()))
}

fn read_index(d: Dimension, v: &Value, len: usize) -> Result<Vec<usize>> {
    let a = v.as_array().ok_or_else(|| bad("index must be an array"))?;
    if a.len() != len {
        return Err(bad("wrong index arity"));
    }
    a.iter()
        .map(|x| {
            let i = x.as_i64().ok_or_else(|| bad("index must be an integer"))?;
            d.pos(i as i32).ok_or(Error::IndexOutOfRange { index: i, n: d.n() })
        })
        .collect()
}

fn read_tensor4(d: Dimension, v: &Value) -> Result<Tensor4> {
    let n = d.n();
    let mut m = SparseMat::zero(n * n);
    for e in v.as_array().ok_or_else(|| bad("tensor must be an array"))? {
        let ix = read_index(d, &e["index"], 4)?;
        m.set(ix[0] * n + ix[1], ix[2] * n + ix[3], read_scalar(&e["value"])?);
    }
    Ok(Tensor4::new(d, m))
}

/// Parses a document written by [`structure_to_json`]. The result is not
/// re-verified; callers run `verify_structure` when the source is untrusted.
pub fn structure_from_json(v: &Value) -> Result<StructureSet> {
    if v["schema"].as_i64() != Some(1) {
        return Err(bad("unsupported schema"));
    }
    let n = v["N"].as_u64().ok_or_else(|| bad("missing N"))? as usize;
    let d = Dimension::new(n)?;
    let mut c = vec![vec![QScalar::zero(); n]; n];
    for e in v["C"].as_array().ok_or_else(|| bad("missing C"))? {
        let ix = read_index(d, &e["index"], 2)?;
        c[ix[0]][ix[1]] = read_scalar(&e["value"])?;
    }
    Ok(StructureSet {
        dim: d,
        rhat: read_tensor4(d, &v["Rhat"])?,
        rinv: read_tensor4(d, &v["Rinv"])?,
        c: Tensor2 { dim: d, entries: c },
        ps: read_tensor4(d, &v["PS"])?,
        pa: read_tensor4(d, &v["PA"])?,
        p1: read_tensor4(d, &v["P1"])?,
        qn: read_scalar(&v["QN"])?,
    })
}
