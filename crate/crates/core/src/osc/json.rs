use serde_json::{json, Map, Value};

use crate::report::{scalar_json, Report};

use super::{OscillatorModel, StateTower};

/// Float Gram data for one evaluation point.
#[derive(Clone, Debug)]
pub struct GramSummary {
    pub q: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub size: usize,
}

fn levels(model: &OscillatorModel, tower: &StateTower, q: Option<f64>) -> Vec<Value> {
    (0..tower.levels.len())
        .map(|r| {
            let e = model.energy(r as i64);
            let mut o = Map::new();
            o.insert("r".into(), json!(r));
            o.insert("E_r".into(), Value::String(e.to_string()));
            o.insert("E_r_exact".into(), scalar_json(&e));
            o.insert("E_r_float".into(), q.and_then(|q0| e.eval(q0).ok()).map_or(Value::Null, |v| json!(v)));
            o.insert("dim".into(), json!(tower.dims[r]));
            Value::Object(o)
        })
        .collect()
}

/// `{schema, N, q, omega, levels, checks, diagnostics}`.
pub fn spectrum_report(model: &OscillatorModel, tower: &StateTower, rep: &Report, q: Option<f64>, diagnostics: Value) -> Value {
    json!({
        "schema": 1,
        "N": model.n(),
        "q": q.map_or(Value::String("q".into()), |v| json!(v)),
        "omega": model.omega.to_string(),
        "levels": levels(model, tower, q),
        "checks": rep.to_json(),
        "diagnostics": diagnostics,
    })
}

pub fn gram_report(model: &OscillatorModel, tower: &StateTower, rep: &Report, order: usize, grams: &[GramSummary], diagnostics: Value) -> Value {
    let g: Vec<Value> = grams
        .iter()
        .map(|g| json!({"q": g.q, "min_eigenvalue": g.min_eigenvalue, "max_eigenvalue": g.max_eigenvalue, "size": g.size}))
        .collect();
    json!({
        "schema": 1,
        "N": model.n(),
        "q": grams.iter().map(|g| g.q).collect::<Vec<_>>(),
        "omega": model.omega.to_string(),
        "order": order,
        "levels": levels(model, tower, grams.first().map(|g| g.q)),
        "gram": g,
        "checks": rep.to_json(),
        "diagnostics": diagnostics,
    })
}
