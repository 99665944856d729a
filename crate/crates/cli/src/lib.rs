//! Command implementations behind the `qosc` binary. Every command returns an
//! [`Outcome`]: a JSON document plus the names of failed checks.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use qosc_core::algebra::element_to_text;
use qosc_core::analysis::{Analysis, Variant, XPoly};
use qosc_core::osc::{gram_report, spectrum_report, Measured, OscillatorModel};
use qosc_core::report::scalar_json;
use qosc_core::shell::{parse, Lowering};
use qosc_core::structure::{structure_from_json, structure_to_json, verify_structure};
use qosc_core::{build_structure, Algebra, Dimension, Element, QScalar, Report, StructureSet};

pub const TRUNC_ENV: &str = "QOSC_TRUNC_DEGREE";
pub const DEFAULT_TRUNC: usize = 16;

/// Truncation degree `D`, overridable through the environment.
pub fn trunc_degree() -> Result<usize> {
    match std::env::var(TRUNC_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{TRUNC_ENV}={v:?} is not a non-negative integer")),
        Err(_) => Ok(DEFAULT_TRUNC),
    }
}

pub struct Outcome {
    pub json: Value,
    pub failures: Vec<String>,
}

impl Outcome {
    fn from_report(mut json: Value, rep: &Report) -> Self {
        let failures: Vec<String> = rep.failures().iter().map(|c| c.name.clone()).collect();
        json["failures"] = json!(failures);
        Outcome { json, failures }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    /// Pretty JSON; object keys come out sorted.
    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.json).expect("JSON values serialize")
    }
}

fn structure(n: usize) -> Result<StructureSet> {
    Ok(build_structure(Dimension::new(n)?)?)
}

fn algebra(n: usize) -> Result<Arc<Algebra>> {
    Ok(Arc::new(Algebra::new(structure(n)?)?))
}

/// Lowers a scalar-valued expression such as `1/2`, `q^(1/2)` or `2*q`.
pub fn scalar_expr(alg: &Algebra, text: &str) -> Result<QScalar> {
    let e = Lowering::new(alg).lower(&parse(text)?)?;
    match e.terms().iter().next() {
        None => Ok(QScalar::zero()),
        Some((w, c)) if e.len() == 1 && *w == qosc_core::Word::one() => Ok(c.clone()),
        _ => bail!("{text:?} is not a scalar"),
    }
}

pub fn verify_structure_cmd(n: usize, import: Option<&Path>, export: Option<&Path>, with_algebra: bool) -> Result<Outcome> {
    let s = match import {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let v: Value = serde_json::from_str(&text)?;
            let s = structure_from_json(&v)?;
            if s.n() != n {
                bail!("imported structure has N = {}, expected {n}", s.n());
            }
            s
        }
        None => structure(n)?,
    };
    if let Some(p) = export {
        std::fs::write(p, serde_json::to_string_pretty(&structure_to_json(&s))?)
            .with_context(|| format!("writing {}", p.display()))?;
    }
    let mut rep = verify_structure(&s);
    if with_algebra {
        let alg = Algebra::new(s.clone())?;
        rep.extend(alg.confluence_report()?);
        rep.extend(alg.casimir_check()?.0);
    }
    let json = json!({
        "schema": 1,
        "N": n,
        "checks": rep.to_json(),
    });
    Ok(Outcome::from_report(json, &rep))
}

/// Normal form of an expression as canonical text and JSON.
pub fn normalize_cmd(n: usize, expr: &str, omega: &str) -> Result<(String, Outcome)> {
    let alg = algebra(n)?;
    let mut low = Lowering::new(&alg);
    low.omega = scalar_expr(&alg, omega)?;
    let e: Element = low.lower(&parse(expr)?)?;
    let text = element_to_text(&e, alg.s.dim);
    let terms: Vec<Value> = e
        .terms()
        .iter()
        .map(|(w, c)| {
            json!({
                "lambda_half": w.lam,
                "x": w.xs.iter().map(|&p| alg.s.dim.index(p as usize)).collect::<Vec<_>>(),
                "d": w.ds.iter().map(|&p| alg.s.dim.index(p as usize)).collect::<Vec<_>>(),
                "coeff": scalar_json(c),
            })
        })
        .collect();
    let sector = match e.sector() {
        Some(qosc_core::Sector::Unbarred) => json!("unbarred"),
        Some(qosc_core::Sector::Barred) => json!("barred"),
        None => Value::Null,
    };
    let json = json!({
        "schema": 1,
        "N": n,
        "input": expr,
        "normal_form": text,
        "sector": sector,
        "terms": terms,
        "failures": [],
    });
    Ok((text, Outcome { json, failures: vec![] }))
}

fn measured_json(m: &[Measured]) -> Value {
    Value::Array(m.iter().map(|x| json!({"name": x.name, "level": x.level, "value": x.value.to_string()})).collect())
}

fn model(n: usize, rmax: usize, omega: &str, d: usize) -> Result<OscillatorModel> {
    let alg = algebra(n)?;
    let w = scalar_expr(&alg, omega)?;
    Ok(OscillatorModel::new(alg, w, rmax, d)?)
}

pub fn spectrum_cmd(n: usize, rmax: usize, q: Option<f64>, omega: &str, d: usize) -> Result<Outcome> {
    let m = model(n, rmax, omega, d)?;
    let tower = m.build_tower()?;
    let mut rep = m.verify_spectrum(&tower)?;
    rep.extend(m.ground_annihilation()?);
    for r in 0..=rmax {
        rep.extend(m.verify_f_relation(r));
    }
    let diag = json!({
        "dims_bar": tower.dims_bar,
        "normalization": m.norm.name(),
        "unbarred_derivative_annihilator_nonzero_terms": m.unbarred_derivative_annihilator_residual()?,
        "trunc_degree": d,
    });
    Ok(Outcome::from_report(spectrum_report(&m, &tower, &rep, q, diag), &rep))
}

pub fn gram_cmd(n: usize, rmax: usize, qs: &[f64], order: usize, omega: &str, d: usize) -> Result<Outcome> {
    if qs.is_empty() {
        bail!("at least one --q value is required");
    }
    let m = model(n, rmax + 1, omega, d)?;
    let tower = m.build_tower()?;
    let (mut rep, grams, measured, series) = m.gram_suite(&tower, rmax, qs, order)?;
    let (ladder, lm) = m.ladder_structure_checks(&tower)?;
    rep.extend(ladder);
    let mut all = measured;
    all.extend(lm);
    let diag = json!({
        "measured": measured_json(&all),
        "normalization": m.norm.name(),
        "series": series,
        "trunc_degree": d,
    });
    Ok(Outcome::from_report(gram_report(&m, &tower, &rep, order, &grams, diag), &rep))
}

pub fn integrate_cmd(n: usize, expr: &str, alpha: &str, variant: Variant, export: Option<&Path>) -> Result<Outcome> {
    let alg = algebra(n)?;
    let a = scalar_expr(&alg, alpha)?;
    let e = Lowering::new(&alg).lower(&parse(expr)?)?;
    if !e.is_coordinate_only() {
        bail!("integrand must be a polynomial in x");
    }
    let poly: XPoly = e.terms().iter().map(|(w, c)| (w.xs.clone(), c.clone())).collect();
    let deg = e.max_degree().unwrap_or(0);
    let an = Analysis::new(alg.clone());
    let table = an.build_moments(&a, variant, (deg + 2) & !1)?;
    let value = table.integrate(&poly)?;
    let rep = an.moment_checks(&table)?;
    if let Some(p) = export {
        std::fs::write(p, serde_json::to_string_pretty(&table.to_json())?).with_context(|| format!("writing {}", p.display()))?;
    }
    let limit = value.limit_q_to_1().ok().map(|r| r.to_string());
    let json = json!({
        "schema": 1,
        "N": n,
        "alpha": scalar_json(&a),
        "variant": variant.name(),
        "integrand": element_to_text(&e, alg.s.dim),
        "value": scalar_json(&value),
        "value_q1": limit,
        "checks": rep.to_json(),
    });
    Ok(Outcome::from_report(json, &rep))
}

pub fn decompose_cmd(n: usize, r: usize, omega: &str, d: usize) -> Result<Outcome> {
    let m = model(n, r.max(1), omega, d.max(2 * r + 4))?;
    let tower = m.build_tower()?;
    let (mut rep, measured) = m.angular_momentum_suite(&tower, r)?;
    let sp = m.scalar_product(2 * r + 2)?;
    rep.extend(m.spheric_decomposition(&tower, r, Some(&sp))?);
    let blocks: Vec<Value> = (0..=r / 2)
        .map(|k| {
            let l = r - 2 * k;
            json!({
                "m": k,
                "l": l,
                "l_squared": qosc_core::osc::l_squared(n, l as i64).to_string(),
                "l_dot_l_eigenvalue": qosc_core::osc::l_dot_l_eigenvalue(n, l as i64).to_string(),
                "dim": qosc_core::osc::harmonic_dim(n, l),
            })
        })
        .collect();
    let json = json!({
        "schema": 1,
        "N": n,
        "r": r,
        "omega": m.omega.to_string(),
        "E_r": m.energy(r as i64).to_string(),
        "dim": tower.dims[r],
        "blocks": blocks,
        "checks": rep.to_json(),
        "diagnostics": { "measured": measured_json(&measured), "trunc_degree": d },
    });
    Ok(Outcome::from_report(json, &rep))
}

/// JSON document for an error that prevented a command from running.
pub fn error_json(err: &anyhow::Error) -> Value {
    let (kind, pos) = match err.downcast_ref::<qosc_core::Error>() {
        Some(qosc_core::Error::Syntax { pos, .. }) => ("syntax", Some(*pos)),
        Some(qosc_core::Error::IndexOutOfRange { .. }) => ("index_out_of_range", None),
        Some(qosc_core::Error::Sector(_)) => ("sector", None),
        Some(_) => ("computation", None),
        None => ("usage", None),
    };
    json!({
        "schema": 1,
        "failures": [{"name": "error", "kind": kind, "position": pos, "message": format!("{err:#}")}],
    })
}
