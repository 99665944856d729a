use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::coeff::linalg::{rref, Matrix};
use crate::coeff::QScalar;
use crate::error::{Error, Result};
use crate::report::{scalar_json, Check, Report};

use super::{poly_from_terms, Analysis, ClassFn, Variant, XPoly};

/// Gaussian moments `M(w) = ∫ w G_α / ∫ G_α` for every normal monomial up
/// to `max_degree`, fixed by `∫ ∂_i (w G_α) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable {
    pub n: usize,
    pub alpha: QScalar,
    pub variant: Variant,
    pub max_degree: usize,
    pub values: BTreeMap<Vec<u8>, QScalar>,
}

/// Non-decreasing words of length `d` over `n` letters.
pub(crate) fn monomials(n: usize, d: usize) -> Vec<Vec<u8>> {
    fn rec(n: u8, d: usize, start: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for a in start..n {
            cur.push(a);
            rec(n, d, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n as u8, d, 0, &mut Vec::new(), &mut out);
    out
}

impl Analysis {
    /// `∂_i (w G_α)` for the matched family, as a polynomial times `G_α`.
    fn stokes_row(&self, variant: Variant, alpha: &QScalar, i: u8, w: &[u8]) -> Result<XPoly> {
        let sec = variant.matched_sector();
        let rr = self.radial_rule(sec)?;
        if rr.lambda != variant.base() {
            return Err(Error::Invalid("matched family has a different radial base".into()));
        }
        let k = alpha.mul(&rr.c1).neg();
        let mut terms: Vec<(Vec<u8>, QScalar)> = self.alg.dact(sec, i, w).iter().cloned().collect();
        for (w2, c) in self.braid_tail(sec, i, w).iter() {
            terms.push((w2.clone(), c.mul(&k)));
        }
        Ok(poly_from_terms(terms))
    }

    /// Solves the Stokes system degree by degree. Each block must have a
    /// unique, consistent solution.
    pub fn build_moments(&self, alpha: &QScalar, variant: Variant, max_degree: usize) -> Result<MomentTable> {
        let n = self.n();
        let mut values: BTreeMap<Vec<u8>, QScalar> = BTreeMap::new();
        values.insert(Vec::new(), QScalar::one());
        for d in 0..max_degree {
            let unknowns = monomials(n, d + 1);
            let col: BTreeMap<&Vec<u8>, usize> = unknowns.iter().enumerate().map(|(k, w)| (w, k)).collect();
            let mut m: Matrix<QScalar> = Vec::new();
            for w in monomials(n, d) {
                for i in 0..n as u8 {
                    let row = self.stokes_row(variant, alpha, i, &w)?;
                    let mut r = vec![QScalar::zero(); unknowns.len() + 1];
                    let mut known = Vec::new();
                    for (w2, c) in &row {
                        if let Some(&k) = col.get(w2) {
                            r[k] = c.clone();
                        } else {
                            let mv = values.get(w2).cloned().unwrap_or_default();
                            known.push(c.mul(&mv));
                        }
                    }
                    r[unknowns.len()] = QScalar::sum(known.iter()).neg();
                    if r.iter().any(|c| !c.is_zero()) {
                        m.push(r);
                    }
                }
            }
            let (red, piv) = rref(&m);
            if piv.contains(&unknowns.len()) {
                return Err(Error::Singular(format!("inconsistent Stokes system at degree {}", d + 1)));
            }
            if piv.len() != unknowns.len() {
                return Err(Error::Singular(format!("underdetermined Stokes system at degree {}", d + 1)));
            }
            for (row, &p) in red.iter().zip(&piv) {
                let v = row[unknowns.len()].clone();
                if !v.is_zero() {
                    values.insert(unknowns[p].clone(), v);
                }
            }
        }
        Ok(MomentTable { n, alpha: alpha.clone(), variant, max_degree, values })
    }

    /// Normalization, vanishing odd moments, and the Stokes residual
    /// `∫ ∂^i (w G_α) = 0` with upper-index derivatives for every monomial `w`
    /// of degree `< t.max_degree`.
    pub fn moment_checks(&self, t: &MomentTable) -> Result<Report> {
        let mut rep = Report::new();
        rep.push(Check::exact("moment_normalized", t.moment(&[])?.is_one()));
        let odd = t.values.keys().filter(|w| w.len() % 2 == 1).count();
        rep.push(Check::new("odd_moments_vanish", odd == 0, format!("{odd} nonzero odd moments")));
        let sec = t.variant.matched_sector();
        let mut bad = 0usize;
        let mut total = 0usize;
        for d in 0..t.max_degree {
            for w in monomials(self.n(), d) {
                let f = ClassFn::new([(w, QScalar::one())].into_iter().collect(), t.alpha.clone(), t.variant);
                for i in 0..self.n() {
                    let out = f.apply(self, &self.alg.d_upper(i, sec), sec)?;
                    total += 1;
                    if !t.integrate(&out.over(self, 0)?)?.is_zero() {
                        bad += 1;
                    }
                }
            }
        }
        rep.push(Check::new("stokes_residual", bad == 0, format!("{bad}/{total} nonzero")));
        Ok(rep)
    }

    /// `∫ ∂_i (w G_α)` computed with a table, for a Stokes residual check.
    pub fn stokes_residual(&self, t: &MomentTable, i: u8, w: &[u8]) -> Result<QScalar> {
        let row = self.stokes_row(t.variant, &t.alpha, i, w)?;
        t.integrate(&row)
    }
}

impl MomentTable {
    pub fn moment(&self, w: &[u8]) -> Result<QScalar> {
        if w.len() > self.max_degree {
            return Err(Error::Truncation(format!("moment of degree {} beyond table degree {}", w.len(), self.max_degree)));
        }
        Ok(self.values.get(w).cloned().unwrap_or_default())
    }

    /// `∫ p G_α / ∫ G_α`.
    pub fn integrate(&self, p: &XPoly) -> Result<QScalar> {
        let mut terms = Vec::new();
        for (w, c) in p {
            terms.push(c.mul(&self.moment(w)?));
        }
        Ok(QScalar::sum(terms.iter()))
    }

    /// Radial moment `M((xCx)^k)`.
    pub fn radial(&self, an: &Analysis, k: usize) -> Result<QScalar> {
        self.integrate(&an.zpow(k))
    }

    pub fn to_json(&self) -> Value {
        let dim = crate::structure::Dimension::new(self.n).expect("table dimension is valid");
        let moments: Vec<Value> = self
            .values
            .iter()
            .map(|(w, v)| json!({"word": w.iter().map(|&a| dim.index(a as usize)).collect::<Vec<_>>(), "value": scalar_json(v)}))
            .collect();
        json!({
            "schema": 1,
            "N": self.n,
            "alpha": scalar_json(&self.alpha),
            "variant": self.variant.name(),
            "max_degree": self.max_degree,
            "moments": moments,
        })
    }
}
