use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{Element, Sector};
use crate::coeff::QScalar;
use crate::error::{Error, Result};

use super::{poly_add, poly_from_terms, poly_scale, Analysis, Variant, XPoly};

/// Exact Gaussian-class function `Σ_e P_e(x) G^v_{α q^e}`.
///
/// Operators map this class to itself: a derivative reaching the Gaussian
/// produces `C_{hl} x^l` and possibly shifts `α` by the inverse base, and
/// `Λ^{k/2}` shifts `α` by `q^k`. Parts whose exponents differ by an even
/// number are related polynomially through `G_{vβ} = (1 - (v-1)βz) G_β`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassFn {
    pub variant: Variant,
    pub alpha: QScalar,
    pub parts: BTreeMap<i32, XPoly>,
}

impl ClassFn {
    pub fn new(poly: XPoly, alpha: QScalar, variant: Variant) -> Self {
        let mut parts = BTreeMap::new();
        if !poly.is_empty() {
            parts.insert(0, poly);
        }
        ClassFn { variant, alpha, parts }
    }

    pub fn gaussian(alpha: QScalar, variant: Variant) -> Self {
        Self::new([(Vec::new(), QScalar::one())].into_iter().collect(), alpha, variant)
    }

    fn empty_like(&self) -> Self {
        ClassFn { variant: self.variant, alpha: self.alpha.clone(), parts: BTreeMap::new() }
    }

    /// `α q^e`.
    pub fn alpha_at(&self, e: i32) -> QScalar {
        self.alpha.mul(&QScalar::q_pow(e))
    }

    fn add_part(&mut self, e: i32, p: XPoly) {
        let cur = self.parts.remove(&e).unwrap_or_default();
        let sum = poly_add(&cur, &p);
        if !sum.is_empty() {
            self.parts.insert(e, sum);
        }
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if self.variant != o.variant || self.alpha != o.alpha {
            return Err(Error::Invalid("Gaussian classes with different reference".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let mut out = self.clone();
        for (e, p) in &o.parts {
            out.add_part(*e, p.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &QScalar) -> Self {
        let mut out = self.empty_like();
        for (e, p) in &self.parts {
            out.add_part(*e, poly_scale(p, k));
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&QScalar::from_int(-1)))
    }

    /// Left multiplication by a coordinate polynomial.
    pub fn lmul(&self, an: &Analysis, p: &XPoly) -> Self {
        let mut out = self.empty_like();
        for (e, part) in &self.parts {
            out.add_part(*e, an.x_mul(p, part));
        }
        out
    }

    /// `Λ^{k/2}`.
    pub fn lambda(&self, k: i32) -> Self {
        let mut out = self.empty_like();
        for (e, p) in &self.parts {
            let scaled = p.iter().map(|(w, c)| (w.clone(), c.mul(&QScalar::s_pow(k * w.len() as i32)))).collect();
            out.add_part(e + k, scaled);
        }
        out
    }

    /// Moves every part to the extreme exponent of its parity class so that
    /// equal functions have equal parts.
    pub fn canonical(&self, an: &Analysis) -> Self {
        let down = self.variant == Variant::Q2;
        let v = self.variant.base();
        let vm1 = v.sub(&QScalar::one());
        let z = an.zpow(1);
        let mut out = self.empty_like();
        for parity in [0, 1] {
            let es: Vec<i32> = self.parts.keys().copied().filter(|e| e.rem_euclid(2) == parity).collect();
            let Some(target) = (if down { es.iter().min() } else { es.iter().max() }).copied() else {
                continue;
            };
            let mut work: BTreeMap<i32, XPoly> =
                es.iter().map(|e| (*e, self.parts[e].clone())).collect();
            let mut e = if down { *es.iter().max().unwrap() } else { *es.iter().min().unwrap() };
            while e != target {
                let to = if down { e - 2 } else { e + 2 };
                if let Some(p) = work.remove(&e) {
                    let beta = self.alpha_at(to);
                    let k = vm1.mul(&beta).neg();
                    let moved = poly_add(&p, &poly_scale(&an.x_mul(&p, &z), &k));
                    let cur = work.remove(&to).unwrap_or_default();
                    let sum = poly_add(&cur, &moved);
                    if !sum.is_empty() {
                        work.insert(to, sum);
                    }
                }
                e = to;
            }
            if let Some(p) = work.remove(&target) {
                out.add_part(target, p);
            }
        }
        out
    }

    pub fn is_zero(&self, an: &Analysis) -> bool {
        self.canonical(an).parts.is_empty()
    }

    /// Single closed form `(P, α')` if the canonical form has one part.
    pub fn single(&self, an: &Analysis) -> Option<(XPoly, QScalar)> {
        let c = self.canonical(an);
        match c.parts.len() {
            0 => Some((XPoly::new(), self.alpha.clone())),
            1 => {
                let (e, p) = c.parts.into_iter().next().unwrap();
                Some((p, self.alpha_at(e)))
            }
            _ => None,
        }
    }

    /// Rewrites the function over the reference exponent `e`, which must be
    /// reachable from every part.
    pub fn over(&self, an: &Analysis, e: i32) -> Result<XPoly> {
        let c = self.canonical(an);
        let mut out = XPoly::new();
        let down = self.variant == Variant::Q2;
        let v = self.variant.base();
        let vm1 = v.sub(&QScalar::one());
        let z = an.zpow(1);
        for (pe, p) in c.parts {
            if (pe - e).rem_euclid(2) != 0 || (down && pe < e) || (!down && pe > e) {
                return Err(Error::Invalid(format!("part at exponent {pe} is not polynomial over {e}")));
            }
            let mut cur = p;
            let mut at = pe;
            while at != e {
                let to = if down { at - 2 } else { at + 2 };
                let k = vm1.mul(&self.alpha_at(to)).neg();
                cur = poly_add(&cur, &poly_scale(&an.x_mul(&cur, &z), &k));
                at = to;
            }
            out = poly_add(&out, &cur);
        }
        Ok(out)
    }

    /// Power series expansion truncated at degree `d`.
    pub fn expand(&self, an: &Analysis, d: usize) -> XPoly {
        let mut terms = Vec::new();
        for (e, p) in &self.parts {
            let g = an.qexp_series(&self.alpha_at(*e), self.variant, d, Sector::Unbarred);
            an.x_mul_into(p, &g.expanded, d, &mut terms);
        }
        poly_from_terms(terms)
    }

    /// `∂_h` in the given family.
    pub fn deriv(&self, an: &Analysis, sec: Sector, h: u8) -> Result<Self> {
        let rr = an.radial_rule(sec)?;
        let v = self.variant.base();
        let shift = if rr.lambda == v {
            0
        } else if rr.lambda.mul(&v).is_one() {
            match self.variant {
                Variant::Q2 => -2,
                Variant::Qm2 => 2,
            }
        } else {
            return Err(Error::Invalid("radial base is neither v nor 1/v".into()));
        };
        let mut out = self.empty_like();
        for (e, p) in &self.parts {
            out.add_part(*e, an.dact_poly(sec, h, p));
            let k = self.alpha_at(*e).mul(&rr.c1).neg();
            let mut terms = Vec::new();
            for (w, c) in p {
                for (w2, c2) in an.braid_tail(sec, h, w).iter() {
                    terms.push((w2.clone(), c.mul(c2).mul_raw(&k)));
                }
            }
            out.add_part(e + shift, poly_from_terms(terms));
        }
        Ok(out)
    }

    /// Applies an operator word by word: derivatives right to left, then the
    /// coordinate prefix, then the dilaton power.
    pub fn apply(&self, an: &Analysis, op: &Element, sec: Sector) -> Result<Self> {
        if let Some(s) = op.sector() {
            if s != sec {
                return Err(Error::Sector(format!("{s:?} operator applied as {sec:?}")));
            }
        }
        let mut out = self.empty_like();
        for (w, c) in op.terms() {
            let mut cur = self.clone();
            for &d in w.ds.iter().rev() {
                cur = cur.deriv(an, sec, d)?;
            }
            if !w.xs.is_empty() {
                cur = cur.lmul(an, &[(w.xs.clone(), QScalar::one())].into_iter().collect());
            }
            if w.lam != 0 {
                cur = cur.lambda(w.lam);
            }
            out = out.add(&cur.scale(c))?;
        }
        Ok(out)
    }

    pub fn max_degree(&self) -> usize {
        self.parts.values().flat_map(|p| p.keys().map(Vec::len)).max().unwrap_or(0)
    }
}

impl Analysis {
    /// The part of `∂_h (Y G)` in which the derivative reaches the Gaussian,
    /// before the factor `-β c1`.
    pub(crate) fn braid_tail(&self, sec: Sector, h: u8, y: &[u8]) -> Arc<XPoly> {
        let key = (sec, h, y.to_vec());
        if let Some(r) = self.braid_tail.read().unwrap().get(&key) {
            return r.clone();
        }
        let out = if y.is_empty() {
            self.c_x(h)
        } else {
            let j = y[0];
            let rest = &y[1..];
            let mut terms = Vec::new();
            for (k, h2, c) in self.alg.cross_terms(sec, h, j) {
                let inner = self.braid_tail(sec, *h2, rest);
                for (w, c1) in inner.iter() {
                    let cc = c.mul(c1);
                    for (w2, c2) in self.alg.x_lmul(*k, w).iter() {
                        terms.push((w2.clone(), cc.mul_raw(c2)));
                    }
                }
            }
            poly_from_terms(terms)
        };
        let out = Arc::new(out);
        self.braid_tail.write().unwrap().insert(key, out.clone());
        out
    }
}
