//! Truncated q-Gaussians, the action of operators on functions, Stokes
//! integration and the two-term scalar product.

mod classfn;
mod gaussian;
mod inner;
mod moments;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use crate::algebra::{Algebra, Element, Sector};
use crate::coeff::{QScalar, RawScalar};
use crate::error::{Error, Result};

pub use classfn::ClassFn;
pub use gaussian::RadialRule;
pub use inner::{PairState, ScalarProduct};
pub use moments::MomentTable;

/// A polynomial in the coordinates: sorted words to coefficients.
pub type XPoly = BTreeMap<Vec<u8>, QScalar>;

/// Base of the q-exponential: `e_{q^2}` or `e_{q^{-2}}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Q2,
    Qm2,
}

impl Variant {
    pub fn base(self) -> QScalar {
        match self {
            Variant::Q2 => QScalar::q_pow(2),
            Variant::Qm2 => QScalar::q_pow(-2),
        }
    }

    /// The derivative family whose radial rule uses the same base.
    pub fn matched_sector(self) -> Sector {
        match self {
            Variant::Q2 => Sector::Unbarred,
            Variant::Qm2 => Sector::Barred,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Q2 => "q^2",
            Variant::Qm2 => "q^-2",
        }
    }
}

/// Closed form `P(x) * G^variant_alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct DisplayForm {
    pub poly: XPoly,
    pub alpha: QScalar,
    pub variant: Variant,
}

/// A truncated function of the coordinates. Coefficients of monomials of
/// degree `<= trusted` are exact; higher degrees are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction {
    pub sector: Sector,
    pub expanded: XPoly,
    pub trusted: usize,
    pub display: Option<DisplayForm>,
}

impl WaveFunction {
    pub fn new(sector: Sector, expanded: XPoly, trusted: usize) -> Self {
        let expanded = expanded.into_iter().filter(|(w, c)| w.len() <= trusted && !c.is_zero()).collect();
        WaveFunction { sector, expanded, trusted, display: None }
    }

    pub fn with_display(mut self, d: DisplayForm) -> Self {
        self.display = Some(d);
        self
    }

    /// Homogeneous part of the given degree.
    pub fn degree_part(&self, d: usize) -> XPoly {
        self.expanded.iter().filter(|(w, _)| w.len() == d).map(|(w, c)| (w.clone(), c.clone())).collect()
    }

    /// Degrees that carry a nonzero coefficient.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.expanded.keys().map(Vec::len).collect();
        d.dedup();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// `self - k * other`, restricted to degrees `<= upto`.
    pub fn residual(&self, other: &WaveFunction, k: &QScalar, upto: usize) -> XPoly {
        poly_filter(&poly_sub(&self.expanded, &poly_scale(&other.expanded, k)), |w| w.len() <= upto)
    }
}

pub fn poly_add(a: &XPoly, b: &XPoly) -> XPoly {
    let mut out = a.clone();
    for (w, c) in b {
        let v = out.get(w).cloned().unwrap_or_default().add(c);
        if v.is_zero() {
            out.remove(w);
        } else {
            out.insert(w.clone(), v);
        }
    }
    out
}

pub fn poly_scale(a: &XPoly, k: &QScalar) -> XPoly {
    if k.is_zero() {
        return XPoly::new();
    }
    a.iter().map(|(w, c)| (w.clone(), c.mul(k))).collect()
}

pub fn poly_sub(a: &XPoly, b: &XPoly) -> XPoly {
    poly_add(a, &poly_scale(b, &QScalar::from_int(-1)))
}

pub fn poly_filter(a: &XPoly, keep: impl Fn(&Vec<u8>) -> bool) -> XPoly {
    a.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect()
}

pub(crate) fn poly_from_terms<C: Into<RawScalar>>(terms: impl IntoIterator<Item = (Vec<u8>, C)>) -> XPoly {
    let mut acc: HashMap<Vec<u8>, Vec<RawScalar>> = HashMap::new();
    for (w, c) in terms {
        let c = c.into();
        if !c.is_zero() {
            acc.entry(w).or_default().push(c);
        }
    }
    acc.into_iter()
        .filter_map(|(w, v)| {
            let s = QScalar::sum_raw(v);
            (!s.is_zero()).then_some((w, s))
        })
        .collect()
}

/// Analysis context over one algebra: memoized radial data.
pub struct Analysis {
    pub alg: Arc<Algebra>,
    zpow: RwLock<Vec<XPoly>>,
    braid_tail: RwLock<HashMap<(Sector, u8, Vec<u8>), Arc<XPoly>>>,
    radial: RwLock<HashMap<Sector, RadialRule>>,
}

impl Analysis {
    pub fn new(alg: Arc<Algebra>) -> Self {
        Analysis { alg, zpow: RwLock::default(), braid_tail: RwLock::default(), radial: RwLock::default() }
    }

    pub fn n(&self) -> usize {
        self.alg.n()
    }

    /// `(xCx)^m` in normal form.
    pub fn zpow(&self, m: usize) -> XPoly {
        {
            let z = self.zpow.read().unwrap();
            if let Some(p) = z.get(m) {
                return p.clone();
            }
        }
        let mut z = self.zpow.write().unwrap();
        if z.is_empty() {
            z.push([(Vec::new(), QScalar::one())].into_iter().collect());
        }
        let base: XPoly = self
            .alg
            .xcx()
            .expect("square length")
            .terms()
            .iter()
            .map(|(w, c)| (w.xs.clone(), c.clone()))
            .collect();
        while z.len() <= m {
            let prev = z.last().unwrap().clone();
            let next = self.x_mul(&prev, &base);
            z.push(next);
        }
        z[m].clone()
    }

    /// Product of two coordinate polynomials.
    pub fn x_mul(&self, a: &XPoly, b: &XPoly) -> XPoly {
        let mut terms = Vec::new();
        self.x_mul_into(a, b, usize::MAX, &mut terms);
        poly_from_terms(terms)
    }

    /// Unreduced terms of `a·b` up to total degree `d`. The coordinate
    /// relations are homogeneous, so higher pairs are skipped outright.
    pub(crate) fn x_mul_into(&self, a: &XPoly, b: &XPoly, d: usize, terms: &mut Vec<(Vec<u8>, RawScalar)>) {
        for (wa, ca) in a {
            for (wb, cb) in b {
                if wa.len() + wb.len() > d {
                    continue;
                }
                let cab = ca.mul(cb);
                for (w, c) in self.alg.x_mul_words(wa, wb) {
                    terms.push((w, cab.mul_raw(&c)));
                }
            }
        }
    }

    /// `q`-exponential series `sum_{m <= D/2} (-alpha)^m (xCx)^m / (m)_v!`.
    pub fn qexp_series(&self, alpha: &QScalar, variant: Variant, d: usize, sector: Sector) -> WaveFunction {
        let v = variant.base();
        let mut terms = Vec::new();
        let mut coef = QScalar::one();
        for m in 0..=d / 2 {
            if m > 0 {
                let bracket = crate::coeff::qbracket_base(m as u32, &v);
                coef = coef.mul(&alpha.neg()).div(&bracket).expect("nonzero q-bracket");
            }
            for (w, c) in self.zpow(m) {
                terms.push((w, c.mul_raw(&coef)));
            }
        }
        WaveFunction::new(sector, poly_from_terms(terms), d).with_display(DisplayForm {
            poly: [(Vec::new(), QScalar::one())].into_iter().collect(),
            alpha: alpha.clone(),
            variant,
        })
    }

    /// Applies an operator to a truncated function. The output is trusted up
    /// to `D_in + min(x-degree - ∂-degree)` over the operator's words.
    pub fn act(&self, op: &Element, f: &WaveFunction) -> Result<WaveFunction> {
        if let Some(s) = op.sector() {
            if s != f.sector {
                return Err(Error::Sector(format!("{s:?} operator on a {:?} function", f.sector)));
            }
        }
        let shift = op
            .terms()
            .keys()
            .map(|w| w.xs.len() as i64 - w.ds.len() as i64)
            .min()
            .unwrap_or(0);
        let trusted = (f.trusted as i64 + shift).max(0) as usize;
        let input: Vec<(Vec<u8>, QScalar)> = f.expanded.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        let out = self.alg.apply_upto(op, &input, trusted)?;
        Ok(WaveFunction::new(f.sector, out.into_iter().collect(), trusted))
    }

    /// Same as [`Analysis::act`], computed literally as `ε(normal_order(op * f))`
    /// with the dilaton pushed to the right before evaluation. Slow; used as a
    /// cross-check in tests.
    pub fn act_literal(&self, op: &Element, f: &WaveFunction) -> Result<XPoly> {
        let fe = Element::from_terms(
            f.expanded.iter().map(|(w, c)| (crate::algebra::Word::x(w.clone()), c.clone())),
            None,
        );
        let prod = self.alg.mul(op, &fe)?;
        let mut terms = Vec::new();
        for (w, c) in prod.terms() {
            if w.ds.is_empty() {
                // Λ^{k/2} X = s^{k|X|} X Λ^{k/2}, and Λ acting on 1 is 1
                terms.push((w.xs.clone(), c.mul(&QScalar::s_pow(w.lam * w.xs.len() as i32))));
            }
        }
        Ok(poly_from_terms(terms))
    }
}
