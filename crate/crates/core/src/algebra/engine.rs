use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::element::{Element, Generator, Sector, Word};
use super::rules::{complete_coordinate_rules, Acc, Family, OrderedAlgebra, Poly, RuleSet};
use crate::coeff::QScalar;
use crate::error::{Error, Result};
use crate::structure::StructureSet;

/// `∂_i x^j = δ^j_i + sum c x^k ∂_h`, stored as `(k, h, c)` per `(i, j)`.
type CrossTable = Vec<Vec<Vec<(u8, u8, QScalar)>>>;

/// One term of `∂_i X`: a sorted coordinate word and at most one derivative.
type CommuteTerm = (Vec<u8>, Option<u8>, QScalar);

/// The differential algebra for one structure set: rule sets, cross
/// relations and memo tables. Shareable across threads.
pub struct Algebra {
    pub s: Arc<StructureSet>,
    xalg: OrderedAlgebra,
    dalg: OrderedAlgebra,
    dbar_rules: RuleSet,
    cross: [CrossTable; 2],
    commute_cache: RwLock<HashMap<(Sector, u8, Vec<u8>), Arc<Vec<CommuteTerm>>>>,
    dact_cache: RwLock<HashMap<(Sector, u8, Vec<u8>), Arc<Poly>>>,
    word_cache: RwLock<HashMap<(Sector, Word, Word), Arc<Vec<(Word, QScalar)>>>>,
}

fn sidx(s: Sector) -> usize {
    match s {
        Sector::Unbarred => 0,
        Sector::Barred => 1,
    }
}

impl Algebra {
    pub fn new(s: StructureSet) -> Result<Self> {
        Self::from_arc(Arc::new(s))
    }

    pub fn from_arc(s: Arc<StructureSet>) -> Result<Self> {
        let n = s.n();
        let xr = complete_coordinate_rules(&s, Family::X)?;
        let dr = complete_coordinate_rules(&s, Family::D)?;
        let dbar_rules = RuleSet { family: Family::Dbar, ..dr.clone() };
        let q = QScalar::q();
        let qi = QScalar::q_pow(-1);
        let mut cross: [CrossTable; 2] = [vec![vec![Vec::new(); n]; n], vec![vec![Vec::new(); n]; n]];
        for (t, (m, f)) in [(&s.rhat, &q), (&s.rinv, &qi)].into_iter().enumerate() {
            for (j, h, i, k, v) in m.nonzero() {
                // ∂_i x^j picks up f * M^{jh}_{ik} x^k ∂_h
                cross[t][i][j].push((k as u8, h as u8, v.mul(f)));
            }
        }
        Ok(Algebra {
            s,
            xalg: OrderedAlgebra::new(xr),
            dalg: OrderedAlgebra::new(dr),
            dbar_rules,
            cross,
            commute_cache: RwLock::default(),
            dact_cache: RwLock::default(),
            word_cache: RwLock::default(),
        })
    }

    pub fn n(&self) -> usize {
        self.s.n()
    }

    pub fn rules(&self, f: Family) -> &RuleSet {
        match f {
            Family::X => &self.xalg.rules,
            Family::D => &self.dalg.rules,
            Family::Dbar => &self.dbar_rules,
        }
    }

    pub(crate) fn cross_terms(&self, sec: Sector, i: u8, j: u8) -> &[(u8, u8, QScalar)] {
        &self.cross[sidx(sec)][i as usize][j as usize]
    }

    /// Normal form of a product of coordinates (arbitrary order).
    pub fn x_normal(&self, w: &[u8]) -> Vec<(Vec<u8>, QScalar)> {
        self.xalg.normal_form(w)
    }

    pub fn x_mul_words(&self, a: &[u8], b: &[u8]) -> Vec<(Vec<u8>, QScalar)> {
        self.xalg.mul_words(a, b)
    }

    pub fn x_lmul(&self, k: u8, w: &[u8]) -> Arc<Vec<(Vec<u8>, QScalar)>> {
        self.xalg.lmul(k, w)
    }

    pub fn d_mul_words(&self, a: &[u8], b: &[u8]) -> Vec<(Vec<u8>, QScalar)> {
        self.dalg.mul_words(a, b)
    }

    /// `∂_i X` for a sorted coordinate word, as terms `X' ∂_h` or `X'`.
    fn commute1(&self, sec: Sector, i: u8, x: &[u8]) -> Arc<Vec<CommuteTerm>> {
        if x.is_empty() {
            return Arc::new(vec![(Vec::new(), Some(i), QScalar::one())]);
        }
        let key = (sec, i, x.to_vec());
        if let Some(r) = self.commute_cache.read().unwrap().get(&key) {
            return r.clone();
        }
        let l = *x.last().unwrap();
        let head = &x[..x.len() - 1];
        let mut acc: Acc<(Vec<u8>, Option<u8>)> = Acc::new();
        for (xw, h, c) in self.commute1(sec, i, head).iter() {
            match h {
                None => {
                    for (w2, c2) in self.xalg.rmul(xw, l).iter() {
                        acc.push_mul((w2.clone(), None), &c, c2);
                    }
                }
                Some(h) => {
                    if *h == l {
                        acc.push((xw.clone(), None), c.clone());
                    }
                    for (k, h2, cc) in self.cross_terms(sec, *h, l) {
                        let c1 = c.mul(cc);
                        for (w2, c2) in self.xalg.rmul(xw, *k).iter() {
                            acc.push_mul((w2.clone(), Some(*h2)), &c1, c2);
                        }
                    }
                }
            }
        }
        let out: Arc<Vec<CommuteTerm>> = Arc::new(acc.finish().into_iter().map(|((w, h), c)| (w, h, c)).collect());
        self.commute_cache.write().unwrap().insert(key, out.clone());
        out
    }

    /// Action of `∂_i` on a coordinate monomial: the derivative-free part of `∂_i X`.
    pub fn dact(&self, sec: Sector, i: u8, x: &[u8]) -> Arc<Poly> {
        if x.is_empty() {
            return Arc::new(Vec::new());
        }
        let key = (sec, i, x.to_vec());
        if let Some(r) = self.dact_cache.read().unwrap().get(&key) {
            return r.clone();
        }
        let j = x[0];
        let rest = &x[1..];
        let mut acc = Acc::new();
        if i == j {
            acc.push(rest.to_vec(), QScalar::one());
        }
        for (k, h, c) in self.cross_terms(sec, i, j) {
            let inner = self.dact(sec, *h, rest);
            for (w, c1) in inner.iter() {
                let cc = c.mul(c1);
                for (w2, c2) in self.xalg.lmul(*k, w).iter() {
                    acc.push_mul(w2.clone(), &cc, c2);
                }
            }
        }
        let out = Arc::new(acc.finish());
        self.dact_cache.write().unwrap().insert(key, out.clone());
        out
    }

    /// Product of two normal words in one sector.
    pub fn mul_word(&self, sec: Sector, a: &Word, b: &Word) -> Arc<Vec<(Word, QScalar)>> {
        if a.degree() == 0 && a.lam == 0 {
            return Arc::new(vec![(b.clone(), QScalar::one())]);
        }
        let key = (sec, a.clone(), b.clone());
        if let Some(r) = self.word_cache.read().unwrap().get(&key) {
            return r.clone();
        }
        // X1 D1 Λ^{b/2} = s^{b(|D1|-|X1|)} Λ^{b/2} X1 D1
        let factor = QScalar::s_pow(b.lam * (a.ds.len() as i32 - a.xs.len() as i32));
        let mut t: Vec<((Vec<u8>, Vec<u8>), QScalar)> = vec![((b.xs.clone(), Vec::new()), QScalar::one())];
        for &d in a.ds.iter().rev() {
            let mut acc = Acc::new();
            for ((xw, dw), c) in &t {
                for (x2, h, c2) in self.commute1(sec, d, xw).iter() {
                    let c12 = c.mul(c2);
                    match h {
                        None => acc.push((x2.clone(), dw.clone()), c12),
                        Some(h) => {
                            for (d2, c3) in self.dalg.lmul(*h, dw).iter() {
                                acc.push_mul((x2.clone(), d2.clone()), &c12, c3);
                            }
                        }
                    }
                }
            }
            t = acc.finish();
        }
        let mut acc = Acc::new();
        for ((xw, dw), c) in t {
            let xs = self.xalg.mul_words(&a.xs, &xw);
            let ds = self.dalg.mul_words(&dw, &b.ds);
            for (xf, cx) in &xs {
                let cxc = c.mul(cx);
                for (df, cd) in &ds {
                    acc.push_mul(Word { lam: a.lam + b.lam, xs: xf.clone(), ds: df.clone() }, &cxc, cd);
                }
            }
        }
        let mut out = acc.finish();
        for (_, c) in out.iter_mut() {
            *c = c.mul(&factor);
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        let out = Arc::new(out);
        self.word_cache.write().unwrap().insert(key, out.clone());
        out
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        let sector = Element::combine_sector(a.sector(), b.sector())?;
        let sec = sector.unwrap_or(Sector::Unbarred);
        let mut acc: Acc<Word> = Acc::new();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                let cab = ca.mul(cb);
                for (w, c) in self.mul_word(sec, wa, wb).iter() {
                    acc.push_mul(w.clone(), &cab, c);
                }
            }
        }
        Ok(Element::from_terms(acc.finish(), sector))
    }

    pub fn mul_all(&self, factors: &[&Element]) -> Result<Element> {
        let mut e = Element::one();
        for f in factors {
            e = self.mul(&e, f)?;
        }
        Ok(e)
    }

    pub fn pow(&self, a: &Element, k: u32) -> Result<Element> {
        let mut e = Element::one();
        for _ in 0..k {
            e = self.mul(&e, a)?;
        }
        Ok(e)
    }

    pub fn generator(&self, g: Generator) -> Result<Element> {
        let n = self.n();
        let check = |i: u8| {
            if (i as usize) < n {
                Ok(i)
            } else {
                Err(Error::IndexOutOfRange { index: i as i64, n })
            }
        };
        Ok(match g {
            Generator::X(i) => Element::x(check(i)?),
            Generator::D(i) => Element::d(check(i)?, Sector::Unbarred),
            Generator::Dbar(i) => Element::d(check(i)?, Sector::Barred),
            Generator::LambdaHalf(k) => Element::lambda_half(k),
        })
    }

    /// Normal form of an arbitrary product of generators.
    pub fn normal_order(&self, word: &[Generator]) -> Result<Element> {
        let mut sector = None;
        for g in word {
            sector = Element::combine_sector(sector, g.sector())?;
        }
        let mut e = Element::one();
        for g in word {
            e = self.mul(&e, &self.generator(*g)?)?;
        }
        Ok(e)
    }

    pub fn commutator(&self, a: &Element, b: &Element) -> Result<Element> {
        self.mul(a, b)?.sub(&self.mul(b, a)?)
    }

    /// Action of an operator on a coordinate polynomial: normal-order
    /// `op * f`, drop words ending in a derivative, and let `Λ^{m/2}` act on
    /// the remaining degree-`d` monomial as `q^{md/2}`.
    pub fn apply(&self, op: &Element, f: &[(Vec<u8>, QScalar)]) -> Result<Vec<(Vec<u8>, QScalar)>> {
        self.apply_upto(op, f, usize::MAX)
    }

    /// [`Algebra::apply`] keeping only output degrees `<= max_deg`. Every word
    /// moves degree by `|xs| - |ds|`, so inputs that would land higher are
    /// never differentiated.
    pub fn apply_upto(&self, op: &Element, f: &[(Vec<u8>, QScalar)], max_deg: usize) -> Result<Vec<(Vec<u8>, QScalar)>> {
        let sec = op.sector().unwrap_or(Sector::Unbarred);
        let mut acc = Acc::new();
        for (w, c) in op.terms() {
            let mut cur: Poly =
                f.iter().filter(|(m, _)| m.len() + w.xs.len() <= max_deg.saturating_add(w.ds.len())).cloned().collect();
            for &d in w.ds.iter().rev() {
                let mut a2 = Acc::new();
                for (m, cm) in &cur {
                    for (m2, c2) in self.dact(sec, d, m).iter() {
                        a2.push_mul(m2.clone(), &cm, c2);
                    }
                }
                cur = a2.finish();
            }
            for (m, cm) in cur {
                let cc = c.mul(&cm);
                for (m2, c2) in self.xalg.mul_words(&w.xs, &m) {
                    let k = w.lam * m2.len() as i32;
                    acc.push_raw(m2, cc.mul_raw(&c2).shifted(k));
                }
            }
        }
        let mut out = acc.finish();
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        Ok(out)
    }
}
