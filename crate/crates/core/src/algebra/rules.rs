use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::coeff::linalg::rref_with_order;
use crate::coeff::{QScalar, RawScalar};
use crate::error::{Error, Result};
use crate::structure::StructureSet;

/// Generator families with their own quadratic relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    X,
    D,
    Dbar,
}

/// Oriented quadratic rules `v^a v^b -> sum c v^u v^v` for `a > b`, `u <= v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSet {
    pub family: Family,
    pub n: usize,
    pub rules: HashMap<(u8, u8), Vec<(u8, u8, QScalar)>>,
}

impl RuleSet {
    pub fn rule(&self, a: u8, b: u8) -> Option<&[(u8, u8, QScalar)]> {
        self.rules.get(&(a, b)).map(|v| v.as_slice())
    }

    /// Rules sorted by left-hand side for stable display.
    pub fn sorted(&self) -> Vec<((u8, u8), &[(u8, u8, QScalar)])> {
        let mut v: Vec<_> = self.rules.iter().map(|(k, r)| (*k, r.as_slice())).collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }
}

/// Solves `P_A (v (x) v) = 0` for the disordered quadratic words.
///
/// For coordinates the relations are `PA^{ij}_{hk} x^h x^k = 0`. Derivatives
/// carry lower indices, so `PA^{ij}_{hk} ∂^h ∂^k = 0` is rewritten with
/// `∂^h = C^{ha} ∂_a` first. Both derivative families share the result.
pub fn complete_coordinate_rules(s: &StructureSet, family: Family) -> Result<RuleSet> {
    let n = s.n();
    let nn = n * n;
    let mut rows: Vec<Vec<QScalar>> = Vec::new();
    for r in 0..nn {
        let mut row = vec![QScalar::zero(); nn];
        for (c, v) in s.pa.mat.row(r) {
            let (h, k) = (c / n, c % n);
            match family {
                Family::X => row[h * n + k] = row[h * n + k].add(v),
                Family::D | Family::Dbar => {
                    for a in 0..n {
                        let cha = s.c.at(h, a);
                        if cha.is_zero() {
                            continue;
                        }
                        for b in 0..n {
                            let ckb = s.c.at(k, b);
                            if !ckb.is_zero() {
                                row[a * n + b] = row[a * n + b].add(&v.mul(cha).mul(ckb));
                            }
                        }
                    }
                }
            }
        }
        if row.iter().any(|v| !v.is_zero()) {
            rows.push(row);
        }
    }
    // disordered words first, largest first, so they become the pivots
    let mut order: Vec<usize> = (0..nn).filter(|&c| c / n > c % n).collect();
    order.sort_by(|a, b| b.cmp(a));
    order.extend((0..nn).filter(|&c| c / n <= c % n));
    let (red, piv) = rref_with_order(&rows, Some(&order));
    let want = n * (n - 1) / 2;
    if piv.len() != want || piv.iter().any(|&p| p / n <= p % n) {
        return Err(Error::Rewrite(format!(
            "{family:?} relations do not solve for every disordered pair (rank {}, expected {want})",
            piv.len()
        )));
    }
    let mut rules = HashMap::new();
    for (row, &p) in red.iter().zip(&piv) {
        let (a, b) = ((p / n) as u8, (p % n) as u8);
        let mut rhs = Vec::new();
        for (c, v) in row.iter().enumerate() {
            if c == p || v.is_zero() {
                continue;
            }
            let (u, w) = ((c / n) as u8, (c % n) as u8);
            if u > w {
                return Err(Error::Rewrite("pivot row retains a disordered word".into()));
            }
            if (u, w) >= (a, b) {
                return Err(Error::Rewrite(format!("rule for ({a},{b}) is not decreasing")));
            }
            rhs.push((u, w, v.neg()));
        }
        rules.insert((a, b), rhs);
    }
    Ok(RuleSet { family, n, rules })
}

pub(crate) type Poly = Vec<(Vec<u8>, QScalar)>;

/// Collects unreduced coefficients per key and reduces each bucket once.
pub(crate) struct Acc<K> {
    map: HashMap<K, Vec<RawScalar>>,
}

impl<K: std::hash::Hash + Eq> Acc<K> {
    pub fn new() -> Self {
        Acc { map: HashMap::new() }
    }

    pub fn push(&mut self, k: K, c: QScalar) {
        if !c.is_zero() {
            self.map.entry(k).or_default().push(c.into());
        }
    }

    /// Adds `a * b` under `k`.
    pub fn push_mul(&mut self, k: K, a: &QScalar, b: &QScalar) {
        self.push_raw(k, a.mul_raw(b));
    }

    pub fn push_raw(&mut self, k: K, c: RawScalar) {
        if !c.is_zero() {
            self.map.entry(k).or_default().push(c);
        }
    }

    pub fn finish(self) -> Vec<(K, QScalar)> {
        self.map
            .into_iter()
            .filter_map(|(k, v)| {
                let s = QScalar::sum_raw(v);
                (!s.is_zero()).then_some((k, s))
            })
            .collect()
    }
}

/// Normal-ordering engine for one quadratic algebra (coordinates or
/// derivatives) with memoized one-generator products.
pub(crate) struct OrderedAlgebra {
    pub rules: RuleSet,
    rmul_cache: RwLock<HashMap<(Vec<u8>, u8), Arc<Poly>>>,
    lmul_cache: RwLock<HashMap<(u8, Vec<u8>), Arc<Poly>>>,
}

impl OrderedAlgebra {
    pub fn new(rules: RuleSet) -> Self {
        OrderedAlgebra { rules, rmul_cache: RwLock::default(), lmul_cache: RwLock::default() }
    }

    /// `w * v^k` for a sorted word `w`.
    pub fn rmul(&self, w: &[u8], k: u8) -> Arc<Poly> {
        if w.last().map_or(true, |&l| l <= k) {
            let mut v = w.to_vec();
            v.push(k);
            return Arc::new(vec![(v, QScalar::one())]);
        }
        let key = (w.to_vec(), k);
        if let Some(r) = self.rmul_cache.read().unwrap().get(&key) {
            return r.clone();
        }
        let a = *w.last().unwrap();
        let head = &w[..w.len() - 1];
        let mut acc = Acc::new();
        for (u, v, c) in self.rules.rule(a, k).expect("rule for disordered pair") {
            for (w1, c1) in self.rmul(head, *u).iter() {
                let c01 = c.mul(c1);
                for (w2, c2) in self.rmul(w1, *v).iter() {
                    acc.push_mul(w2.clone(), &c01, c2);
                }
            }
        }
        let out = Arc::new(acc.finish());
        self.rmul_cache.write().unwrap().insert(key, out.clone());
        out
    }

    /// `v^k * w` for a sorted word `w`.
    pub fn lmul(&self, k: u8, w: &[u8]) -> Arc<Poly> {
        if w.first().map_or(true, |&f| k <= f) {
            let mut v = Vec::with_capacity(w.len() + 1);
            v.push(k);
            v.extend_from_slice(w);
            return Arc::new(vec![(v, QScalar::one())]);
        }
        let key = (k, w.to_vec());
        if let Some(r) = self.lmul_cache.read().unwrap().get(&key) {
            return r.clone();
        }
        let a = w[0];
        let tail = &w[1..];
        let mut acc = Acc::new();
        for (u, v, c) in self.rules.rule(k, a).expect("rule for disordered pair") {
            for (w1, c1) in self.lmul(*v, tail).iter() {
                let c01 = c.mul(c1);
                for (w2, c2) in self.lmul(*u, w1).iter() {
                    acc.push_mul(w2.clone(), &c01, c2);
                }
            }
        }
        let out = Arc::new(acc.finish());
        self.lmul_cache.write().unwrap().insert(key, out.clone());
        out
    }

    /// Product of two sorted words.
    pub fn mul_words(&self, a: &[u8], b: &[u8]) -> Poly {
        let mut cur: Poly = vec![(a.to_vec(), QScalar::one())];
        for &g in b {
            let mut acc = Acc::new();
            for (w, c) in &cur {
                for (w2, c2) in self.rmul(w, g).iter() {
                    acc.push_mul(w2.clone(), &c, c2);
                }
            }
            cur = acc.finish();
        }
        cur
    }

    /// Normal form of an arbitrary (unsorted) word.
    pub fn normal_form(&self, w: &[u8]) -> Poly {
        self.mul_words(&[], w)
    }
}
