use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::coeff::QScalar;
use crate::error::{Error, Result};

/// Which derivative family a word may contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    Unbarred,
    Barred,
}

impl Sector {
    pub fn flip(self) -> Self {
        match self {
            Sector::Unbarred => Sector::Barred,
            Sector::Barred => Sector::Unbarred,
        }
    }
}

/// A single generator. Indices are positions in the ascending index order.
/// Derivatives carry lower indices: `D(i)` is `∂_i`, `Dbar(i)` is `∂̄_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    X(u8),
    D(u8),
    Dbar(u8),
    /// `Λ^{k/2}`.
    LambdaHalf(i32),
}

impl Generator {
    pub fn sector(&self) -> Option<Sector> {
        match self {
            Generator::D(_) => Some(Sector::Unbarred),
            Generator::Dbar(_) => Some(Sector::Barred),
            _ => None,
        }
    }
}

/// A normal word `Λ^{lam/2} x^{xs...} ∂^{ds...}` with `xs`, `ds` non-decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub lam: i32,
    pub xs: Vec<u8>,
    pub ds: Vec<u8>,
}

impl Word {
    pub fn one() -> Self {
        Word::default()
    }

    pub fn x(xs: Vec<u8>) -> Self {
        Word { lam: 0, xs, ds: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.xs.len() + self.ds.len()
    }

    pub fn is_normal(&self) -> bool {
        self.xs.windows(2).all(|w| w[0] <= w[1]) && self.ds.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Degree first, then dilaton power, then coordinates, then derivatives.
impl Ord for Word {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then(self.lam.cmp(&o.lam))
            .then(self.xs.len().cmp(&o.xs.len()))
            .then(self.xs.cmp(&o.xs))
            .then(self.ds.cmp(&o.ds))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A normal-ordered linear combination of words.
///
/// `sector` is `Some` exactly when some word contains a derivative; pure
/// coordinate and dilaton elements belong to both sectors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Element {
    sector: Option<Sector>,
    terms: BTreeMap<Word, QScalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn one() -> Self {
        Self::scalar(QScalar::one())
    }

    pub fn scalar(c: QScalar) -> Self {
        Self::from_word(Word::one(), c, None)
    }

    pub fn from_word(w: Word, c: QScalar, sector: Option<Sector>) -> Self {
        debug_assert!(w.is_normal());
        let mut e = Element { sector, terms: BTreeMap::new() };
        if !c.is_zero() {
            e.terms.insert(w, c);
        }
        e.fix_sector();
        e
    }

    /// Builds from `(word, coeff)` pairs; duplicate words are summed.
    pub fn from_terms(terms: impl IntoIterator<Item = (Word, QScalar)>, sector: Option<Sector>) -> Self {
        let mut acc: BTreeMap<Word, Vec<QScalar>> = BTreeMap::new();
        for (w, c) in terms {
            if !c.is_zero() {
                acc.entry(w).or_default().push(c);
            }
        }
        let terms = acc
            .into_iter()
            .map(|(w, v)| (w, QScalar::sum(v.iter())))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut e = Element { sector, terms };
        e.fix_sector();
        e
    }

    pub fn x(i: u8) -> Self {
        Self::from_word(Word::x(vec![i]), QScalar::one(), None)
    }

    pub fn d(i: u8, sector: Sector) -> Self {
        Self::from_word(Word { lam: 0, xs: vec![], ds: vec![i] }, QScalar::one(), Some(sector))
    }

    pub fn lambda_half(k: i32) -> Self {
        Self::from_word(Word { lam: k, xs: vec![], ds: vec![] }, QScalar::one(), None)
    }

    fn fix_sector(&mut self) {
        if !self.terms.keys().any(|w| !w.ds.is_empty()) {
            self.sector = None;
        }
    }

    pub fn sector(&self) -> Option<Sector> {
        self.sector
    }

    pub fn terms(&self) -> &BTreeMap<Word, QScalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, QScalar> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> QScalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn combine_sector(a: Option<Sector>, b: Option<Sector>) -> Result<Option<Sector>> {
        match (a, b) {
            (Some(x), Some(y)) if x != y => Err(Error::Sector("∂ and ∂̄ cannot be combined".into())),
            (Some(x), _) | (_, Some(x)) => Ok(Some(x)),
            _ => Ok(None),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let sector = Self::combine_sector(self.sector, o.sector)?;
        Ok(Self::from_terms(
            self.terms.iter().chain(o.terms.iter()).map(|(w, c)| (w.clone(), c.clone())),
            sector,
        ))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&QScalar::from_int(-1))
    }

    pub fn scale(&self, k: &QScalar) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        let mut e = Element {
            sector: self.sector,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.mul(k))).collect(),
        };
        e.fix_sector();
        e
    }

    pub fn map_coeffs(&self, f: impl Fn(&QScalar) -> QScalar) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))), self.sector)
    }

    /// Keeps the words satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&Word) -> bool) -> Self {
        let mut e = Element {
            sector: self.sector,
            terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect(),
        };
        e.fix_sector();
        e
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::degree).max()
    }

    /// True when no word contains a derivative or a dilaton.
    pub fn is_coordinate_only(&self) -> bool {
        self.terms.keys().all(|w| w.ds.is_empty() && w.lam == 0)
    }

    pub fn has_lambda(&self) -> bool {
        self.terms.keys().any(|w| w.lam != 0)
    }

    /// Sets a sector tag explicitly (used when an element is known to live in
    /// a given sector even if it currently has no derivative words).
    pub fn with_sector(mut self, s: Option<Sector>) -> Self {
        self.sector = s;
        self.fix_sector();
        self
    }

    /// Evaluates every coefficient at `q = q0`.
    pub fn eval(&self, q0: f64) -> Result<Vec<(Word, f64)>> {
        self.terms.iter().map(|(w, c)| Ok((w.clone(), c.eval(q0)?))).collect()
    }
}
