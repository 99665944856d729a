use std::collections::BTreeMap;

use crate::coeff::QScalar;

use super::Dimension;

/// Square sparse matrix over QScalar, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    n: usize,
    rows: Vec<BTreeMap<usize, QScalar>>,
}

impl SparseMat {
    pub fn zero(n: usize) -> Self {
        SparseMat { n, rows: vec![BTreeMap::new(); n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &QScalar::one())
    }

    pub fn scalar(n: usize, v: &QScalar) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> QScalar {
        self.rows[r].get(&c).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, r: usize, c: usize, v: QScalar) {
        if v.is_zero() {
            self.rows[r].remove(&c);
        } else {
            self.rows[r].insert(c, v);
        }
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &QScalar) {
        let cur = self.get(r, c);
        self.set(r, c, cur.add(v));
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, QScalar> {
        &self.rows[r]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &QScalar)> {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut m = self.clone();
        for (r, c, v) in o.entries() {
            m.add_at(r, c, v);
        }
        m
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&QScalar::from_int(-1)))
    }

    pub fn scale(&self, k: &QScalar) -> Self {
        let mut m = Self::zero(self.n);
        if k.is_zero() {
            return m;
        }
        for (r, c, v) in self.entries() {
            m.set(r, c, v.mul(k));
        }
        m
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut m = Self::zero(self.n);
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, Vec<QScalar>> = BTreeMap::new();
            for (k, a) in row {
                for (c, b) in &o.rows[*k] {
                    acc.entry(*c).or_default().push(a.mul(b));
                }
            }
            for (c, terms) in acc {
                m.set(r, c, QScalar::sum(terms.iter()));
            }
        }
        m
    }

    pub fn trace(&self) -> QScalar {
        QScalar::sum((0..self.n).filter_map(|i| self.rows[i].get(&i)).collect::<Vec<_>>())
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.n);
        for (r, c, v) in self.entries() {
            m.set(c, r, v.clone());
        }
        m
    }

    /// Column-major copy: `cols[c]` lists `(r, value)`.
    pub fn columns(&self) -> Vec<Vec<(usize, QScalar)>> {
        let mut cols = vec![Vec::new(); self.n];
        for (r, c, v) in self.entries() {
            cols[c].push((r, v.clone()));
        }
        cols
    }

    pub fn map(&self, f: impl Fn(&QScalar) -> QScalar) -> Self {
        let mut m = Self::zero(self.n);
        for (r, c, v) in self.entries() {
            m.set(r, c, f(v));
        }
        m
    }
}

/// A tensor `T^{ij}_{hk}`; row `(i,j)`, column `(h,k)` in position coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor4 {
    pub dim: Dimension,
    pub mat: SparseMat,
}

impl Tensor4 {
    pub fn new(dim: Dimension, mat: SparseMat) -> Self {
        assert_eq!(mat.size(), dim.n() * dim.n());
        Tensor4 { dim, mat }
    }

    /// Entry at positions (0-based, ascending index order).
    pub fn at(&self, i: usize, j: usize, h: usize, k: usize) -> QScalar {
        let n = self.dim.n();
        self.mat.get(i * n + j, h * n + k)
    }

    /// Entry at index values `i, j, h, k` in the index set.
    pub fn get(&self, i: i32, j: i32, h: i32, k: i32) -> QScalar {
        let p = |a| self.dim.pos(a).expect("index in range");
        self.at(p(i), p(j), p(h), p(k))
    }

    /// Nonzero entries as `(i, j, h, k, value)` in positions.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, usize, QScalar)> {
        let n = self.dim.n();
        self.mat
            .entries()
            .map(|(r, c, v)| (r / n, r % n, c / n, c % n, v.clone()))
            .collect()
    }
}

/// A two-index tensor such as the metric, dense in positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor2 {
    pub dim: Dimension,
    pub entries: Vec<Vec<QScalar>>,
}

impl Tensor2 {
    pub fn at(&self, i: usize, j: usize) -> &QScalar {
        &self.entries[i][j]
    }

    pub fn get(&self, i: i32, j: i32) -> QScalar {
        let p = |a| self.dim.pos(a).expect("index in range");
        self.entries[p(i)][p(j)].clone()
    }
}

/// Sparse vector on the threefold tensor space, keyed by `(a*n + b)*n + c`.
pub type TripleVec = BTreeMap<usize, QScalar>;

/// Applies `M` to slots (1,2) (`first = true`) or (2,3) of a threefold vector.
pub fn apply_pair(cols: &[Vec<(usize, QScalar)>], n: usize, v: &TripleVec, first: bool) -> TripleVec {
    let mut acc: BTreeMap<usize, Vec<QScalar>> = BTreeMap::new();
    for (key, x) in v {
        let (a, b, c) = (key / (n * n), (key / n) % n, key % n);
        let (pair, rest) = if first { (a * n + b, c) } else { (b * n + c, a) };
        for (r, m) in &cols[pair] {
            let out = if first { r * n + rest } else { rest * n * n + r };
            acc.entry(out).or_default().push(m.mul(x));
        }
    }
    acc.into_iter()
        .map(|(k, t)| (k, QScalar::sum(t.iter())))
        .filter(|(_, v)| !v.is_zero())
        .collect()
}
