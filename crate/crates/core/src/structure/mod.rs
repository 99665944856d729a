//! The SO_q(N) braid matrix, metric and spectral projectors.

mod json;
mod tensor;
mod verify;

use serde::{Deserialize, Serialize};

use crate::coeff::QScalar;
use crate::error::{Error, Result};

pub use json::{structure_from_json, structure_to_json};
pub use tensor::{apply_pair, SparseMat, Tensor2, Tensor4, TripleVec};
pub use verify::verify_structure;

/// The dimension `N` and its index set, ordered `-n < ... < n` (no 0 for even N).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dimension {
    n: usize,
}

impl Dimension {
    pub const MAX: usize = 15;

    pub fn new(n: usize) -> Result<Self> {
        if !(3..=Self::MAX).contains(&n) {
            return Err(Error::Domain(format!("N must lie in 3..={}, got {n}", Self::MAX)));
        }
        Ok(Dimension { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half(&self) -> usize {
        self.n / 2
    }

    pub fn is_odd(&self) -> bool {
        self.n % 2 == 1
    }

    pub fn indices(&self) -> Vec<i32> {
        let h = self.half() as i32;
        (-h..=h).filter(|&i| i != 0 || self.is_odd()).collect()
    }

    pub fn pos(&self, i: i32) -> Option<usize> {
        self.indices().iter().position(|&j| j == i)
    }

    pub fn index(&self, p: usize) -> i32 {
        self.indices()[p]
    }

    /// Position of the mirrored index `-i`.
    pub fn mirror(&self, p: usize) -> usize {
        self.n - 1 - p
    }

    /// Twice the Weyl-vector component attached to position `p`.
    pub fn rho2(&self, p: usize) -> i32 {
        let n = self.n as i32;
        let a = p as i32 + 1;
        if 2 * a < n + 1 {
            n - 2 * a
        } else if 2 * a == n + 1 {
            0
        } else {
            n + 2 - 2 * a
        }
    }
}

/// All structure tensors for one `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureSet {
    pub dim: Dimension,
    pub rhat: Tensor4,
    pub rinv: Tensor4,
    pub c: Tensor2,
    pub ps: Tensor4,
    pub pa: Tensor4,
    pub p1: Tensor4,
    pub qn: QScalar,
}

impl StructureSet {
    pub fn n(&self) -> usize {
        self.dim.n()
    }

    /// The three eigenvalues `q`, `-q^{-1}`, `q^{1-N}` in that order.
    pub fn eigenvalues(&self) -> [QScalar; 3] {
        eigenvalues(self.n())
    }
}

fn eigenvalues(n: usize) -> [QScalar; 3] {
    [QScalar::q(), QScalar::q_pow(-1).neg(), QScalar::q_pow(1 - n as i32)]
}

/// The braid matrix of the orthogonal series in the fundamental representation.
pub fn braid_matrix(dim: Dimension) -> Tensor4 {
    let n = dim.n();
    let q = QScalar::q();
    let lam = q.sub(&QScalar::q_pow(-1));
    // R^{ab}_{cd} multiplies E_ac (x) E_bd; the braid matrix is P R.
    let mut r = SparseMat::zero(n * n);
    let mut put = |a: usize, b: usize, c: usize, d: usize, v: &QScalar| r.add_at(a * n + b, c * n + d, v);
    for i in 0..n {
        for j in 0..n {
            let v = if i == j {
                if dim.mirror(i) != i { q.clone() } else { QScalar::one() }
            } else if j != dim.mirror(i) {
                QScalar::one()
            } else {
                QScalar::q_pow(-1)
            };
            put(i, j, i, j, &v);
        }
    }
    for i in 0..n {
        for j in 0..i {
            put(i, j, j, i, &lam);
            let ph = QScalar::s_pow(dim.rho2(i) - dim.rho2(j));
            put(i, dim.mirror(i), j, dim.mirror(j), &lam.mul(&ph).neg());
        }
    }
    let mut rhat = SparseMat::zero(n * n);
    for (row, col, v) in r.entries() {
        let (a, b) = (row / n, row % n);
        rhat.set(b * n + a, col, v.clone());
    }
    Tensor4::new(dim, rhat)
}

/// `prod_{k != skip} (R - e_k) / (e_skip - e_k)`.
fn lagrange_projector(rhat: &SparseMat, ev: &[QScalar; 3], skip: usize) -> SparseMat {
    let n = rhat.size();
    let mut m = SparseMat::identity(n);
    let mut den = QScalar::one();
    for (k, e) in ev.iter().enumerate() {
        if k == skip {
            continue;
        }
        m = m.mul(&rhat.sub(&SparseMat::scalar(n, e)));
        den = den.mul(&ev[skip].sub(e));
    }
    m.scale(&den.inv().expect("distinct eigenvalues"))
}

pub fn build_structure(dim: Dimension) -> Result<StructureSet> {
    let n = dim.n();
    let rhat = braid_matrix(dim);
    let ev = eigenvalues(n);
    let ps = lagrange_projector(&rhat.mat, &ev, 0);
    let pa = lagrange_projector(&rhat.mat, &ev, 1);
    let p1 = lagrange_projector(&rhat.mat, &ev, 2);

    let rinv = ps
        .scale(&ev[0].inv()?)
        .add(&pa.scale(&ev[1].inv()?))
        .add(&p1.scale(&ev[2].inv()?));

    let c = extract_metric(dim, &p1)?;
    let qn = QScalar::sum(c.entries.iter().flatten().map(|v| v.mul(v)).collect::<Vec<_>>().iter());

    let s = StructureSet {
        dim,
        rhat,
        rinv: Tensor4::new(dim, rinv),
        c,
        ps: Tensor4::new(dim, ps),
        pa: Tensor4::new(dim, pa),
        p1: Tensor4::new(dim, p1),
        qn,
    };
    let report = verify_structure(&s);
    if let Some(bad) = report.failures().first() {
        return Err(Error::Structure(format!("relation '{}' violated", bad.name)));
    }
    Ok(s)
}

/// Recovers `C` from the rank-one projector `P1 = (C (x) C) / Q_N`, scaled so
/// that `C C = 1` and signed so that its classical limit is positive.
fn extract_metric(dim: Dimension, p1: &SparseMat) -> Result<Tensor2> {
    let n = dim.n();
    let anchor = n - 1; // pair (first, last) = (-n, n)
    let col: Vec<QScalar> = (0..n * n).map(|r| p1.get(r, anchor)).collect();
    let pivot = col[anchor].clone();
    if pivot.is_zero() {
        return Err(Error::Structure("P1 vanishes on the (-n, n) pair".into()));
    }
    let w: Vec<Vec<QScalar>> = (0..n)
        .map(|a| (0..n).map(|b| col[a * n + b].div(&pivot).unwrap()).collect())
        .collect();
    // W W must be a scalar matrix mu * 1
    let mut mu: Option<QScalar> = None;
    for a in 0..n {
        for b in 0..n {
            let v = QScalar::sum((0..n).map(|k| w[a][k].mul(&w[k][b])).collect::<Vec<_>>().iter());
            if a == b {
                match &mu {
                    None => mu = Some(v),
                    Some(m) if *m == v => {}
                    Some(_) => return Err(Error::Structure("C C is not scalar".into())),
                }
            } else if !v.is_zero() {
                return Err(Error::Structure("C C is not diagonal".into()));
            }
        }
    }
    let mu = mu.unwrap();
    let mut lam = mu
        .inv()?
        .sqrt_monomial()
        .ok_or_else(|| Error::Structure("metric scale is not a monomial square".into()))?;
    let classical = w[0][anchor].mul(&lam).limit_q_to_1()?;
    if classical < num_rational::BigRational::from_integer(0.into()) {
        lam = lam.neg();
    }
    let entries = w.iter().map(|r| r.iter().map(|v| v.mul(&lam)).collect()).collect();
    Ok(Tensor2 { dim, entries })
}
