//! Gauss-Jordan elimination over exact fields.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::QScalar;

/// Minimal exact-field interface used by the elimination routines.
pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    /// Size heuristic for pivot choice; smaller is preferred.
    fn size(&self) -> usize;
}

impl Field for QScalar {
    fn zero() -> Self {
        QScalar::zero()
    }
    fn one() -> Self {
        QScalar::one()
    }
    fn is_zero(&self) -> bool {
        QScalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        QScalar::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        QScalar::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        QScalar::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        QScalar::div(self, o).expect("pivot is nonzero")
    }
    fn size(&self) -> usize {
        self.complexity()
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn size(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

pub type Matrix<F> = Vec<Vec<F>>;

/// Reduced row-echelon form. Returns the reduced matrix (zero rows dropped)
/// and the pivot column of each remaining row.
pub fn rref<F: Field>(m: &Matrix<F>) -> (Matrix<F>, Vec<usize>) {
    rref_with_order(m, None)
}

/// As [`rref`], but columns are tried as pivots in the given order. Used to
/// force particular unknowns (e.g. disordered words) to be the leading ones.
pub fn rref_with_order<F: Field>(m: &Matrix<F>, order: Option<&[usize]>) -> (Matrix<F>, Vec<usize>) {
    let mut a: Matrix<F> = m.clone();
    let cols = a.first().map_or(0, |r| r.len());
    let default: Vec<usize> = (0..cols).collect();
    let order = order.unwrap_or(&default);
    let mut pivots = Vec::new();
    let mut row = 0;
    for &c in order {
        if row == a.len() {
            break;
        }
        let best = (row..a.len())
            .filter(|&r| !a[r][c].is_zero())
            .min_by_key(|&r| a[r][c].size());
        let Some(p) = best else { continue };
        a.swap(row, p);
        let inv = F::one().div(&a[row][c]);
        for v in a[row].iter_mut() {
            if !v.is_zero() {
                *v = v.mul(&inv);
            }
        }
        let prow = a[row].clone();
        for r in 0..a.len() {
            if r == row || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for (k, pv) in prow.iter().enumerate() {
                if !pv.is_zero() {
                    a[r][k] = a[r][k].sub(&f.mul(pv));
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    a.truncate(row);
    (a, pivots)
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    rref(m).1.len()
}

/// Basis of the right nullspace `{v : m v = 0}`.
pub fn nullspace<F: Field>(m: &Matrix<F>, cols: usize) -> Vec<Vec<F>> {
    let (r, piv) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (row, &p) in r.iter().zip(&piv) {
                if !row[f].is_zero() {
                    v[p] = F::zero().sub(&row[f]);
                }
            }
            v
        })
        .collect()
}

/// A solution of `m x = b` (free unknowns set to zero), or `None` if inconsistent.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let cols = m.first().map_or(0, |r| r.len());
    let aug: Matrix<F> = m
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, piv) = rref(&aug);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (row, &p) in r.iter().zip(&piv) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

pub fn inverse<F: Field>(m: &Matrix<F>) -> Option<Matrix<F>> {
    let n = m.len();
    let aug: Matrix<F> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let (r, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn matmul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let k = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = F::zero();
                    for t in 0..k {
                        if !row[t].is_zero() && !b[t][j].is_zero() {
                            acc = acc.add(&row[t].mul(&b[t][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(v: &[i64]) -> Vec<QScalar> {
        v.iter().map(|&x| QScalar::from_int(x)).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let q = QScalar::q();
        let m = vec![
            vec![QScalar::one(), q.clone(), q.mul(&q)],
            vec![q.clone(), q.mul(&q), q.pow(3)],
            qs(&[1, 0, 1]),
        ];
        assert_eq!(rank(&m), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        for row in &m {
            let dot = row.iter().zip(&ns[0]).fold(QScalar::zero(), |a, (x, y)| a.add(&x.mul(y)));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let q = QScalar::q();
        let m = vec![vec![q.clone(), QScalar::one()], vec![QScalar::one(), q.inv().unwrap()]];
        assert!(inverse(&m).is_none());
        let m = vec![vec![q.clone(), QScalar::one()], vec![QScalar::one(), q.clone()]];
        let inv = inverse(&m).unwrap();
        let id = matmul(&m, &inv);
        assert!(id[0][0].is_one() && id[1][1].is_one() && id[0][1].is_zero() && id[1][0].is_zero());
    }
}
