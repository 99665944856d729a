use super::element::{Element, Sector, Word};
use super::engine::Algebra;
use crate::coeff::linalg::{rank, solve};
use crate::coeff::QScalar;
use crate::error::{Error, Result};
use crate::report::{Check, Report};

/// Frequently used composite elements.
#[derive(Clone, Debug)]
pub struct NamedConstants {
    /// `x C x`.
    pub xcx: Element,
    /// `∂^i C_{ij} ∂^j`.
    pub laplacian: Element,
    /// `∂̄^i C_{ij} ∂̄^j`.
    pub laplacian_bar: Element,
    /// `l^{ij}` indexed by positions.
    pub l_upper: Vec<Vec<Element>>,
    /// `l_{ij} = C_{ia} C_{jb} l^{ab}`.
    pub l_lower: Vec<Vec<Element>>,
    /// `x^i ∂_i`.
    pub euler: Element,
    pub b: Element,
    /// `l·l = l^{ij} l_{ji}`.
    pub l_dot_l: Element,
}

fn d_word(i: usize) -> Word {
    Word { lam: 0, xs: vec![], ds: vec![i as u8] }
}

impl Algebra {
    /// `∂^i = C^{ia} ∂_a` in the given sector.
    pub fn d_upper(&self, i: usize, sec: Sector) -> Element {
        let n = self.n();
        Element::from_terms((0..n).map(|a| (d_word(a), self.s.c.at(i, a).clone())), Some(sec))
    }

    pub fn xcx(&self) -> Result<Element> {
        let n = self.n();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let c = self.s.c.at(i, j);
                if c.is_zero() {
                    continue;
                }
                for (w, v) in self.x_normal(&[i as u8, j as u8]) {
                    terms.push((Word::x(w), v.mul(c)));
                }
            }
        }
        Ok(Element::from_terms(terms, None))
    }

    /// `∂^i C_{ij} ∂^j` (or the barred analog).
    pub fn laplacian(&self, sec: Sector) -> Result<Element> {
        let n = self.n();
        let mut out = Element::zero();
        for i in 0..n {
            for j in 0..n {
                let c = self.s.c.at(i, j);
                if c.is_zero() {
                    continue;
                }
                let t = self.mul(&self.d_upper(i, sec), &self.d_upper(j, sec))?;
                out = out.add(&t.scale(c))?;
            }
        }
        Ok(out)
    }

    pub fn euler(&self, sec: Sector) -> Element {
        let n = self.n();
        Element::from_terms(
            (0..n).map(|i| (Word { lam: 0, xs: vec![i as u8], ds: vec![i as u8] }, QScalar::one())),
            Some(sec),
        )
    }

    /// `l^{ij} = P_A{}^{ij}_{hk} x^h ∂^k Λ^{-1}` for positions `i, j`.
    pub fn l_upper(&self, i: usize, j: usize) -> Result<Element> {
        let n = self.n();
        let lam = Element::lambda_half(-2);
        let mut out = Element::zero();
        for (c, v) in self.s.pa.mat.row(i * n + j) {
            let (h, k) = (c / n, c % n);
            let t = self.mul_all(&[&Element::x(h as u8), &self.d_upper(k, Sector::Unbarred), &lam])?;
            out = out.add(&t.scale(v))?;
        }
        Ok(out)
    }

    pub fn named_constants(&self) -> Result<NamedConstants> {
        let n = self.n();
        let q = QScalar::q();
        let xcx = self.xcx()?;
        let laplacian = self.laplacian(Sector::Unbarred)?;
        let laplacian_bar = self.laplacian(Sector::Barred)?;
        let mut l_upper = vec![vec![Element::zero(); n]; n];
        for (i, row) in l_upper.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = self.l_upper(i, j)?;
            }
        }
        let c = &self.s.c;
        let mut l_lower = vec![vec![Element::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Element::zero();
                for a in 0..n {
                    for b in 0..n {
                        let k = c.at(i, a).mul(c.at(j, b));
                        if !k.is_zero() && !l_upper[a][b].is_zero() {
                            acc = acc.add(&l_upper[a][b].scale(&k))?;
                        }
                    }
                }
                l_lower[i][j] = acc;
            }
        }
        let mut l_dot_l = Element::zero();
        for i in 0..n {
            for j in 0..n {
                if !l_upper[i][j].is_zero() && !l_lower[j][i].is_zero() {
                    l_dot_l = l_dot_l.add(&self.mul(&l_upper[i][j], &l_lower[j][i])?)?;
                }
            }
        }
        let euler = self.euler(Sector::Unbarred);
        let kappa = q.mul(&q).sub(&QScalar::one()).div(&QScalar::one().add(&QScalar::q_pow(2 - n as i32)))?;
        let inner = Element::one().add(&euler.scale(&kappa))?;
        let b = self.mul(&Element::lambda_half(-2), &inner)?;
        Ok(NamedConstants { xcx, laplacian, laplacian_bar, l_upper, l_lower, euler, b, l_dot_l })
    }

    /// The coefficient `(q^2-1)(q^2-q^{-2}) / ((1+q^{2-N})(1+q^{N-4}))`.
    pub fn casimir_coefficient(&self) -> QScalar {
        let n = self.n() as i32;
        let one = QScalar::one();
        let num = QScalar::q_pow(2).sub(&one).mul(&QScalar::q_pow(2).sub(&QScalar::q_pow(-2)));
        let den = one.add(&QScalar::q_pow(2 - n)).mul(&one.add(&QScalar::q_pow(n - 4)));
        num.div(&den).expect("nonzero")
    }

    /// Realizes `Λ^2` inside the Λ-free algebra: the unique element
    /// `W = 1 + a E + b E^2 + c (xCx)Δ` (with `E = x^i ∂_i`) satisfying
    /// `W x^i = q^2 x^i W` and `W ∂_i = q^{-2} ∂_i W`.
    pub fn dilaton_square(&self, k: &NamedConstants) -> Result<Element> {
        let e2 = self.mul(&k.euler, &k.euler)?;
        let xd = self.mul(&k.xcx, &k.laplacian)?;
        let basis = [Element::one(), k.euler.clone(), e2, xd];
        let n = self.n();
        let q2 = QScalar::q_pow(2);
        let qm2 = QScalar::q_pow(-2);
        // residual_i(basis_t) for each generator; collect coefficient equations
        let mut cols: Vec<Vec<Element>> = vec![Vec::new(); basis.len()];
        for (t, bt) in basis.iter().enumerate() {
            for i in 0..n {
                let x = Element::x(i as u8);
                cols[t].push(self.mul(bt, &x)?.sub(&self.mul(&x, bt)?.scale(&q2))?);
                let d = Element::d(i as u8, Sector::Unbarred);
                cols[t].push(self.mul(bt, &d)?.sub(&self.mul(&d, bt)?.scale(&qm2))?);
            }
        }
        let mut words: Vec<(usize, Word)> = Vec::new();
        for col in &cols {
            for (r, e) in col.iter().enumerate() {
                for w in e.terms().keys() {
                    if !words.contains(&(r, w.clone())) {
                        words.push((r, w.clone()));
                    }
                }
            }
        }
        let unknowns = basis.len() - 1;
        let mut m = Vec::new();
        let mut rhs = Vec::new();
        for (r, w) in &words {
            m.push((1..basis.len()).map(|t| cols[t][*r].coeff(w)).collect::<Vec<_>>());
            rhs.push(cols[0][*r].coeff(w).neg());
        }
        if rank(&m) != unknowns {
            return Err(Error::Rewrite("dilaton realization is not unique".into()));
        }
        let sol = solve(&m, &rhs).ok_or_else(|| Error::Rewrite("no Λ-free dilaton realization".into()))?;
        let mut w = basis[0].clone();
        for (t, c) in sol.iter().enumerate() {
            w = w.add(&basis[t + 1].scale(c))?;
        }
        Ok(w)
    }

    /// Checks `1 = B^2 - k l·l` where the free dilaton is identified with its
    /// Λ-free realization: `B^2 - k l·l = Λ^{-2} F`, and the identity holds
    /// iff `F` equals [`Algebra::dilaton_square`].
    pub fn casimir_check(&self) -> Result<(Report, Element)> {
        let k = self.named_constants()?;
        let kc = self.casimir_coefficient();
        let e = self.mul(&k.b, &k.b)?.sub(&k.l_dot_l.scale(&kc))?;
        let mut rep = Report::new();
        let homogeneous = e.terms().keys().all(|w| w.lam == -4);
        rep.push(Check::exact("casimir_dilaton_power", homogeneous));
        let f = self.mul(&Element::lambda_half(4), &e)?;
        rep.push(Check::new("casimir_unit_term", f.coeff(&Word::one()).is_one(), f.coeff(&Word::one()).to_string()));
        let mut rel = true;
        for i in 0..self.n() {
            let x = Element::x(i as u8);
            let d = Element::d(i as u8, Sector::Unbarred);
            rel &= self.mul(&f, &x)?.sub(&self.mul(&x, &f)?.scale(&QScalar::q_pow(2)))?.is_zero();
            rel &= self.mul(&f, &d)?.sub(&self.mul(&d, &f)?.scale(&QScalar::q_pow(-2)))?.is_zero();
        }
        rep.push(Check::exact("casimir_dilaton_relations", rel));
        let residual = match self.dilaton_square(&k) {
            Ok(w) => self.mul(&Element::lambda_half(-4), &f.sub(&w)?)?,
            Err(err) => {
                rep.push(Check::new("casimir_identity", false, err.to_string()));
                return Ok((rep, f));
            }
        };
        rep.push(Check::new(
            "casimir_identity",
            residual.is_zero(),
            format!("{} residual terms", residual.len()),
        ));
        Ok((rep, residual))
    }
}
