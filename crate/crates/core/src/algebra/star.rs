use super::element::{Element, Sector, Word};
use super::engine::Algebra;
use crate::coeff::QScalar;
use crate::error::Result;

impl Algebra {
    /// `(C C^T C)_{im}`, the matrix mapping lower derivative indices under `*`.
    fn star_matrix(&self) -> Vec<Vec<QScalar>> {
        let n = self.n();
        let c = &self.s.c;
        let mut cct = vec![vec![QScalar::zero(); n]; n];
        for i in 0..n {
            for l in 0..n {
                cct[i][l] = QScalar::sum((0..n).map(|j| c.at(i, j).mul(c.at(l, j))).collect::<Vec<_>>().iter());
            }
        }
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|m| QScalar::sum((0..n).map(|l| cct[i][l].mul(c.at(l, m))).collect::<Vec<_>>().iter()))
                    .collect()
            })
            .collect()
    }

    /// `(x^i)* = x^j C_{ji}`.
    pub fn star_x(&self, i: u8) -> Element {
        let n = self.n();
        Element::from_terms(
            (0..n).map(|j| (Word::x(vec![j as u8]), self.s.c.at(j, i as usize).clone())),
            None,
        )
    }

    /// `(∂_i)* = -q^{-N} (C C^T C)_{im} ∂̄_m`, and `(∂̄_i)* = -q^{N} (C C^T C)_{im} ∂_m`.
    pub fn star_d(&self, i: u8, sec: Sector) -> Element {
        let n = self.n() as i32;
        let pref = match sec {
            Sector::Unbarred => QScalar::q_pow(-n).neg(),
            Sector::Barred => QScalar::q_pow(n).neg(),
        };
        let m = self.star_matrix();
        let target = sec.flip();
        Element::from_terms(
            m[i as usize].iter().enumerate().map(|(k, v)| {
                (Word { lam: 0, xs: vec![], ds: vec![k as u8] }, v.mul(&pref))
            }),
            Some(target),
        )
    }

    /// The involution: antilinear (identity on real coefficients),
    /// antimultiplicative, `Λ* = Λ^{-1}`, swapping the derivative sectors.
    pub fn star(&self, e: &Element) -> Result<Element> {
        let sec = e.sector();
        let target = sec.map(Sector::flip);
        let mut out = Element::zero().with_sector(target);
        for (w, c) in e.terms() {
            let mut factors: Vec<Element> = Vec::with_capacity(w.degree() + 1);
            for &d in w.ds.iter().rev() {
                factors.push(self.star_d(d, sec.expect("derivative word has a sector")));
            }
            for &x in w.xs.iter().rev() {
                factors.push(self.star_x(x));
            }
            if w.lam != 0 {
                factors.push(Element::lambda_half(-w.lam));
            }
            let refs: Vec<&Element> = factors.iter().collect();
            let t = self.mul_all(&refs)?.scale(c);
            out = out.add(&t)?;
        }
        Ok(out)
    }
}
