use std::collections::BTreeMap;

use crate::algebra::{Element, Word};
use crate::coeff::{qfactorial_base, QScalar};
use crate::error::{Error, Result};

use super::{Analysis, MomentTable, Variant, XPoly};

/// A state as the pair `(P G^{q^2}_α, P̄ G^{q^-2}_ᾱ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairState {
    pub poly: XPoly,
    pub alpha: QScalar,
    pub poly_bar: XPoly,
    pub alpha_bar: QScalar,
}

/// Two-term scalar product `∫ ψ̄_u* ψ_v + ∫ ψ_u* ψ̄_v`.
///
/// The integrand of each term is a polynomial times the central radial
/// function `G^{q^2}_a G^{q^-2}_b`. Invariance splits the polynomial into an
/// angular functional `T_d`, read off the single-Gaussian moment table, and
/// radial integrals `J_k(a,b) = ∫ (xCx)^k G_a G_b`. Dilatation covariance
/// `∫ F(qx) = q^{-N} ∫ F(x)` together with the functional equations of both
/// exponentials gives
/// `J_{k+1}/J_k = (q^{2k} - q^{-N}) / ((q^2-1)(a q^{2k} + b q^{-N-2}))`,
/// and fixes `J_0(a,b)` up to a factor that cancels in every nonzero entry;
/// the normalization used is `J_0 = (ab/P)^{-N/4}` for a reference product `P`.
pub struct ScalarProduct<'a> {
    pub an: &'a Analysis,
    pub table: MomentTable,
    pub reference: QScalar,
}

/// `x` as `s^t` if it is a pure power.
pub(crate) fn as_s_power(x: &QScalar) -> Option<i32> {
    (*x == QScalar::s_pow(x.shift())).then(|| x.shift())
}

impl<'a> ScalarProduct<'a> {
    pub fn new(an: &'a Analysis, table: MomentTable, reference: QScalar) -> Result<Self> {
        if table.variant != Variant::Q2 {
            return Err(Error::Invalid("reference table must use the q^2 exponential".into()));
        }
        Ok(ScalarProduct { an, table, reference })
    }

    fn n(&self) -> i32 {
        self.an.n() as i32
    }

    /// `J_{k+1}/J_k`.
    pub fn radial_ratio(&self, k: usize, a: &QScalar, b: &QScalar) -> Result<QScalar> {
        let n = self.n();
        let k = k as i32;
        let num = QScalar::q_pow(2 * k).sub(&QScalar::q_pow(-n));
        let den = QScalar::q_pow(2)
            .sub(&QScalar::one())
            .mul(&a.mul(&QScalar::q_pow(2 * k)).add(&b.mul(&QScalar::q_pow(-n - 2))));
        num.div(&den)
    }

    /// `J_0(a,b)` relative to the reference product.
    pub fn j0(&self, a: &QScalar, b: &QScalar) -> Result<QScalar> {
        let ratio = a.mul(b).div(&self.reference)?;
        let t = as_s_power(&ratio)
            .ok_or_else(|| Error::Invalid(format!("Gaussian product {ratio} is not a power of q relative to the reference")))?;
        let e = -t * self.n();
        if e % 4 != 0 {
            return Err(Error::Invalid(format!("normalization exponent {e}/4 is not integral")));
        }
        Ok(QScalar::s_pow(e / 4))
    }

    /// Angular functional per even degree: `T_d(Q_d) = M(Q_d)/M((xCx)^{d/2})`.
    fn angular(&self, q: &XPoly) -> Result<BTreeMap<usize, QScalar>> {
        let mut by_deg: BTreeMap<usize, XPoly> = BTreeMap::new();
        for (w, c) in q {
            if w.len() % 2 == 0 {
                by_deg.entry(w.len() / 2).or_default().insert(w.clone(), c.clone());
            }
        }
        let mut out = BTreeMap::new();
        for (k, part) in by_deg {
            let v = self.table.integrate(&part)?;
            if !v.is_zero() {
                out.insert(k, v.div(&self.table.radial(self.an, k)?)?);
            }
        }
        Ok(out)
    }

    /// `∫ Q G^{q^2}_a G^{q^-2}_b`.
    pub fn pair_integral(&self, q: &XPoly, a: &QScalar, b: &QScalar) -> Result<QScalar> {
        let ang = self.angular(q)?;
        let Some(&kmax) = ang.keys().max() else {
            return Ok(QScalar::zero());
        };
        let mut j = self.j0(a, b)?;
        let mut terms = Vec::new();
        for k in 0..=kmax {
            if let Some(t) = ang.get(&k) {
                terms.push(t.mul(&j));
            }
            if k < kmax {
                j = j.mul(&self.radial_ratio(k, a, b)?);
            }
        }
        Ok(QScalar::sum(terms.iter()))
    }

    pub(crate) fn star_poly(&self, p: &XPoly) -> Result<XPoly> {
        let e = Element::from_terms(p.iter().map(|(w, c)| (Word::x(w.clone()), c.clone())), None);
        let s = self.an.alg.star(&e)?;
        Ok(s.terms().iter().map(|(w, c)| (w.xs.clone(), c.clone())).collect())
    }

    pub fn product(&self, u: &PairState, v: &PairState) -> Result<QScalar> {
        let t1 = self.an.x_mul(&self.star_poly(&u.poly_bar)?, &v.poly);
        let t2 = self.an.x_mul(&self.star_poly(&u.poly)?, &v.poly_bar);
        let a = self.pair_integral(&t1, &v.alpha, &u.alpha_bar)?;
        let b = self.pair_integral(&t2, &u.alpha, &v.alpha_bar)?;
        Ok(a.add(&b))
    }

    /// Largest relative deviation, over radial orders `k <= kmax`, between
    /// `J_k/J_0` and its one-sided series: the `q^-2` factor expanded to
    /// `order` terms against single-Gaussian radial moments of `G_a`.
    pub fn series_deviation(&self, kmax: usize, a: &QScalar, b: &QScalar, order: usize, q0: f64) -> Result<f64> {
        let n = self.n() as f64;
        let af = a.eval(q0)?;
        let bf = b.eval(q0)?;
        let mu = |j: usize| -> f64 {
            (0..j).map(|i| (1.0 - q0.powf(-n - 2.0 * i as f64)) / ((q0 * q0 - 1.0) * af)).product()
        };
        let vinv = QScalar::q_pow(-2);
        let series = |k: usize| -> Result<f64> {
            let mut s = 0.0;
            for m in 0..order {
                let fact = qfactorial_base(m as u32, &vinv).eval(q0)?;
                s += (-bf).powi(m as i32) / fact * mu(k + m);
            }
            Ok(s)
        };
        let s0 = series(0)?;
        let mut exact = 1.0;
        let mut worst: f64 = 0.0;
        for k in 1..=kmax {
            exact *= self.radial_ratio(k - 1, a, b)?.eval(q0)?;
            let approx = series(k)? / s0;
            worst = worst.max(((approx - exact) / exact).abs());
        }
        Ok(worst)
    }
}
