use crate::algebra::Sector;
use crate::coeff::{qbracket_base, QScalar};
use crate::error::{Error, Result};
use crate::report::Check;

use super::{poly_scale, poly_sub, Analysis, Variant, XPoly};

/// `∂_h (xCx)^m = c1 (m)_λ C_{hl} x^l (xCx)^{m-1}` for one derivative family.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialRule {
    pub c1: QScalar,
    pub lambda: QScalar,
}

/// `∂^i G_α = c x^i G_{α'}` on all trusted degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianRule {
    pub c: QScalar,
    pub alpha_prime: QScalar,
    pub checked_degree: usize,
}

impl Analysis {
    /// `C_{hl} x^l` as a polynomial.
    pub(crate) fn c_x(&self, h: u8) -> XPoly {
        let n = self.n();
        (0..n)
            .filter_map(|l| {
                let c = self.alg.s.c.at(h as usize, l).clone();
                (!c.is_zero()).then(|| (vec![l as u8], c))
            })
            .collect()
    }

    /// `∂_h` acting on a coordinate polynomial.
    pub fn dact_poly(&self, sec: Sector, h: u8, p: &XPoly) -> XPoly {
        let mut terms = Vec::new();
        for (w, c) in p {
            for (w2, c2) in self.alg.dact(sec, h, w).iter() {
                terms.push((w2.clone(), c.mul_raw(c2)));
            }
        }
        super::poly_from_terms(terms)
    }

    /// Reads `c1` and `λ` off the action on `(xCx)` and `(xCx)^2`, then
    /// confirms the rule for the next two powers and every index.
    pub fn radial_rule(&self, sec: Sector) -> Result<RadialRule> {
        if let Some(r) = self.radial.read().unwrap().get(&sec) {
            return Ok(r.clone());
        }
        let ratio = |m: usize, h: u8| -> Result<QScalar> {
            let lhs = self.dact_poly(sec, h, &self.zpow(m));
            let base = self.x_mul(&self.c_x(h), &self.zpow(m - 1));
            let (w, b) = base.iter().next().ok_or_else(|| Error::Invalid("empty radial basis".into()))?;
            let k = lhs.get(w).cloned().unwrap_or_default().div(b)?;
            if !poly_sub(&lhs, &poly_scale(&base, &k)).is_empty() {
                return Err(Error::Invalid(format!("∂_{h} (xCx)^{m} is not radial")));
            }
            Ok(k)
        };
        let c1 = ratio(1, 0)?;
        let lambda = ratio(2, 0)?.div(&c1)?.sub(&QScalar::one());
        for m in 1..=4usize {
            let want = c1.mul(&qbracket_base(m as u32, &lambda));
            for h in 0..self.n() as u8 {
                if ratio(m, h)? != want {
                    return Err(Error::Invalid(format!("radial rule fails at power {m}, index {h}")));
                }
            }
        }
        let r = RadialRule { c1, lambda };
        self.radial.write().unwrap().insert(sec, r.clone());
        Ok(r)
    }

    /// Finds `c` and `α'` with `∂^i G_α = c x^i G_α'` by matching the two
    /// lowest radial orders of the truncated series, then verifies the
    /// identity on every trusted degree and every index.
    pub fn gaussian_rule(&self, alpha: &QScalar, variant: Variant, sec: Sector, d: usize) -> Result<GaussianRule> {
        let g = self.qexp_series(alpha, variant, d, sec);
        let i0 = 0u8;
        let out = self.act(&self.alg.d_upper(i0 as usize, sec), &g)?;
        let lin = out.degree_part(1);
        let xi: Vec<u8> = vec![i0];
        let c = lin.get(&xi).cloned().ok_or_else(|| Error::Invalid("no linear term".into()))?;
        // degree three: c x^i (-α' xCx)
        let xz = self.x_mul(&[(xi.clone(), QScalar::one())].into_iter().collect(), &self.zpow(1));
        let (w3, k3) = xz.iter().next().ok_or_else(|| Error::Invalid("empty cubic".into()))?;
        let got3 = out.expanded.get(w3).cloned().unwrap_or_default();
        let alpha_prime = got3.div(&c.mul(k3))?.neg();
        let trusted = out.trusted;
        let g2 = self.qexp_series(&alpha_prime, variant, trusted.saturating_sub(1), sec);
        for i in 0..self.n() {
            let out_i = self.act(&self.alg.d_upper(i, sec), &g)?;
            let xi: XPoly = [(vec![i as u8], c.clone())].into_iter().collect();
            let expect = self.x_mul(&xi, &g2.expanded);
            let diff: XPoly = poly_sub(&out_i.expanded, &expect).into_iter().filter(|(w, _)| w.len() <= trusted).collect();
            if !diff.is_empty() {
                return Err(Error::Invalid(format!("no consistent Gaussian rule for index {i}")));
            }
        }
        Ok(GaussianRule { c, alpha_prime, checked_degree: trusted })
    }

    /// Exact checks of the Gaussian rule in both sectors for both bases.
    pub fn gaussian_checks(&self, alpha: &QScalar, d: usize) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for sec in [Sector::Unbarred, Sector::Barred] {
            let rr = self.radial_rule(sec)?;
            for variant in [Variant::Q2, Variant::Qm2] {
                let rule = self.gaussian_rule(alpha, variant, sec, d)?;
                let want_c = alpha.mul(&rr.c1).neg();
                let want_a = if rr.lambda == variant.base() { alpha.clone() } else { alpha.div(&variant.base())? };
                let pass = rule.c == want_c && rule.alpha_prime == want_a;
                let name = format!(
                    "gaussian_rule_{}_{}",
                    if sec == Sector::Unbarred { "d" } else { "dbar" },
                    if variant == Variant::Q2 { "q2" } else { "qm2" }
                );
                out.push(Check::new(name, pass, format!("c={} alpha'={}", rule.c, rule.alpha_prime)));
            }
        }
        Ok(out)
    }
}
