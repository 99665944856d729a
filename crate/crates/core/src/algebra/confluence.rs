use super::element::{Element, Generator, Sector};
use super::engine::Algebra;
use super::rules::Family;
use crate::error::Result;
use crate::report::{Check, Report};

impl Algebra {
    fn family_gen(f: Family, i: u8) -> Generator {
        match f {
            Family::X => Generator::X(i),
            Family::D => Generator::D(i),
            Family::Dbar => Generator::Dbar(i),
        }
    }

    fn apply_pair_rule(&self, f: Family, a: u8, b: u8, prefix: &[Generator], suffix: &[Generator]) -> Result<Element> {
        let mut out = Element::zero();
        for (u, v, c) in self.rules(f).rule(a, b).expect("disordered pair") {
            let mut w = prefix.to_vec();
            w.push(Self::family_gen(f, *u));
            w.push(Self::family_gen(f, *v));
            w.extend_from_slice(suffix);
            out = out.add(&self.normal_order(&w)?.scale(c))?;
        }
        Ok(out)
    }

    /// `∂_i x^j` rewritten once by the cross rule, followed by `rest`, normal-ordered.
    fn apply_cross_rule(&self, sec: Sector, i: u8, j: u8, prefix: &[Generator], rest: &[Generator]) -> Result<Element> {
        let dgen = |h| if sec == Sector::Unbarred { Generator::D(h) } else { Generator::Dbar(h) };
        let mut out = Element::zero();
        if i == j {
            let mut w = prefix.to_vec();
            w.extend_from_slice(rest);
            out = self.normal_order(&w)?;
        }
        for (k, h, c) in self.cross_terms(sec, i, j) {
            let mut w = prefix.to_vec();
            w.push(Generator::X(*k));
            w.push(dgen(*h));
            w.extend_from_slice(rest);
            out = out.add(&self.normal_order(&w)?.scale(c))?;
        }
        Ok(out)
    }

    /// Resolves every degree-3 overlap ambiguity for a quadratic family.
    pub fn check_family_confluence(&self, f: Family) -> Result<Check> {
        let n = self.n() as u8;
        let mut bad = 0usize;
        let mut total = 0usize;
        for a in 0..n {
            for b in 0..a {
                for c in 0..b {
                    total += 1;
                    let left = self.apply_pair_rule(f, a, b, &[], &[Self::family_gen(f, c)])?;
                    let right = self.apply_pair_rule(f, b, c, &[Self::family_gen(f, a)], &[])?;
                    if left != right {
                        bad += 1;
                    }
                }
            }
        }
        Ok(Check::new(format!("confluence_{f:?}").to_lowercase(), bad == 0, format!("{bad}/{total} unresolved")))
    }

    /// Overlaps between the cross rule and the quadratic rules:
    /// `∂_i x^a x^b` (a > b) and `∂_a ∂_b x^c` (a > b).
    pub fn check_mixed_confluence(&self, sec: Sector) -> Result<Check> {
        let n = self.n() as u8;
        let fam = if sec == Sector::Unbarred { Family::D } else { Family::Dbar };
        let dgen = |h| Self::family_gen(fam, h);
        let mut bad = 0usize;
        let mut total = 0usize;
        for i in 0..n {
            for a in 0..n {
                for b in 0..a {
                    total += 1;
                    let left = self.apply_cross_rule(sec, i, a, &[], &[Generator::X(b)])?;
                    let right = self.apply_pair_rule(Family::X, a, b, &[dgen(i)], &[])?;
                    if left != right {
                        bad += 1;
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..a {
                for c in 0..n {
                    total += 1;
                    let left = self.apply_pair_rule(fam, a, b, &[], &[Generator::X(c)])?;
                    let right = self.apply_cross_rule(sec, b, c, &[dgen(a)], &[])?;
                    if left != right {
                        bad += 1;
                    }
                }
            }
        }
        // the dilaton rules are homogeneous; check one representative family
        for a in 0..n {
            for b in 0..a {
                total += 1;
                let left = self.apply_pair_rule(Family::X, a, b, &[], &[Generator::LambdaHalf(1)])?;
                let moved = self.normal_order(&[Generator::X(a), Generator::LambdaHalf(1), Generator::X(b)])?;
                let right = moved.scale(&crate::coeff::QScalar::s_pow(-1));
                if left != right {
                    bad += 1;
                }
            }
        }
        Ok(Check::new(
            format!("confluence_mixed_{sec:?}").to_lowercase(),
            bad == 0,
            format!("{bad}/{total} unresolved"),
        ))
    }

    pub fn confluence_report(&self) -> Result<Report> {
        let mut r = Report::new();
        for f in [Family::X, Family::D, Family::Dbar] {
            r.push(self.check_family_confluence(f)?);
        }
        for s in [Sector::Unbarred, Sector::Barred] {
            r.push(self.check_mixed_confluence(s)?);
        }
        Ok(r)
    }
}
