//! Text front-end: the expression grammar, its printer and lowering to
//! normal-ordered elements.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' exp)?
//! exp    := int | '(' int ['/' int] ')'
//! atom   := rational | 'q' | 'omega' | 'x[' int ']' | 'd[' int ']' | 'db[' int ']' | 'L' | '(' expr ')'
//! ```

mod ast;
mod parser;

pub use ast::{Exponent, Expr, Sign};
pub use parser::parse;

use crate::algebra::{Algebra, Element, Sector};
use crate::coeff::QScalar;
use crate::error::{Error, Result};

/// Lowering context: the algebra and the value substituted for `omega`.
pub struct Lowering<'a> {
    pub alg: &'a Algebra,
    pub omega: QScalar,
}

impl<'a> Lowering<'a> {
    pub fn new(alg: &'a Algebra) -> Self {
        Lowering { alg, omega: QScalar::one() }
    }

    fn pos(&self, i: i64) -> Result<u8> {
        let n = self.alg.n();
        i32::try_from(i)
            .ok()
            .and_then(|i| self.alg.s.dim.pos(i))
            .map(|p| p as u8)
            .ok_or(Error::IndexOutOfRange { index: i, n })
    }

    pub fn lower(&self, e: &Expr) -> Result<Element> {
        match e {
            Expr::Num(r) => Ok(Element::scalar(QScalar::from_ratio(r))),
            Expr::Q => Ok(Element::scalar(QScalar::q())),
            Expr::Omega => Ok(Element::scalar(self.omega.clone())),
            Expr::X(i) => Ok(Element::x(self.pos(*i)?)),
            Expr::D(i) => Ok(Element::d(self.pos(*i)?, Sector::Unbarred)),
            Expr::Db(i) => Ok(Element::d(self.pos(*i)?, Sector::Barred)),
            Expr::L => Ok(Element::lambda_half(1)),
            Expr::Group(inner) => self.lower(inner),
            Expr::Sum { terms, .. } => {
                let mut acc = Element::zero();
                for (s, t) in terms {
                    let v = self.lower(t)?;
                    acc = match s {
                        Sign::Plus => acc.add(&v)?,
                        Sign::Minus => acc.sub(&v)?,
                    };
                }
                Ok(acc)
            }
            Expr::Product(fs) => {
                let mut acc = Element::one();
                for f in fs {
                    acc = self.alg.mul(&acc, &self.lower(f)?)?;
                }
                Ok(acc)
            }
            Expr::Pow(b, k) => self.power(b, *k),
        }
    }

    fn power(&self, base: &Expr, k: Exponent) -> Result<Element> {
        let v = self.lower(base)?;
        let mut words = v.terms().iter();
        let single = match (words.next(), words.next()) {
            (Some((w, c)), None) => Some((w.clone(), c.clone())),
            _ => None,
        };
        if let Some((w, c)) = &single {
            // scalars and pure dilaton powers take any exponent their form allows
            if w.xs.is_empty() && w.ds.is_empty() {
                let lam = w.lam as i64 * k.num;
                let coeff = scalar_power(c, k)?;
                if lam % k.den != 0 {
                    return Err(Error::Domain(format!("{base}^{k} is not an integral power of L")));
                }
                let lam = i32::try_from(lam / k.den).map_err(|_| Error::Domain("exponent overflow".into()))?;
                return Ok(Element::from_word(crate::algebra::Word { lam, xs: vec![], ds: vec![] }, coeff, None));
            }
        }
        if !k.is_integer() || k.num < 0 {
            return Err(Error::Domain(format!("exponent {k} needs a scalar or dilaton base")));
        }
        let mut acc = Element::one();
        for _ in 0..k.num {
            acc = self.alg.mul(&acc, &v)?;
        }
        Ok(acc)
    }
}

fn scalar_power(c: &QScalar, k: Exponent) -> Result<QScalar> {
    if k.is_integer() {
        let e = i32::try_from(k.num).map_err(|_| Error::Domain("exponent overflow".into()))?;
        if e < 0 && c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(c.pow(e));
    }
    // half powers exist for pure powers of q^{1/2} with even exponent
    let t = c.shift();
    if *c != QScalar::s_pow(t) || (t as i64 * k.num) % 2 != 0 {
        return Err(Error::Domain(format!("({c})^{k} is not a power of q^(1/2)")));
    }
    Ok(QScalar::s_pow((t as i64 * k.num / 2) as i32))
}

/// `parse` then `lower` with `ω = 1`.
pub fn parse_element(text: &str, alg: &Algebra) -> Result<Element> {
    Lowering::new(alg).lower(&parse(text)?)
}
