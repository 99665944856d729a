use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::IntPoly;
use crate::error::{Error, Result};

/// An exact element of Q(s), where `s = q^{1/2}`.
///
/// The value is `s^shift * num(s) / den(s)` with `num(0) != 0`, `den(0) != 0`,
/// `num` and `den` coprime, the integer contents of `num` and `den` coprime,
/// and `lc(den) > 0`. That representative is unique, so structural equality is
/// value equality. Zero is stored as `shift = 0`, `num = 0`, `den = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QScalar {
    shift: i32,
    num: IntPoly,
    den: IntPoly,
}

/// `s^shift * num / den` with no normalization; only meaningful as a summand.
#[derive(Clone, Debug)]
pub struct RawScalar {
    shift: i32,
    num: IntPoly,
    den: IntPoly,
}

impl RawScalar {
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Multiplies by `s^k`.
    pub fn shifted(mut self, k: i32) -> Self {
        self.shift += k;
        self
    }
}

impl From<QScalar> for RawScalar {
    fn from(v: QScalar) -> Self {
        RawScalar { shift: v.shift, num: v.num, den: v.den }
    }
}

impl Default for QScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl QScalar {
    pub fn zero() -> Self {
        QScalar { shift: 0, num: IntPoly::zero(), den: IntPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_bigint(BigInt::from(v))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        if v.is_zero() {
            return Self::zero();
        }
        QScalar { shift: 0, num: IntPoly::constant(v), den: IntPoly::one() }
    }

    pub fn from_ratio(r: &BigRational) -> Self {
        Self::from_coprime(
            IntPoly::constant(r.numer().clone()),
            IntPoly::constant(r.denom().clone()),
            0,
        )
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_ratio(&BigRational::new(n.into(), d.into()))
    }

    /// `s^k = q^{k/2}`.
    pub fn s_pow(k: i32) -> Self {
        QScalar { shift: k, num: IntPoly::one(), den: IntPoly::one() }
    }

    /// `q^k`.
    pub fn q_pow(k: i32) -> Self {
        Self::s_pow(2 * k)
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// Laurent polynomial `sum_i c[i] s^(lowest + i)`.
    pub fn laurent(c: &[i64], lowest: i32) -> Self {
        Self::new(IntPoly::from_i64(c), IntPoly::one(), lowest)
    }

    /// Builds and canonicalizes `s^shift * num / den`. Panics if `den` is zero.
    pub fn new(num: IntPoly, den: IntPoly, shift: i32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den, shift) = strip(num, den, shift);
        let (num, den) = if num.is_constant() || den.is_constant() {
            (num, den)
        } else {
            let (_, n, d) = IntPoly::gcd_cofactors(&num, &den);
            (n, d)
        };
        Self::fix_content(num, den, shift)
    }

    /// Like [`QScalar::new`] when `num` and `den` are already coprime as polynomials.
    fn from_coprime(num: IntPoly, den: IntPoly, shift: i32) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den, shift) = strip(num, den, shift);
        Self::fix_content(num, den, shift)
    }

    fn fix_content(num: IntPoly, den: IntPoly, shift: i32) -> Self {
        let mut g = num.content().gcd(&den.content());
        if den.lc().is_negative() {
            g = -g;
        }
        if g.is_one() {
            return QScalar { shift, num, den };
        }
        QScalar { shift, num: num.div_scalar_exact(&g), den: den.div_scalar_exact(&g) }
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the value lies in Q (no dependence on q).
    pub fn is_rational(&self) -> bool {
        self.is_zero() || (self.shift == 0 && self.num.is_constant() && self.den.is_constant())
    }

    /// True when the denominator is a constant, i.e. a Laurent polynomial in s.
    pub fn is_laurent(&self) -> bool {
        self.den.is_constant()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if !self.is_rational() {
            return None;
        }
        Some(BigRational::new(self.num.constant_term(), self.den.constant_term()))
    }

    pub fn neg(&self) -> Self {
        QScalar { shift: self.shift, num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.shift.min(o.shift);
        let a = self.num.shift_up((self.shift - e) as usize);
        let b = o.num.shift_up((o.shift - e) as usize);
        if self.den == o.den {
            let num = a.add(&b);
            if self.den.is_constant() {
                return Self::from_coprime(num, self.den.clone(), e);
            }
            return Self::new(num, self.den.clone(), e);
        }
        if self.den.is_constant() && o.den.is_constant() {
            let (da, db) = (self.den.constant_term(), o.den.constant_term());
            let num = a.scale(&db).add(&b.scale(&da));
            return Self::from_coprime(num, IntPoly::constant(da * db), e);
        }
        let (g, ad, bd) = IntPoly::gcd_cofactors(&self.den, &o.den);
        let num = a.mul(&bd).add(&b.mul(&ad));
        let den = self.den.mul(&bd);
        if num.is_zero() {
            return Self::zero();
        }
        if g.is_constant() {
            return Self::from_coprime(num, den, e);
        }
        let (num, den, e) = strip(num, den, e);
        let (h, nh, _) = IntPoly::gcd_cofactors(&num, &g);
        if h.is_one() {
            Self::fix_content(num, den, e)
        } else {
            Self::fix_content(nh, den.div_exact(&h).unwrap(), e)
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let shift = self.shift + o.shift;
        let cross = |n: &IntPoly, d: &IntPoly| -> (IntPoly, IntPoly) {
            if n.is_constant() || d.is_constant() {
                return (n.clone(), d.clone());
            }
            let (_, n, d) = IntPoly::gcd_cofactors(n, d);
            (n, d)
        };
        let (an, bd) = cross(&self.num, &o.den);
        let (bn, ad) = cross(&o.num, &self.den);
        Self::from_coprime(an.mul(&bn), ad.mul(&bd), shift)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone(), -self.shift))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Self {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        if self.is_zero() {
            return if e == 0 { Self::one() } else { Self::zero() };
        }
        let e = e as u32;
        Self::from_coprime(self.num.pow(e), self.den.pow(e), self.shift * e as i32)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.mul(&Self::from_int(k))
    }

    /// Substitutes `q -> 1/q` (equivalently `s -> 1/s`).
    pub fn invert_q(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let rev = |p: &IntPoly| IntPoly::from_coeffs(p.coeffs().iter().rev().cloned().collect());
        let dn = self.num.degree().unwrap() as i32;
        let dd = self.den.degree().unwrap() as i32;
        Self::from_coprime(rev(&self.num), rev(&self.den), -self.shift - dn + dd)
    }

    /// Floating evaluation at `q = q0 > 0`, with `s = sqrt(q0)`.
    pub fn eval(&self, q0: f64) -> Result<f64> {
        if !(q0 > 0.0) {
            return Err(Error::Domain(format!("q must be positive, got {q0}")));
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        let s = q0.sqrt();
        let d = self.den.eval_f64(s);
        let scale: f64 = self
            .den
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_f64().unwrap_or(f64::INFINITY).abs() * s.powi(i as i32))
            .sum();
        if d == 0.0 || d.abs() <= 1e-13 * scale {
            return Err(Error::Pole(format!("denominator vanishes at q = {q0}")));
        }
        Ok(s.powi(self.shift) * self.num.eval_f64(s) / d)
    }

    /// Exact value at `q = 1`.
    pub fn limit_q_to_1(&self) -> Result<BigRational> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let one = BigInt::one();
        let d = self.den.eval_bigint(&one);
        if d.is_zero() {
            // num and den are coprime, so s = 1 is a genuine pole
            return Err(Error::Pole("pole at q = 1".into()));
        }
        Ok(BigRational::new(self.num.eval_bigint(&one), d))
    }

    /// Exact value at `s = s0`, i.e. at `q = s0^2`.
    pub fn eval_at_s(&self, s0: &BigRational) -> Result<BigRational> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let horner = |p: &IntPoly| -> BigRational {
            p.coeffs()
                .iter()
                .rev()
                .fold(BigRational::zero(), |acc, c| acc * s0 + BigRational::from_integer(c.clone()))
        };
        let d = horner(&self.den);
        if d.is_zero() {
            return Err(Error::Pole(format!("denominator vanishes at s = {s0}")));
        }
        if s0.is_zero() && self.shift < 0 {
            return Err(Error::Pole("pole at s = 0".into()));
        }
        let sp = if self.shift >= 0 {
            num_traits::pow(s0.clone(), self.shift as usize)
        } else {
            num_traits::pow(s0.recip(), (-self.shift) as usize)
        };
        Ok(sp * horner(&self.num) / d)
    }

    /// Square root of a value of the form `c * s^(2k)` with `c` a rational square.
    pub fn sqrt_monomial(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if !self.num.is_constant() || !self.den.is_constant() || self.shift % 2 != 0 {
            return None;
        }
        let n = self.num.constant_term();
        let d = self.den.constant_term();
        if n.is_negative() {
            return None;
        }
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &rn * &rn != n || &rd * &rd != d {
            return None;
        }
        Some(Self::from_coprime(IntPoly::constant(rn), IntPoly::constant(rd), self.shift / 2))
    }

    /// Rough size measure used for pivot selection.
    pub fn complexity(&self) -> usize {
        let bits = |p: &IntPoly| -> usize {
            p.coeffs().iter().map(|c| c.bits() as usize + 1).sum::<usize>()
        };
        bits(&self.num) + bits(&self.den)
    }

    /// Sum of many terms, grouping by denominator so that each distinct
    /// denominator is combined only once.
    pub fn sum<'a, I: IntoIterator<Item = &'a QScalar>>(terms: I) -> QScalar {
        Self::sum_raw(terms.into_iter().map(|t| RawScalar::from(t.clone())))
    }

    /// Product without cancellation, to be reduced later by [`QScalar::sum_raw`].
    /// Cancellation is skipped only when one factor has a constant
    /// denominator, so denominators never compound.
    pub fn mul_raw(&self, o: &Self) -> RawScalar {
        if self.is_zero() || o.is_zero() {
            return RawScalar::from(Self::zero());
        }
        let den = if self.den.is_one() {
            o.den.clone()
        } else if o.den.is_one() {
            self.den.clone()
        } else if self.den.is_constant() || o.den.is_constant() {
            self.den.mul(&o.den)
        } else {
            return RawScalar::from(self.mul(o));
        };
        RawScalar { shift: self.shift + o.shift, num: self.num.mul(&o.num), den }
    }

    /// Sum of unreduced terms; one reduction per distinct denominator.
    pub fn sum_raw<I: IntoIterator<Item = RawScalar>>(terms: I) -> QScalar {
        let mut groups: Vec<RawScalar> = Vec::new();
        for t in terms {
            if t.num.is_zero() {
                continue;
            }
            match groups.iter_mut().find(|g| g.den == t.den) {
                Some(g) => {
                    let m = g.shift.min(t.shift);
                    let a = g.num.shift_up((g.shift - m) as usize);
                    let b = t.num.shift_up((t.shift - m) as usize);
                    g.num = a.add(&b);
                    g.shift = m;
                }
                None => groups.push(t),
            }
        }
        let mut acc = QScalar::zero();
        for g in groups {
            if g.num.is_zero() {
                continue;
            }
            acc = acc.add(&QScalar::new(g.num, g.den, g.shift));
        }
        acc
    }

    /// The value as a rational function of q written in the expression grammar.
    pub fn to_expr_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        if self.den.is_constant() {
            let d = self.den.constant_term();
            return laurent_to_string(&self.num, self.shift, &d);
        }
        // monic denominator for display
        let lc = self.den.lc();
        let n = laurent_to_string(&self.num, self.shift, &lc);
        let d = laurent_to_string(&self.den, 0, &lc);
        format!("({n})*({d})^-1")
    }
}

fn strip(num: IntPoly, den: IntPoly, shift: i32) -> (IntPoly, IntPoly, i32) {
    let kn = num.low_order();
    let kd = den.low_order();
    let num = if kn > 0 { num.shift_down(kn) } else { num };
    let den = if kd > 0 { den.shift_down(kd) } else { den };
    (num, den, shift + kn as i32 - kd as i32)
}

fn q_power_string(e: i32) -> Option<String> {
    // e is an exponent of s = q^(1/2)
    match e {
        0 => None,
        2 => Some("q".into()),
        _ if e % 2 == 0 => Some(format!("q^{}", e / 2)),
        _ => Some(format!("q^({}/2)", e)),
    }
}

fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn laurent_to_string(p: &IntPoly, shift: i32, div: &BigInt) -> String {
    let mut out = String::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let r = BigRational::new(c.clone(), div.clone());
        let neg = r.is_negative();
        let a = r.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        match q_power_string(shift + i as i32) {
            None => out.push_str(&rational_string(&a)),
            Some(qp) => {
                if a.is_one() {
                    out.push_str(&qp);
                } else {
                    out.push_str(&format!("{}*{}", rational_string(&a), qp));
                }
            }
        }
    }
    out
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QScalar({})", self.to_expr_string())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr<&'a QScalar> for &'a QScalar {
            type Output = QScalar;
            fn $m(self, o: &'a QScalar) -> QScalar {
                QScalar::$m(self, o)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<'a> Neg for &'a QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar::neg(self)
    }
}

/// Exact JSON form: coefficient lists as decimal strings.
#[derive(Serialize, Deserialize)]
struct QScalarRepr {
    shift: i32,
    num: Vec<String>,
    den: Vec<String>,
}

impl Serialize for QScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QScalarRepr {
            shift: self.shift,
            num: self.num.coeffs().iter().map(|c| c.to_string()).collect(),
            den: self.den.coeffs().iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = QScalarRepr::deserialize(d)?;
        let parse = |v: &[String]| -> std::result::Result<IntPoly, D::Error> {
            v.iter()
                .map(|c| c.parse::<BigInt>().map_err(D::Error::custom))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(IntPoly::from_coeffs)
        };
        let num = parse(&r.num)?;
        let den = parse(&r.den)?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(QScalar::new(num, den, r.shift))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QScalar {
        QScalar::q()
    }

    #[test]
    fn trivial_quotients() {
        let a = q().sub(&q().inv().unwrap());
        assert!(a.div(&a).unwrap().is_one());
        let num = q().pow(2).sub(&QScalar::one());
        let den = q().sub(&QScalar::one());
        assert_eq!(num.div(&den).unwrap(), q().add(&QScalar::one()));
        assert_eq!(QScalar::s_pow(1).pow(2), q());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(q().div(&QScalar::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn limit_after_cancellation() {
        let a = q().sub(&q().inv().unwrap()).div(&q().pow(2).sub(&QScalar::one())).unwrap();
        assert_eq!(a, q().inv().unwrap());
        assert_eq!(a.limit_q_to_1().unwrap(), BigRational::one());
        let pole = QScalar::one().div(&q().sub(&QScalar::one())).unwrap();
        assert!(pole.limit_q_to_1().is_err());
        assert!(pole.eval(1.0).is_err());
    }

    #[test]
    fn canonical_representative_is_unique() {
        let a = QScalar::ratio(2, 4).mul(&q());
        let b = QScalar::new(IntPoly::from_i64(&[0, 0, 3]), IntPoly::from_i64(&[6]), 0);
        assert_eq!(a, b);
        let c = QScalar::new(IntPoly::from_i64(&[1, 1]), IntPoly::from_i64(&[-2, -2]), 0);
        assert_eq!(c, QScalar::ratio(-1, 2));
    }

    #[test]
    fn display_uses_q_powers() {
        assert_eq!(q().inv().unwrap().to_string(), "q^-1");
        assert_eq!(QScalar::s_pow(1).sub(&QScalar::s_pow(-1)).to_string(), "q^(1/2) - q^(-1/2)");
        assert_eq!(QScalar::ratio(3, 4).to_string(), "3/4");
    }

    #[test]
    fn invert_q_roundtrip() {
        let a = QScalar::laurent(&[1, 2, 0, 5], -3).div(&QScalar::laurent(&[1, 0, 1], 0)).unwrap();
        assert_eq!(a.invert_q().invert_q(), a);
        let x = 1.7;
        assert!((a.invert_q().eval(x).unwrap() - a.eval(1.0 / x).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn grouped_sum_matches_pairwise() {
        let d1 = QScalar::one().div(&q().add(&QScalar::one())).unwrap();
        let d2 = QScalar::s_pow(3).div(&q().pow(2).sub(&QScalar::one())).unwrap();
        let terms = vec![d1.clone(), d2.clone(), d1.clone(), q(), d2.neg()];
        let pairwise = terms.iter().fold(QScalar::zero(), |a, t| a.add(t));
        assert_eq!(QScalar::sum(terms.iter()), pairwise);
    }

    #[test]
    fn raw_products_reduce_to_products() {
        let a = QScalar::one().div(&q().add(&QScalar::one())).unwrap();
        let b = q().pow(2).sub(&QScalar::one()).scale_int(3);
        let c = QScalar::ratio(2, 5).mul(&QScalar::s_pow(-3));
        let raw = vec![a.mul_raw(&b), c.mul_raw(&a), b.mul_raw(&c).shifted(1), a.mul_raw(&a)];
        let want = QScalar::sum([a.mul(&b), c.mul(&a), b.mul(&c).mul(&QScalar::s_pow(1)), a.mul(&a)].iter());
        assert_eq!(QScalar::sum_raw(raw), want);
        assert_eq!(QScalar::sum_raw(vec![a.mul_raw(&b), a.neg().mul_raw(&b)]), QScalar::zero());
    }

    #[test]
    fn json_roundtrip() {
        let a = QScalar::laurent(&[1, -2, 3], -1).div(&QScalar::laurent(&[2, 0, 7], 0)).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        let b: QScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
