use num_rational::BigRational;

use super::scalar::QScalar;

/// `[x]_q = (q^x - q^{-x}) / (q - q^{-1})` for half-integer `x`.
pub fn qnumber_sym(x: &BigRational) -> QScalar {
    let twice = x * BigRational::from_integer(2.into());
    assert!(twice.is_integer(), "qnumber_sym needs a half-integer argument");
    let t: i32 = twice.to_integer().try_into().expect("argument too large");
    qnumber_half(t)
}

/// `[t/2]_q`, i.e. `(s^{2t/2} - s^{-t}) / (s^2 - s^{-2})` with `s = q^{1/2}`.
pub fn qnumber_half(t: i32) -> QScalar {
    let num = QScalar::s_pow(t).sub(&QScalar::s_pow(-t));
    let den = QScalar::s_pow(2).sub(&QScalar::s_pow(-2));
    num.div(&den).expect("q - 1/q is nonzero")
}

/// `(n)_q = 1 + q + ... + q^{n-1}`.
pub fn qbracket(n: u32) -> QScalar {
    qbracket_base(n, &QScalar::q())
}

/// `(n)_v = (v^n - 1) / (v - 1)` for an arbitrary base `v`.
pub fn qbracket_base(n: u32, v: &QScalar) -> QScalar {
    let mut acc = QScalar::zero();
    let mut p = QScalar::one();
    for _ in 0..n {
        acc = acc.add(&p);
        p = p.mul(v);
    }
    acc
}

pub fn qfactorial(n: u32) -> QScalar {
    qfactorial_base(n, &QScalar::q())
}

/// `(n)_v! = prod_{k=1..n} (k)_v`, with `(0)_v! = 1`.
pub fn qfactorial_base(n: u32, v: &QScalar) -> QScalar {
    (1..=n).fold(QScalar::one(), |acc, k| acc.mul(&qbracket_base(k, v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert!(qnumber_half(2).is_one());
        assert_eq!(qnumber_half(4), QScalar::q().add(&QScalar::q_pow(-1)));
        assert_eq!(qbracket(3), QScalar::laurent(&[1, 0, 1, 0, 1], 0));
        assert!(qfactorial(0).is_one());
        assert_eq!(qfactorial(2), QScalar::laurent(&[1, 0, 1], 0));
    }

    #[test]
    fn three_halves_at_two() {
        let v = qnumber_half(3).eval(2.0).unwrap();
        let direct = (2f64.powf(1.5) - 2f64.powf(-1.5)) / 1.5;
        assert!((v - direct).abs() < 1e-12);
        assert!((v - 1.649_916).abs() < 1e-6, "{v}");
    }
}
