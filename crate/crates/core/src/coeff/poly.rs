//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored little-endian (index = exponent) with no trailing
//! zeros, so the zero polynomial is the empty vector. The gcd is computed by a
//! small-prime modular algorithm with trial-division certification.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly{:?}", self.c.iter().map(|x| x.to_string()).collect::<Vec<_>>())
    }
}

impl IntPoly {
    pub fn from_coeffs(mut c: Vec<BigInt>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        IntPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly { c: vec![BigInt::one()] }
    }

    pub fn constant(v: BigInt) -> Self {
        Self::from_coeffs(vec![v])
    }

    /// `v * s^k`.
    pub fn monomial(v: BigInt, k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = v;
        Self::from_coeffs(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.c.first().cloned().unwrap_or_else(BigInt::zero)
    }

    /// Exponent of the lowest nonzero term (0 for the zero polynomial).
    pub fn low_order(&self) -> usize {
        self.c.iter().position(|x| !x.is_zero()).unwrap_or(0)
    }

    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.c.iter().take(k).all(|x| x.is_zero()));
        IntPoly { c: self.c[k.min(self.c.len())..].to_vec() }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.c.iter().cloned());
        IntPoly { c }
    }

    pub fn neg(&self) -> Self {
        IntPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => c.push(a + b),
                (Some(a), None) => c.push(a.clone()),
                (None, Some(b)) => c.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        Self::from_coeffs(c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => c.push(a - b),
                (Some(a), None) => c.push(a.clone()),
                (None, Some(b)) => c.push(-b),
                (None, None) => unreachable!(),
            }
        }
        Self::from_coeffs(c)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        IntPoly { c: self.c.iter().map(|x| x * k).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if let Some(p) = self.mul_small(o) {
            return p;
        }
        let mut c = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_coeffs(c)
    }

    /// Machine-word product when every coefficient fits comfortably.
    fn mul_small(&self, o: &Self) -> Option<Self> {
        const LIM: i64 = 1 << 40;
        let to_small = |p: &Self| -> Option<Vec<i64>> {
            p.c.iter()
                .map(|x| x.to_i64().filter(|v| v.abs() < LIM))
                .collect()
        };
        let a = to_small(self)?;
        let b = to_small(o)?;
        if a.len().min(b.len()) > 1 << 20 {
            return None;
        }
        let mut acc = vec![0i128; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += x as i128 * y as i128;
            }
        }
        Some(Self::from_coeffs(acc.into_iter().map(BigInt::from).collect()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for x in &self.c {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        if g.is_one() {
            return self.clone();
        }
        IntPoly { c: self.c.iter().map(|x| x / &g).collect() }
    }

    pub fn div_scalar_exact(&self, k: &BigInt) -> Self {
        if k.is_one() {
            return self.clone();
        }
        IntPoly { c: self.c.iter().map(|x| x / k).collect() }
    }

    /// Quotient `self / d` when it is exact over the integers.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.is_one() {
            return Some(self.clone());
        }
        let dd = d.degree().unwrap();
        let sd = self.degree().unwrap();
        if sd < dd {
            return None;
        }
        let lc = d.lc();
        let mut r = self.c.clone();
        let mut q = vec![BigInt::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qq, rem) = top.div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, dj) in d.c.iter().enumerate() {
                if !dj.is_zero() {
                    r[k + j] -= &qq * dj;
                }
            }
            q[k] = qq;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(q))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_bigint(&self, x: &BigInt) -> BigInt {
        self.c.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Greatest common divisor as a primitive polynomial with positive leading
    /// coefficient. `gcd(0, 0)` is zero; `gcd(a, 0)` is the primitive part of `a`.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        Self::gcd_cofactors(a, b).0
    }

    /// `(g, a / g, b / g)` with `g = gcd(a, b)`. The cofactors come for free
    /// from certifying `g`, so callers that cancel should use this.
    pub fn gcd_cofactors(a: &Self, b: &Self) -> (Self, Self, Self) {
        if a.is_zero() || b.is_zero() {
            let g = if a.is_zero() { b.primitive() } else { a.primitive() };
            if g.is_zero() {
                return (g, Self::zero(), Self::zero());
            }
            let (ca, cb) = (a.div_exact(&g).unwrap(), b.div_exact(&g).unwrap());
            return (g, ca, cb);
        }
        if a.is_constant() || b.is_constant() {
            return (Self::one(), a.clone(), b.clone());
        }
        if a == b {
            let g = a.primitive();
            let c = a.div_exact(&g).unwrap();
            return (g, c.clone(), c);
        }
        modular_gcd(a, b)
    }
}

// ---------------------------------------------------------------------------
// modular gcd

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^31`, so residue products fit in a `u64`.
fn primes() -> &'static [u64] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut v = Vec::new();
        let mut n: u64 = (1u64 << 31) - 1;
        while v.len() < 512 {
            if is_prime_u64(n) {
                v.push(n);
            }
            n -= 2;
        }
        v
    })
}

struct Zp(u64);

impl Zp {
    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }
    fn inv(&self, a: u64) -> u64 {
        let (mut r0, mut r1) = (self.0 as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        debug_assert_eq!(r0, 1, "inverse of a multiple of p");
        t0.rem_euclid(self.0 as i64) as u64
    }
    fn reduce(&self, x: &BigInt) -> u64 {
        let mut r = 0u64;
        for d in x.magnitude().iter_u32_digits().rev() {
            r = ((r << 32) | d as u64) % self.0;
        }
        if x.is_negative() && r != 0 {
            self.0 - r
        } else {
            r
        }
    }
    fn reduce_poly(&self, p: &IntPoly) -> Vec<u64> {
        let mut v: Vec<u64> = p.c.iter().map(|x| self.reduce(x)).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }
    /// Monic gcd over Z/p.
    fn gcd(&self, a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
        let (mut a, mut b) = (a, b);
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if let Some(&lc) = a.last() {
            let inv = self.inv(lc);
            for x in a.iter_mut() {
                *x = self.mul(*x, inv);
            }
        }
        a
    }
    fn rem(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let inv = self.inv(*b.last().unwrap());
        while r.len() > db {
            let top = *r.last().unwrap();
            if top != 0 {
                let f = self.mul(top, inv);
                let k = r.len() - 1 - db;
                for (j, &bj) in b.iter().enumerate() {
                    r[k + j] = self.sub(r[k + j], self.mul(f, bj));
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        r
    }
}

/// Gcd and cofactors of two polynomials of positive degree.
fn modular_gcd(a: &IntPoly, b: &IntPoly) -> (IntPoly, IntPoly, IntPoly) {
    let gamma = a.lc().gcd(&b.lc());
    let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
    let mut dmin = da.min(db) + 1;
    let mut acc: Option<(Vec<BigInt>, BigInt)> = None;
    let mut last_candidate: Option<IntPoly> = None;
    let mut first = true;
    for &p in primes() {
        let zp = Zp(p);
        if zp.reduce(&a.lc()) == 0 || zp.reduce(&b.lc()) == 0 {
            continue;
        }
        let g = zp.gcd(zp.reduce_poly(a), zp.reduce_poly(b));
        let dg = g.len() - 1;
        if dg == 0 {
            return (IntPoly::one(), a.clone(), b.clone());
        }
        if first {
            first = false;
            // one operand dividing the other is common and cheap to certify
            if dg == db {
                let bp = b.primitive();
                if let Some(qa) = a.div_exact(&bp) {
                    let qb = b.div_exact(&bp).unwrap();
                    return (bp, qa, qb);
                }
            }
            if dg == da {
                let ap = a.primitive();
                if let Some(qb) = b.div_exact(&ap) {
                    let qa = a.div_exact(&ap).unwrap();
                    return (ap, qa, qb);
                }
            }
        }
        if dg > dmin {
            continue;
        }
        let pb = BigInt::from(p);
        let gm = zp.reduce(&gamma);
        let g: Vec<u64> = g.iter().map(|&x| zp.mul(x, gm)).collect();
        if dg < dmin {
            dmin = dg;
            acc = Some((g.iter().map(|&x| BigInt::from(x)).collect(), pb));
            last_candidate = None;
        } else {
            let (h, m) = acc.take().unwrap();
            // CRT: x = h mod m, x = g mod p
            let minv = BigInt::from(zp.inv(zp.reduce(&m)));
            let mut nh = Vec::with_capacity(h.len());
            for (hi, &gi) in h.iter().zip(g.iter()) {
                let t = ((BigInt::from(gi) - hi) * &minv).mod_floor(&pb);
                nh.push(hi + &m * t);
            }
            acc = Some((nh, &m * &pb));
        }
        let (h, m) = acc.as_ref().unwrap();
        let half = m / 2;
        let sym: Vec<BigInt> = h.iter().map(|x| if x > &half { x - m } else { x.clone() }).collect();
        let cand = IntPoly::from_coeffs(sym).primitive();
        // small coefficients usually make the first image exact already
        if last_candidate.is_none() || last_candidate.as_ref() == Some(&cand) {
            if let Some(qa) = a.div_exact(&cand) {
                if let Some(qb) = b.div_exact(&cand) {
                    return (cand, qa, qb);
                }
            }
        }
        last_candidate = Some(cand);
    }
    panic!("modular gcd failed to converge");
}
