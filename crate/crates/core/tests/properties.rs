//! Randomized invariants of the coefficient field, the text front-end and the
//! algebra.

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use qosc_core::coeff::{qbracket, qnumber_half, IntPoly};
use qosc_core::shell::parse_element;
use qosc_core::{build_structure, Algebra, Dimension, Element, Generator, QScalar};

fn alg3() -> Arc<Algebra> {
    static A: OnceLock<Arc<Algebra>> = OnceLock::new();
    A.get_or_init(|| Arc::new(Algebra::new(build_structure(Dimension::new(3).unwrap()).unwrap()).unwrap()))
        .clone()
}

fn laurent() -> impl Strategy<Value = QScalar> {
    (prop::collection::vec(-4i64..=4, 1..5), -3i32..=3).prop_map(|(c, low)| QScalar::laurent(&c, low))
}

/// Ratios of small Laurent polynomials; the denominator is never zero.
fn scalar() -> impl Strategy<Value = QScalar> {
    (laurent(), laurent()).prop_map(|(n, d)| if d.is_zero() { n } else { n.div(&d).unwrap() })
}

fn nonzero() -> impl Strategy<Value = QScalar> {
    scalar().prop_filter("nonzero", |v| !v.is_zero())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-8 * (1.0 + a.abs().max(b.abs()))
}

fn generator() -> impl Strategy<Value = Generator> {
    prop_oneof![
        (0u8..3).prop_map(Generator::X),
        (0u8..3).prop_map(Generator::D),
        (-2i32..=2).prop_map(Generator::LambdaHalf),
    ]
}

/// Sums of up to three normal-ordered words of length up to three, unbarred sector.
fn element() -> impl Strategy<Value = Element> {
    prop::collection::vec((prop::collection::vec(generator(), 0..4), laurent()), 1..4).prop_map(|terms| {
        let a = alg3();
        let mut acc = Element::zero();
        for (w, c) in terms {
            acc = acc.add(&a.normal_order(&w).unwrap().scale(&c)).unwrap();
        }
        acc
    })
}

fn coordinate_element() -> impl Strategy<Value = Element> {
    prop::collection::vec((prop::collection::vec(0u8..3, 0..4), laurent()), 1..4).prop_map(|terms| {
        let a = alg3();
        let mut acc = Element::zero();
        for (w, c) in terms {
            let g: Vec<Generator> = w.into_iter().map(Generator::X).collect();
            acc = acc.add(&a.normal_order(&g).unwrap().scale(&c)).unwrap();
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn inverses(a in nonzero()) {
        prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        prop_assert_eq!(a.pow(-2), a.mul(&a).inv().unwrap());
        prop_assert!(QScalar::one().div(&QScalar::zero()).is_err());
    }

    #[test]
    fn grouped_and_raw_sums_agree(terms in prop::collection::vec((scalar(), laurent()), 0..8)) {
        let products: Vec<QScalar> = terms.iter().map(|(a, b)| a.mul(b)).collect();
        let folded = products.iter().fold(QScalar::zero(), |acc, t| acc.add(t));
        prop_assert_eq!(QScalar::sum(products.iter()), folded.clone());
        prop_assert_eq!(QScalar::sum_raw(terms.iter().map(|(a, b)| a.mul_raw(b))), folded);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in scalar(), b in scalar(), q0 in 0.3f64..3.0) {
        if let (Ok(x), Ok(y)) = (a.eval(q0), b.eval(q0)) {
            if let Ok(p) = a.mul(&b).eval(q0) {
                prop_assert!(close(p, x * y), "{} vs {}", p, x * y);
            }
            if let Ok(s) = a.add(&b).eval(q0) {
                prop_assert!(close(s, x + y), "{} vs {}", s, x + y);
            }
        }
    }

    #[test]
    fn classical_limit_matches_evaluation(a in scalar()) {
        if let Ok(l) = a.limit_q_to_1() {
            let lf = l.numer().to_string().parse::<f64>().unwrap() / l.denom().to_string().parse::<f64>().unwrap();
            prop_assert!(close(a.eval(1.0).unwrap(), lf));
        }
    }

    #[test]
    fn inversion_is_an_involutive_automorphism(a in scalar(), b in scalar()) {
        prop_assert_eq!(a.invert_q().invert_q(), a.clone());
        prop_assert_eq!(a.mul(&b).invert_q(), a.invert_q().mul(&b.invert_q()));
        if let (Ok(x), Ok(y)) = (a.invert_q().eval(2.0), a.eval(0.5)) {
            prop_assert!(close(x, y));
        }
    }

    #[test]
    fn printed_scalars_parse_back(a in scalar()) {
        let e = parse_element(&a.to_string(), &alg3()).unwrap();
        prop_assert_eq!(e, Element::scalar(a));
    }

    #[test]
    fn cofactors_reassemble(a in prop::collection::vec(-5i64..=5, 1..6), b in prop::collection::vec(-5i64..=5, 1..6), f in prop::collection::vec(-3i64..=3, 1..4)) {
        let f = IntPoly::from_i64(&f);
        let (a, b) = (IntPoly::from_i64(&a).mul(&f), IntPoly::from_i64(&b).mul(&f));
        let (g, ca, cb) = IntPoly::gcd_cofactors(&a, &b);
        prop_assert_eq!(g.mul(&ca), a.clone());
        prop_assert_eq!(g.mul(&cb), b.clone());
        if !a.is_zero() && !b.is_zero() {
            prop_assert!(a.div_exact(&g).is_some() && b.div_exact(&g).is_some());
            prop_assert!(f.is_zero() || g.div_exact(&f.primitive()).is_some());
        }
    }

    #[test]
    fn q_numbers(t in -6i32..=6, n in 0u32..8) {
        let x = qnumber_half(t);
        prop_assert_eq!(x.invert_q(), x.clone());
        prop_assert_eq!(x.limit_q_to_1().unwrap(), QScalar::ratio(t as i64, 2).to_rational().unwrap());
        let lhs = qbracket(n).mul(&QScalar::q().sub(&QScalar::one()));
        prop_assert_eq!(lhs, QScalar::q_pow(n as i32).sub(&QScalar::one()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn multiplication_is_associative(a in element(), b in element(), c in element()) {
        let alg = alg3();
        let left = alg.mul(&alg.mul(&a, &b).unwrap(), &c).unwrap();
        let right = alg.mul(&a, &alg.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn star_is_an_antimultiplicative_involution(a in coordinate_element(), b in coordinate_element()) {
        let alg = alg3();
        prop_assert_eq!(alg.star(&alg.star(&a).unwrap()).unwrap(), a.clone());
        let lhs = alg.star(&alg.mul(&a, &b).unwrap()).unwrap();
        let rhs = alg.mul(&alg.star(&b).unwrap(), &alg.star(&a).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
