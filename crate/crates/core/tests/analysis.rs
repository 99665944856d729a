use std::sync::Arc;

use num_rational::BigRational;
use qosc_core::analysis::{Analysis, ClassFn, PairState, ScalarProduct, Variant, XPoly};
use qosc_core::{build_structure, Algebra, Dimension, Element, QScalar, Sector, Word};

fn analysis(n: usize) -> Analysis {
    let s = build_structure(Dimension::new(n).unwrap()).unwrap();
    Analysis::new(Arc::new(Algebra::new(s).unwrap()))
}

fn poly(terms: &[(&[u8], QScalar)]) -> XPoly {
    terms.iter().map(|(w, c)| (w.to_vec(), c.clone())).collect()
}

fn one() -> XPoly {
    poly(&[(&[], QScalar::one())])
}

#[test]
fn radial_rule_values() {
    for n in 3..=5usize {
        let an = analysis(n);
        let r = an.radial_rule(Sector::Unbarred).unwrap();
        assert_eq!(r.c1, QScalar::one().add(&QScalar::q_pow(2 - n as i32)));
        assert_eq!(r.lambda, QScalar::q_pow(2));
        let rb = an.radial_rule(Sector::Barred).unwrap();
        assert_eq!(rb.c1, QScalar::one().add(&QScalar::q_pow(n as i32 - 2)));
        assert_eq!(rb.lambda, QScalar::q_pow(-2));
    }
}

#[test]
fn gaussian_rule_all_orders() {
    let an = analysis(3);
    for c in an.gaussian_checks(&QScalar::ratio(2, 3), 12).unwrap() {
        assert!(c.pass, "{c:?}");
    }
}

#[test]
fn trusted_degree_is_stable() {
    let an = analysis(3);
    let a = QScalar::ratio(1, 3);
    let op = an.alg.laplacian(Sector::Unbarred).unwrap();
    let f10 = an.act(&op, &an.qexp_series(&a, Variant::Q2, 10, Sector::Unbarred)).unwrap();
    let f14 = an.act(&op, &an.qexp_series(&a, Variant::Q2, 14, Sector::Unbarred)).unwrap();
    assert_eq!(f10.trusted, 8);
    let low: XPoly = f14.expanded.iter().filter(|(w, _)| w.len() <= 8).map(|(w, c)| (w.clone(), c.clone())).collect();
    assert_eq!(f10.expanded, low);
}

#[test]
fn act_matches_literal_product() {
    let an = analysis(3);
    let g = an.qexp_series(&QScalar::ratio(1, 2), Variant::Q2, 6, Sector::Unbarred);
    let d1 = Element::d(1, Sector::Unbarred);
    let ops = vec![
        d1.clone(),
        an.alg.mul(&Element::x(2), &d1).unwrap(),
        an.alg.mul(&Element::lambda_half(-1), &an.alg.mul(&Element::x(0), &Element::d(2, Sector::Unbarred)).unwrap()).unwrap(),
        an.alg.laplacian(Sector::Unbarred).unwrap(),
    ];
    for op in ops {
        let fast = an.act(&op, &g).unwrap();
        let lit = an.act_literal(&op, &g).unwrap();
        let lit: XPoly = lit.into_iter().filter(|(w, _)| w.len() <= fast.trusted).collect();
        assert_eq!(fast.expanded, lit);
    }
}

#[test]
fn class_action_matches_expansion() {
    let an = analysis(3);
    let a = QScalar::ratio(3, 4);
    let p = poly(&[(&[0], QScalar::one()), (&[1, 2], QScalar::q())]);
    for (variant, sec) in [(Variant::Q2, Sector::Unbarred), (Variant::Qm2, Sector::Unbarred), (Variant::Qm2, Sector::Barred)] {
        let f = ClassFn::new(p.clone(), a.clone(), variant);
        let d = 9;
        let expanded = qosc_core::analysis::WaveFunction::new(sec, f.expand(&an, d), d);
        let op = an
            .alg
            .mul(&Element::lambda_half(1), &an.alg.mul(&Element::x(2), &an.alg.d_upper(0, sec)).unwrap())
            .unwrap();
        let exact = f.apply(&an, &op, sec).unwrap();
        let trunc = an.act(&op, &expanded).unwrap();
        let from_exact: XPoly = exact.expand(&an, trunc.trusted);
        assert_eq!(from_exact, trunc.expanded, "{variant:?} {sec:?}");
    }
}

#[test]
fn class_canonical_form_detects_equality() {
    let an = analysis(3);
    let a = QScalar::ratio(1, 2);
    // G_{q^2 α} = (1 - (q^2 - 1) α z) G_α
    let lhs = ClassFn::gaussian(a.clone(), Variant::Q2).lambda(2);
    let z = an.zpow(1);
    let k = QScalar::q_pow(2).sub(&QScalar::one()).mul(&a).neg();
    let rhs_poly = qosc_core::analysis::poly_add(&one(), &qosc_core::analysis::poly_scale(&z, &k));
    let rhs = ClassFn::new(rhs_poly, a, Variant::Q2);
    assert!(lhs.sub(&rhs).unwrap().is_zero(&an));
}

#[test]
fn moments_odd_vanish_and_quadratic_is_metric() {
    let an = analysis(3);
    let a = QScalar::ratio(1, 2);
    let t = an.build_moments(&a, Variant::Q2, 6).unwrap();
    assert_eq!(t.integrate(&one()).unwrap(), QScalar::one());
    for (w, _) in &t.values {
        assert_eq!(w.len() % 2, 0);
    }
    // ∫ x^i x^j G ∝ C^{ij} after normal ordering both sides
    let mut ratio: Option<QScalar> = None;
    for i in 0..3u8 {
        for j in 0..3u8 {
            let m: XPoly = an.alg.x_normal(&[i, j]).into_iter().collect();
            let v = t.integrate(&m).unwrap();
            let c = an.alg.s.c.at(i as usize, j as usize).clone();
            if c.is_zero() {
                assert!(v.is_zero());
            } else {
                let r = v.div(&c).unwrap();
                if let Some(r0) = &ratio {
                    assert_eq!(&r, r0);
                }
                ratio = Some(r);
            }
        }
    }
}

#[test]
fn moments_classical_ratios() {
    // classical N=3 Gaussian: M_{k+1}/M_k = (k + 3/2)/a for ∫ r^{2k} e^{-a r^2}
    let an = analysis(3);
    let a = QScalar::ratio(2, 5);
    let t = an.build_moments(&a, Variant::Q2, 6).unwrap();
    let af = BigRational::new(2.into(), 5.into());
    for k in 0..3usize {
        let mk = t.radial(&an, k).unwrap().limit_q_to_1().unwrap();
        let mk1 = t.radial(&an, k + 1).unwrap().limit_q_to_1().unwrap();
        let want = (BigRational::from_integer((2 * k as i64 + 3).into()) / BigRational::from_integer(2.into())) / &af;
        assert_eq!(mk1 / mk, want, "k={k}");
    }
}

#[test]
fn stokes_residual_upper_index() {
    let an = analysis(3);
    let a = QScalar::ratio(1, 2);
    let t = an.build_moments(&a, Variant::Q2, 6).unwrap();
    for d in 0..=5usize {
        for w in all_words(3, d) {
            for i in 0..3usize {
                let f = ClassFn::new([(w.clone(), QScalar::one())].into_iter().collect(), a.clone(), Variant::Q2);
                let out = f.apply(&an, &an.alg.d_upper(i, Sector::Unbarred), Sector::Unbarred).unwrap();
                let p = out.over(&an, 0).unwrap();
                assert!(t.integrate(&p).unwrap().is_zero(), "w={w:?} i={i}");
            }
        }
    }
}

fn all_words(n: u8, d: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out.into_iter().flat_map(|w| (0..n).map(move |a| [w.clone(), vec![a]].concat())).collect();
    }
    out.into_iter().filter(|w| w.windows(2).all(|p| p[0] <= p[1])).collect()
}

#[test]
fn barred_table_uses_barred_derivatives() {
    let an = analysis(3);
    let b = QScalar::ratio(1, 2);
    let t = an.build_moments(&b, Variant::Qm2, 4).unwrap();
    for w in all_words(3, 3) {
        for i in 0..3u8 {
            assert!(an.stokes_residual(&t, i, &w).unwrap().is_zero());
        }
    }
}

#[test]
fn radial_recursion_limits_match_tables() {
    let an = analysis(3);
    let a = QScalar::ratio(1, 2);
    let b = QScalar::ratio(3, 7);
    let t = an.build_moments(&a, Variant::Q2, 6).unwrap();
    let tb = an.build_moments(&b, Variant::Qm2, 6).unwrap();
    let sp = ScalarProduct::new(&an, t.clone(), QScalar::one()).unwrap();
    for k in 0..3usize {
        let want = t.radial(&an, k + 1).unwrap().div(&t.radial(&an, k).unwrap()).unwrap();
        assert_eq!(sp.radial_ratio(k, &a, &QScalar::zero()).unwrap(), want);
        let want_b = tb.radial(&an, k + 1).unwrap().div(&tb.radial(&an, k).unwrap()).unwrap();
        assert_eq!(sp.radial_ratio(k, &QScalar::zero(), &b).unwrap(), want_b);
    }
}

#[test]
fn integration_is_real() {
    let an = analysis(3);
    let a = QScalar::ratio(1, 2);
    let t = an.build_moments(&a, Variant::Q2, 4).unwrap();
    let sp = ScalarProduct::new(&an, t.clone(), QScalar::one()).unwrap();
    let z = an.zpow(1);
    let f = poly(&[(&[0, 2], QScalar::q()), (&[1, 1], QScalar::ratio(2, 3)), (&[0, 0, 2, 2], QScalar::one()), (&[1], QScalar::one())]);
    let zs = qosc_core::analysis::poly_sub(&star(&an, &z), &z);
    assert!(zs.is_empty(), "xCx is real");
    assert_eq!(t.integrate(&star(&an, &f)).unwrap(), t.integrate(&f).unwrap());
    let _ = sp;
}

fn star(an: &Analysis, p: &XPoly) -> XPoly {
    let e = Element::from_terms(p.iter().map(|(w, c)| (Word::x(w.clone()), c.clone())), None);
    an.alg.star(&e).unwrap().terms().iter().map(|(w, c)| (w.xs.clone(), c.clone())).collect()
}

#[test]
fn scalar_product_ground_state_positive_and_odd_vanishes() {
    let an = analysis(3);
    let a = QScalar::ratio(1, 2);
    let abar = QScalar::ratio(1, 3);
    let t = an.build_moments(&a, Variant::Q2, 4).unwrap();
    let sp = ScalarProduct::new(&an, t, a.mul(&abar)).unwrap();
    let g = PairState { poly: one(), alpha: a.clone(), poly_bar: one(), alpha_bar: abar.clone() };
    let v = sp.product(&g, &g).unwrap();
    for q0 in [0.8, 1.0, 1.25] {
        assert!(v.eval(q0).unwrap() > 0.0);
    }
    let x = PairState { poly: poly(&[(&[0], QScalar::one())]), alpha: a.clone(), poly_bar: poly(&[(&[0], QScalar::one())]), alpha_bar: abar };
    assert!(sp.product(&g, &x).unwrap().is_zero());
    assert_eq!(sp.product(&x, &x).unwrap(), sp.product(&x, &x).unwrap());
}

#[test]
fn moment_table_json_is_exact() {
    let an = analysis(3);
    let t = an.build_moments(&QScalar::ratio(1, 2), Variant::Q2, 4).unwrap();
    let j = t.to_json();
    assert_eq!(j["schema"], 1);
    assert_eq!(j["N"], 3);
    assert!(j["moments"].as_array().unwrap().len() > 3);
}
