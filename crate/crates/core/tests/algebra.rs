use qosc_core::algebra::{element_to_text, Family};
use qosc_core::{build_structure, Algebra, Dimension, Element, Generator, QScalar, Sector, Word};

fn alg(n: usize) -> Algebra {
    Algebra::new(build_structure(Dimension::new(n).unwrap()).unwrap()).unwrap()
}

#[test]
fn n3_coordinate_rules_match_known_relations() {
    let a = alg(3);
    let r = a.rules(Family::X);
    // positions: 0 -> x^{-1}, 1 -> x^0, 2 -> x^1
    assert_eq!(r.rule(1, 0).unwrap(), &[(0, 1, QScalar::q_pow(-1))]);
    assert_eq!(r.rule(2, 1).unwrap(), &[(1, 2, QScalar::q_pow(-1))]);
    let mut r20 = r.rule(2, 0).unwrap().to_vec();
    r20.sort_by_key(|t| (t.0, t.1));
    assert_eq!(r20, vec![(0, 2, QScalar::one()), (1, 1, QScalar::s_pow(1).sub(&QScalar::s_pow(-1)))]);
}

#[test]
fn normalize_text() {
    let a = alg(3);
    let d = Dimension::new(3).unwrap();
    let e = a.normal_order(&[Generator::X(1), Generator::X(0)]).unwrap();
    assert_eq!(element_to_text(&e, d), "q^-1 * x[-1]*x[0]");
}

#[test]
fn mixed_coordinate_relation_vanishes() {
    let a = alg(3);
    let e = a
        .normal_order(&[Generator::X(2), Generator::X(0)])
        .unwrap()
        .sub(&a.normal_order(&[Generator::X(0), Generator::X(2)]).unwrap())
        .unwrap()
        .sub(&Element::from_word(Word::x(vec![1, 1]), QScalar::s_pow(1).sub(&QScalar::s_pow(-1)), None))
        .unwrap();
    assert!(e.is_zero());
}

#[test]
fn derivation_rule_classical_limit() {
    let a = alg(3);
    for i in 0..3u8 {
        for j in 0..3u8 {
            let e = a.normal_order(&[Generator::D(i), Generator::X(j)]).unwrap();
            for (w, c) in e.terms() {
                let lim = c.limit_q_to_1().unwrap();
                let want = if w.degree() == 0 {
                    i == j
                } else {
                    w.xs == vec![j] && w.ds == vec![i]
                };
                assert_eq!(lim != num_rational::BigRational::from_integer(0.into()), want, "{w:?} {c}");
            }
        }
    }
}

#[test]
fn dilaton_moves_left() {
    let a = alg(3);
    let e = a.normal_order(&[Generator::X(0), Generator::LambdaHalf(2)]).unwrap();
    let w = Word { lam: 2, xs: vec![0], ds: vec![] };
    assert_eq!(e.coeff(&w), QScalar::q_pow(-1));
    // Λ ∂ = q^{-1} ∂ Λ, so ∂ Λ = q Λ ∂
    let e = a.normal_order(&[Generator::D(1), Generator::LambdaHalf(2)]).unwrap();
    assert_eq!(e.coeff(&Word { lam: 2, xs: vec![], ds: vec![1] }), QScalar::q());
}

#[test]
fn sector_mix_rejected() {
    let a = alg(3);
    assert!(a.normal_order(&[Generator::D(0), Generator::Dbar(1)]).is_err());
}

#[test]
fn confluence_all_families() {
    for n in 3..=5 {
        let a = alg(n);
        let rep = a.confluence_report().unwrap();
        for c in &rep.checks {
            assert!(c.pass, "N={n}: {} {}", c.name, c.residual);
        }
    }
}

#[test]
fn square_length_is_central_in_coordinates() {
    for n in 3..=5 {
        let a = alg(n);
        let z = a.xcx().unwrap();
        for i in 0..n as u8 {
            assert!(a.commutator(&z, &Element::x(i)).unwrap().is_zero());
        }
    }
}

#[test]
fn derivative_relations_vanish() {
    for n in 3..=5 {
        let a = alg(n);
        let s = &a.s;
        for sec in [Sector::Unbarred, Sector::Barred] {
            for r in 0..n * n {
                let mut e = Element::zero();
                for (c, v) in s.pa.mat.row(r) {
                    let t = a.mul(&a.d_upper(c / n, sec), &a.d_upper(c % n, sec)).unwrap();
                    e = e.add(&t.scale(v)).unwrap();
                }
                assert!(e.is_zero());
            }
        }
    }
}

#[test]
fn casimir_identity_small_n() {
    for n in 3..=5 {
        let a = alg(n);
        let (rep, residual) = a.casimir_check().unwrap();
        for c in &rep.checks {
            assert!(c.pass, "N={n}: {} {}", c.name, c.residual);
        }
        assert!(residual.is_zero());
    }
}

fn sample_elements(a: &Algebra) -> Vec<Element> {
    let g = |w: &[Generator]| a.normal_order(w).unwrap();
    let n = a.n() as u8;
    vec![
        g(&[Generator::X(0), Generator::X(n - 1)]),
        g(&[Generator::D(1), Generator::X(0)]).add(&Element::x(2).scale(&QScalar::q())).unwrap(),
        g(&[Generator::LambdaHalf(1), Generator::X(2), Generator::D(0)]),
        g(&[Generator::Dbar(2), Generator::X(1), Generator::X(1)]),
        g(&[Generator::X(1), Generator::LambdaHalf(-2), Generator::Dbar(0), Generator::Dbar(2)]),
    ]
}

#[test]
fn star_is_an_involutive_antihomomorphism() {
    for n in [3, 4] {
        let a = alg(n);
        let els = sample_elements(&a);
        for e in &els {
            assert_eq!(&a.star(&a.star(e).unwrap()).unwrap(), e);
        }
        for x in &els {
            for y in &els {
                let Ok(xy) = a.mul(x, y) else { continue };
                let lhs = a.star(&xy).unwrap();
                let rhs = a.mul(&a.star(y).unwrap(), &a.star(x).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn star_of_laplacian() {
    for n in 3..=5 {
        let a = alg(n);
        let k = a.named_constants().unwrap();
        let lhs = a.star(&k.laplacian).unwrap();
        assert_eq!(lhs, k.laplacian_bar.scale(&QScalar::q_pow(-2 * n as i32)));
        assert_eq!(a.star(&Element::x(0)).unwrap(), a.star_x(0));
    }
}

#[test]
fn angular_momentum_commutes_with_scalars() {
    let a = alg(3);
    let k = a.named_constants().unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert!(a.commutator(&k.l_upper[i][j], &k.xcx).unwrap().is_zero());
            assert!(a.commutator(&k.l_upper[i][j], &k.laplacian).unwrap().is_zero());
        }
    }
}

#[test]
fn angular_momentum_classical_limit_factor() {
    // l^{ij} -> f (x^i ∂^j - x^j ∂^i) at q = 1; the factor is recorded here
    let a = alg(3);
    let c = &a.s.c;
    let k = a.named_constants().unwrap();
    let half = num_rational::BigRational::new(1.into(), 2.into());
    for i in 0..3usize {
        for j in 0..3usize {
            let l = &k.l_upper[i][j];
            for (w, v) in l.terms() {
                assert_eq!(w.lam, -2);
                let lim = v.limit_q_to_1().unwrap();
                let (x, d) = (w.xs[0] as usize, w.ds[0] as usize);
                let classical = |a_: usize, b_: usize| if x == a_ { c.at(b_, d).limit_q_to_1().unwrap() } else { num_rational::BigRational::from_integer(0.into()) };
                let want: num_rational::BigRational = (classical(i, j) - classical(j, i)) * &half;
                assert_eq!(lim, want);
            }
        }
    }
}

#[test]
fn multiplication_is_associative() {
    let a = alg(3);
    let els = sample_elements(&a);
    for x in &els {
        for y in &els {
            for z in &els {
                let (Ok(xy), Ok(yz)) = (a.mul(x, y), a.mul(y, z)) else { continue };
                let (Ok(l), Ok(r)) = (a.mul(&xy, z), a.mul(x, &yz)) else { continue };
                assert_eq!(l, r);
            }
        }
    }
}
