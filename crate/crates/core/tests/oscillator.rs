use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use qosc_core::osc::{
    binomial_dim, energy, harmonic_dim, l_dot_l_eigenvalue, l_squared, Normalization, OscillatorModel, StateTower,
};
use qosc_core::{build_structure, Algebra, Dimension, QScalar, Report};

fn algebra(n: usize) -> Arc<Algebra> {
    Arc::new(Algebra::new(build_structure(Dimension::new(n).unwrap()).unwrap()).unwrap())
}

/// N = 3, ω = 1, levels up to 3, truncation degree 16.
fn model3() -> &'static (OscillatorModel, StateTower) {
    static M: OnceLock<(OscillatorModel, StateTower)> = OnceLock::new();
    M.get_or_init(|| {
        let m = OscillatorModel::new(algebra(3), QScalar::one(), 3, 16).unwrap();
        let t = m.build_tower().unwrap();
        (m, t)
    })
}

fn assert_all(rep: &Report) {
    let bad: Vec<_> = rep.failures().iter().map(|c| format!("{} ({})", c.name, c.residual)).collect();
    assert!(bad.is_empty(), "failing checks: {bad:?}");
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn tower_dimensions_are_binomial() {
    let (_, t) = model3();
    assert_eq!(t.dims, vec![1, 3, 6, 10]);
    assert_eq!(t.dims_bar, vec![1, 3, 6, 10]);
    for r in 0..=3 {
        assert_eq!(binomial_dim(3, r), (r + 1) * (r + 2) / 2);
    }
}

#[test]
fn spectrum_and_closed_forms() {
    let (m, t) = model3();
    assert_all(&m.verify_spectrum(t).unwrap());
}

#[test]
fn ground_state_is_annihilated() {
    let (m, _) = model3();
    assert_all(&m.ground_annihilation().unwrap());
}

#[test]
fn literal_barred_annihilator_misses_the_ground_state() {
    let (m, _) = model3();
    assert!(m.unbarred_derivative_annihilator_residual().unwrap() > 0);
}

#[test]
fn energy_classical_limit() {
    for n in [3usize, 4] {
        for r in 0..=5i64 {
            let e = energy(n, &QScalar::one(), r).limit_q_to_1().unwrap();
            assert_eq!(e, rat(n as i64 + 2 * r, 1));
        }
    }
    let omega = QScalar::from_int(3);
    assert_eq!(energy(3, &omega, 2).limit_q_to_1().unwrap(), rat(21, 1));
}

#[test]
fn energy_inversion_and_gaps() {
    let (m, _) = model3();
    assert_all(&m.energy_checks(10, 2.0).unwrap());
    for r in 0..=3 {
        assert_all(&m.verify_f_relation(r));
    }
    // E_r(q) = E_r(1/q) and the gaps at q = 2 grow
    let gaps: Vec<f64> = (0..=10).map(|r| energy(3, &QScalar::one(), r + 1).eval(2.0).unwrap() - energy(3, &QScalar::one(), r).eval(2.0).unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] > w[0]));
    let e = energy(3, &QScalar::one(), 2);
    assert_eq!(e.invert_q(), e);
}

#[test]
fn l_squared_classical_limit() {
    for n in [3usize, 4, 5] {
        for k in 0..=4i64 {
            assert_eq!(l_squared(n, k).limit_q_to_1().unwrap(), rat(k * (k + n as i64 - 2), 2));
            assert_eq!(l_dot_l_eigenvalue(n, k).limit_q_to_1().unwrap(), rat(k * (k + n as i64 - 2), 2));
        }
    }
    assert!(l_squared(3, 0).is_zero());
}

#[test]
fn harmonic_dimensions() {
    assert_eq!((0..5).map(|k| harmonic_dim(3, k)).collect::<Vec<_>>(), vec![1, 3, 5, 7, 9]);
    assert_eq!((0..4).map(|k| harmonic_dim(4, k)).collect::<Vec<_>>(), vec![1, 4, 9, 16]);
}

#[test]
fn ladder_projections() {
    let (m, t) = model3();
    let (rep, measured) = m.ladder_structure_checks(t).unwrap();
    assert_all(&rep);
    for name in ["pa_creators", "pa_creators_bar", "pa_positions"] {
        assert!(rep.get(name).unwrap().pass, "{name}");
    }
    assert!(measured.iter().any(|x| x.name == "g_A"));
}

#[test]
fn unit_normalization_breaks_position_relation() {
    let m = OscillatorModel::with_normalization(algebra(3), QScalar::one(), 2, 8, Normalization::Unit).unwrap();
    let t = m.build_tower().unwrap();
    let (rep, _) = m.ladder_structure_checks(&t).unwrap();
    assert!(rep.get("pa_creators").unwrap().pass);
    assert!(!rep.get("pa_positions").unwrap().pass);
}

#[test]
fn position_normalization_values() {
    let b = Normalization::Position.b(3, 1, false);
    assert_eq!(b.limit_q_to_1().unwrap(), rat(1, 2));
    assert_eq!(Normalization::Position.b(3, 2, true), Normalization::Position.b(3, 2, false).invert_q());
    assert!(Normalization::Unit.b(3, 2, false).is_one());
}

#[test]
fn angular_momentum() {
    let (m, t) = model3();
    let (rep, _) = m.angular_momentum_suite(t, 3).unwrap();
    for name in ["angular_commutes_with_h", "l_dot_l_commutes_with_h", "casimir_identity", "l_squared_classical"] {
        assert!(rep.get(name).unwrap().pass, "{name}");
    }
    for r in 0..=3 {
        let c = rep.get(&format!("l_dot_l_eigenspaces_r{r}")).unwrap();
        assert!(c.pass, "{c:?}");
    }
    // eigenvalues are q^-2 l^2_k, so the unscaled values only match at k = 0
    assert!(rep.get("l_dot_l_spectrum_r0").unwrap().pass);
    for r in 1..=3 {
        assert!(!rep.get(&format!("l_dot_l_spectrum_r{r}")).unwrap().pass);
    }
}

#[test]
fn spheric_decomposition() {
    let (m, t) = model3();
    let sp = m.scalar_product(6).unwrap();
    for r in 1..=3 {
        assert_all(&m.spheric_decomposition(t, r, Some(&sp)).unwrap());
    }
}

#[test]
fn gram_suite() {
    let (m, t) = model3();
    let (rep, grams, measured, diag) = m.gram_suite(t, 2, &[0.8, 1.25], 12).unwrap();
    assert_all(&rep);
    assert_eq!(grams.len(), 2);
    assert!(grams.iter().all(|g| g.size == 10 && g.min_eigenvalue > 0.0));
    let scales: Vec<_> = measured.iter().filter(|x| x.name == "adjoint_scale").map(|x| x.value.clone()).collect();
    // levels 0->1, 1->2 and 2->3 share one adjoint scale
    assert_eq!(scales.len(), 3);
    assert!(scales.iter().all(|k| *k == scales[0]));
    assert_eq!(scales[0].limit_q_to_1().unwrap(), rat(1, 1));
    assert!(diag["radial_series"].is_array());
}

#[test]
fn four_dimensional_tower() {
    let m = OscillatorModel::new(algebra(4), QScalar::one(), 2, 8).unwrap();
    let t = m.build_tower().unwrap();
    assert_eq!(t.dims, vec![1, 4, 10]);
    assert_all(&m.verify_spectrum(&t).unwrap());
    let (rep, _) = m.ladder_structure_checks(&t).unwrap();
    assert!(rep.get("pa_positions").unwrap().pass);
}

#[test]
fn truncation_too_small_is_rejected() {
    assert!(OscillatorModel::new(algebra(3), QScalar::one(), 3, 6).is_err());
}

#[test]
fn spectrum_json_is_deterministic() {
    let (m, t) = model3();
    let rep = m.verify_spectrum(t).unwrap();
    let a = qosc_core::osc::spectrum_report(m, t, &rep, Some(1.0), serde_json::json!({}));
    let b = qosc_core::osc::spectrum_report(m, t, &rep, Some(1.0), serde_json::json!({}));
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a["schema"], 1);
    let floats: Vec<f64> = a["levels"].as_array().unwrap().iter().map(|l| l["E_r_float"].as_f64().unwrap()).collect();
    assert_eq!(floats, vec![3.0, 5.0, 7.0, 9.0]);
}
