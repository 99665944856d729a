//! Acceptance suite. Each criterion runs alone under a shared lock so its
//! wall-clock time is meaningful, and writes one PASS/FAIL line to stderr
//! directly so the line shows up even when test output is captured.

use std::io::Write;
use std::process::Command;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use qosc_core::algebra::{element_to_text, Family};
use qosc_core::analysis::{Analysis, Variant};
use qosc_core::osc::{binomial_dim, energy, l_squared, OscillatorModel};
use qosc_core::shell::{parse, parse_element, Lowering};
use qosc_core::structure::{structure_from_json, structure_to_json, verify_structure};
use qosc_core::{build_structure, Algebra, Dimension, QScalar, Report};
use serde_json::Value;

const CORPUS: &str = include_str!("../../core/tests/data/roundtrip.txt");

static SERIAL: Mutex<()> = Mutex::new(());

/// Failures found while running one criterion, plus a detail for the log line.
#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    detail: Vec<String>,
}

impl Outcome {
    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn report(&mut self, label: &str, rep: &Report) {
        self.require(!rep.checks.is_empty(), format!("{label}: no checks ran"));
        for c in rep.failures() {
            self.failures.push(format!("{label}: {} ({})", c.name, c.residual));
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.detail.push(s.into());
    }
}

fn criterion(id: u32, title: &str, limit_s: u64, body: impl FnOnce(&mut Outcome)) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let mut out = Outcome::default();
    let start = Instant::now();
    body(&mut out);
    let took = start.elapsed();
    out.require(took <= Duration::from_secs(limit_s), format!("took {:.2}s, limit {limit_s}s", took.as_secs_f64()));
    let status = if out.failures.is_empty() { "PASS" } else { "FAIL" };
    let detail = if out.detail.is_empty() { String::new() } else { format!(" [{}]", out.detail.join("; ")) };
    let line = format!("criterion {id:>2}: {status} ({:>7.2}s of {limit_s}s) {title}{detail}\n", took.as_secs_f64());
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(out.failures.is_empty(), "criterion {id} failed: {:#?}", out.failures);
}

fn algebra(n: usize) -> Arc<Algebra> {
    Arc::new(Algebra::new(build_structure(Dimension::new(n).unwrap()).unwrap()).unwrap())
}

fn has_check(rep: &Report, name: &str) -> bool {
    rep.get(name).is_some_and(|c| c.pass)
}

#[test]
fn criterion_01_structure_suite() {
    criterion(1, "structure identities for N = 3, 4, 5", 60, |out| {
        for n in 3..=5 {
            let s = build_structure(Dimension::new(n).unwrap()).unwrap();
            out.report(&format!("N={n}"), &verify_structure(&s));
            let exported = structure_to_json(&s);
            let back = structure_from_json(&exported).unwrap();
            out.require(structure_to_json(&back) == exported, format!("N={n}: JSON export does not round-trip"));
            out.report(&format!("N={n} imported"), &verify_structure(&back));
        }
    });
}

#[test]
fn criterion_02_coordinate_rules() {
    criterion(2, "N = 3 coordinate rules reproduce the three relations", 1, |out| {
        let a = algebra(3);
        let r = a.rules(Family::X);
        // positions 0, 1, 2 hold x^{-1}, x^0, x^1
        let lam = QScalar::s_pow(1).sub(&QScalar::s_pow(-1));
        out.require(r.rule(1, 0) == Some(&[(0, 1, QScalar::q_pow(-1))][..]), "x^0 x^-1 = q^-1 x^-1 x^0");
        out.require(r.rule(2, 1) == Some(&[(1, 2, QScalar::q_pow(-1))][..]), "x^1 x^0 = q^-1 x^0 x^1");
        let mut r20 = r.rule(2, 0).map(|t| t.to_vec()).unwrap_or_default();
        r20.sort_by_key(|t| (t.0, t.1));
        out.require(r20 == vec![(0, 2, QScalar::one()), (1, 1, lam)], "x^1 x^-1 = x^-1 x^1 + (q^1/2 - q^-1/2) x^0 x^0");
        for rel in ["x[0]*x[-1] - q^-1*x[-1]*x[0]", "x[1]*x[0] - q^-1*x[0]*x[1]", "x[1]*x[-1] - x[-1]*x[1] - (q^(1/2) - q^(-1/2))*x[0]^2"] {
            out.require(parse_element(rel, &a).is_ok_and(|e| e.is_zero()), format!("{rel} does not vanish"));
        }
        out.note(format!("{} rules", r.sorted().len()));
    });
}

#[test]
fn criterion_03_confluence() {
    criterion(3, "confluence of x, d, dbar rules for N = 3, 4, 5", 60, |out| {
        for n in 3..=5 {
            let rep = algebra(n).confluence_report().unwrap();
            for name in ["confluence_x", "confluence_d", "confluence_dbar"] {
                out.require(has_check(&rep, name), format!("N={n}: {name}"));
            }
            out.report(&format!("N={n}"), &rep);
        }
    });
}

#[test]
fn criterion_04_casimir() {
    criterion(4, "Casimir identity for N = 3, 4, 5", 120, |out| {
        for n in 3..=5 {
            let (rep, _) = algebra(n).casimir_check().unwrap();
            out.require(has_check(&rep, "casimir_identity"), format!("N={n}: casimir_identity"));
            out.report(&format!("N={n}"), &rep);
        }
    });
}

#[test]
fn criterion_05_spectrum() {
    criterion(5, "N = 3 spectrum for r <= 3 at D = 16", 600, |out| {
        let m = OscillatorModel::new(algebra(3), QScalar::one(), 3, 16).unwrap();
        let tower = m.build_tower().unwrap();
        out.report("spectrum", &m.verify_spectrum(&tower).unwrap());
        for r in 0..=3 {
            let want = (r + 1) * (r + 2) / 2;
            out.require(binomial_dim(3, r) == want, format!("binomial_dim(3, {r})"));
            out.require(tower.dims[r] == want && tower.dims_bar[r] == want, format!("dim of level {r}"));
        }
        out.note(format!("dims {:?}", tower.dims));
    });
}

#[test]
fn criterion_06_classical_limits() {
    criterion(6, "classical limits of E_r and l^2_k", 1, |out| {
        for omega in [QScalar::one(), QScalar::ratio(3, 2)] {
            let w = omega.to_rational().unwrap();
            for n in [3usize, 4] {
                for r in 0..=5i64 {
                    let got = energy(n, &omega, r).limit_q_to_1().unwrap();
                    let want = QScalar::from_int(n as i64 + 2 * r).to_rational().unwrap() * &w;
                    out.require(got == want, format!("E_{r} for N={n}, omega={omega}"));
                }
            }
        }
        for n in [3usize, 4, 5] {
            for k in 0..=4i64 {
                let got = l_squared(n, k).limit_q_to_1().unwrap();
                let want = QScalar::ratio(k * (k + n as i64 - 2), 2).to_rational().unwrap();
                out.require(got == want, format!("l^2_{k} for N={n}"));
            }
        }
    });
}

#[test]
fn criterion_07_level_relations() {
    criterion(7, "f+- relation for r <= 3 and growing gaps at q = 2", 1, |out| {
        let m = OscillatorModel::new(algebra(3), QScalar::one(), 3, 16).unwrap();
        for r in 0..=3 {
            out.report(&format!("r={r}"), &m.verify_f_relation(r));
        }
        let rep = m.energy_checks(10, 2.0).unwrap();
        out.require(has_check(&rep, "energy_gap_growth"), "energy_gap_growth");
        out.report("energies", &rep);
        let gaps: Vec<f64> = (0..=10).map(|r| m.energy(r + 1).eval(2.0).unwrap() - m.energy(r).eval(2.0).unwrap()).collect();
        out.require(gaps.windows(2).all(|w| w[1] > w[0]), "gaps at q = 2 not strictly increasing");
    });
}

#[test]
fn criterion_08_moments() {
    criterion(8, "Gaussian moments, odd moments and Stokes residual", 60, |out| {
        let an = Analysis::new(algebra(3));
        for a in [QScalar::ratio(1, 2), QScalar::ratio(2, 5)] {
            let t = an.build_moments(&a, Variant::Q2, 8).unwrap();
            let af = a.to_rational().unwrap();
            for k in 0..=3usize {
                let mk = t.radial(&an, k).unwrap().limit_q_to_1().unwrap();
                let mk1 = t.radial(&an, k + 1).unwrap().limit_q_to_1().unwrap();
                let want = QScalar::ratio(2 * k as i64 + 3, 2).to_rational().unwrap() / &af;
                out.require(mk1 / mk == want, format!("moment ratio k={k}, a={a}"));
            }
            let rep = an.moment_checks(&t).unwrap();
            for name in ["moment_normalized", "odd_moments_vanish", "stokes_residual"] {
                out.require(has_check(&rep, name), format!("a={a}: {name}"));
            }
            out.report(&format!("a={a}"), &rep);
            if let Some(c) = rep.get("stokes_residual") {
                out.note(format!("a={a}: stokes {}", c.residual));
            }
        }
    });
}

#[test]
fn criterion_09_gram() {
    criterion(9, "Gram matrices at q = 0.8, 1.25 for H0+H1+H2", 600, |out| {
        let m = OscillatorModel::new(algebra(3), QScalar::one(), 3, 16).unwrap();
        let tower = m.build_tower().unwrap();
        let (rep, grams, _, _) = m.gram_suite(&tower, 2, &[0.8, 1.25], 12).unwrap();
        for q in ["0.8", "1.25"] {
            for kind in ["orthogonal", "hermitian", "positive"] {
                let name = format!("gram_{kind}_q{q}");
                out.require(has_check(&rep, &name), name);
            }
        }
        out.report("gram", &rep);
        for g in &grams {
            out.require(g.size == 10, format!("q={}: basis size {}", g.q, g.size));
            out.note(format!("q={} margin {:.4e}", g.q, g.min_eigenvalue));
        }
    });
}

#[test]
fn criterion_10_ladder_relations() {
    criterion(10, "antisymmetric projections vanish on H0, H1 and the ground state is annihilated", 60, |out| {
        let m = OscillatorModel::new(algebra(3), QScalar::one(), 2, 16).unwrap();
        let tower = m.build_tower().unwrap();
        let (rep, _) = m.ladder_structure_checks(&tower).unwrap();
        for name in ["pa_creators", "pa_creators_bar", "pa_positions"] {
            out.require(has_check(&rep, name), name);
        }
        out.report("ladder", &rep);
        let ground = m.ground_annihilation().unwrap();
        for name in ["ground_annihilated", "ground_annihilated_bar"] {
            out.require(has_check(&ground, name), name);
        }
        out.report("ground", &ground);
    });
}

fn spectrum_run() -> (std::process::Output, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_qosc"))
        .args(["spectrum", "--N", "3", "--rmax", "3", "--q", "1", "--omega", "1"])
        .env_remove("QOSC_TRUNC_DEGREE")
        .output()
        .expect("qosc runs");
    let text = String::from_utf8(o.stdout.clone()).expect("utf-8 output");
    (o, text)
}

#[test]
fn criterion_11_shell() {
    criterion(11, "round-trip corpus, spectrum command, deterministic JSON", 5, |out| {
        let a = algebra(3);
        let lines: Vec<&str> = CORPUS.lines().filter(|l| !l.trim().is_empty()).collect();
        out.require(lines.len() == 50, format!("corpus has {} entries", lines.len()));
        for line in &lines {
            let ok = parse(line).ok().and_then(|ast| {
                let printed = ast.to_string();
                let again = parse(&printed).ok()?;
                let e1 = Lowering::new(&a).lower(&ast).ok()?;
                let e2 = Lowering::new(&a).lower(&again).ok()?;
                let canon = parse_element(&element_to_text(&e1, a.s.dim), &a).ok()?;
                Some(again == ast && e1 == e2 && canon.terms() == e1.terms())
            });
            out.require(ok == Some(true), format!("round trip of {line:?}"));
        }

        let (first, text) = spectrum_run();
        let (second, text2) = spectrum_run();
        out.require(first.status.success(), format!("spectrum exited with {:?}", first.status.code()));
        out.require(second.status.success() && text == text2, "spectrum output differs between runs");
        let Ok(v) = serde_json::from_str::<Value>(&text) else {
            out.require(false, "spectrum output is not JSON");
            return;
        };
        let canonical = serde_json::to_string_pretty(&v).unwrap();
        out.require(canonical == text.trim_end(), "JSON keys are not in canonical sorted order");
        out.require(v["schema"] == 1, "schema is not 1");
        let levels: Vec<f64> = v["levels"].as_array().map_or(vec![], |l| l.iter().filter_map(|x| x["E_r_float"].as_f64()).collect());
        out.require(levels == vec![3.0, 5.0, 7.0, 9.0], format!("levels {levels:?}"));
        out.note(format!("levels {levels:?}"));
    });
}
