use std::fmt::Write;

use super::element::{Element, Sector, Word};
use crate::coeff::QScalar;
use crate::structure::Dimension;

fn push_power(out: &mut Vec<String>, base: String, k: usize) {
    if k == 1 {
        out.push(base);
    } else {
        out.push(format!("{base}^{k}"));
    }
}

fn runs(v: &[u8]) -> Vec<(u8, usize)> {
    let mut r: Vec<(u8, usize)> = Vec::new();
    for &g in v {
        match r.last_mut() {
            Some((h, k)) if *h == g => *k += 1,
            _ => r.push((g, 1)),
        }
    }
    r
}

/// Canonical text of a normal word, e.g. `L^-2*x[-1]*x[0]^2*d[1]`.
pub fn word_to_text(w: &Word, dim: Dimension, sec: Option<Sector>) -> String {
    let mut parts = Vec::new();
    if w.lam == 1 {
        parts.push("L".to_string());
    } else if w.lam != 0 {
        parts.push(format!("L^{}", w.lam));
    }
    for (g, k) in runs(&w.xs) {
        push_power(&mut parts, format!("x[{}]", dim.index(g as usize)), k);
    }
    let d = if sec == Some(Sector::Barred) { "db" } else { "d" };
    for (g, k) in runs(&w.ds) {
        push_power(&mut parts, format!("{d}[{}]", dim.index(g as usize)), k);
    }
    parts.join("*")
}

fn coeff_needs_parens(c: &QScalar) -> bool {
    c.to_string().contains(' ')
}

/// Canonical text in the expression grammar; terms in ascending word order.
pub fn element_to_text(e: &Element, dim: Dimension) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (w, c)) in e.terms().iter().enumerate() {
        let t = c.to_string();
        let (neg, a) = if t.starts_with('-') && !t.contains(' ') { (true, c.neg()) } else { (false, c.clone()) };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let wt = word_to_text(w, dim, e.sector());
        let ct = if coeff_needs_parens(&a) { format!("({a})") } else { a.to_string() };
        match (a.is_one(), wt.is_empty()) {
            (true, true) => out.push('1'),
            (true, false) => out.push_str(&wt),
            (false, true) => out.push_str(&ct),
            (false, false) => {
                let _ = write!(out, "{ct} * {wt}");
            }
        }
    }
    out
}
