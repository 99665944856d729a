//! Fixtures shared by the benches.

use std::sync::Arc;

use qosc_core::{build_structure, Algebra, Dimension, Generator};

pub fn algebra(n: usize) -> Arc<Algebra> {
    Arc::new(Algebra::new(build_structure(Dimension::new(n).expect("valid N")).expect("structure")).expect("algebra"))
}

/// Generator words of length `len` in one sector, spread deterministically
/// over all orderings so the rewrite rules are exercised evenly.
pub fn mixed_words(n: usize, len: usize, count: usize) -> Vec<Vec<Generator>> {
    (0..count)
        .map(|k| {
            (0..len)
                .map(|j| {
                    let v = (k * 7 + j * 5 + k * j) % (2 * n);
                    let i = (v % n) as u8;
                    if v < n {
                        Generator::X(i)
                    } else {
                        Generator::D(i)
                    }
                })
                .collect()
        })
        .collect()
}

/// Coordinate words of length `len`, each a reversed (worst-case) ordering.
pub fn reversed_x_words(n: usize, len: usize) -> Vec<Vec<Generator>> {
    (0..n)
        .map(|start| (0..len).map(|j| Generator::X(((n - 1 + start * len - j) % n) as u8)).collect())
        .collect()
}
