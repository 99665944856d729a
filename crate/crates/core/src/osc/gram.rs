use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::Sector;
use crate::analysis::{PairState, ScalarProduct, Variant};
use crate::coeff::QScalar;
use crate::error::{Error, Result};
use crate::report::{Check, Report};

use super::checks::Measured;
use super::json::GramSummary;
use super::{generic_point, pair_of, span_rank, OscillatorModel, StateTower};

/// Exact Gram data over `H_0 ⊕ ... ⊕ H_rmax`.
pub struct GramData {
    /// `(level, index into tower.levels[level])` for each basis state.
    pub basis: Vec<(usize, usize)>,
    pub matrix: Vec<Vec<QScalar>>,
}

/// Greedy choice of states whose closed forms are linearly independent.
pub fn basis_indices(states: &[super::TowerState]) -> Result<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rank = 0;
    for i in 0..states.len() {
        let trial: Vec<super::TowerState> = chosen.iter().chain([&i]).map(|&k| states[k].clone()).collect();
        let r = span_rank(&trial, false, generic_point())?;
        if r > rank {
            rank = r;
            chosen.push(i);
        }
    }
    Ok(chosen)
}

impl OscillatorModel {
    /// Scalar product referenced to the ground-state Gaussians.
    pub fn scalar_product(&self, max_degree: usize) -> Result<ScalarProduct<'_>> {
        let a0 = self.alpha(0);
        let table = self.an.build_moments(&a0, Variant::Q2, max_degree + max_degree % 2)?;
        ScalarProduct::new(&self.an, table, a0.mul(&self.alpha_bar(0)))
    }

    pub fn gram_data(&self, sp: &ScalarProduct<'_>, tower: &StateTower, rmax: usize) -> Result<GramData> {
        let mut basis = Vec::new();
        for r in 0..=rmax.min(tower.levels.len() - 1) {
            basis.extend(basis_indices(&tower.levels[r])?.into_iter().map(|i| (r, i)));
        }
        let pairs: Vec<PairState> = basis.iter().map(|&(r, i)| tower.levels[r][i].pair()).collect::<Result<_>>()?;
        let matrix = (0..pairs.len())
            .into_par_iter()
            .map(|a| (0..pairs.len()).map(|b| sp.product(&pairs[a], &pairs[b])).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(GramData { basis, matrix })
    }

    /// Orthogonality of distinct levels, hermiticity and positivity at each
    /// evaluation point, and the adjoint relation between creators and
    /// annihilators.
    pub fn gram_suite(
        &self,
        tower: &StateTower,
        rmax: usize,
        points: &[f64],
        order: usize,
    ) -> Result<(Report, Vec<GramSummary>, Vec<Measured>, Value)> {
        let sp = self.scalar_product(2 * (rmax + 1))?;
        let g = self.gram_data(&sp, tower, rmax)?;
        let mut rep = Report::new();
        let dim = g.basis.len();

        let mut exact_orth = true;
        let mut exact_herm = true;
        for a in 0..dim {
            for b in 0..dim {
                if g.basis[a].0 != g.basis[b].0 {
                    exact_orth &= g.matrix[a][b].is_zero();
                }
                exact_herm &= g.matrix[a][b] == g.matrix[b][a];
            }
        }
        rep.push(Check::exact("gram_levels_orthogonal_exact", exact_orth));
        rep.push(Check::exact("gram_hermitian_exact", exact_herm));

        let mut summaries = Vec::new();
        for &q0 in points {
            let m = DMatrix::from_fn(dim, dim, |a, b| g.matrix[a][b].eval(q0).unwrap_or(f64::NAN));
            if m.iter().any(|v| !v.is_finite()) {
                return Err(Error::Invalid(format!("Gram matrix is singular at q = {q0}")));
            }
            let mut orth: f64 = 0.0;
            let mut herm: f64 = 0.0;
            let scale = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            for a in 0..dim {
                for b in 0..dim {
                    if g.basis[a].0 != g.basis[b].0 {
                        let norm = (m[(a, a)].abs() * m[(b, b)].abs()).sqrt();
                        orth = orth.max(m[(a, b)].abs() / norm);
                    }
                    herm = herm.max((m[(a, b)] - m[(b, a)]).abs() / scale);
                }
            }
            rep.push(Check::new(format!("gram_orthogonal_q{q0}"), orth <= 1e-8, format!("{orth:e}")));
            rep.push(Check::new(format!("gram_hermitian_q{q0}"), herm <= 1e-10, format!("{herm:e}")));
            let eig = SymmetricEigen::new(m.clone()).eigenvalues;
            let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            rep.push(Check::new(format!("gram_positive_q{q0}"), min > 0.0, format!("min eigenvalue {min:e}")));
            summaries.push(GramSummary { q: q0, min_eigenvalue: min, max_eigenvalue: max, size: dim });
        }

        let (adj, measured) = self.adjoint_checks(&sp, tower, rmax, points)?;
        rep.extend(adj);

        let mut series = Vec::new();
        for &q0 in points {
            let a = self.alpha(0);
            let b = self.alpha_bar(0);
            let dev = sp.series_deviation(rmax, &a, &b, order, q0)?;
            series.push(json!({"q": q0, "order": order, "relative_deviation": dev}));
        }
        Ok((rep, summaries, measured, json!({ "radial_series": series })))
    }

    /// `⟨u|A^{i+} v⟩ = κ_r Σ_j C_{ji} ⟨A^{j-} u|v⟩` with one `κ_r` per level.
    fn adjoint_checks(&self, sp: &ScalarProduct<'_>, tower: &StateTower, rmax: usize, points: &[f64]) -> Result<(Report, Vec<Measured>)> {
        let n = self.n();
        let c = &self.alg().s.c;
        let mut rep = Report::new();
        let mut measured = Vec::new();
        for r in 0..rmax.min(tower.levels.len() - 2) + 1 {
            let lower_states = &tower.levels[r];
            let upper_states = &tower.levels[r + 1];
            let vs = basis_indices(lower_states)?;
            let us = basis_indices(upper_states)?;
            let mut lowered = Vec::new();
            for &u in &us {
                let st = &upper_states[u];
                let mut per_j = Vec::new();
                for j in 0..n {
                    let f = st.exact.apply(&self.an, self.lower(r + 1, j, Sector::Unbarred), Sector::Unbarred)?;
                    let fb = st.exact_bar.apply(&self.an, self.lower(r + 1, j, Sector::Barred), Sector::Barred)?;
                    per_j.push(pair_of(&self.an, &f, &fb)?);
                }
                lowered.push(per_j);
            }
            let mut kappa: Option<QScalar> = None;
            let mut ok = true;
            for (ui, &u) in us.iter().enumerate() {
                let up = upper_states[u].pair()?;
                for &v in &vs {
                    let vp = lower_states[v].pair()?;
                    for i in 0..n {
                        let mut label = vec![i as u8];
                        label.extend(&lower_states[v].labels);
                        let raised = upper_states
                            .iter()
                            .find(|s| s.labels == label)
                            .ok_or_else(|| Error::Invalid("raised state missing from tower".into()))?;
                        let lhs = sp.product(&up, &raised.pair()?)?;
                        let mut terms = Vec::new();
                        for j in 0..n {
                            let cji = c.at(j, i);
                            if !cji.is_zero() {
                                terms.push(cji.mul(&sp.product(&lowered[ui][j], &vp)?));
                            }
                        }
                        let rhs = QScalar::sum(terms.iter());
                        match (lhs.is_zero(), rhs.is_zero()) {
                            (true, true) => {}
                            (false, false) => {
                                let k = lhs.div(&rhs)?;
                                match &kappa {
                                    None => kappa = Some(k),
                                    Some(k0) if *k0 == k => {}
                                    Some(_) => ok = false,
                                }
                            }
                            _ => ok = false,
                        }
                    }
                }
            }
            let positive = kappa.as_ref().is_some_and(|k| points.iter().all(|&q0| k.eval(q0).is_ok_and(|v| v > 0.0)));
            let res = kappa.as_ref().map_or("no nonzero sample".to_string(), |k| format!("kappa={k}"));
            rep.push(Check::new(format!("adjoint_creator_r{r}"), ok && positive, res));
            if let Some(k) = kappa {
                measured.push(Measured { name: "adjoint_scale".into(), level: r, value: k });
            }
        }
        Ok((rep, measured))
    }
}
