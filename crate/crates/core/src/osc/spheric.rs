use num_rational::BigRational;
use rayon::prelude::*;

use crate::algebra::Sector;
use crate::analysis::{ClassFn, ScalarProduct};
use crate::coeff::linalg::{inverse, nullspace, rref, Matrix};
use crate::coeff::QScalar;
use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::structure::{SparseMat, StructureSet};

use super::checks::harmonic_dim;
use super::{l_dot_l_eigenvalue, pair_of, OscillatorModel, StateTower};

/// Kronecker product of square matrices.
pub fn kron(a: &SparseMat, b: &SparseMat) -> SparseMat {
    let nb = b.size();
    let mut out = SparseMat::zero(a.size() * nb);
    for (ra, ca, va) in a.entries() {
        for (rb, cb, vb) in b.entries() {
            out.set(ra * nb + rb, ca * nb + cb, va.mul(vb));
        }
    }
    out
}

fn kron_all(parts: &[SparseMat]) -> SparseMat {
    let mut out = SparseMat::identity(1);
    for p in parts {
        out = kron(&out, p);
    }
    out
}

/// `1 ⊗ .. ⊗ m ⊗ .. ⊗ 1` with the two-slot matrix `m` on slots `i, i+1` of `k`.
fn embed(m: &SparseMat, n: usize, k: usize, i: usize) -> SparseMat {
    let id = SparseMat::identity(n);
    let mut parts = vec![id.clone(); i];
    parts.push(m.clone());
    parts.extend(std::iter::repeat(id).take(k - i - 2));
    kron_all(&parts)
}

fn dense(m: &SparseMat) -> Matrix<QScalar> {
    let n = m.size();
    (0..n).map(|r| (0..n).map(|c| m.get(r, c)).collect()).collect()
}

fn sparse(m: &Matrix<QScalar>) -> SparseMat {
    let mut out = SparseMat::zero(m.len());
    for (r, row) in m.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            out.set(r, c, v.clone());
        }
    }
    out
}

/// The projector onto the common kernel of every adjacent `P_A` and `P_1`,
/// along the sum of their images.
pub fn spheric_projector(s: &StructureSet, k: usize) -> Result<SparseMat> {
    let n = s.n();
    if k <= 1 {
        return Ok(SparseMat::identity(n.pow(k as u32)));
    }
    let size = n.pow(k as u32);
    let mut blockers = Vec::new();
    for i in 0..k - 1 {
        blockers.push(embed(&s.pa.mat, n, k, i));
        blockers.push(embed(&s.p1.mat, n, k, i));
    }
    let mut rows: Matrix<QScalar> = Vec::new();
    for b in &blockers {
        rows.extend(dense(b));
    }
    let w = nullspace(&rows, size);
    // column space of the blockers: row space of the transposes
    let mut cols: Matrix<QScalar> = Vec::new();
    for b in &blockers {
        cols.extend(dense(&b.transpose()));
    }
    let (red, piv) = rref(&cols);
    let u: Vec<Vec<QScalar>> = red.into_iter().take(piv.len()).collect();
    if w.len() + u.len() != size {
        return Err(Error::Singular(format!("kernel {} and image {} do not split dimension {size}", w.len(), u.len())));
    }
    // M = [W U] as columns, P = [W 0] M^{-1}
    let basis: Vec<&Vec<QScalar>> = w.iter().chain(u.iter()).collect();
    let m: Matrix<QScalar> = (0..size).map(|r| basis.iter().map(|v| v[r].clone()).collect()).collect();
    let minv = inverse(&m).ok_or_else(|| Error::Singular("kernel and image overlap".into()))?;
    let mut p = vec![vec![QScalar::zero(); size]; size];
    for r in 0..size {
        for c in 0..size {
            let terms: Vec<QScalar> = (0..w.len()).map(|j| w[j][r].mul(&minv[j][c])).filter(|t| !t.is_zero()).collect();
            p[r][c] = QScalar::sum(terms.iter());
        }
    }
    let p = sparse(&p);
    if p.mul(&p) != p {
        return Err(Error::Singular("candidate projector is not idempotent".into()));
    }
    Ok(p)
}

/// `P_1 ⊗ .. ⊗ P_1 ⊗ P_{r-2m,S}` on `r` slots.
pub fn compose_projector(s: &StructureSet, r: usize, m: usize) -> Result<SparseMat> {
    if 2 * m > r {
        return Err(Error::Invalid(format!("m={m} exceeds r/2 for r={r}")));
    }
    let mut parts = vec![s.p1.mat.clone(); m];
    parts.push(spheric_projector(s, r - 2 * m)?);
    Ok(kron_all(&parts))
}

/// Projected wavefunctions of one block `H_{r,r-2m}`.
pub struct SphericBlock {
    pub r: usize,
    pub m: usize,
    pub states: Vec<(ClassFn, ClassFn)>,
}

impl OscillatorModel {
    /// `[(P_1 ⊗' .. ⊗' P_{r-2m,S}) ψ_r]^{l_1..l_r}` for every multi-index,
    /// dropping zero rows.
    pub fn spheric_block(&self, tower: &StateTower, r: usize, m: usize) -> Result<SphericBlock> {
        let s = &self.an.alg.s;
        let n = self.n();
        let p = compose_projector(s, r, m)?;
        let level = tower.levels.get(r).ok_or_else(|| Error::Invalid(format!("tower has no level {r}")))?;
        let slot = |labels: &[u8]| labels.iter().fold(0usize, |acc, &l| acc * n + l as usize);
        let mut by_slot = vec![None; n.pow(r as u32)];
        for st in level {
            by_slot[slot(&st.labels)] = Some(st);
        }
        let zero_u = level[0].exact.scale(&QScalar::zero());
        let zero_b = level[0].exact_bar.scale(&QScalar::zero());
        let mut states = Vec::new();
        for row in 0..p.size() {
            let mut f = zero_u.clone();
            let mut fb = zero_b.clone();
            for (c, v) in p.row(row) {
                let st = by_slot[*c].ok_or_else(|| Error::Invalid("missing tower state".into()))?;
                f = f.add(&st.exact.scale(v))?;
                fb = fb.add(&st.exact_bar.scale(v))?;
            }
            if !f.is_zero(&self.an) {
                states.push((f, fb));
            }
        }
        Ok(SphericBlock { r, m, states })
    }

    /// Projector identities, `l·l` eigenvalues on every block of `H_r`, and
    /// orthogonality of different blocks.
    pub fn spheric_decomposition(&self, tower: &StateTower, r: usize, sp: Option<&ScalarProduct>) -> Result<Report> {
        let s = &self.an.alg.s;
        let n = self.n();
        let mut rep = Report::new();
        for k in 1..=r.max(1) {
            let p = spheric_projector(s, k)?;
            let mut ok = true;
            for i in 0..k.saturating_sub(1) {
                for b in [embed(&s.pa.mat, n, k, i), embed(&s.p1.mat, n, k, i)] {
                    ok &= p.mul(&b).is_zero() && b.mul(&p).is_zero();
                }
            }
            rep.push(Check::exact(format!("spheric_projector_k{k}"), ok));
            let tr = p.trace().limit_q_to_1()?;
            let want = harmonic_dim(n, k);
            rep.push(Check::new(format!("spheric_trace_k{k}"), tr == BigRational::from_integer((want as i64).into()), format!("{tr} vs {want}")));
            if k == 2 {
                rep.push(Check::exact("spheric_k2_is_symmetric", p == s.ps.mat));
            }
        }
        let consts = self.an.alg.named_constants()?;
        let mut blocks = Vec::new();
        for m in 0..=r / 2 {
            let b = self.spheric_block(tower, r, m)?;
            let lam = l_dot_l_eigenvalue(n, (r - 2 * m) as i64);
            let eig = b
                .states
                .par_iter()
                .map(|(f, _)| -> Result<bool> {
                    let lf = f.apply(&self.an, &consts.l_dot_l, Sector::Unbarred)?;
                    Ok(lf.sub(&f.scale(&lam))?.is_zero(&self.an))
                })
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .all(|x| x);
            rep.push(Check::exact(format!("spheric_eigen_r{r}_m{m}"), eig && !b.states.is_empty()));
            blocks.push(b);
        }
        if let Some(sp) = sp {
            let mut orth = true;
            let mut worst = QScalar::zero();
            for a in 0..blocks.len() {
                for b in a + 1..blocks.len() {
                    for (fa, fba) in blocks[a].states.iter().take(3) {
                        for (fb, fbb) in blocks[b].states.iter().take(3) {
                            let u = pair_of(&self.an, fa, fba)?;
                            let v = pair_of(&self.an, fb, fbb)?;
                            let x = sp.product(&u, &v)?;
                            if !x.is_zero() {
                                orth = false;
                                worst = x;
                            }
                        }
                    }
                }
            }
            if blocks.len() > 1 {
                rep.push(Check::new(format!("spheric_orthogonal_r{r}"), orth, worst.to_string()));
            }
        }
        Ok(rep)
    }
}
