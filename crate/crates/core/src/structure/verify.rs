use num_rational::BigRational;

use super::tensor::{apply_pair, SparseMat, TripleVec};
use super::StructureSet;
use crate::coeff::QScalar;
use crate::report::{Check, Report};

const REALITY_SAMPLES: [f64; 4] = [0.5, 0.8, 1.25, 2.0];

/// Runs every structural identity and returns one check per relation.
pub fn verify_structure(s: &StructureSet) -> Report {
    let n = s.n();
    let nn = n * n;
    let id = SparseMat::identity(nn);
    let (r, ri) = (&s.rhat.mat, &s.rinv.mat);
    let (ps, pa, p1) = (&s.ps.mat, &s.pa.mat, &s.p1.mat);
    let [e_s, e_a, e_1] = s.eigenvalues();
    let mut rep = Report::new();

    rep.push(Check::exact("inverse", r.mul(ri) == id && ri.mul(r) == id));

    let minpoly = r
        .sub(&SparseMat::scalar(nn, &e_s))
        .mul(&r.sub(&SparseMat::scalar(nn, &e_a)))
        .mul(&r.sub(&SparseMat::scalar(nn, &e_1)));
    rep.push(Check::exact("minimal_polynomial", minpoly.is_zero()));

    let recon = ps.scale(&e_s).add(&pa.scale(&e_a)).add(&p1.scale(&e_1));
    rep.push(Check::exact("decomposition", &recon == r));

    let projs = [ps, pa, p1];
    let idem = projs.iter().all(|p| p.mul(p) == **p);
    rep.push(Check::exact("projector_idempotent", idem));
    let mut orth = true;
    for (a, pa_) in projs.iter().enumerate() {
        for (b, pb) in projs.iter().enumerate() {
            if a != b && !pa_.mul(pb).is_zero() {
                orth = false;
            }
        }
    }
    rep.push(Check::exact("projector_orthogonal", orth));
    rep.push(Check::exact("projector_complete", ps.add(pa).add(p1) == id));

    let want = [n * (n + 1) / 2 - 1, n * (n - 1) / 2, 1];
    let got: Vec<QScalar> = projs.iter().map(|p| p.trace()).collect();
    let ranks_ok = got.iter().zip(want).all(|(g, w)| *g == QScalar::from_int(w as i64));
    rep.push(Check::new(
        "projector_ranks",
        ranks_ok,
        got.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(","),
    ));

    // metric
    let c = &s.c;
    let mut self_inv = true;
    for a in 0..n {
        for b in 0..n {
            let v = QScalar::sum((0..n).map(|k| c.at(a, k).mul(c.at(k, b))).collect::<Vec<_>>().iter());
            if v != if a == b { QScalar::one() } else { QScalar::zero() } {
                self_inv = false;
            }
        }
    }
    rep.push(Check::exact("metric_self_inverse", self_inv));

    let mut fact = true;
    let qinv = s.qn.inv().unwrap_or_default();
    for a in 0..nn {
        for b in 0..nn {
            let v = c.at(a / n, a % n).mul(c.at(b / n, b % n)).mul(&qinv);
            if p1.get(a, b) != v {
                fact = false;
            }
        }
    }
    rep.push(Check::exact("p1_factorization", fact));

    let qlim = s.qn.limit_q_to_1();
    let qlim_ok = qlim.as_ref().map(|v| *v == BigRational::from_integer(n.into())).unwrap_or(false);
    rep.push(Check::new(
        "qn_classical_limit",
        qlim_ok,
        qlim.map(|v| v.to_string()).unwrap_or_else(|e| e.to_string()),
    ));

    // [f(R), P (C (x) C)] = 0
    let mut pcc = SparseMat::zero(nn);
    for i in 0..n {
        for j in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let v = c.at(j, h).mul(c.at(i, k));
                    if !v.is_zero() {
                        pcc.set(i * n + j, h * n + k, v);
                    }
                }
            }
        }
    }
    let fs: [(&str, &SparseMat); 5] = [("rhat", r), ("rinv", ri), ("pa", pa), ("ps", ps), ("p1", p1)];
    for (name, f) in fs {
        let comm = f.mul(&pcc).sub(&pcc.mul(f));
        rep.push(Check::exact(format!("commutes_with_pcc_{name}"), comm.is_zero()));
    }

    // braid relation and the compatibility family on the threefold space
    let cols_r = r.columns();
    let cols_ri = ri.columns();
    let braid = (0..n * nn).all(|t| {
        let v: TripleVec = [(t, QScalar::one())].into_iter().collect();
        let lhs = apply_pair(&cols_r, n, &apply_pair(&cols_r, n, &apply_pair(&cols_r, n, &v, true), false), true);
        let rhs = apply_pair(&cols_r, n, &apply_pair(&cols_r, n, &apply_pair(&cols_r, n, &v, false), true), false);
        lhs == rhs
    });
    rep.push(Check::exact("braid_relation", braid));

    for (name, f) in fs {
        let cf = f.columns();
        for (sign, cr) in [("plus", &cols_r), ("minus", &cols_ri)] {
            // f_12 R_23 R_12 = R_23 R_12 f_23
            let ok = (0..n * nn).all(|t| {
                let v: TripleVec = [(t, QScalar::one())].into_iter().collect();
                let lhs = apply_pair(&cf, n, &apply_pair(cr, n, &apply_pair(cr, n, &v, true), false), true);
                let rhs = apply_pair(cr, n, &apply_pair(cr, n, &apply_pair(&cf, n, &v, false), true), false);
                lhs == rhs
            });
            rep.push(Check::exact(format!("braid_compat_{name}_{sign}"), ok));
        }
    }

    let real = [r, ri, ps, pa, p1].iter().all(|m| {
        m.entries().all(|(_, _, v)| REALITY_SAMPLES.iter().all(|&q0| v.eval(q0).map(f64::is_finite).unwrap_or(false)))
    }) && c.entries.iter().flatten().all(|v| REALITY_SAMPLES.iter().all(|&q0| v.eval(q0).is_ok()));
    rep.push(Check::new("real_entries", real, format!("sampled q in {:?}", REALITY_SAMPLES)));

    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{build_structure, Dimension};

    #[test]
    fn corrupted_entry_breaks_braid_relation() {
        let mut s = build_structure(Dimension::new(3).unwrap()).unwrap();
        let v = s.rhat.mat.get(0, 0);
        s.rhat.mat.set(0, 0, v.add(&QScalar::one()));
        let rep = verify_structure(&s);
        assert!(!rep.get("braid_relation").unwrap().pass);
        assert!(!rep.all_pass());
    }
}
