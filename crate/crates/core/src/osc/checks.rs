use std::collections::HashMap;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::algebra::{Element, Sector};
use crate::analysis::{poly_filter, poly_sub, Analysis, ClassFn, WaveFunction, XPoly};
use crate::coeff::linalg::{rank, rref, solve, Matrix};
use crate::coeff::QScalar;
use crate::error::{Error, Result};
use crate::report::{Check, Report};

use super::{binomial_dim, l_dot_l_eigenvalue, l_squared, OscillatorModel, StateTower, TowerState};

/// A scalar read off an operator identity instead of assumed.
#[derive(Clone, Debug, PartialEq)]
pub struct Measured {
    pub name: String,
    pub level: usize,
    pub value: QScalar,
}

enum Ratio {
    Zero,
    Value(QScalar),
    Mismatch,
}

/// `a = g b` with one scalar `g`.
fn ratio(an: &Analysis, a: &ClassFn, b: &ClassFn) -> Result<Ratio> {
    let ca = a.canonical(an);
    let cb = b.canonical(an);
    let first = cb.parts.iter().find_map(|(e, p)| p.iter().next().map(|(w, c)| (*e, w.clone(), c.clone())));
    let Some((e, w, c)) = first else {
        return Ok(if ca.parts.is_empty() { Ratio::Zero } else { Ratio::Mismatch });
    };
    let av = ca.parts.get(&e).and_then(|p| p.get(&w)).cloned().unwrap_or_default();
    let g = av.div(&c)?;
    Ok(if a.sub(&b.scale(&g))?.is_zero(an) { Ratio::Value(g) } else { Ratio::Mismatch })
}

/// Collects ratios that must all agree.
#[derive(Default)]
struct Proportion {
    g: Option<QScalar>,
    ok: bool,
    seen: bool,
}

impl Proportion {
    fn new() -> Self {
        Proportion { g: None, ok: true, seen: false }
    }

    fn push(&mut self, r: Ratio) {
        self.seen = true;
        match r {
            Ratio::Zero => {}
            Ratio::Mismatch => self.ok = false,
            Ratio::Value(v) => match &self.g {
                None => self.g = Some(v),
                Some(g0) if *g0 == v => {}
                Some(_) => self.ok = false,
            },
        }
    }

    fn check(&self, name: &str) -> Check {
        let pass = self.ok && self.g.is_some();
        let res = match &self.g {
            Some(g) if self.ok => format!("g={g}"),
            Some(g) => format!("inconsistent; first g={g}"),
            None => "no nonzero sample".into(),
        };
        Check::new(name, pass, res)
    }
}

impl OscillatorModel {
    fn up(&self, f: &ClassFn, r: usize, i: usize, sec: Sector) -> Result<ClassFn> {
        f.apply(&self.an, self.raise(r, i, sec), sec)
    }

    fn down(&self, f: &ClassFn, r: usize, i: usize, sec: Sector) -> Result<ClassFn> {
        if r == 0 {
            return Ok(f.scale(&QScalar::zero()));
        }
        f.apply(&self.an, self.lower(r, i, sec), sec)
    }

    /// Spectrum, closed forms and dimensions of the tower.
    pub fn verify_spectrum(&self, tower: &StateTower) -> Result<Report> {
        let mut rep = Report::new();
        let upto = self.d - 2;
        let n = self.n();
        for (r, states) in tower.levels.iter().enumerate() {
            let e = self.energy(r as i64);
            let alpha = self.alpha(r as i32);
            let alpha_bar = self.alpha_bar(r as i32);
            let results: Vec<Result<[bool; 5]>> = states
                .par_iter()
                .map(|st| {
                    let mut out = [true; 5];
                    for (k, (sec, psi, exact)) in
                        [(Sector::Unbarred, &st.psi, &st.exact), (Sector::Barred, &st.psibar, &st.exact_bar)].into_iter().enumerate()
                    {
                        let hpsi = self.an.act(self.hamiltonian(sec), psi)?;
                        let lim = upto.min(hpsi.trusted);
                        out[k] = hpsi.residual(psi, &e, lim).is_empty() && lim >= upto;
                        let hx = exact.apply(&self.an, self.hamiltonian(sec), sec)?;
                        out[2 + k] = hx.sub(&exact.scale(&e))?.is_zero(&self.an);
                    }
                    out[4] = closed_form_ok(&self.an, st, r, &alpha, &alpha_bar, self.d);
                    Ok(out)
                })
                .collect();
            let mut agg = [true; 5];
            for res in results {
                let v = res?;
                for k in 0..5 {
                    agg[k] &= v[k];
                }
            }
            rep.push(Check::exact(format!("spectrum_r{r}"), agg[0]));
            rep.push(Check::exact(format!("spectrum_bar_r{r}"), agg[1]));
            rep.push(Check::exact(format!("spectrum_exact_r{r}"), agg[2]));
            rep.push(Check::exact(format!("spectrum_exact_bar_r{r}"), agg[3]));
            rep.push(Check::exact(format!("closed_form_r{r}"), agg[4]));
            let want = binomial_dim(n, r);
            rep.push(Check::new(format!("dim_r{r}"), tower.dims[r] == want, format!("{} vs {want}", tower.dims[r])));
            rep.push(Check::new(format!("dim_bar_r{r}"), tower.dims_bar[r] == want, format!("{} vs {want}", tower.dims_bar[r])));
        }
        rep.extend(self.ground_annihilation()?);
        Ok(rep)
    }

    /// `a_1^{i-} ψ_0 = 0` and its barred mirror, on trusted degrees.
    pub fn ground_annihilation(&self) -> Result<Report> {
        let mut rep = Report::new();
        let (psi, psib) = self.ground_state(self.d);
        let mut ok = true;
        let mut okb = true;
        for i in 0..self.n() {
            ok &= self.an.act(&self.ladders[0].lower[i], &psi)?.expanded.is_empty();
            okb &= self.an.act(&self.ladders[0].lower_bar[i], &psib)?.expanded.is_empty();
        }
        rep.push(Check::exact("ground_annihilated", ok));
        rep.push(Check::exact("ground_annihilated_bar", okb));
        Ok(rep)
    }

    /// Residual of the barred annihilator read with `∂` instead of `∂̄` on
    /// the barred ground state: number of nonzero coefficients.
    pub fn unbarred_derivative_annihilator_residual(&self) -> Result<usize> {
        let (_, psib) = self.ground_state(self.d);
        let as_fn = WaveFunction::new(Sector::Unbarred, psib.expanded.clone(), psib.trusted);
        let mut count = 0;
        for i in 0..self.n() {
            count += self.an.act(&self.ladders[0].lower_bar_unbarred_d[i], &as_fn)?.expanded.len();
        }
        Ok(count)
    }

    /// `E_{r±1}` are the two roots `f` of `(q E_r - f)(q^{-1} E_r - f) = (1+q^{2-N})^2 q^{N-2} ω^2`.
    pub fn verify_f_relation(&self, r: usize) -> Report {
        let n = self.n() as i32;
        let rhs = QScalar::one()
            .add(&QScalar::q_pow(2 - n))
            .pow(2)
            .mul(&QScalar::q_pow(n - 2))
            .mul(&self.omega)
            .mul(&self.omega);
        let er = self.energy(r as i64);
        let f = |x: &QScalar| er.mul(&QScalar::q()).sub(x).mul(&er.mul(&QScalar::q_pow(-1)).sub(x));
        let mut rep = Report::new();
        let up = f(&self.energy(r as i64 + 1)).sub(&rhs);
        rep.push(Check::new(format!("f_relation_plus_r{r}"), up.is_zero(), up.to_string()));
        if r > 0 {
            let dn = f(&self.energy(r as i64 - 1)).sub(&rhs);
            rep.push(Check::new(format!("f_relation_minus_r{r}"), dn.is_zero(), dn.to_string()));
        }
        rep
    }

    /// `q -> 1/q` symmetry of the levels and growth of the gaps at `q = q0`.
    pub fn energy_checks(&self, rmax: usize, q0: f64) -> Result<Report> {
        let mut rep = Report::new();
        let sym = (0..=rmax as i64).all(|r| self.energy(r).invert_q() == self.energy(r));
        rep.push(Check::exact("energy_q_inversion", sym));
        let mut gaps = Vec::new();
        for r in 0..=rmax as i64 {
            gaps.push(self.energy(r + 1).eval(q0)? - self.energy(r).eval(q0)?);
        }
        let inc = gaps.windows(2).all(|w| w[1] > w[0]);
        rep.push(Check::new("energy_gap_growth", inc, format!("last gap {:.6e} at q={q0}", gaps.last().unwrap())));
        Ok(rep)
    }

    /// Ladder relations on states. Returns the checks and measured scalars.
    pub fn ladder_structure_checks(&self, tower: &StateTower) -> Result<(Report, Vec<Measured>)> {
        let an = &*self.an;
        let s = &an.alg.s;
        let n = self.n();
        let u = Sector::Unbarred;
        let mut rep = Report::new();
        let mut measured = Vec::new();
        let top = tower.levels.len() - 1;

        // P_A A+ A+ = 0 and P_A X X = 0 on H_0, H_1
        let mut pa_pp = true;
        let mut pa_pp_bar = true;
        let mut pa_xx = true;
        for r in 0..=1.min(top) {
            for st in &tower.levels[r] {
                for (sec, f, flag) in [(u, &st.exact, &mut pa_pp), (Sector::Barred, &st.exact_bar, &mut pa_pp_bar)] {
                    let mut pp: HashMap<(usize, usize), ClassFn> = HashMap::new();
                    for k in 0..n {
                        let ak = self.up(f, r, k, sec)?;
                        for h in 0..n {
                            pp.insert((h, k), self.up(&ak, r + 1, h, sec)?);
                        }
                    }
                    *flag &= pa_contract(an, &s.pa, n, &pp)?;
                }
                let mut xx: HashMap<(usize, usize), ClassFn> = HashMap::new();
                for k in 0..n {
                    let plus = self.up(&st.exact, r, k, u)?;
                    let minus = self.down(&st.exact, r, k, u)?;
                    for h in 0..n {
                        let mut v = self.up(&plus, r + 1, h, u)?.add(&self.down(&plus, r + 1, h, u)?)?;
                        if r > 0 {
                            v = v.add(&self.up(&minus, r - 1, h, u)?)?.add(&self.down(&minus, r - 1, h, u)?)?;
                        }
                        xx.insert((h, k), v);
                    }
                }
                pa_xx &= pa_contract(an, &s.pa, n, &xx)?;
            }
        }
        rep.push(Check::exact("pa_creators", pa_pp));
        rep.push(Check::exact("pa_creators_bar", pa_pp_bar));
        rep.push(Check::exact("pa_positions", pa_xx));

        let consts = an.alg.named_constants()?;
        for r in 1..=top.min(2) {
            // P_A A+ A- ∝ l^{ij}
            let mut prop = Proportion::new();
            let mut ps_prop = Proportion::new();
            for st in &tower.levels[r] {
                let mut pm: HashMap<(usize, usize), ClassFn> = HashMap::new();
                let mut mp: HashMap<(usize, usize), ClassFn> = HashMap::new();
                for k in 0..n {
                    let ak = self.down(&st.exact, r, k, u)?;
                    let bk = self.up(&st.exact, r, k, u)?;
                    for h in 0..n {
                        pm.insert((h, k), self.up(&ak, r - 1, h, u)?);
                        mp.insert((h, k), self.down(&bk, r + 1, h, u)?);
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        let lhs = contract(&s.pa, n, i, j, &pm)?;
                        let l = st.exact.apply(an, &consts.l_upper[i][j], u)?;
                        prop.push(ratio(an, &lhs, &l)?);
                        let a = contract(&s.ps, n, i, j, &pm)?;
                        let b = contract(&s.ps, n, i, j, &mp)?;
                        ps_prop.push(ratio(an, &a, &b)?);
                    }
                }
            }
            rep.push(prop.check(&format!("pa_mixed_is_angular_r{r}")));
            if let Some(g) = &prop.g {
                measured.push(Measured { name: "g_A".into(), level: r, value: g.clone() });
                // classical ladder algebra: P_A (x - ∂/ω)(x + ∂/ω) = (2/ω) l, times b_r b_{r+1}
                let lim = g.limit_q_to_1()?;
                let scale = self.norm.b(n, r as i32, false).mul(&self.norm.b(n, r as i32 + 1, false)).limit_q_to_1()?;
                let want = BigRational::from_integer(2.into()) / self.omega.limit_q_to_1()? * scale;
                rep.push(Check::new(format!("g_A_classical_r{r}"), lim == want, format!("{lim} vs {want}")));
            }
            rep.push(ps_prop.check(&format!("ps_mixed_r{r}")));
            if let Some(g) = &ps_prop.g {
                measured.push(Measured { name: "g_S".into(), level: r, value: g.clone() });
            }
        }

        // A^{h+} A^-_h ∝ B and A^{h-} A^+_h ∝ B
        for r in 0..=top.min(2) {
            let mut p1 = Proportion::new();
            let mut p2 = Proportion::new();
            for st in &tower.levels[r] {
                let b = st.exact.apply(an, &consts.b, u)?;
                let mut lhs1 = st.exact.scale(&QScalar::zero());
                let mut lhs2 = lhs1.clone();
                for h in 0..n {
                    for k in 0..n {
                        let c = s.c.at(h, k);
                        if c.is_zero() {
                            continue;
                        }
                        if r > 0 {
                            let t = self.up(&self.down(&st.exact, r, k, u)?, r - 1, h, u)?;
                            lhs1 = lhs1.add(&t.scale(c))?;
                        }
                        let t2 = self.down(&self.up(&st.exact, r, k, u)?, r + 1, h, u)?;
                        lhs2 = lhs2.add(&t2.scale(c))?;
                    }
                }
                if r > 0 {
                    p1.push(ratio(an, &lhs1, &b)?);
                }
                p2.push(ratio(an, &lhs2, &b)?);
            }
            if r > 0 {
                rep.push(p1.check(&format!("creator_annihilator_trace_r{r}")));
                if let Some(g) = p1.g {
                    measured.push(Measured { name: "g_1".into(), level: r, value: g });
                }
            }
            rep.push(p2.check(&format!("annihilator_creator_trace_r{r}")));
            if let Some(g) = p2.g {
                measured.push(Measured { name: "g_1'".into(), level: r, value: g });
            }
        }
        Ok((rep, measured))
    }

    /// `[l^{ij}, h] = 0`, the Casimir identity, and `l·l` on each `H_r`.
    pub fn angular_momentum_suite(&self, tower: &StateTower, rmax: usize) -> Result<(Report, Vec<Measured>)> {
        let an = &*self.an;
        let alg = &an.alg;
        let n = self.n();
        let mut rep = Report::new();
        let consts = alg.named_constants()?;
        let mut comm = true;
        for i in 0..n {
            for j in 0..n {
                comm &= alg.commutator(&consts.l_upper[i][j], &self.h)?.is_zero();
            }
        }
        rep.push(Check::exact("angular_commutes_with_h", comm));
        rep.push(Check::exact("l_dot_l_commutes_with_h", alg.commutator(&consts.l_dot_l, &self.h)?.is_zero()));
        let (cas, _) = alg.casimir_check()?;
        rep.extend(cas);
        rep.push(Check::exact("l_squared_zero", l_squared(n, 0).is_zero()));
        let mut lim_ok = true;
        for k in 0..=4i64 {
            let want = BigRational::new((k * (k + n as i64 - 2)).into(), 2.into());
            lim_ok &= l_squared(n, k).limit_q_to_1()? == want;
        }
        rep.push(Check::exact("l_squared_classical", lim_ok));

        let mut measured = Vec::new();
        for r in 0..=rmax.min(tower.levels.len() - 1) {
            let (mat, _) = operator_matrix(an, &tower.levels[r], &consts.l_dot_l, Sector::Unbarred)?;
            let dim = mat.len();
            let count = |value: &dyn Fn(i64) -> QScalar| {
                let mut total = 0;
                let mut ok = true;
                let mut detail = Vec::new();
                let mut k = r as i64;
                while k >= 0 {
                    let null = dim - rank(&shift_diag(&mat, &value(k)));
                    ok &= null == harmonic_dim(n, k as usize);
                    total += null;
                    detail.push(format!("k={k}:{null}"));
                    k -= 2;
                }
                (ok && total == dim, detail.join(" "))
            };
            let (pass, detail) = count(&|k| l_squared(n, k));
            rep.push(Check::new(format!("l_dot_l_spectrum_r{r}"), pass, detail));
            let (pass, detail) = count(&|k| l_dot_l_eigenvalue(n, k));
            rep.push(Check::new(format!("l_dot_l_eigenspaces_r{r}"), pass, detail));
            let mut k = r as i64;
            while k >= 0 {
                let null = dim - rank(&shift_diag(&mat, &l_dot_l_eigenvalue(n, k)));
                measured.push(Measured { name: format!("l_dot_l_multiplicity_k{k}"), level: r, value: QScalar::from_int(null as i64) });
                k -= 2;
            }
        }
        Ok((rep, measured))
    }
}

fn closed_form_ok(an: &Analysis, st: &TowerState, r: usize, alpha: &QScalar, alpha_bar: &QScalar, d: usize) -> bool {
    let check = |disp: &Option<crate::analysis::DisplayForm>, a: &QScalar, psi: &WaveFunction, exact: &ClassFn| -> bool {
        let Some(disp) = disp else { return false };
        if &disp.alpha != a {
            return false;
        }
        let degs_ok = disp.poly.keys().all(|w| w.len() <= r && (r - w.len()) % 2 == 0)
            && disp.poly.keys().any(|w| w.len() == r);
        let upto = d.min(psi.trusted);
        let expand = poly_filter(&exact.expand(an, upto), |w| w.len() <= upto);
        let mine = poly_filter(&psi.expanded, |w| w.len() <= upto);
        degs_ok && poly_sub(&expand, &mine).is_empty()
    };
    check(&st.psi.display, alpha, &st.psi, &st.exact) && check(&st.psibar.display, alpha_bar, &st.psibar, &st.exact_bar)
}

/// Dimension of harmonic polynomials of degree `k` in `N` variables.
pub fn harmonic_dim(n: usize, k: usize) -> usize {
    binomial_dim(n, k) - if k >= 2 { binomial_dim(n, k - 2) } else { 0 }
}

fn shift_diag(m: &Matrix<QScalar>, lam: &QScalar) -> Matrix<QScalar> {
    m.iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, v)| if i == j { v.sub(lam) } else { v.clone() }).collect())
        .collect()
}

fn contract(t: &crate::structure::Tensor4, n: usize, i: usize, j: usize, m: &HashMap<(usize, usize), ClassFn>) -> Result<ClassFn> {
    let mut out: Option<ClassFn> = None;
    for h in 0..n {
        for k in 0..n {
            let c = t.at(i, j, h, k);
            let f = &m[&(h, k)];
            let term = f.scale(&c);
            out = Some(match out {
                None => term,
                Some(o) => o.add(&term)?,
            });
        }
    }
    out.ok_or_else(|| Error::Invalid("empty contraction".into()))
}

fn pa_contract(an: &Analysis, pa: &crate::structure::Tensor4, n: usize, m: &HashMap<(usize, usize), ClassFn>) -> Result<bool> {
    for i in 0..n {
        for j in 0..n {
            if !contract(pa, n, i, j, m)?.is_zero(an) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Matrix of an operator on the span of a level, in a basis of linearly
/// independent states. Also returns the indices of the basis states.
pub fn operator_matrix(an: &Analysis, states: &[TowerState], op: &Element, sec: Sector) -> Result<(Matrix<QScalar>, Vec<usize>)> {
    let fns: Vec<&ClassFn> = states.iter().map(|s| if sec == Sector::Unbarred { &s.exact } else { &s.exact_bar }).collect();
    let images: Vec<ClassFn> = fns.par_iter().map(|f| f.apply(an, op, sec)).collect::<Result<_>>()?;
    // common exponent reachable from every part
    let all_e: Vec<i32> = fns.iter().chain(images.iter().collect::<Vec<_>>().iter()).flat_map(|f| f.canonical(an).parts.keys().copied().collect::<Vec<_>>()).collect();
    let down = fns.first().map_or(true, |f| f.variant == crate::analysis::Variant::Q2);
    let target = if down { all_e.iter().min() } else { all_e.iter().max() }.copied().unwrap_or(0);
    let basis_polys: Vec<XPoly> = fns.iter().map(|f| f.over(an, target)).collect::<Result<_>>()?;
    let mut words: Vec<Vec<u8>> = basis_polys.iter().flat_map(|p| p.keys().cloned()).collect();
    let image_polys: Vec<XPoly> = images.iter().map(|f| f.over(an, target)).collect::<Result<_>>()?;
    words.extend(image_polys.iter().flat_map(|p| p.keys().cloned()));
    words.sort();
    words.dedup();
    let column = |p: &XPoly| -> Vec<QScalar> { words.iter().map(|w| p.get(w).cloned().unwrap_or_default()).collect() };
    // independent subset of states
    let cols: Vec<Vec<QScalar>> = basis_polys.iter().map(column).collect();
    let m_t: Matrix<QScalar> = (0..words.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let (_, piv) = rref(&m_t);
    let basis: Vec<usize> = piv;
    let sys: Matrix<QScalar> = (0..words.len()).map(|r| basis.iter().map(|&b| cols[b][r].clone()).collect()).collect();
    let mut mat = vec![vec![QScalar::zero(); basis.len()]; basis.len()];
    for (col, &b) in basis.iter().enumerate() {
        let rhs = column(&image_polys[b]);
        let x = solve(&sys, &rhs).ok_or_else(|| Error::Invalid("operator leaves the span of the level".into()))?;
        for (row, v) in x.into_iter().enumerate() {
            mat[row][col] = v;
        }
    }
    Ok((mat, basis))
}
