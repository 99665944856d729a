//! The q-isotropic harmonic oscillator: Hamiltonians, ladder blocks, the
//! state tower and its verification suites.

mod checks;
mod gram;
mod json;
mod spheric;

use std::sync::Arc;

use num_rational::BigRational;

use crate::algebra::{Algebra, Element, Sector};
use crate::analysis::{Analysis, ClassFn, DisplayForm, PairState, Variant, WaveFunction, XPoly};
use crate::coeff::linalg::rank;
use crate::coeff::{qnumber_half, QScalar};
use crate::error::{Error, Result};

pub use checks::{harmonic_dim, operator_matrix, Measured};
pub use gram::{basis_indices, GramData};
pub use json::{gram_report, spectrum_report, GramSummary};
pub use spheric::{compose_projector, kron, spheric_projector, SphericBlock};

/// Ladder operators for one block `h`.
#[derive(Clone, Debug)]
pub struct Ladder {
    pub raise: Vec<Element>,
    pub lower: Vec<Element>,
    pub raise_bar: Vec<Element>,
    pub lower_bar: Vec<Element>,
    /// The barred annihilator with `∂` in place of `∂̄`, as an unbarred element.
    pub lower_bar_unbarred_d: Vec<Element>,
}

/// Scale `b_h` of the ladder block `h` (the barred block uses `b_h(q^{-1})`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// `b_h = 1`.
    Unit,
    /// `b_h(q) = 1/(1 + q^{2-2h-N})`: the sum `A^{i+} + A^{i-}` acts on every
    /// level as `x^i Λ^{-1/2}` (barred: `x^i Λ^{1/2}`).
    Position,
}

impl Normalization {
    pub fn b(self, n: usize, h: i32, barred: bool) -> QScalar {
        match self {
            Normalization::Unit => QScalar::one(),
            Normalization::Position => {
                let e = 2 - 2 * h - n as i32;
                let e = if barred { -e } else { e };
                QScalar::one().add(&QScalar::q_pow(e)).inv().expect("nonzero")
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Normalization::Unit => "unit",
            Normalization::Position => "position",
        }
    }
}

pub struct OscillatorModel {
    pub an: Arc<Analysis>,
    pub norm: Normalization,
    pub omega: QScalar,
    pub r_max: usize,
    pub d: usize,
    pub h: Element,
    pub hbar: Element,
    /// `ladders[h-1]` holds the block that maps `H_{h-1}` to `H_{h±1}`.
    pub ladders: Vec<Ladder>,
}

/// `E_r = ω (q^{N/2-1} + q^{1-N/2}) [N/2 + r]_q`.
pub fn energy(n: usize, omega: &QScalar, r: i64) -> QScalar {
    let n = n as i32;
    let pre = QScalar::s_pow(n - 2).add(&QScalar::s_pow(2 - n));
    omega.mul(&pre).mul(&qnumber_half(n + 2 * r as i32))
}

/// `l^2_k = [k]_q [k+N-2]_q (q^{2-N/2} + q^{N/2-2}) / ((q + q^{-1})(q^{1-N/2} + q^{N/2-1}))`.
pub fn l_squared(n: usize, k: i64) -> QScalar {
    let n = n as i32;
    let k = k as i32;
    let num = qnumber_half(2 * k)
        .mul(&qnumber_half(2 * (k + n - 2)))
        .mul(&QScalar::s_pow(4 - n).add(&QScalar::s_pow(n - 4)));
    let den = QScalar::q().add(&QScalar::q_pow(-1)).mul(&QScalar::s_pow(2 - n).add(&QScalar::s_pow(n - 2)));
    num.div(&den).expect("nonzero denominator")
}

/// Eigenvalue of the operator `l·l` on degree-`k` harmonics. The Casimir
/// relation `B^2 - κ l·l = 1` with `B = Λ^{-1}(1 + κ' x^i ∂_i)` fixes it to
/// `q^{-2} l^2_k`; both agree at `q = 1`.
pub fn l_dot_l_eigenvalue(n: usize, k: i64) -> QScalar {
    QScalar::q_pow(-2).mul(&l_squared(n, k))
}

/// Classical dimension of degree-`r` polynomials in `N` variables.
pub fn binomial_dim(n: usize, r: usize) -> usize {
    let mut v: u128 = 1;
    for k in 0..(n - 1) {
        v = v * (r + n - 1 - k) as u128 / (k + 1) as u128;
    }
    v as usize
}

impl OscillatorModel {
    pub fn new(alg: Arc<Algebra>, omega: QScalar, r_max: usize, d: usize) -> Result<Self> {
        Self::with_normalization(alg, omega, r_max, d, Normalization::Position)
    }

    pub fn with_normalization(alg: Arc<Algebra>, omega: QScalar, r_max: usize, d: usize, norm: Normalization) -> Result<Self> {
        if r_max < 1 {
            return Err(Error::Invalid("r_max must be at least 1".into()));
        }
        if d < 2 * r_max + 4 {
            return Err(Error::Truncation(format!("degree {d} is below 2*r_max+4 = {}", 2 * r_max + 4)));
        }
        if omega.is_zero() {
            return Err(Error::Invalid("omega must be nonzero".into()));
        }
        let an = Arc::new(Analysis::new(alg.clone()));
        let n = alg.n() as i32;
        let consts = alg.named_constants()?;
        let w2 = omega.mul(&omega);
        let h = consts.laplacian.scale(&QScalar::q_pow(n).neg()).add(&consts.xcx.scale(&w2))?;
        let hbar = consts
            .laplacian_bar
            .scale(&QScalar::q_pow(-n).neg())
            .add(&consts.xcx.scale(&w2))?
            .with_sector(Some(Sector::Barred));
        let mut ladders = Vec::new();
        for hh in 1..=(r_max as i32 + 2) {
            let lam_m = Element::lambda_half(-1);
            let lam_p = Element::lambda_half(1);
            let mut l = Ladder { raise: vec![], lower: vec![], raise_bar: vec![], lower_bar: vec![], lower_bar_unbarred_d: vec![] };
            let b = norm.b(alg.n(), hh, false);
            let bb = norm.b(alg.n(), hh, true);
            for i in 0..alg.n() {
                let x = Element::x(i as u8);
                let comb = |c: QScalar, sec: Sector, lam: &Element, pre: QScalar| -> Result<Element> {
                    let inner = x.add(&alg.d_upper(i, sec).scale(&c.div(&omega)?))?;
                    Ok(alg.mul(&inner, lam)?.scale(&pre))
                };
                l.raise.push(comb(QScalar::q_pow(2 - hh).neg(), Sector::Unbarred, &lam_m, b.clone())?);
                l.lower.push(comb(QScalar::q_pow(hh + n), Sector::Unbarred, &lam_m, QScalar::q_pow(2 - 2 * hh - n).mul(&b))?);
                l.raise_bar.push(comb(QScalar::q_pow(hh - 2).neg(), Sector::Barred, &lam_p, bb.clone())?);
                l.lower_bar.push(comb(QScalar::q_pow(-hh - n), Sector::Barred, &lam_p, QScalar::q_pow(-2 + 2 * hh + n).mul(&bb))?);
                l.lower_bar_unbarred_d
                    .push(comb(QScalar::q_pow(-hh - n), Sector::Unbarred, &lam_p, QScalar::q_pow(-2 + 2 * hh + n).mul(&bb))?);
            }
            ladders.push(l);
        }
        Ok(OscillatorModel { an, norm, omega, r_max, d, h, hbar, ladders })
    }

    pub fn n(&self) -> usize {
        self.an.n()
    }

    pub fn alg(&self) -> &Algebra {
        &self.an.alg
    }

    pub fn energy(&self, r: i64) -> QScalar {
        energy(self.n(), &self.omega, r)
    }

    /// `α_r = q^{-N-r} ω / (1 + q^{2-N})`.
    pub fn alpha(&self, r: i32) -> QScalar {
        let n = self.n() as i32;
        self.omega.mul(&QScalar::q_pow(-n - r)).div(&QScalar::one().add(&QScalar::q_pow(2 - n))).expect("nonzero")
    }

    /// `ᾱ_r = q^{r+N} ω / (1 + q^{N-2})`.
    pub fn alpha_bar(&self, r: i32) -> QScalar {
        let n = self.n() as i32;
        self.omega.mul(&QScalar::q_pow(n + r)).div(&QScalar::one().add(&QScalar::q_pow(n - 2))).expect("nonzero")
    }

    /// Ground state pair, expanded to degree `d`.
    pub fn ground_state(&self, d: usize) -> (WaveFunction, WaveFunction) {
        let psi = self.an.qexp_series(&self.alpha(0), Variant::Q2, d, Sector::Unbarred);
        let psib = self.an.qexp_series(&self.alpha_bar(0), Variant::Qm2, d, Sector::Barred);
        (psi, psib)
    }

    /// Raising ops on `H_r` in the given sector.
    pub fn raise(&self, r: usize, i: usize, sec: Sector) -> &Element {
        match sec {
            Sector::Unbarred => &self.ladders[r].raise[i],
            Sector::Barred => &self.ladders[r].raise_bar[i],
        }
    }

    pub fn lower(&self, r: usize, i: usize, sec: Sector) -> &Element {
        match sec {
            Sector::Unbarred => &self.ladders[r].lower[i],
            Sector::Barred => &self.ladders[r].lower_bar[i],
        }
    }

    pub fn hamiltonian(&self, sec: Sector) -> &Element {
        match sec {
            Sector::Unbarred => &self.h,
            Sector::Barred => &self.hbar,
        }
    }

    /// The exact ground state as a Gaussian-class function.
    pub fn ground_class(&self, sec: Sector) -> ClassFn {
        match sec {
            Sector::Unbarred => ClassFn::gaussian(self.alpha(0), Variant::Q2),
            Sector::Barred => ClassFn::gaussian(self.alpha_bar(0), Variant::Qm2),
        }
    }

    pub fn build_tower(&self) -> Result<StateTower> {
        let (psi0, psib0) = self.ground_state(self.d + self.r_max);
        let ground = TowerState {
            labels: vec![],
            psi: psi0,
            psibar: psib0,
            exact: self.ground_class(Sector::Unbarred),
            exact_bar: self.ground_class(Sector::Barred),
        };
        let mut levels = vec![vec![ground]];
        for r in 1..=self.r_max {
            let mut next = Vec::new();
            for st in &levels[r - 1] {
                for i in 0..self.n() {
                    let psi = self.an.act(self.raise(r - 1, i, Sector::Unbarred), &st.psi)?;
                    let psibar = self.an.act(self.raise(r - 1, i, Sector::Barred), &st.psibar)?;
                    if psi.trusted < self.d || psibar.trusted < self.d {
                        return Err(Error::Truncation(format!("level {r} trusted only to degree {}", psi.trusted)));
                    }
                    let exact = st.exact.apply(&self.an, self.raise(r - 1, i, Sector::Unbarred), Sector::Unbarred)?;
                    let exact_bar = st.exact_bar.apply(&self.an, self.raise(r - 1, i, Sector::Barred), Sector::Barred)?;
                    let mut labels = vec![i as u8];
                    labels.extend(&st.labels);
                    next.push(TowerState { labels, psi, psibar, exact, exact_bar });
                }
            }
            levels.push(next);
        }
        let mut tower = StateTower { levels, dims: vec![], dims_bar: vec![] };
        for st in tower.levels.iter_mut().flatten() {
            if let Some((p, a)) = st.exact.single(&self.an) {
                st.psi.display = Some(DisplayForm { poly: p, alpha: a, variant: Variant::Q2 });
            }
            if let Some((p, a)) = st.exact_bar.single(&self.an) {
                st.psibar.display = Some(DisplayForm { poly: p, alpha: a, variant: Variant::Qm2 });
            }
        }
        for r in 0..=self.r_max {
            tower.dims.push(span_rank(&tower.levels[r], false, generic_point())?);
            tower.dims_bar.push(span_rank(&tower.levels[r], true, generic_point())?);
        }
        Ok(tower)
    }
}

/// The rational point `s = 7/5` used for exact ranks.
pub fn generic_point() -> BigRational {
    BigRational::new(7.into(), 5.into())
}

pub(crate) fn span_rank(states: &[TowerState], barred: bool, s0: BigRational) -> Result<usize> {
    let polys: Vec<&XPoly> = states
        .iter()
        .map(|s| {
            let d = if barred { &s.psibar.display } else { &s.psi.display };
            d.as_ref().map(|d| &d.poly).ok_or_else(|| Error::Invalid("state without closed form".into()))
        })
        .collect::<Result<_>>()?;
    let mut words: Vec<&Vec<u8>> = polys.iter().flat_map(|p| p.keys()).collect();
    words.sort();
    words.dedup();
    let mut m = Vec::new();
    for p in &polys {
        let row: Vec<BigRational> = words
            .iter()
            .map(|w| p.get(*w).map_or(Ok(BigRational::from_integer(0.into())), |c| c.eval_at_s(&s0)))
            .collect::<Result<_>>()?;
        m.push(row);
    }
    Ok(rank(&m))
}

#[derive(Clone, Debug)]
pub struct TowerState {
    /// `[i_r, ..., i_1]` as positions.
    pub labels: Vec<u8>,
    pub psi: WaveFunction,
    pub psibar: WaveFunction,
    pub exact: ClassFn,
    pub exact_bar: ClassFn,
}

impl TowerState {
    pub fn pair(&self) -> Result<PairState> {
        let d = self.psi.display.as_ref().ok_or_else(|| Error::Invalid("missing display form".into()))?;
        let db = self.psibar.display.as_ref().ok_or_else(|| Error::Invalid("missing display form".into()))?;
        Ok(PairState { poly: d.poly.clone(), alpha: d.alpha.clone(), poly_bar: db.poly.clone(), alpha_bar: db.alpha.clone() })
    }
}

pub struct StateTower {
    pub levels: Vec<Vec<TowerState>>,
    pub dims: Vec<usize>,
    pub dims_bar: Vec<usize>,
}

/// Pair state from two exact functions with single closed forms.
pub fn pair_of(an: &Analysis, f: &ClassFn, fb: &ClassFn) -> Result<PairState> {
    let (p, a) = f.single(an).ok_or_else(|| Error::Invalid("function is not a single Gaussian class".into()))?;
    let (pb, ab) = fb.single(an).ok_or_else(|| Error::Invalid("function is not a single Gaussian class".into()))?;
    Ok(PairState { poly: p, alpha: a, poly_bar: pb, alpha_bar: ab })
}
