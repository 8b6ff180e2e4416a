//! The Lie-algebra operators `log γ`, `dΓ_β`, `∇_β` and the analyticity tests.

use serde::Serialize;

use super::action::Pair;
use super::matrix::{self, Mat, ModuleVector};
use super::module::PhiGammaModule;
use crate::error::{Error, Result};
use crate::padic::{padic_exp, PadicScalar};
use crate::series::LaurentWindow;

/// Largest `m` tried when looking for the `+2` valuation gain.
pub const GAIN_BUDGET: u32 = 12;

/// Outcome of the limit evaluator `(γ^(p^n) x − x)/p^n`.
#[derive(Clone, Debug, Serialize)]
pub struct LimitCheck {
    /// Index `n` of the best-agreeing consecutive pair.
    pub n: u32,
    /// Valuation of `L_n − L_(n−1)` at that index.
    pub agreement: i32,
    /// Digits at which series and limit were compared.
    pub compared_at: i32,
}

#[derive(Clone, Debug)]
pub struct LogGammaReport {
    pub value: ModuleVector,
    /// `γ^(p^m)` is the first power with gain `>= 2` on the probes.
    pub m: u32,
    /// Number of series terms summed.
    pub terms: usize,
    /// Lower bound for the valuation of the omitted tail (after `p^(−m)`).
    pub tail_prec: i32,
    pub limit: Option<LimitCheck>,
}

#[derive(Clone, Debug)]
pub struct Analyticity {
    pub analytic: bool,
    /// `(0, c_2, …, c_d)` when every defect is scalar.
    pub constants: Option<Vec<PadicScalar>>,
    pub defects: Vec<Mat>,
}

fn gain(before: &ModuleVector, after: &ModuleVector) -> i32 {
    if after.is_zero() {
        return i32::MAX;
    }
    after.min_valuation() - before.min_valuation()
}

fn basis_vectors(m: &PhiGammaModule, window: i64) -> Vec<ModuleVector> {
    (0..m.rank).map(|j| ModuleVector::basis(m.ctx(), m.rank, j, window)).collect()
}

impl PhiGammaModule {
    /// The same module over a copy of the base at precision `prec`.
    fn rebased(&self, prec: i32) -> Result<Self> {
        let mut m = self.clone();
        m.lt = self.lt.at_prec_shared(prec)?;
        Ok(m)
    }

    fn work_prec(&self, x: &ModuleVector) -> i32 {
        let w = x.coords().iter().map(|c| c.n_max() - c.n_min().min(0) + 1).max().unwrap();
        self.lt.max_prec_for(w).max(self.lt.prec())
    }

    /// `(log γ_u)(x)` for `u ≡ 1 (mod p)`, by the series
    /// `p^(−m) Σ (−1)^(i−1) (γ^(p^m) − 1)^i x / i`, cross-checked against the
    /// limit `(γ^(p^n) x − x)/p^n`.
    pub fn log_gamma(&self, u: &PadicScalar, x: &ModuleVector) -> Result<ModuleVector> {
        Ok(self.log_gamma_report(u, x, true)?.value)
    }

    /// Runs at the highest base precision whose `[u]` recursion fits in
    /// storage, stepping down on exhaustion.
    pub fn log_gamma_report(&self, u: &PadicScalar, x: &ModuleVector, cross_check: bool) -> Result<LogGammaReport> {
        self.log_gamma_to(u, x, cross_check, self.lt.prec())
    }

    /// As [`Self::log_gamma_report`], keeping up to `n_out` digits.
    fn log_gamma_to(&self, u: &PadicScalar, x: &ModuleVector, cross_check: bool, n_out: i32) -> Result<LogGammaReport> {
        self.check_vector(x)?;
        let mut prec = self.work_prec(x);
        loop {
            match self.log_gamma_at(u, x, cross_check, prec, n_out) {
                Err(Error::PrecisionExhausted(_)) if prec > self.lt.prec() + 4 => prec -= 2,
                r => return r,
            }
        }
    }

    fn log_gamma_at(&self, u: &PadicScalar, x: &ModuleVector, cross_check: bool, prec: i32, n_out: i32) -> Result<LogGammaReport> {
        let ctx = self.ctx();
        let one = PadicScalar::one(ctx, ctx.emax() as i32);
        if !u.is_unit() || u.sub(&one).val_bound() < 1 {
            return Err(Error::Precondition(format!("log gamma needs u = 1 mod p, got {u}")));
        }
        let hi = self.rebased(prec)?;
        let base: Pair = (*u, hi.gamma_matrix(u)?);
        let window = x.n_max();
        let mut probes = vec![x.clone()];
        for e in basis_vectors(self, window) {
            let t = LaurentWindow::t(ctx, window);
            probes.push(e.mul_series(&t)?);
            probes.push(e);
        }
        let mut pair = base.clone();
        let mut m = 0;
        loop {
            let ok = probes
                .iter()
                .map(|v| Ok(gain(v, &hi.apply_gamma_with(&pair.0, &pair.1, v)?.sub(v)?) >= 2))
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .all(|b| b);
            if ok {
                break;
            }
            if m >= GAIN_BUDGET {
                return Err(Error::LogGammaNonconvergent(GAIN_BUDGET));
            }
            pair = hi.pair_pow(pair, ctx.p())?;
            m += 1;
        }
        let (sum, terms, tail) = hi.log_series(&pair, x)?;
        let sum = sum.scale(&one.mul_p_pow(-(m as i32)));
        let tail_prec = tail - m as i32;
        let value = sum.truncate_prec(tail_prec.min(n_out));
        let limit = if cross_check { Some(hi.log_limit(&base, x, &value)?) } else { None };
        Ok(LogGammaReport { value, m, terms, tail_prec, limit })
    }

    /// `Σ (−1)^(i−1) y_i / i` with `y_i = (γ' − 1) y_(i−1)`; returns the sum,
    /// the number of terms and a valuation bound for the omitted tail.
    fn log_series(&self, g: &Pair, x: &ModuleVector) -> Result<(ModuleVector, usize, i32)> {
        let budget = 4 * self.ctx().emax() as usize;
        let mut y = x.clone();
        let mut sum: Option<ModuleVector> = None;
        for i in 1..=budget {
            y = self.apply_gamma_with(&g.0, &g.1, &y)?.sub(&y)?;
            if y.is_zero() {
                let p = y.precision();
                let tail = (i + 1..i + 80)
                    .map(|j| p + 2 * (j - i) as i32 - crate::padic::v_p_int(j as i64, self.ctx().p()) as i32)
                    .min()
                    .unwrap();
                let s = sum.unwrap_or_else(|| x.map(|c| Ok(c.map(|a| a.mul_exact_int(0)))).unwrap());
                return Ok((s, i - 1, tail.min(p)));
            }
            let term = y.map(|c| Ok(c.map(|a| a.div_exact_int(if i % 2 == 1 { i as i64 } else { -(i as i64) }))))?;
            sum = Some(match sum {
                Some(s) => s.add(&term)?,
                None => term,
            });
        }
        Err(Error::LogGammaNonconvergent(budget as u32))
    }

    /// Limit evaluator; compares with `series` at the digits both certify.
    fn log_limit(&self, base: &Pair, x: &ModuleVector, series: &ModuleVector) -> Result<LimitCheck> {
        let ctx = self.ctx();
        let one = PadicScalar::one(ctx, ctx.emax() as i32);
        let mut pair = base.clone();
        let mut prev: Option<ModuleVector> = None;
        let mut best: Option<(u32, i32, ModuleVector)> = None;
        let max_n = (self.lt.prec() / 2 + 2).max(4) as u32 + self.lt.prec() as u32;
        let mut stale = 0;
        for n in 0..=max_n {
            let l = self.apply_gamma_with(&pair.0, &pair.1, x)?.sub(x)?.scale(&one.mul_p_pow(-(n as i32)));
            if l.precision() <= 0 {
                break;
            }
            if let Some(pv) = &prev {
                let d = l.sub(pv)?;
                let a = if d.is_zero() { d.precision() } else { d.min_valuation() };
                if best.as_ref().is_none_or(|b| a > b.1) {
                    best = Some((n, a, l.clone()));
                    stale = 0;
                } else {
                    stale += 1;
                    if stale >= 3 {
                        break;
                    }
                }
            }
            prev = Some(l);
            pair = self.pair_pow(pair, ctx.p())?;
        }
        let (n, agreement, lim) = best.ok_or_else(|| Error::InternalInconsistency("limit evaluator produced no data".into()))?;
        let compared_at = series.precision().min(agreement).min(lim.precision());
        let d = series.sub(&lim)?;
        if !d.is_zero() && d.min_valuation() < compared_at {
            return Err(Error::InternalInconsistency(format!(
                "log gamma series and limit differ at valuation {} < {compared_at}",
                d.min_valuation()
            )));
        }
        Ok(LimitCheck { n, agreement, compared_at })
    }

    /// The `n` used for `β`: least with `v(p^n β) >= 1` and `exp(p^n β)` in
    /// the stored subgroup.
    fn nabla_unit(&self, beta: &PadicScalar) -> Result<(PadicScalar, PadicScalar)> {
        if beta.is_zero() || !beta.is_integral() {
            return Err(Error::Precondition(format!("beta must be a nonzero element of O_F, got {beta}")));
        }
        let mut n = (1 - beta.val_bound()).max(0);
        loop {
            let b = beta.mul_p_pow(n);
            let u = padic_exp(&b)?;
            match self.decompose(&u) {
                Ok(_) => return Ok((u, b)),
                Err(Error::Decomposition(_)) if n < 8 => n += 1,
                Err(e) => return Err(e),
            }
        }
    }

    /// `∇_β x = (p^n β)^(−1) (log γ_(exp(p^n β))) x`.
    pub fn nabla(&self, beta: &PadicScalar, x: &ModuleVector) -> Result<ModuleVector> {
        let (u, b) = self.nabla_unit(beta)?;
        let binv = b.inv()?;
        let n = self.lt.prec();
        let lg = self.log_gamma_to(&u, x, true, n + b.val_bound())?.value;
        Ok(lg.scale(&binv).truncate_prec(n))
    }

    /// `dΓ_β x = p^(−n) (log γ_(exp(p^n β))) x`.
    pub fn d_gamma(&self, beta: &PadicScalar, x: &ModuleVector) -> Result<ModuleVector> {
        let (u, b) = self.nabla_unit(beta)?;
        let k = b.val_bound() - beta.val_bound();
        let n = self.lt.prec();
        let lg = self.log_gamma_to(&u, x, true, n + k)?.value;
        Ok(lg.scale(&PadicScalar::one(self.ctx(), self.ctx().emax() as i32).mul_p_pow(-k)).truncate_prec(n))
    }

    /// Matrix of `∇_β − ∇_β'` (column `j` is the image of `e_j`), checked to
    /// be linear over the base on `T·e_j`.
    pub fn analytic_defect(&self, beta: &PadicScalar, beta2: &PadicScalar) -> Result<Mat> {
        let ctx = self.ctx();
        if ctx.deg() < 2 {
            return Err(Error::Precondition("F = Q_p has no independent pair in Lie Gamma".into()));
        }
        if !independent(beta, beta2) {
            return Err(Error::Precondition(format!("{beta} and {beta2} are not Z_p-independent")));
        }
        let w = self.window;
        let t = LaurentWindow::t(ctx, w);
        let mut cols = Vec::with_capacity(self.rank);
        for e in basis_vectors(self, w) {
            let d = self.nabla(beta, &e)?.sub(&self.nabla(beta2, &e)?)?;
            let te = e.mul_series(&t)?;
            let dt = self.nabla(beta, &te)?.sub(&self.nabla(beta2, &te)?)?;
            let lin = dt.sub(&d.mul_series(&t)?)?;
            if !lin.is_zero() {
                return Err(Error::NotBaseLinear(format!(
                    "defect is not base-linear: valuation {} below precision {}",
                    lin.min_valuation(),
                    lin.precision()
                )));
            }
            cols.push(d.coords().to_vec());
        }
        Ok(matrix::transpose(&cols))
    }

    /// F-analyticity for the `Z_p`-basis `β_1, …, β_d` (default `1, ω, …`).
    pub fn is_f_analytic(&self, basis: Option<&[PadicScalar]>) -> Result<Analyticity> {
        let ctx = self.ctx();
        let zero = PadicScalar::zero(ctx, ctx.emax() as i32);
        if ctx.deg() == 1 {
            return Ok(Analyticity { analytic: true, constants: Some(vec![zero]), defects: vec![] });
        }
        let default = default_basis(ctx);
        let basis = basis.unwrap_or(&default);
        let mut defects = Vec::new();
        let mut constants = Some(vec![zero]);
        for b in &basis[1..] {
            let d = self.analytic_defect(&basis[0], b)?;
            match (scalar_of(&d), constants.as_mut()) {
                (Some(c), Some(cs)) => cs.push(c),
                _ => constants = None,
            }
            defects.push(d);
        }
        let analytic = defects.iter().all(matrix::is_zero);
        Ok(Analyticity { analytic, constants, defects })
    }
}

/// `1, ω, …, ω^(d−1)`.
pub fn default_basis(ctx: &'static crate::padic::FieldCtx) -> Vec<PadicScalar> {
    let w = PadicScalar::omega(ctx, ctx.emax() as i32);
    (0..ctx.deg() as u64).map(|i| w.pow(i)).collect()
}

/// Some `2×2` minor of the coordinate matrix is nonzero at precision.
fn independent(a: &PadicScalar, b: &PadicScalar) -> bool {
    let d = a.deg();
    (0..d).any(|i| {
        (i + 1..d).any(|j| {
            let m = a.coordinate_scalar(i).mul(&b.coordinate_scalar(j)).sub(&a.coordinate_scalar(j).mul(&b.coordinate_scalar(i)));
            !m.is_zero()
        })
    })
}

/// `Some(c)` when `d = c·id` at precision.
pub fn scalar_of(d: &Mat) -> Option<PadicScalar> {
    let mut c: Option<PadicScalar> = None;
    for (i, row) in d.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j {
                if !x.is_zero() {
                    return None;
                }
                continue;
            }
            let k = matrix::as_constant(x)?;
            match &c {
                Some(c0) if !c0.eq_at_prec(&k) => return None,
                Some(_) => {}
                None => c = Some(k),
            }
        }
    }
    c
}
