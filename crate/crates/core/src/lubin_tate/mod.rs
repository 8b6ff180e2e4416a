//! Lubin-Tate formal groups for an unramified `F` with uniformizer `p`.

mod gain;
mod wide;
mod log;
mod multi;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{field_ctx, FieldCtx, PadicScalar};
use crate::series::{exact_int, exact_zero, LaurentWindow, Substitution};

/// (unit numerator, shift, prec) or `None` for `φ`, plus the input window.
type SubstKey = (Option<(Vec<u64>, u32, i32)>, i64, i64);

pub use gain::{valuation_gain_search, GainReport};
pub use log::compositional_inverse;
pub use multi::MultiSeries;

pub const DEFAULT_PREC: i32 = 12;
pub const DEFAULT_WINDOW: i64 = 60;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FpiKind {
    /// `pT + T^q`
    Standard,
    /// `(1+T)^p − 1`, only for `F = Q_p`.
    Cyclotomic,
    /// Explicit polynomial `a_1 T + a_2 T^2 + …`.
    Coeffs(Vec<i64>),
}

impl fmt::Display for FpiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FpiKind::Standard => write!(f, "standard"),
            FpiKind::Cyclotomic => write!(f, "cyclotomic"),
            FpiKind::Coeffs(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "coeffs:{}", parts.join(","))
            }
        }
    }
}

impl std::str::FromStr for FpiKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(FpiKind::Standard),
            "cyclotomic" => Ok(FpiKind::Cyclotomic),
            _ => {
                let body = s
                    .strip_prefix("coeffs:")
                    .ok_or_else(|| Error::Parse(format!("unknown f_pi {s:?}")))?;
                body.split(',')
                    .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad coefficient {t:?}"))))
                    .collect::<Result<Vec<_>>>()
                    .map(FpiKind::Coeffs)
            }
        }
    }
}

/// `{"p", "deg", "f", "prec"}` with `f` as accepted by [`FpiKind`]'s parser.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LtJson {
    pub p: u64,
    pub deg: usize,
    pub f: String,
    pub prec: i32,
}

type PowerTable = Arc<Vec<Vec<PadicScalar>>>;

/// A Lubin-Tate series `f_π` for `π = p` together with caches of `[a](T)`,
/// the formal logarithm and powers of `f_π`.
pub struct LubinTateData {
    ctx: &'static FieldCtx,
    kind: FpiKind,
    /// Exact coefficients of `f_π`, index 0 is the constant term.
    f: Vec<PadicScalar>,
    prec: i32,
    endo: Mutex<HashMap<(Vec<u64>, u32, i32, i64), LaurentWindow>>,
    fpow: Mutex<HashMap<i64, PowerTable>>,
    logs: Mutex<HashMap<(i64, i32), LaurentWindow>>,
    variants: Mutex<HashMap<i32, Arc<LubinTateData>>>,
    substs: Mutex<HashMap<SubstKey, Arc<Substitution>>>,
}

impl fmt::Debug for LubinTateData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LubinTate(p={}, d={}, f={}, N={})", self.ctx.p(), self.ctx.deg(), self.kind, self.prec)
    }
}

impl Clone for LubinTateData {
    fn clone(&self) -> Self {
        Self::with_series(self.ctx, self.kind.clone(), self.f.clone(), self.prec)
    }
}

impl LubinTateData {
    fn with_series(ctx: &'static FieldCtx, kind: FpiKind, f: Vec<PadicScalar>, prec: i32) -> Self {
        LubinTateData {
            ctx,
            kind,
            f,
            prec,
            endo: Mutex::new(HashMap::new()),
            fpow: Mutex::new(HashMap::new()),
            logs: Mutex::new(HashMap::new()),
            variants: Mutex::new(HashMap::new()),
            substs: Mutex::new(HashMap::new()),
        }
    }

    pub fn new(ctx: &'static FieldCtx, kind: FpiKind, prec: i32) -> Result<Self> {
        if prec < 1 || prec >= ctx.emax() as i32 {
            return Err(Error::Precondition(format!("precision {prec} outside 1..{}", ctx.emax())));
        }
        let p = ctx.p() as i64;
        let q = ctx.q() as usize;
        let ints: Vec<i64> = match &kind {
            FpiKind::Standard => {
                let mut c = vec![0i64; q + 1];
                c[1] = p;
                c[q] = 1;
                c
            }
            FpiKind::Cyclotomic => {
                if ctx.deg() != 1 {
                    return Err(Error::Precondition("cyclotomic f_pi needs deg = 1".into()));
                }
                let mut c = vec![0i64; q + 1];
                let mut b = 1i64;
                for k in 1..=q {
                    b = b * (p - k as i64 + 1) / k as i64;
                    c[k] = b;
                }
                c
            }
            FpiKind::Coeffs(a) => {
                let mut c = vec![0i64];
                c.extend_from_slice(a);
                c
            }
        };
        if ints.len() < 2 || ints[1] != p {
            return Err(Error::Precondition("f_pi must be pT modulo degree 2".into()));
        }
        if ints.len() <= q {
            return Err(Error::Precondition(format!("f_pi must have degree >= q = {q}")));
        }
        for (k, &c) in ints.iter().enumerate().skip(2) {
            let target = if k == q { 1 } else { 0 };
            if (c - target).rem_euclid(p) != 0 {
                return Err(Error::Precondition(format!("f_pi is not T^q modulo p (coefficient of T^{k})")));
            }
        }
        let f = ints.iter().map(|&c| exact_int(ctx, c)).collect();
        Ok(Self::with_series(ctx, kind, f, prec))
    }

    pub fn standard(p: u64, deg: usize, prec: i32) -> Result<Self> {
        Self::new(field_ctx(p, deg)?, FpiKind::Standard, prec)
    }

    pub fn cyclotomic(p: u64, prec: i32) -> Result<Self> {
        Self::new(field_ctx(p, 1)?, FpiKind::Cyclotomic, prec)
    }

    pub fn to_json(&self) -> LtJson {
        LtJson { p: self.ctx.p(), deg: self.ctx.deg(), f: self.kind.to_string(), prec: self.prec }
    }

    pub fn from_json(j: &LtJson) -> Result<Self> {
        Self::new(field_ctx(j.p, j.deg)?, j.f.parse()?, j.prec)
    }

    pub fn ctx(&self) -> &'static FieldCtx {
        self.ctx
    }
    pub fn kind(&self) -> &FpiKind {
        &self.kind
    }
    pub fn p(&self) -> u64 {
        self.ctx.p()
    }
    pub fn q(&self) -> u64 {
        self.ctx.q()
    }
    /// Working `p`-adic precision `N`.
    pub fn prec(&self) -> i32 {
        self.prec
    }

    /// A copy working at precision `prec` (caches are not shared).
    pub fn at_prec(&self, prec: i32) -> Result<Self> {
        Self::new(self.ctx, self.kind.clone(), prec)
    }

    /// A shared copy at precision `prec`, cached on `self`.
    pub fn at_prec_shared(&self, prec: i32) -> Result<Arc<Self>> {
        if let Some(v) = self.variants.lock().unwrap().get(&prec) {
            return Ok(v.clone());
        }
        let v = Arc::new(self.at_prec(prec)?);
        self.variants.lock().unwrap().insert(prec, v.clone());
        Ok(v)
    }

    /// The largest precision at which `[u]` on `window` still fits in
    /// storage with guard digits.
    pub fn max_prec_for(&self, window: i64) -> i32 {
        self.ctx.emax() as i32 - self.guard(window) - 2
    }

    /// `f_π` as an exact series on `[0, window]`.
    pub fn f_series(&self, window: i64) -> LaurentWindow {
        let coeffs = (0..=window.max(1) as usize)
            .map(|k| self.f.get(k).copied().unwrap_or_else(|| exact_zero(self.ctx)))
            .collect();
        LaurentWindow::new(self.ctx, 0, coeffs).unwrap()
    }

    /// Exact coefficients `f_0, …, f_deg` of `f_π`.
    pub fn f_coeffs(&self) -> &[PadicScalar] {
        &self.f
    }

    /// Guard digits for the `[a]` recursion: precision is lost only along
    /// chains `k → k/q`, so `log_q(window)` plus slack suffices.
    fn guard(&self, window: i64) -> i32 {
        self.log_q_floor(window) + 3
    }

    fn log_q_floor(&self, window: i64) -> i32 {
        let mut g = 0;
        let mut w = window.max(1) as u64;
        while w >= self.q() {
            w /= self.q();
            g += 1;
        }
        g
    }

    /// Exact `f_π^j` on `[0, window]` for `j = 0..=window`.
    fn f_powers(&self, window: i64) -> PowerTable {
        if let Some(t) = self.fpow.lock().unwrap().get(&window) {
            return t.clone();
        }
        let f = self.f_series(window).truncate(window).unwrap();
        let mut table = Vec::with_capacity(window as usize + 1);
        let mut cur = LaurentWindow::constant(exact_int(self.ctx, 1), window);
        for _ in 0..=window {
            table.push(cur.coeffs().to_vec());
            cur = cur.mul_trunc(&f, window).unwrap();
        }
        let t = Arc::new(table);
        self.fpow.lock().unwrap().insert(window, t.clone());
        t
    }

    /// `[a](T)` on `[0, window]`: the power series with linear term `aT`
    /// commuting with `f_π`, solved degree by degree from
    /// `f_π([a](T)) = [a](f_π(T))` with divisor `p − p^k`.
    ///
    /// Coefficient `k` depends on `a` modulo `p^(M + ⌊log_q k⌋)` only (the
    /// `a`-derivative is `log_LT(T)/log_LT'([a](T))`), so an inexact `a`
    /// known to `M` digits yields `min(N, M − ⌊log_q window⌋)` digits.
    pub fn mult_by(&self, a: &PadicScalar, window: i64) -> Result<LaurentWindow> {
        if !std::ptr::eq(a.ctx(), self.ctx) {
            return Err(Error::Incompatible("scalar from another field".into()));
        }
        if !a.is_integral() {
            return Err(Error::NotIntegral(format!("{a} is not in O_F")));
        }
        if window < 1 {
            return Err(Error::WindowCollapse);
        }
        let key = (a.numerator().to_vec(), a.shift(), a.prec(), window);
        if let Some(s) = self.endo.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let exact = a.prec() >= self.ctx.emax() as i32;
        let out_prec = if exact { self.prec } else { self.prec.min(a.prec() - self.log_q_floor(window)) };
        if out_prec < 1 {
            return Err(Error::PrecisionExhausted(format!("[a] on window {window} needs more digits of a")));
        }
        let emax = self.ctx.emax() as i32;
        let mut work = (out_prec + self.guard(window)).min(emax);
        let coeffs = loop {
            match self.mult_by_at(a, window, work, out_prec) {
                Ok(c) => break c,
                Err(Error::PrecisionExhausted(_)) if work < emax => work = (work + 3).min(emax),
                Err(Error::PrecisionExhausted(_)) if self.ctx.deg() == 1 => break self.mult_by_wide_adaptive(a, window, out_prec)?,
                Err(e) => return Err(e),
            }
        };
        let out = LaurentWindow::new(self.ctx, 0, coeffs)?;
        self.endo.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// Wide-integer fallback: the recursion loses a tracked digit per step
    /// along chains of length about `k/(q−1)`, which exceeds word storage for
    /// `q = p` on long windows.
    fn mult_by_wide_adaptive(&self, a: &PadicScalar, window: i64, out_prec: i32) -> Result<Vec<PadicScalar>> {
        let q = self.q() as i64;
        let mut work = out_prec + ((window + q - 2) / (q - 1)) as i32 + 4;
        loop {
            match self.mult_by_wide(a, window, work, out_prec) {
                Err(Error::PrecisionExhausted(_)) if work < out_prec + window as i32 + 8 => work += 8,
                r => return r,
            }
        }
    }

    /// One pass of the `[a]` recursion with `a` lifted to `work` digits.
    fn mult_by_at(&self, a: &PadicScalar, window: i64, work: i32, out_prec: i32) -> Result<Vec<PadicScalar>> {
        let a_w = a.lift_to(work);
        let fpow = self.f_powers(window);
        let w = window as usize;
        let zero = exact_zero(self.ctx);
        let one = exact_int(self.ctx, 1);
        let p = exact_int(self.ctx, self.p() as i64);
        let deg_f = (self.f.len() - 1).min(w);
        // apow[i][k] = [A^i]_k for the partially known A = Σ c_j T^j.
        let mut apow = vec![vec![zero; w + 1]; deg_f + 1];
        apow[1][1] = a_w;
        for k in 2..=w {
            for i in 2..=deg_f.min(k) {
                let mut s = zero;
                for j in 1..=(k + 1 - i) {
                    s = s.add(&apow[1][j].mul(&apow[i - 1][k - j]));
                }
                apow[i][k] = s;
            }
            let mut rhs = zero;
            for j in 1..k {
                rhs = rhs.add(&apow[1][j].mul(&fpow[j][k]));
            }
            for i in 2..=deg_f.min(k) {
                rhs = rhs.sub(&self.f[i].mul(&apow[i][k]));
            }
            let div = p.mul(&one.sub(&one.mul_p_pow(k as i32 - 1)));
            let c = rhs.div(&div)?;
            if c.prec() < out_prec {
                return Err(Error::PrecisionExhausted(format!(
                    "[a] coefficient {k} known to {} < {out_prec} digits",
                    c.prec()
                )));
            }
            apow[1][k] = c;
        }
        let mut coeffs: Vec<PadicScalar> = apow[1].iter().map(|c| c.truncate(out_prec)).collect();
        coeffs[0] = zero;
        Ok(coeffs)
    }

    /// `φ_q(g) = g(f_π(T))`.
    pub fn phi_act(&self, g: &LaurentWindow) -> Result<LaurentWindow> {
        let w = g.n_max() - g.n_min().min(0) + 1;
        self.cached_subst(None, g, || Ok(self.f_series(w)))?.apply(g)
    }

    /// `γ_u(g) = g([u](T))` for `u ∈ O_F^×`.
    pub fn gamma_act(&self, u: &PadicScalar, g: &LaurentWindow) -> Result<LaurentWindow> {
        if !u.is_unit() {
            return Err(Error::NotAUnit(format!("{u}")));
        }
        let w = g.n_max() - g.n_min().min(0) + 1;
        let key = Some((u.numerator().to_vec(), u.shift(), u.prec()));
        self.cached_subst(key, g, || self.mult_by(u, w))?.apply(g)
    }

    fn cached_subst(
        &self,
        unit: Option<(Vec<u64>, u32, i32)>,
        g: &LaurentWindow,
        target: impl FnOnce() -> Result<LaurentWindow>,
    ) -> Result<Arc<Substitution>> {
        let key = (unit, g.n_min(), g.n_max());
        if let Some(s) = self.substs.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let s = Arc::new(Substitution::new(&target()?, g.n_min(), g.n_max())?);
        self.substs.lock().unwrap().insert(key, s.clone());
        Ok(s)
    }
}
