use std::fmt;

use crate::error::{Error, Result};
use crate::padic::{FieldCtx, PadicScalar};

/// Truncated Laurent series `Σ_{n ≥ n_min} a_n T^n` over [`PadicScalar`].
///
/// Coefficients below `n_min` are exactly zero (finite principal part);
/// coefficients above `n_max` are unknown. Every operation returns the largest
/// window on which its output is provably correct.
#[derive(Clone)]
pub struct LaurentWindow {
    ctx: &'static FieldCtx,
    n_min: i64,
    coeffs: Vec<PadicScalar>,
}

/// An exactly-known zero.
pub(crate) fn exact_zero(ctx: &'static FieldCtx) -> PadicScalar {
    PadicScalar::zero(ctx, ctx.emax() as i32)
}

pub(crate) fn exact_int(ctx: &'static FieldCtx, n: i64) -> PadicScalar {
    PadicScalar::from_int(ctx, n, ctx.emax() as i32)
}

impl LaurentWindow {
    /// Window `[n_min, n_min + coeffs.len() - 1]`.
    pub fn new(ctx: &'static FieldCtx, n_min: i64, coeffs: Vec<PadicScalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::WindowCollapse);
        }
        if coeffs.iter().any(|c| !std::ptr::eq(c.ctx(), ctx)) {
            return Err(Error::Incompatible("coefficient from a different field".into()));
        }
        Ok(LaurentWindow { ctx, n_min, coeffs })
    }

    pub fn zero(ctx: &'static FieldCtx, n_max: i64) -> Self {
        Self::constant(exact_zero(ctx), n_max)
    }

    /// The constant `c`, known exactly (zero) up to `T^n_max`.
    pub fn constant(c: PadicScalar, n_max: i64) -> Self {
        let ctx = c.ctx();
        let mut coeffs = vec![exact_zero(ctx); (n_max.max(0) + 1) as usize];
        coeffs[0] = c;
        LaurentWindow { ctx, n_min: 0, coeffs }
    }

    /// `c·T^k` known up to `T^n_max`; the window starts at `min(k, 0)`.
    pub fn monomial(c: PadicScalar, k: i64, n_max: i64) -> Result<Self> {
        let ctx = c.ctx();
        let n_min = k.min(0);
        if n_max < k.max(n_min) {
            return Err(Error::WindowCollapse);
        }
        let mut coeffs = vec![exact_zero(ctx); (n_max - n_min + 1) as usize];
        coeffs[(k - n_min) as usize] = c;
        Ok(LaurentWindow { ctx, n_min, coeffs })
    }

    /// The variable `T` with window `[0, n_max]`.
    pub fn t(ctx: &'static FieldCtx, n_max: i64) -> Self {
        Self::monomial(exact_int(ctx, 1), 1, n_max.max(1)).unwrap()
    }

    /// Integral power series from integer coefficients `a_0, a_1, ...`.
    pub fn from_ints(ctx: &'static FieldCtx, coeffs: &[i64], prec: i32) -> Self {
        let coeffs = coeffs.iter().map(|&c| PadicScalar::from_int(ctx, c, prec)).collect();
        LaurentWindow { ctx, n_min: 0, coeffs }
    }

    pub fn ctx(&self) -> &'static FieldCtx {
        self.ctx
    }
    pub fn n_min(&self) -> i64 {
        self.n_min
    }
    pub fn n_max(&self) -> i64 {
        self.n_min + self.coeffs.len() as i64 - 1
    }
    pub fn coeffs(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    /// Coefficient of `T^n`: exact zero below the window, `None` above it.
    pub fn coeff(&self, n: i64) -> Option<PadicScalar> {
        if n < self.n_min {
            Some(exact_zero(self.ctx))
        } else if n > self.n_max() {
            None
        } else {
            Some(self.coeffs[(n - self.n_min) as usize])
        }
    }

    /// Iterator over `(n, a_n)` in the window.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &PadicScalar)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.n_min + i as i64, c))
    }

    /// Smallest absolute precision over the window.
    pub fn precision(&self) -> i32 {
        self.coeffs.iter().map(|c| c.prec()).min().unwrap()
    }

    pub fn is_power_series(&self) -> bool {
        self.n_min >= 0
    }

    /// Lowest index whose coefficient is nonzero at precision.
    pub fn lowest_nonzero(&self) -> Option<i64> {
        self.terms().find(|(_, c)| !c.is_zero()).map(|(n, _)| n)
    }

    /// The same series with leading exactly-zero coefficients removed from
    /// the window (`T`-adic order made explicit).
    pub fn strip_leading_zeros(&self) -> Self {
        let emax = self.ctx.emax() as i32;
        let skip = self.coeffs.iter().take(self.coeffs.len() - 1).take_while(|c| c.is_zero() && c.prec() >= emax).count();
        LaurentWindow { ctx: self.ctx, n_min: self.n_min + skip as i64, coeffs: self.coeffs[skip..].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if std::ptr::eq(self.ctx, other.ctx) {
            Ok(())
        } else {
            Err(Error::Incompatible("series over different coefficient fields".into()))
        }
    }

    /// Restrict the window to `n ≤ n_max`.
    pub fn truncate(&self, n_max: i64) -> Result<Self> {
        if n_max < self.n_min {
            return Err(Error::WindowCollapse);
        }
        let keep = ((n_max - self.n_min + 1) as usize).min(self.coeffs.len());
        Ok(LaurentWindow { ctx: self.ctx, n_min: self.n_min, coeffs: self.coeffs[..keep].to_vec() })
    }

    /// Drop every coefficient's precision to at most `prec`.
    pub fn truncate_prec(&self, prec: i32) -> Self {
        self.map(|c| c.truncate(prec))
    }

    pub fn map(&self, f: impl Fn(&PadicScalar) -> PadicScalar) -> Self {
        LaurentWindow { ctx: self.ctx, n_min: self.n_min, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let lo = self.n_min.min(other.n_min);
        let hi = self.n_max().min(other.n_max());
        if hi < lo {
            return Err(Error::WindowCollapse);
        }
        let coeffs = (lo..=hi)
            .map(|n| self.coeff(n).unwrap().add(&other.coeff(n).unwrap()))
            .collect();
        Ok(LaurentWindow { ctx: self.ctx, n_min: lo, coeffs })
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        self.map(|a| a.mul(c))
    }

    /// Multiply by `T^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentWindow { ctx: self.ctx, n_min: self.n_min + k, coeffs: self.coeffs.clone() }
    }

    /// Cauchy product; `n_max' = min(n_max(f) + n_min(g), n_max(g) + n_min(f))`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let lo = self.n_min + other.n_min;
        let hi = (self.n_max() + other.n_min).min(other.n_max() + self.n_min);
        self.mul_to(other, lo, hi)
    }

    /// Cauchy product truncated at `n_max` (no wider than the provable window).
    pub fn mul_trunc(&self, other: &Self, n_max: i64) -> Result<Self> {
        self.check(other)?;
        let lo = self.n_min + other.n_min;
        let hi = (self.n_max() + other.n_min).min(other.n_max() + self.n_min).min(n_max);
        self.mul_to(other, lo, hi)
    }

    fn mul_to(&self, other: &Self, lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::WindowCollapse);
        }
        let len = (hi - lo + 1) as usize;
        let mut out: Vec<Option<PadicScalar>> = vec![None; len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= len {
                    break;
                }
                let t = a.mul(b);
                out[k] = Some(match out[k] {
                    Some(s) => s.add(&t),
                    None => t,
                });
            }
        }
        let coeffs = out.into_iter().map(|c| c.unwrap_or_else(|| exact_zero(self.ctx))).collect();
        Ok(LaurentWindow { ctx: self.ctx, n_min: lo, coeffs })
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut result = LaurentWindow::constant(exact_int(self.ctx, 1), self.n_max().max(0));
        for _ in 0..n {
            result = result.mul(self)?;
        }
        Ok(result)
    }

    /// Multiplicative inverse of `T^k·g` with `g(0)` nonzero at precision,
    /// where `k = n_min`.
    pub fn inverse(&self) -> Result<Self> {
        let g0 = self.coeffs[0];
        if g0.is_zero() {
            return Err(Error::NonInvertible("leading coefficient vanishes at precision".into()));
        }
        let len = self.coeffs.len();
        let inv0 = g0.inv()?;
        let mut out = vec![inv0];
        for k in 1..len {
            let mut s = exact_zero(self.ctx);
            for i in 1..=k {
                s = s.add(&self.coeffs[i].mul(&out[k - i]));
            }
            out.push(s.neg().mul(&inv0));
        }
        Ok(LaurentWindow { ctx: self.ctx, n_min: -self.n_min, coeffs: out })
    }

    /// Formal derivative `d/dT`.
    pub fn derivative(&self) -> Result<Self> {
        if self.n_max() == self.n_min && self.n_min == 0 {
            return Ok(LaurentWindow::zero(self.ctx, 0));
        }
        let lo = if self.n_min == 0 { 0 } else { self.n_min - 1 };
        let hi = self.n_max() - 1;
        if hi < lo {
            return Err(Error::WindowCollapse);
        }
        let coeffs = (lo..=hi)
            .map(|n| {
                let k = n + 1;
                self.coeff(k).unwrap().mul_exact_int(k)
            })
            .collect();
        Ok(LaurentWindow { ctx: self.ctx, n_min: lo, coeffs })
    }

    /// Coefficientwise equality at precision on the common window.
    pub fn eq_at_prec(&self, other: &Self) -> bool {
        match self.sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    /// Coefficientwise agreement modulo `p^n` on `[lo, hi] ∩` both windows.
    pub fn eq_mod(&self, other: &Self, n: i32) -> bool {
        match self.sub(other) {
            Ok(d) => d.coeffs.iter().all(|c| c.prec() >= n && c.val_bound() >= n),
            Err(_) => false,
        }
    }

    /// Minimum over the window of `v_p(a_n)` (lower bounds for zero-at-precision
    /// coefficients).
    pub fn min_coeff_valuation(&self) -> i32 {
        self.coeffs.iter().map(|c| c.val_bound()).min().unwrap()
    }
}

impl fmt::Display for LaurentWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let body = c.to_string();
            let body = body.split(" + O(").next().unwrap();
            match n {
                0 => write!(f, "({body})")?,
                1 => write!(f, "({body})*T")?,
                _ => write!(f, "({body})*T^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(T^{}) [prec {}]", self.n_max() + 1, self.precision())
    }
}

impl fmt::Debug for LaurentWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
