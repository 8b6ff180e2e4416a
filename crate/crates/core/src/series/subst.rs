//! Composition `g(f(T))` for `f` with positive `T`-adic order.

use super::window::{exact_int, exact_zero, LaurentWindow};
use crate::error::{Error, Result};
use crate::padic::PadicScalar;

/// Precomputed powers of a substitution target `f = T^v·h` for repeated
/// application to series on a fixed input window.
///
/// With `v = n_min(f)` and `n_lo` the lowest nonconstant input index, the
/// output is known up to
/// `min(v·(n_max(g) + 1) − 1, v·n_lo + n_max(f) − v)`:
/// unseen terms of `g` only reach degree `v·(n_max(g) + 1)`, and `f^n` is
/// known on `[v·n, v·n + n_max(f) − v]`.
pub struct Substitution {
    v: i64,
    in_min: i64,
    in_max: i64,
    out_max: i64,
    /// `powers[n - in_min]` holds the coefficients of `f^n` from degree `v·n`.
    powers: Vec<Vec<PadicScalar>>,
}

impl Substitution {
    pub fn new(f: &LaurentWindow, in_min: i64, in_max: i64) -> Result<Self> {
        let f = &f.strip_leading_zeros();
        if f.n_min() < 1 {
            return Err(Error::BadSubstitutionTarget(format!(
                "substitution target has T-adic order {} <= 0",
                f.n_min()
            )));
        }
        if f.lowest_nonzero().is_none() {
            return Err(Error::BadSubstitutionTarget("target vanishes at precision".into()));
        }
        let ctx = f.ctx();
        let v = f.n_min();
        let h: Vec<PadicScalar> = f.coeffs().to_vec();
        if in_min < 0 && !h[0].is_unit() {
            return Err(Error::BadSubstitutionTarget(
                "Laurent input requires a unit leading coefficient".into(),
            ));
        }
        let n_lo = if in_min == 0 { 1 } else { in_min };
        let out_max = (v * (in_max + 1) - 1).min(v * n_lo + f.n_max() - v);
        if out_max < v * in_min.min(0) {
            return Err(Error::WindowCollapse);
        }
        let h_series = LaurentWindow::new(ctx, 0, h)?;
        let mut powers = Vec::with_capacity((in_max - in_min + 1).max(0) as usize);
        let len_for = |n: i64| -> usize { (out_max - v * n + 1).max(0) as usize };
        let one = LaurentWindow::constant(exact_int(ctx, 1), out_max.max(0) - v * in_min.min(0));
        let mut pos = one.clone();
        let mut neg = one.clone();
        let h_inv = if in_min < 0 { Some(h_series.inverse()?) } else { None };
        let mut table_pos: Vec<Vec<PadicScalar>> = Vec::new();
        let mut table_neg: Vec<Vec<PadicScalar>> = Vec::new();
        if in_max >= 0 {
            for n in 0..=in_max {
                if n > 0 {
                    let need = len_for(n) as i64 - 1;
                    pos = if need < 0 { pos.clone() } else { pos.mul_trunc(&h_series, need)? };
                }
                table_pos.push(take(&pos, len_for(n)));
            }
        }
        if in_min < 0 {
            let hi = h_inv.as_ref().unwrap();
            for n in 1..=(-in_min) {
                let need = len_for(-n) as i64 - 1;
                neg = neg.mul_trunc(hi, need.max(0))?;
                table_neg.push(take(&neg, len_for(-n)));
            }
        }
        for n in in_min..=in_max {
            if n >= 0 {
                powers.push(std::mem::take(&mut table_pos[n as usize]));
            } else {
                powers.push(std::mem::take(&mut table_neg[(-n - 1) as usize]));
            }
        }
        Ok(Substitution { v, in_min, in_max, out_max, powers })
    }

    pub fn out_max(&self) -> i64 {
        self.out_max
    }

    /// `g(f(T))` for `g` whose window matches this operator's input window
    /// (a narrower `n_max(g)` is accepted and shrinks the output).
    pub fn apply(&self, g: &LaurentWindow) -> Result<LaurentWindow> {
        if g.n_min() != self.in_min || g.n_max() > self.in_max {
            return Err(Error::Incompatible(format!(
                "substitution built for window [{}, {}], got [{}, {}]",
                self.in_min,
                self.in_max,
                g.n_min(),
                g.n_max()
            )));
        }
        let ctx = g.ctx();
        let out_max = if g.n_max() < self.in_max {
            self.out_max.min(self.v * (g.n_max() + 1) - 1)
        } else {
            self.out_max
        };
        let out_min = self.v * self.in_min.min(0);
        if out_max < out_min {
            return Err(Error::WindowCollapse);
        }
        let len = (out_max - out_min + 1) as usize;
        let mut acc: Vec<Option<PadicScalar>> = vec![None; len];
        for (n, gn) in g.terms() {
            let row = &self.powers[(n - self.in_min) as usize];
            let base = self.v * n - out_min;
            for (k, pk) in row.iter().enumerate() {
                let idx = base + k as i64;
                if idx as usize >= len {
                    break;
                }
                let t = gn.mul(pk);
                let slot = &mut acc[idx as usize];
                *slot = Some(match slot {
                    Some(s) => s.add(&t),
                    None => t,
                });
            }
        }
        let coeffs = acc.into_iter().map(|c| c.unwrap_or_else(|| exact_zero(ctx))).collect();
        LaurentWindow::new(ctx, out_min, coeffs)
    }
}

fn take(s: &LaurentWindow, len: usize) -> Vec<PadicScalar> {
    let ctx = s.ctx();
    (0..len as i64).map(|i| s.coeff(i).unwrap_or_else(|| exact_zero(ctx))).collect()
}

impl LaurentWindow {
    /// `g(f(T))` where `f` has positive `T`-adic order.
    pub fn substitute(&self, f: &LaurentWindow) -> Result<LaurentWindow> {
        Substitution::new(f, self.n_min(), self.n_max())?.apply(self)
    }
}
