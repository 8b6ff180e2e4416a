//! Annulus valuations `v^{r}` and `v^{[s,r]}` with exact rational radii.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use super::window::LaurentWindow;
use crate::error::{Error, Result};

/// Result of an annulus valuation on a finite window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnnulusValuation {
    pub value: Rational64,
    /// Set when unseen or zero-at-precision coefficients could lie below `value`.
    pub lower_bound_only: bool,
}

impl fmt::Display for AnnulusValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lower_bound_only {
            write!(f, ">= {}", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

impl LaurentWindow {
    /// `inf_n v_p(a_n) + n·r` over the window.
    ///
    /// Coefficients above `n_max` are assumed no worse than the worst stored
    /// valuation (capped at 0), giving the bound `floor + (n_max + 1)·r`; the
    /// result is flagged when that bound, or the precision bound of a
    /// coefficient that vanishes at precision, is at or below the computed
    /// infimum.
    pub fn v_annulus(&self, r: Rational64) -> AnnulusValuation {
        let mut exact_inf: Option<Rational64> = None;
        let mut bound_inf: Option<Rational64> = None;
        let mut floor = 0i32;
        for (n, c) in self.terms() {
            let val = c.valuation();
            floor = floor.min(val.bound());
            let x = Rational64::from_integer(val.bound() as i64) + r * n;
            let slot = if val.is_exact() { &mut exact_inf } else { &mut bound_inf };
            *slot = Some(slot.map_or(x, |y| y.min(x)));
        }
        let unseen = Rational64::from_integer(floor as i64) + r * (self.n_max() + 1);
        match exact_inf {
            Some(v) => {
                let hidden = bound_inf.is_some_and(|b| b <= v);
                AnnulusValuation { value: v, lower_bound_only: hidden || unseen < v }
            }
            None => {
                let v = bound_inf.unwrap().min(unseen);
                AnnulusValuation { value: v, lower_bound_only: true }
            }
        }
    }

    /// `inf_{s ≤ r' ≤ r} v^{r'}(f)`, computed by the endpoint rule.
    pub fn v_box(&self, s: Rational64, r: Rational64) -> Result<AnnulusValuation> {
        if s > r || s <= Rational64::zero() {
            return Err(Error::Precondition(format!("need 0 < s <= r, got s = {s}, r = {r}")));
        }
        let a = self.v_annulus(s);
        let b = self.v_annulus(r);
        Ok(if a.value < b.value {
            a
        } else if b.value < a.value {
            b
        } else {
            AnnulusValuation { value: a.value, lower_bound_only: a.lower_bound_only || b.lower_bound_only }
        })
    }
}
