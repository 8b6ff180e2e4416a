use num_rational::Rational64;
use serde::Serialize;

use super::LubinTateData;
use crate::error::{Error, Result};
use crate::padic::PadicScalar;
use crate::series::LaurentWindow;

/// Outcome of the valuation-gain search on one interval `[s, r]`.
#[derive(Debug, Clone, Serialize)]
pub struct GainReport {
    pub s: String,
    pub r: String,
    pub n: u32,
    /// Smallest observed `v((γ_u − 1)f) − v(f)` at the chosen `n`.
    pub min_gain: String,
}

/// Least `n ≤ budget` such that every sampled `u = 1 + p^n w` and sampled
/// `f` satisfy `v^{[s,r]}((γ_u − 1)f) ≥ v^{[s,r]}(f) + 2`.
pub fn valuation_gain_search(
    lt: &LubinTateData,
    s: Rational64,
    r: Rational64,
    ws: &[PadicScalar],
    fs: &[LaurentWindow],
    budget: u32,
) -> Result<GainReport> {
    let one = PadicScalar::one(lt.ctx(), lt.prec());
    let two = Rational64::from_integer(2);
    'n: for n in 1..=budget {
        let mut min_gain: Option<Rational64> = None;
        for w in ws {
            let u = one.add(&w.mul_p_pow(n as i32));
            for f in fs {
                let g = lt.gamma_act(&u, f)?.sub(f)?;
                let gain = g.v_box(s, r)?.value - f.v_box(s, r)?.value;
                if gain < two {
                    continue 'n;
                }
                min_gain = Some(min_gain.map_or(gain, |m| m.min(gain)));
            }
        }
        return Ok(GainReport {
            s: s.to_string(),
            r: r.to_string(),
            n,
            min_gain: min_gain.map(|g| g.to_string()).unwrap_or_else(|| "inf".into()),
        });
    }
    Err(Error::LogGammaNonconvergent(budget))
}
