use super::LubinTateData;
use crate::error::{Error, Result};
use crate::padic::PadicScalar;
use crate::series::{exact_zero, LaurentWindow};

impl LubinTateData {
    /// `g ↦ f_π(g)` by Horner's rule on `[0, window]`.
    fn apply_f(&self, g: &LaurentWindow, window: i64) -> Result<LaurentWindow> {
        let d = self.f.len() - 1;
        let mut acc = LaurentWindow::constant(self.f[d], window);
        for i in (1..d).rev() {
            acc = acc.mul_trunc(g, window)?.add(&LaurentWindow::constant(self.f[i], window))?;
        }
        acc.mul_trunc(g, window)
    }

    /// `log_LT` on `[0, window]` at the working precision.
    pub fn formal_log(&self, window: i64) -> Result<LaurentWindow> {
        self.formal_log_at(window, self.prec)
    }

    /// `log_LT = lim p^{−n} f_π^{∘n}(T)`, iterated until two successive
    /// terms agree to `prec + 1` digits on the whole window. The iterates
    /// `f_π^{∘n}` are integral and computed exactly modulo `p^emax`, so the
    /// budget is also bounded by `emax − prec − 1`.
    pub fn formal_log_at(&self, window: i64, prec: i32) -> Result<LaurentWindow> {
        if window < 1 {
            return Err(Error::WindowCollapse);
        }
        if let Some(l) = self.logs.lock().unwrap().get(&(window, prec)) {
            return Ok(l.clone());
        }
        let budget = (2 * window as usize).max((self.ctx.emax() as i32 - prec) as usize);
        let target = prec + 1;
        let mut g = LaurentWindow::t(self.ctx, window);
        let mut prev: Option<LaurentWindow> = None;
        for n in 1..=budget {
            g = self.apply_f(&g, window)?;
            let cur = g.map(|c| c.mul_p_pow(-(n as i32)));
            if cur.precision() < target {
                return Err(Error::NoStabilization(n));
            }
            if let Some(pr) = &prev {
                if cur.eq_mod(pr, target) {
                    let mut out = cur.truncate_prec(prec);
                    out = LaurentWindow::new(self.ctx, 0, {
                        let mut c = out.coeffs().to_vec();
                        c[0] = exact_zero(self.ctx);
                        c
                    })?;
                    self.logs.lock().unwrap().insert((window, prec), out.clone());
                    return Ok(out);
                }
            }
            prev = Some(cur);
        }
        Err(Error::NoStabilization(budget))
    }

    /// `exp_LT`, the compositional inverse of `log_LT`, on `[0, window]`.
    /// Coefficients carry the precision loss forced by their denominators.
    pub fn formal_exp(&self, window: i64) -> Result<LaurentWindow> {
        compositional_inverse(&self.formal_log(window)?)
    }
}

/// Compositional inverse of a power series `l` with `l(0) = 0` and unit
/// (after division, invertible) linear term, solved degree by degree.
pub fn compositional_inverse(l: &LaurentWindow) -> Result<LaurentWindow> {
    let ctx = l.ctx();
    if l.n_min() < 0 || l.n_max() < 1 {
        return Err(Error::WindowCollapse);
    }
    let w = l.n_max() as usize;
    let zero = exact_zero(ctx);
    let c: Vec<PadicScalar> = (0..=w as i64).map(|k| l.coeff(k).unwrap()).collect();
    if !c[0].is_zero() {
        return Err(Error::BadSubstitutionTarget("series has a constant term".into()));
    }
    let l1_inv = c[1].inv().map_err(|_| Error::NonInvertible("linear coefficient vanishes".into()))?;
    // epow[i][k] = [E^i]_k
    let mut epow = vec![vec![zero; w + 1]; w + 1];
    epow[1][1] = l1_inv;
    for k in 2..=w {
        let mut s = zero;
        for i in 2..=k {
            let mut t = zero;
            for j in 1..=(k + 1 - i) {
                t = t.add(&epow[1][j].mul(&epow[i - 1][k - j]));
            }
            epow[i][k] = t;
            s = s.add(&c[i].mul(&t));
        }
        epow[1][k] = s.neg().mul(&l1_inv);
    }
    let mut coeffs = std::mem::take(&mut epow[1]);
    coeffs[0] = zero;
    LaurentWindow::new(ctx, 0, coeffs)
}
