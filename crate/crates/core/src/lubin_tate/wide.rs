//! `[a](T)` over `Z_p` with unbounded integers, for windows whose recursion
//! needs more digits than word-sized storage holds.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LubinTateData;
use crate::error::{Error, Result};
use crate::padic::PadicScalar;

/// An element of `Z_p` known modulo `p^prec`, representative in `[0, p^prec)`.
#[derive(Clone)]
struct Wide {
    v: BigInt,
    prec: i32,
}

struct Ring {
    p: BigInt,
    pows: Vec<BigInt>,
}

impl Ring {
    fn new(p: u64, max: i32) -> Self {
        let p = BigInt::from(p);
        let mut pows = vec![BigInt::one()];
        for i in 1..=max as usize {
            let next = &pows[i - 1] * &p;
            pows.push(next);
        }
        Ring { p, pows }
    }

    fn make(&self, v: BigInt, prec: i32) -> Wide {
        let prec = prec.clamp(0, self.pows.len() as i32 - 1);
        let m = &self.pows[prec as usize];
        let mut r = v % m;
        if r.is_negative() {
            r += m;
        }
        Wide { v: r, prec }
    }

    fn val(&self, x: &Wide) -> i32 {
        if x.v.is_zero() {
            return x.prec;
        }
        let mut v = 0;
        let mut n = x.v.clone();
        while (&n % &self.p).is_zero() {
            n /= &self.p;
            v += 1;
        }
        v
    }

    fn add(&self, a: &Wide, b: &Wide) -> Wide {
        self.make(&a.v + &b.v, a.prec.min(b.prec))
    }

    fn sub(&self, a: &Wide, b: &Wide) -> Wide {
        self.make(&a.v - &b.v, a.prec.min(b.prec))
    }

    fn mul(&self, a: &Wide, b: &Wide) -> Wide {
        let prec = (a.prec + self.val(b)).min(b.prec + self.val(a));
        self.make(&a.v * &b.v, prec)
    }

    /// `x / (p·u)` for an exact unit `u`.
    fn div_p_unit(&self, x: &Wide, u: &BigInt) -> Result<Wide> {
        if self.val(x) < 1 {
            return Err(Error::InternalInconsistency("[a] recursion: right side not divisible by p".into()));
        }
        let m = &self.pows[x.prec as usize];
        let uinv = u.modinv(m).ok_or_else(|| Error::InternalInconsistency("non-unit divisor".into()))?;
        let y = self.make(&x.v * uinv, x.prec);
        Ok(Wide { v: &y.v / &self.p, prec: x.prec - 1 })
    }
}

fn signed_rep(x: &PadicScalar) -> i128 {
    let m = x.ctx().modulus(x.ctx().emax()) as i128;
    let n = x.numerator()[0] as i128;
    if n > m / 2 {
        n - m
    } else {
        n
    }
}

impl LubinTateData {
    /// The recursion of `mult_by_at` in unbounded integers (`F = Q_p` only),
    /// carrying `work` digits.
    pub(super) fn mult_by_wide(&self, a: &PadicScalar, window: i64, work: i32, out_prec: i32) -> Result<Vec<PadicScalar>> {
        let ctx = self.ctx();
        if ctx.deg() != 1 {
            return Err(Error::PrecisionExhausted("wide [a] recursion needs F = Q_p".into()));
        }
        let exact = work + 64;
        let ring = Ring::new(ctx.p(), exact);
        let w = window as usize;
        let a_prec = if a.prec() >= ctx.emax() as i32 { work } else { a.prec() };
        let a_w = ring.make(BigInt::from(a.numerator()[0]), a_prec);
        let f: Vec<Wide> = self.f.iter().map(|c| ring.make(BigInt::from(signed_rep(c)), exact)).collect();
        let deg_f = (f.len() - 1).min(w);
        // exact powers of f
        let mut fpow: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); w + 1]; w + 1];
        fpow[0][0] = BigInt::one();
        for j in 1..=w {
            for k in 0..=w {
                let mut s = BigInt::zero();
                for (i, c) in f.iter().enumerate().take(k + 1) {
                    if !c.v.is_zero() {
                        s += &fpow[j - 1][k - i] * BigInt::from(signed_rep(&self.f[i]));
                    }
                }
                fpow[j][k] = s;
            }
        }
        let fp = |j: usize, k: usize| ring.make(fpow[j][k].clone(), exact);
        let zero = ring.make(BigInt::zero(), exact);
        let mut apow = vec![vec![zero.clone(); w + 1]; deg_f + 1];
        apow[1][1] = a_w;
        let pk = |k: usize| BigInt::one() - &ring.pows[k - 1];
        for k in 2..=w {
            for i in 2..=deg_f.min(k) {
                let mut s = zero.clone();
                for j in 1..=(k + 1 - i) {
                    s = ring.add(&s, &ring.mul(&apow[1][j], &apow[i - 1][k - j]));
                }
                apow[i][k] = s;
            }
            let mut rhs = zero.clone();
            for j in 1..k {
                rhs = ring.add(&rhs, &ring.mul(&apow[1][j], &fp(j, k)));
            }
            for i in 2..=deg_f.min(k) {
                rhs = ring.sub(&rhs, &ring.mul(&f[i], &apow[i][k]));
            }
            let c = ring.div_p_unit(&rhs, &pk(k))?;
            if c.prec < out_prec {
                return Err(Error::PrecisionExhausted(format!("[a] coefficient {k} known to {} < {out_prec} digits", c.prec)));
            }
            apow[1][k] = c;
        }
        let m = ring.pows[out_prec as usize].clone();
        Ok((0..=w)
            .map(|k| {
                if k == 0 {
                    return PadicScalar::zero(ctx, ctx.emax() as i32);
                }
                let v = (&apow[1][k].v % &m).to_i64().unwrap();
                PadicScalar::from_int(ctx, v, out_prec)
            })
            .collect())
    }
}
