//! Random inputs and oracles computed without the kernel's algorithms.

use std::sync::Arc;

use num_rational::Rational64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::lubin_tate::LubinTateData;
use crate::padic::{FieldCtx, PadicScalar};
use crate::series::LaurentWindow;

pub fn cyc(n: i32) -> Arc<LubinTateData> {
    Arc::new(LubinTateData::cyclotomic(3, n).unwrap())
}

pub fn std(d: usize, n: i32) -> Arc<LubinTateData> {
    Arc::new(LubinTateData::standard(3, d, n).unwrap())
}

pub fn exact(ctx: &'static FieldCtx, n: i64) -> PadicScalar {
    PadicScalar::from_int(ctx, n, ctx.emax() as i32)
}

/// Uniform element of `O_F / p^digits`, held exactly.
pub fn scalar(ctx: &'static FieldCtx, rng: &mut ChaCha8Rng, digits: u32) -> PadicScalar {
    let m = ctx.p().pow(digits) as i64;
    let c: Vec<i64> = (0..ctx.deg()).map(|_| rng.gen_range(0..m)).collect();
    PadicScalar::from_coeffs(ctx, &c, ctx.emax() as i32).unwrap()
}

pub fn nonzero_scalar(ctx: &'static FieldCtx, rng: &mut ChaCha8Rng, digits: u32) -> PadicScalar {
    loop {
        let x = scalar(ctx, rng, digits);
        if !x.is_zero() {
            return x;
        }
    }
}

/// `1 + p·w` for a random `w`.
pub fn principal_unit(ctx: &'static FieldCtx, rng: &mut ChaCha8Rng, digits: u32) -> PadicScalar {
    exact(ctx, 1).add(&scalar(ctx, rng, digits).mul_p_pow(1))
}

/// Series on `[n_min, n_max]` with small integer coefficients scaled by
/// random powers of `p`, known to `prec` digits.
pub fn series(ctx: &'static FieldCtx, rng: &mut ChaCha8Rng, n_min: i64, n_max: i64, prec: i32) -> LaurentWindow {
    let coeffs = (n_min..=n_max)
        .map(|_| {
            let k = rng.gen_range(0..3);
            let c: Vec<i64> = (0..ctx.deg()).map(|_| rng.gen_range(-40..40) * 3i64.pow(k)).collect();
            PadicScalar::from_coeffs(ctx, &c, prec).unwrap()
        })
        .collect();
    LaurentWindow::new(ctx, n_min, coeffs).unwrap()
}

/// `binom(a, k)` as `a(a−1)…(a−k+1)/k!` for an exact integer `a`.
pub fn binom(ctx: &'static FieldCtx, a: i64, k: usize) -> PadicScalar {
    let num = (0..k).fold(exact(ctx, 1), |acc, j| acc.mul(&exact(ctx, a - j as i64)));
    (1..=k as i64).fold(num, |acc, j| acc.div_exact_int(j))
}

/// Coefficients of `(1 + T)·log(1 + T)`: `[T^k] = (−1)^(k−1)/k + (−1)^k/(k−1)`.
pub fn one_plus_t_log(ctx: &'static FieldCtx, window: i64) -> LaurentWindow {
    let e = ctx.emax() as i32;
    let mut c = vec![PadicScalar::zero(ctx, e)];
    for k in 1..=window {
        let s = if k % 2 == 1 { 1 } else { -1 };
        let mut x = PadicScalar::from_ratio(ctx, s, k, e).unwrap();
        if k >= 2 {
            x = x.add(&PadicScalar::from_ratio(ctx, -s, k - 1, e).unwrap());
        }
        c.push(x);
    }
    LaurentWindow::new(ctx, 0, c).unwrap()
}

/// `inf_n v(a_n) + n·r` over the stored terms, with unseen terms bounded by
/// `min(0, worst stored valuation) + (n_max + 1)·r`.
pub fn annulus_by_definition(f: &LaurentWindow, r: Rational64) -> Rational64 {
    let mut floor = 0i64;
    let mut best: Option<Rational64> = None;
    for n in f.n_min()..=f.n_max() {
        let v = f.coeff(n).unwrap().val_bound() as i64;
        floor = floor.min(v);
        let x = Rational64::from_integer(v) + r * n;
        best = Some(best.map_or(x, |b| b.min(x)));
    }
    let unseen = Rational64::from_integer(floor) + r * (f.n_max() + 1);
    let exact_terms: Vec<Rational64> = (f.n_min()..=f.n_max())
        .filter(|&n| !f.coeff(n).unwrap().is_zero())
        .map(|n| Rational64::from_integer(f.coeff(n).unwrap().val_bound() as i64) + r * n)
        .collect();
    match exact_terms.into_iter().min() {
        Some(v) => v,
        None => best.unwrap().min(unseen),
    }
}

/// Minimum of the definition over 100 evenly spaced radii in `[s, r]`.
pub fn grid_box(f: &LaurentWindow, s: Rational64, r: Rational64) -> Rational64 {
    (0..100).map(|i| annulus_by_definition(f, s + (r - s) * Rational64::new(i, 99))).min().unwrap()
}
