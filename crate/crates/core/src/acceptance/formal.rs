//! Criteria 1-4: formal group, endomorphisms and valuations.

use num_rational::Rational64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::oracle::{self, binom, exact};
use super::{all_ok, err, Config};
use crate::batch;
use crate::lubin_tate::{valuation_gain_search, LubinTateData, MultiSeries};
use crate::padic::field_ctx;
use crate::series::LaurentWindow;

fn axioms(lt: &LubinTateData, deg: u32, n: i32) -> Result<(), String> {
    let ctx = lt.ctx();
    let g = lt.group_law(deg).map_err(err("group law"))?;
    if g.precision() < n {
        return Err(format!("{lt:?}: group law known to {} digits", g.precision()));
    }
    let x = MultiSeries::var(ctx, 2, deg, 0);
    let y = MultiSeries::var(ctx, 2, deg, 1);
    let zero = MultiSeries::zero(ctx, 2, deg);
    let sub = |args: &[MultiSeries]| g.substitute(args).map_err(err("substitute"));
    if !sub(&[y.clone(), x.clone()])?.eq_at_prec(&g) {
        return Err(format!("{lt:?}: not commutative"));
    }
    if !sub(&[x.clone(), zero.clone()])?.eq_at_prec(&x) || !sub(&[zero, y.clone()])?.eq_at_prec(&y) {
        return Err(format!("{lt:?}: 0 is not a unit"));
    }
    let v = |i| MultiSeries::var(ctx, 3, deg, i);
    let gxy = sub(&[v(0), v(1)])?;
    let gyz = sub(&[v(1), v(2)])?;
    if !sub(&[gxy, v(2)])?.eq_at_prec(&sub(&[v(0), gyz])?) {
        return Err(format!("{lt:?}: not associative to degree {deg}"));
    }
    Ok(())
}

pub fn group_axioms(cfg: &Config, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let n = cfg.prec;
    let lts = [oracle::cyc(n), oracle::std(1, n), oracle::std(2, n)];
    all_ok(batch::map(&lts, |lt| axioms(lt, 8, n)))?;
    let w = cfg.window;
    let mut jobs = Vec::new();
    for lt in &lts {
        for _ in 0..50 {
            let ctx = lt.ctx();
            jobs.push((lt.clone(), oracle::scalar(ctx, rng, n as u32), oracle::scalar(ctx, rng, n as u32)));
        }
    }
    all_ok(batch::map(&jobs, |(lt, a, b)| {
        let ma = lt.mult_by(a, w).map_err(err("[a]"))?;
        let mb = lt.mult_by(b, w).map_err(err("[b]"))?;
        let mab = lt.mult_by(&a.mul(b), w).map_err(err("[ab]"))?;
        let comp = ma.substitute(&mb).map_err(err("[a]([b])"))?;
        if comp.n_max() != w || !comp.eq_at_prec(&mab) || mab.precision() < n {
            return Err(format!("{lt:?}: [a][b] != [ab] for a = {a}, b = {b}"));
        }
        Ok(())
    }))?;
    Ok(format!("G commutative/unital/associative to degree 8 for 3 series; {} [a][b] = [ab] at window {w}", jobs.len()))
}

pub fn cyclotomic_oracle(cfg: &Config, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let lt = oracle::cyc(cfg.prec);
    let ctx = lt.ctx();
    let w = 40;
    let m = 3i64.pow(cfg.prec as u32);
    let a: Vec<i64> = (0..20).map(|_| rng.gen_range(1..m)).collect();
    all_ok(batch::map(&a, |&a| {
        let got = lt.mult_by(&exact(ctx, a), w).map_err(err("[a]"))?;
        for k in 1..=w {
            let want = binom(ctx, a, k as usize);
            if !got.coeff(k).unwrap().eq_mod(&want, cfg.prec) {
                return Err(format!("[{a}] coefficient {k}: {} vs {want}", got.coeff(k).unwrap()));
            }
        }
        Ok(())
    }))?;
    Ok(format!("20 multipliers agree with (1+T)^a - 1 to window {w} at {} digits", cfg.prec))
}

pub fn valuation_gain(cfg: &Config, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let n = cfg.prec;
    let q = |a, b| Rational64::new(a, b);
    let intervals = [(q(1, 4), q(1, 2)), (q(1, 2), q(1, 1)), (q(1, 1), q(2, 1))];
    let mut jobs = Vec::new();
    for lt in [oracle::cyc(n), oracle::std(1, n), oracle::std(2, n)] {
        for &(s, r) in &intervals {
            let ctx = lt.ctx();
            let ws: Vec<_> = (0..10).map(|_| oracle::scalar(ctx, rng, 6)).collect();
            let fs: Vec<_> = (0..10)
                .map(|_| {
                    let lo = rng.gen_range(-3..=0);
                    oracle::series(ctx, rng, lo, 20, n)
                })
                .collect();
            jobs.push((lt.clone(), s, r, ws, fs));
        }
    }
    let found = all_ok(batch::map(&jobs, |(lt, s, r, ws, fs)| {
        valuation_gain_search(lt, *s, *r, ws, fs, 6)
            .map(|rep| format!("{}:[{s},{r}] n={}", lt.kind(), rep.n))
            .map_err(|e| format!("{}:[{s},{r}]: {e}", lt.kind()))
    }))?;
    Ok(format!("100 samples each, gain >= 2: {}", found.join(", ")))
}

pub fn endpoint_rule(_cfg: &Config, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut jobs: Vec<(LaurentWindow, Rational64, Rational64)> = Vec::new();
    for i in 0..200 {
        let ctx = field_ctx(3, 1 + i % 2).unwrap();
        let lo = rng.gen_range(-6..=0);
        let hi = rng.gen_range(lo..lo + 20);
        let prec = rng.gen_range(4..12);
        let f = oracle::series(ctx, rng, lo, hi, prec);
        let s = Rational64::new(rng.gen_range(1..40), rng.gen_range(1..10));
        let r = s + Rational64::new(rng.gen_range(0..40), rng.gen_range(1..10));
        jobs.push((f, s, r));
    }
    all_ok(batch::map(&jobs, |(f, s, r)| {
        let boxed = f.v_box(*s, *r).map_err(err("v_box"))?.value;
        let grid = oracle::grid_box(f, *s, *r);
        if boxed != grid {
            return Err(format!("v_box[{s},{r}] = {boxed}, grid = {grid} for {f}"));
        }
        Ok(())
    }))?;
    Ok("200 windows: endpoint rule equals the 100-point grid minimum".into())
}
