//! Criteria 5-8: `log γ`, `∇`, `dΓ` and F-analyticity.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::oracle::{self, exact};
use super::{all_ok, err, Config};
use crate::batch;
use crate::lubin_tate::LubinTateData;
use crate::padic::PadicScalar;
use crate::phigamma::{ModuleVector, PhiGammaModule, TwistCharacter};
use crate::series::LaurentWindow;

/// Trivial and rank-one character modules over the three stock bases.
pub fn stock_modules(n: i32, w: i64) -> Vec<PhiGammaModule> {
    let mut out = Vec::new();
    for lt in [oracle::cyc(n), oracle::std(1, n), oracle::std(2, n)] {
        let ctx = lt.ctx();
        out.push(PhiGammaModule::trivial(lt.clone(), w).unwrap());
        let id = TwistCharacter::identity(ctx).unwrap();
        out.push(PhiGammaModule::rank1_from_character(lt.clone(), &id, w).unwrap().with_label("R(id)"));
        if ctx.deg() == 2 {
            let fr = TwistCharacter::frobenius(ctx).unwrap();
            out.push(PhiGammaModule::rank1_from_character(lt.clone(), &fr, w).unwrap().with_label("R(frob)"));
            let tor = TwistCharacter::torsion(ctx, 2);
            out.push(PhiGammaModule::rank1_from_character(lt.clone(), &tor, w).unwrap().with_label("R(tors)"));
        }
    }
    out
}

/// Integer coefficients are exact, so they are tagged at full storage precision.
fn vector(m: &PhiGammaModule, rng: &mut ChaCha8Rng, w: i64) -> ModuleVector {
    let n = m.ctx().emax() as i32;
    ModuleVector::new((0..m.rank()).map(|_| oracle::series(m.ctx(), rng, 0, w, n)).collect()).unwrap()
}

pub fn dual_evaluation(cfg: &Config, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let w = 20;
    let mods = stock_modules(cfg.prec, w);
    let jobs: Vec<_> = (0..50)
        .map(|_| {
            let m = mods[rng.gen_range(0..mods.len())].clone();
            let u = oracle::principal_unit(m.ctx(), rng, cfg.prec as u32);
            let x = vector(&m, rng, w);
            (m, u, x)
        })
        .collect();
    let reports = all_ok(batch::map(&jobs, |(m, u, x)| {
        let rep = m.log_gamma_report(u, x, true).map_err(|e| format!("{} u = {u}: {e}", m.label()))?;
        Ok(rep.limit.unwrap().compared_at)
    }))?;
    let worst = *reports.iter().min().unwrap();
    if worst < cfg.prec {
        return Err(format!("series and limit only compared at {worst} < {} digits", cfg.prec));
    }
    Ok(format!("50 triples agree; compared at >= {worst} digits"))
}

pub fn nabla_oracles(cfg: &Config, _rng: &mut ChaCha8Rng) -> Result<String, String> {
    let n = cfg.prec;
    let w = 30;
    let cases: Vec<(Arc<LubinTateData>, bool)> = vec![(oracle::cyc(n), true), (oracle::std(1, n), false), (oracle::std(2, n), false)];
    let lines = all_ok(batch::map(&cases, |(lt, cyclotomic)| {
        let ctx = lt.ctx();
        let m = PhiGammaModule::trivial(lt.clone(), w).map_err(err("module"))?;
        let x = ModuleVector::new(vec![LaurentWindow::t(ctx, w)]).unwrap();
        let got = m.nabla(&exact(ctx, 1), &x).map_err(err("nabla"))?;
        let got = &got.coords()[0];
        let want = if *cyclotomic {
            oracle::one_plus_t_log(ctx, w)
        } else {
            let l = lt.at_prec(n + 8).map_err(err("base"))?.formal_log(w + 1).map_err(err("log"))?;
            let dl = l.derivative().map_err(err("derivative"))?;
            l.truncate(w).unwrap().mul(&dl.inverse().map_err(err("inverse"))?).map_err(err("quotient"))?
        };
        if want.precision() < got.precision() {
            return Err(format!("{}: oracle only known to {} digits", lt.kind(), want.precision()));
        }
        let d = got.sub(&want).map_err(err("sub"))?;
        if !d.is_zero() {
            return Err(format!("{}: nabla(T) differs from the oracle: {d}", lt.kind()));
        }
        Ok(format!("{} (loss {})", lt.kind(), n - got.precision()))
    }))?;
    Ok(format!("nabla(T) matches to window {w}: {}", lines.join(", ")))
}

pub fn derivation_linearity(cfg: &Config, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let w = 16;
    let mods = stock_modules(cfg.prec, w);
    let n = cfg.prec;
    let mut deriv = Vec::new();
    let mut lin = Vec::new();
    for _ in 0..100 {
        let m = mods[rng.gen_range(0..mods.len())].clone();
        let ctx = m.ctx();
        let f = oracle::series(ctx, rng, 0, w, n);
        let x = vector(&m, rng, w);
        let b = oracle::nonzero_scalar(ctx, rng, 3);
        deriv.push((m.clone(), f, x.clone(), b));
        let (b1, b2) = loop {
            let (b1, b2) = (oracle::nonzero_scalar(ctx, rng, 3), oracle::nonzero_scalar(ctx, rng, 3));
            if !b1.add(&b2).is_zero() {
                break (b1, b2);
            }
        };
        lin.push((m, x, b1, b2));
    }
    all_ok(batch::map(&deriv, |(m, f, x, b)| {
        let r = PhiGammaModule::trivial(m.lt().clone(), w).map_err(err("base"))?;
        let fv = ModuleVector::new(vec![f.clone()]).unwrap();
        let lhs = m.nabla(b, &x.mul_series(f).unwrap()).map_err(err("nabla(fx)"))?;
        let df = r.nabla(b, &fv).map_err(err("nabla(f)"))?.coords()[0].clone();
        let rhs = x.mul_series(&df).unwrap().add(&m.nabla(b, x).map_err(err("nabla(x)"))?.mul_series(f).unwrap()).unwrap();
        if !lhs.eq_at_prec(&rhs) {
            return Err(format!("{}: Leibniz rule fails for beta = {b}", m.label()));
        }
        Ok(())
    }))?;
    all_ok(batch::map(&lin, |(m, x, b1, b2)| {
        let dg = |b: &PadicScalar| m.d_gamma(b, x).map_err(err("dGamma"));
        let sum = dg(&b1.add(b2))?;
        if !sum.eq_at_prec(&dg(b1)?.add(&dg(b2)?).unwrap()) {
            return Err(format!("{}: dGamma not additive at {b1}, {b2}", m.label()));
        }
        let p = exact(m.ctx(), 3);
        if !dg(&b1.mul(&p))?.eq_at_prec(&dg(b1)?.scale(&p)) {
            return Err(format!("{}: dGamma(p beta) != p dGamma(beta) at {b1}", m.label()));
        }
        Ok(())
    }))?;
    Ok("100 Leibniz checks and 100 linearity checks hold at precision".into())
}

pub fn classification(cfg: &Config, _rng: &mut ChaCha8Rng) -> Result<String, String> {
    let lt = oracle::std(2, cfg.prec);
    let ctx = lt.ctx();
    let w = 20;
    let make = |d: TwistCharacter| PhiGammaModule::rank1_from_character(lt.clone(), &d, w).map_err(err("module"));
    let zero = |a: &crate::phigamma::Analyticity| {
        a.constants.as_ref().is_some_and(|c| c.iter().all(PadicScalar::is_zero))
    };
    let triv = make(TwistCharacter::trivial(ctx))?.is_f_analytic(None).map_err(err("trivial"))?;
    if !triv.analytic || !zero(&triv) {
        return Err("trivial module not classified analytic".into());
    }
    let id = make(TwistCharacter::identity(ctx).unwrap())?.is_f_analytic(None).map_err(err("identity"))?;
    if !id.analytic || !zero(&id) {
        return Err("identity character not classified analytic".into());
    }
    let fr = make(TwistCharacter::frobenius(ctx).unwrap())?.is_f_analytic(None).map_err(err("frobenius"))?;
    if fr.analytic {
        return Err("Frobenius character classified analytic".into());
    }
    let c = fr.constants.ok_or("Frobenius defect not scalar")?[1];
    let w1 = PadicScalar::omega(ctx, ctx.emax() as i32);
    let want = exact(ctx, 1).sub(&w1.pow(ctx.p() - 1));
    if c.prec() < cfg.prec - 2 || !c.eq_mod(&want, cfg.prec - 2) {
        return Err(format!("Frobenius constant {c}, expected {want} to {} digits", cfg.prec - 2));
    }
    Ok(format!("trivial, identity analytic; Frobenius constant 1 - w^2 to {} digits", c.prec()))
}
