//! Criteria 9-11: twisting pipeline and explicit extensions.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::oracle;
use super::{all_ok, err, Config};
use crate::batch;
use crate::padic::PadicScalar;
use crate::phigamma::{default_basis, ext_pull, ext_push, hom_extension, hom_module, matrix, ExtData, ModuleVector, PhiGammaModule, TwistCharacter};
use crate::series::LaurentWindow;
use crate::twist::run_pipeline;

fn random_character(ctx: &'static crate::padic::FieldCtx, rng: &mut ChaCha8Rng) -> (String, TwistCharacter) {
    let (a, b, k) = (rng.gen_range(0..3u32), rng.gen_range(0..3u32), rng.gen_range(0..ctx.q() - 1));
    let mut d = TwistCharacter::torsion(ctx, k);
    for _ in 0..a {
        d = d.mul(&TwistCharacter::frobenius(ctx).unwrap()).unwrap();
    }
    for _ in 0..b {
        d = d.mul(&TwistCharacter::identity(ctx).unwrap()).unwrap();
    }
    (format!("frob^{a}*id^{b}*tors^{k}"), d)
}

pub fn twist_pipeline(cfg: &Config, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let ctx = oracle::std(2, cfg.prec).ctx();
    let chars: Vec<_> = (0..10).map(|_| random_character(ctx, rng)).collect();
    let w = 20;
    let out = all_ok(batch::map(&chars, |(name, d)| {
        let mut verdicts = Vec::new();
        for n in [cfg.prec, cfg.prec + 4] {
            let m = PhiGammaModule::rank1_from_character(oracle::std(2, n), d, w).map_err(err(name))?;
            let rep = run_pipeline(&m).map_err(err(name))?;
            verdicts.push(rep.verdict);
        }
        if verdicts.iter().any(|v| v != "pass") {
            return Err(format!("{name}: verdicts {verdicts:?} at N, N+4"));
        }
        Ok(name.clone())
    }))?;
    Ok(format!("10 characters pass at N and N+4: {}", out.join(", ")))
}

/// The class `c_φ = a`, `c_γ(u) = λ(log u)` with `λ(x) = c1·x + c2·σ(x)`, for
/// a module on which `φ` and `Γ` act trivially (rank one).
pub fn additive_class(h: &PhiGammaModule, a: &PadicScalar, c1: &PadicScalar, c2: &PadicScalar) -> ExtData {
    let ctx = h.ctx();
    let w = h.window();
    let v = |x: PadicScalar| ModuleVector::new(vec![LaurentWindow::constant(x, w)]).unwrap();
    let basis = default_basis(ctx);
    let mut gamma = vec![v(PadicScalar::zero(ctx, ctx.emax() as i32))];
    for (g, b) in h.gens()[1..].iter().zip(&basis) {
        let log_u = b.mul_exact_int((ctx.p() * g.scale) as i64);
        gamma.push(v(c1.mul(&log_u).add(&c2.mul(&log_u.frobenius()))));
    }
    ExtData { phi: v(*a), gamma }
}

fn random_pair(lt: &std::sync::Arc<crate::lubin_tate::LubinTateData>, rng: &mut ChaCha8Rng, w: i64, analytic_only: bool) -> (PhiGammaModule, PhiGammaModule, bool) {
    let ctx = lt.ctx();
    let pick = |rng: &mut ChaCha8Rng| -> TwistCharacter {
        match rng.gen_range(0..if analytic_only { 3 } else { 4 }) {
            0 => TwistCharacter::trivial(ctx),
            1 => TwistCharacter::identity(ctx).unwrap(),
            2 => TwistCharacter::torsion(ctx, rng.gen_range(1..ctx.q() - 1)),
            _ => TwistCharacter::frobenius(ctx).unwrap(),
        }
    };
    let dx = pick(rng);
    let same = rng.gen_bool(0.6);
    let dd = if same { dx.clone() } else { pick(rng) };
    let mk = |d: &TwistCharacter| PhiGammaModule::rank1_from_character(lt.clone(), d, w).unwrap();
    (mk(&dx), mk(&dd), same)
}

struct Sample {
    delta: PhiGammaModule,
    d: PhiGammaModule,
    data: ExtData,
    split: bool,
    analytic: bool,
    section: LaurentWindow,
}

fn sample(cfg: &Config, rng: &mut ChaCha8Rng, w: i64, analytic_only: bool, want_analytic: Option<bool>) -> Sample {
    let lt = oracle::std(2, cfg.prec);
    let ctx = lt.ctx();
    let n = cfg.prec;
    let (delta, d, same) = loop {
        let s = random_pair(&lt, rng, w, analytic_only);
        if want_analytic != Some(false) || s.2 {
            break s;
        }
    };
    let hom = hom_module(&delta, &d).unwrap();
    let h = ModuleVector::new(vec![oracle::series(ctx, rng, 0, w, n)]).unwrap();
    let mut data = hom.coboundary(&h).unwrap();
    let (mut split, mut analytic) = (true, true);
    if same && rng.gen_bool(0.75) || want_analytic == Some(false) {
        let a = if rng.gen_bool(0.5) { oracle::scalar(ctx, rng, 4) } else { PadicScalar::zero(ctx, ctx.emax() as i32) };
        let c1 = oracle::scalar(ctx, rng, 4);
        let c2 = match want_analytic {
            Some(true) => PadicScalar::zero(ctx, ctx.emax() as i32),
            Some(false) => oracle::nonzero_scalar(ctx, rng, 4),
            None => if rng.gen_bool(0.5) { oracle::scalar(ctx, rng, 4) } else { PadicScalar::zero(ctx, ctx.emax() as i32) },
        };
        split = a.is_zero() && c1.is_zero() && c2.is_zero();
        analytic = c2.is_zero();
        data = data.add(&additive_class(&hom, &a, &c1, &c2)).unwrap();
    }
    let section = oracle::series(ctx, rng, 0, w, n);
    Sample { delta, d, data, split, analytic, section }
}

pub fn round_trip(cfg: &Config, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let w = 12;
    let samples: Vec<Sample> = (0..20).map(|_| sample(cfg, rng, w, false, None)).collect();
    let nsplit = samples.iter().filter(|s| s.split).count();
    all_ok(batch::map(&samples, |s| {
        let hom = hom_module(&s.delta, &s.d).map_err(err("hom"))?;
        hom.check_cocycle(&s.data).map_err(err("cocycle"))?;
        let dt = ext_push(&s.delta, &s.d, &s.data).map_err(err("push"))?;
        let zero = matrix::zeros(dt.ctx(), 1, 1, w);
        let back = ext_pull(&dt, &zero).map_err(err("pull"))?;
        if !back.eq_at_prec(&s.data) {
            return Err(format!("{}: pull(push(data)) != data", dt.label()));
        }
        let found = hom.solve_coboundary(&s.data).map_err(err("split test"))?;
        if found.is_some() != s.split {
            return Err(format!("{}: split detection says {}, expected {}", dt.label(), found.is_some(), s.split));
        }
        let moved = ext_pull(&dt, &vec![vec![s.section.clone()]]).map_err(err("pull"))?;
        let cob = hom.coboundary(&ModuleVector::new(vec![s.section.clone()]).unwrap()).map_err(err("coboundary"))?;
        if !moved.sub(&back).unwrap().eq_at_prec(&cob) {
            return Err(format!("{}: section change is not the coboundary", dt.label()));
        }
        Ok(())
    }))?;
    Ok(format!("20 data sets ({nsplit} split) round-trip; section changes give coboundaries"))
}

pub fn ext_lemma(cfg: &Config, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let w = 12;
    let samples: Vec<Sample> =
        (0..10).map(|i| sample(cfg, rng, w, true, if i % 2 == 0 { Some(true) } else { Some(false) })).collect();
    let res = all_ok(batch::map(&samples, |s| {
        let total = ext_push(&s.delta, &s.d, &s.data).map_err(err("push"))?;
        let a = total.is_f_analytic(None).map_err(err("total defect"))?.analytic;
        let b = hom_extension(&s.delta, &s.d, &s.data).map_err(err("hom ext"))?.is_f_analytic(None).map_err(err("hom defect"))?.analytic;
        if a != b || a != s.analytic {
            return Err(format!("{}: total {a}, hom extension {b}, expected {}", total.label(), s.analytic));
        }
        Ok(a)
    }))?;
    let yes = res.iter().filter(|&&a| a).count();
    Ok(format!("10 extensions: {yes} analytic, {} not; total and hom extension agree", res.len() - yes))
}
