use std::sync::Arc;

use ltphi_core::lubin_tate::LubinTateData;
use ltphi_core::padic::{padic_exp, PadicScalar};
use ltphi_core::phigamma::{ModuleVector, PhiGammaModule, TwistCharacter};
use ltphi_core::series::LaurentWindow;

fn std9() -> Arc<LubinTateData> {
    Arc::new(LubinTateData::standard(3, 2, 12).unwrap())
}

#[test]
fn rank1_modules_validate() {
    let lt = std9();
    let ctx = lt.ctx();
    for d in [
        TwistCharacter::trivial(ctx),
        TwistCharacter::identity(ctx).unwrap(),
        TwistCharacter::frobenius(ctx).unwrap(),
        TwistCharacter::torsion(ctx, 3),
    ] {
        PhiGammaModule::rank1_from_character(lt.clone(), &d, 20).unwrap();
    }
}

#[test]
fn rank1_gamma_is_character_value() {
    let lt = std9();
    let ctx = lt.ctx();
    let d = TwistCharacter::identity(ctx).unwrap();
    let m = PhiGammaModule::rank1_from_character(lt.clone(), &d, 20).unwrap();
    let w = PadicScalar::omega(ctx, 39);
    let b = PadicScalar::from_coeffs(ctx, &[3, 6], 39).unwrap();
    let u = w.pow(5).mul(&padic_exp(&b).unwrap());
    let e = ModuleVector::basis(ctx, 1, 0, 20);
    let got = m.apply_gamma(&u, &e).unwrap();
    let want = LaurentWindow::constant(u, 20);
    assert!(got.coords()[0].eq_mod(&want, 12), "{} vs {}", got.coords()[0], want);
}

#[test]
fn nabla_cyclotomic_oracle() {
    let lt = Arc::new(LubinTateData::cyclotomic(3, 12).unwrap());
    let ctx = lt.ctx();
    let m = PhiGammaModule::trivial(lt.clone(), 30).unwrap();
    let x = ModuleVector::new(vec![LaurentWindow::t(ctx, 30)]).unwrap();
    let one = PadicScalar::one(ctx, 39);
    let t0 = std::time::Instant::now();
    let rep = m.log_gamma_report(&padic_exp(&PadicScalar::from_int(ctx, 3, 39)).unwrap(), &x, true).unwrap();
    eprintln!("m={} terms={} tail={} limit={:?} prec={} {:?}", rep.m, rep.terms, rep.tail_prec, rep.limit, rep.value.precision(), t0.elapsed());
    let got = m.nabla(&one, &x).unwrap();
    // (1+T) log(1+T)
    let mut c = vec![PadicScalar::zero(ctx, 39)];
    for k in 1..=30i64 {
        let a = PadicScalar::from_ratio(ctx, if k % 2 == 1 { 1 } else { -1 }, k, 39).unwrap();
        let b = if k >= 2 { PadicScalar::from_ratio(ctx, if k % 2 == 0 { 1 } else { -1 }, k - 1, 39).unwrap() } else { PadicScalar::zero(ctx, 39) };
        c.push(a.add(&b));
    }
    let want = LaurentWindow::new(ctx, 0, c).unwrap();
    let d = got.coords()[0].sub(&want).unwrap();
    eprintln!("got prec {} diff {}", got.precision(), d);
    assert!(d.is_zero());
}

#[test]
fn nabla_standard_oracle() {
    for lt in [Arc::new(LubinTateData::standard(3, 1, 12).unwrap()), std9()] {
        let ctx = lt.ctx();
        let m = PhiGammaModule::trivial(lt.clone(), 30).unwrap();
        let x = ModuleVector::new(vec![LaurentWindow::t(ctx, 30)]).unwrap();
        let t0 = std::time::Instant::now();
        let got = m.nabla(&PadicScalar::one(ctx, 39), &x).unwrap();
        let l = lt.formal_log(31).unwrap();
        let want = l.truncate(30).unwrap().mul(&l.derivative().unwrap().inverse().unwrap()).unwrap();
        let d = got.coords()[0].sub(&want).unwrap();
        eprintln!("q={} prec {} want prec {} {:?} diff {}", ctx.q(), got.precision(), want.precision(), t0.elapsed(), d);
        assert!(d.is_zero());
    }
}

#[test]
fn frobenius_defect_is_scalar() {
    let lt = std9();
    let ctx = lt.ctx();
    let m = PhiGammaModule::rank1_from_character(lt.clone(), &TwistCharacter::frobenius(ctx).unwrap(), 20).unwrap();
    let w = PadicScalar::omega(ctx, 39);
    let t0 = std::time::Instant::now();
    let a = m.is_f_analytic(None).unwrap();
    eprintln!("{:?} {:?}", a.constants, t0.elapsed());
    assert!(!a.analytic);
    let c = a.constants.unwrap()[1];
    let want = PadicScalar::one(ctx, 39).sub(&w.pow(2));
    assert!(c.eq_mod(&want, 10), "{c} vs {want}");
    for d in [TwistCharacter::trivial(ctx), TwistCharacter::identity(ctx).unwrap()] {
        let m = PhiGammaModule::rank1_from_character(lt.clone(), &d, 20).unwrap();
        assert!(m.is_f_analytic(None).unwrap().analytic);
    }
}

use ltphi_core::phigamma::{ext_pull, ext_push, hom_extension, hom_module, matrix, ExtData};

fn series(ctx: &'static ltphi_core::padic::FieldCtx, seed: u64, w: i64) -> LaurentWindow {
    let mut s = seed;
    let c: Vec<i64> = (0..=w)
        .map(|_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) % 1000) as i64
        })
        .collect();
    LaurentWindow::from_ints(ctx, &c, 12)
}

#[test]
fn ext_round_trip_and_sections() {
    let lt = std9();
    let ctx = lt.ctx();
    let w = 12;
    let t0 = std::time::Instant::now();
    let r = PhiGammaModule::trivial(lt.clone(), w).unwrap();
    let id = PhiGammaModule::rank1_from_character(lt.clone(), &TwistCharacter::identity(ctx).unwrap(), w).unwrap();
    let hom = hom_module(&r, &id).unwrap();
    let h = ModuleVector::new(vec![series(ctx, 7, w)]).unwrap();
    let data = hom.coboundary(&h).unwrap();
    hom.check_cocycle(&data).unwrap();
    let dt = ext_push(&r, &id, &data).unwrap();
    eprintln!("push {:?}", t0.elapsed());
    let zero = matrix::zeros(ctx, 1, 1, w);
    let back = ext_pull(&dt, &zero).unwrap();
    assert!(back.eq_at_prec(&data));
    let x = vec![vec![series(ctx, 11, w)]];
    let moved = ext_pull(&dt, &x).unwrap();
    let cob = hom.coboundary(&ModuleVector::new(vec![x[0][0].clone()]).unwrap()).unwrap();
    assert!(moved.sub(&back).unwrap().eq_at_prec(&cob));
    let sol = hom.solve_coboundary(&data).unwrap().expect("split");
    assert!(hom.coboundary(&sol).unwrap().eq_at_prec(&data));
    eprintln!("pull {:?}", t0.elapsed());
    let a = dt.is_f_analytic(None).unwrap();
    let b = hom_extension(&r, &id, &data).unwrap().is_f_analytic(None).unwrap();
    eprintln!("analytic {} {} {:?}", a.analytic, b.analytic, t0.elapsed());
    assert!(a.analytic && b.analytic);
    let _: Option<ExtData> = None;
}
