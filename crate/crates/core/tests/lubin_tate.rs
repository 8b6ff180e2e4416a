use ltphi_core::lubin_tate::{valuation_gain_search, FpiKind, LubinTateData, MultiSeries};
use ltphi_core::padic::{field_ctx, FieldCtx, PadicScalar};
use ltphi_core::series::{parse_series, LaurentWindow};
use num_rational::Rational64;
use proptest::prelude::*;

const N: i32 = 12;

fn cyc() -> LubinTateData {
    LubinTateData::cyclotomic(3, N).unwrap()
}

fn std3() -> LubinTateData {
    LubinTateData::standard(3, 1, N).unwrap()
}

fn std9() -> LubinTateData {
    LubinTateData::standard(3, 2, N).unwrap()
}

fn exact(ctx: &'static FieldCtx, n: i64) -> PadicScalar {
    PadicScalar::from_int(ctx, n, ctx.emax() as i32)
}

/// `binom(A, k)` for the exact integer `A`, as a scalar.
fn binom(ctx: &'static FieldCtx, a: i64, k: usize) -> PadicScalar {
    let mut num = exact(ctx, 1);
    for j in 0..k {
        num = num * exact(ctx, a - j as i64);
    }
    (1..=k as i64).fold(num, |acc, j| acc.div_exact_int(j))
}

/// log_LT from `ℓ(f(T)) = p ℓ(T)`: `(p − p^k) l_k = Σ_{i<k} l_i [f^i]_k`.
fn log_by_functional_equation(lt: &LubinTateData, window: i64) -> Vec<PadicScalar> {
    let ctx = lt.ctx();
    let f = lt.f_series(window).truncate(window).unwrap();
    let mut fp = vec![LaurentWindow::constant(exact(ctx, 1), window)];
    for i in 1..=window as usize {
        fp.push(fp[i - 1].mul_trunc(&f, window).unwrap());
    }
    let p = exact(ctx, lt.p() as i64);
    let mut l = vec![exact(ctx, 0), exact(ctx, 1)];
    for k in 2..=window {
        let mut s = exact(ctx, 0);
        for i in 1..k as usize {
            s = s + l[i] * fp[i].coeff(k).unwrap();
        }
        let pk = exact(ctx, 1).mul_p_pow(k as i32);
        l.push(s.div(&(p - pk)).unwrap());
    }
    l
}

fn random_int(ctx: &'static FieldCtx, coeffs: &[i64], prec: i32) -> PadicScalar {
    PadicScalar::from_coeffs(ctx, &coeffs[..ctx.deg()], prec).unwrap()
}

#[test]
fn construction_and_validation() {
    let ctx = field_ctx(3, 1).unwrap();
    assert!(LubinTateData::new(ctx, FpiKind::Coeffs(vec![3, 0, 1]), N).is_ok());
    assert!(LubinTateData::new(ctx, FpiKind::Coeffs(vec![3, 6, 4, 0, 3]), N).is_ok());
    assert!(LubinTateData::new(ctx, FpiKind::Coeffs(vec![3, 1, 1]), N).is_err());
    assert!(LubinTateData::new(ctx, FpiKind::Coeffs(vec![6, 0, 1]), N).is_err());
    assert!(LubinTateData::new(ctx, FpiKind::Coeffs(vec![3, 0, 2]), N).is_err());
    assert!(LubinTateData::cyclotomic(3, N).unwrap().f_series(3).eq_at_prec(
        &parse_series("3*T + 3*T^2 + T^3", ctx, 3, N).unwrap()
    ));
    assert!(LubinTateData::new(field_ctx(3, 2).unwrap(), FpiKind::Cyclotomic, N).is_err());
    let lt = std9();
    let j = serde_json::to_string(&lt.to_json()).unwrap();
    assert_eq!(j, r#"{"p":3,"deg":2,"f":"standard","prec":12}"#);
    assert_eq!("coeffs:3,0,1".parse::<FpiKind>().unwrap(), FpiKind::Coeffs(vec![3, 0, 1]));
}

#[test]
fn mult_by_examples() {
    for lt in [cyc(), std3(), std9()] {
        let ctx = lt.ctx();
        let one = lt.mult_by(&exact(ctx, 1), 20).unwrap();
        assert!(one.eq_at_prec(&LaurentWindow::t(ctx, 20)));
        let p = lt.mult_by(&exact(ctx, 3), 20).unwrap();
        assert!(p.eq_at_prec(&lt.f_series(20)));
    }
    let lt = cyc();
    let two = lt.mult_by(&exact(lt.ctx(), 2), 5).unwrap();
    assert!(two.eq_at_prec(&parse_series("T^2 + 2*T", lt.ctx(), 5, N).unwrap()));
    assert!(lt.mult_by(&PadicScalar::from_ratio(lt.ctx(), 1, 3, N).unwrap(), 5).is_err());
}

#[test]
fn inexact_multiplier_loses_log_q_window_digits() {
    let lt = cyc();
    let a = PadicScalar::from_int(lt.ctx(), 5, N);
    assert_eq!(lt.mult_by(&a, 10).unwrap().precision(), N - 2);
    assert_eq!(lt.mult_by(&a.lift_to(N + 2), 10).unwrap().precision(), N);
}

#[test]
fn cyclotomic_binomial_oracle() {
    let lt = cyc();
    let ctx = lt.ctx();
    let w = 40;
    for a in [2i64, -1, 7, 1 + 3 * 1234567, -5, 3i64.pow(20) + 11] {
        let x = PadicScalar::from_int(ctx, a, N + 4);
        let s = lt.mult_by(&x, w).unwrap();
        assert_eq!(s.precision(), N);
        for k in 1..=w {
            let rep = x.numerator()[0] as i64;
            assert!(s.coeff(k).unwrap().eq_at_prec(&binom(ctx, rep, k as usize)), "a={a} k={k}");
        }
    }
}

/// Window 60 runs past the u64 recursion's digit budget for q = 3.
#[test]
fn cyclotomic_binomial_window_60() {
    let lt = cyc();
    let ctx = lt.ctx();
    let w = 60;
    for a in [2i64, -4, 1 + 3 * 98765] {
        let x = exact(ctx, a);
        let s = lt.mult_by(&x, w).unwrap();
        assert_eq!(s.precision(), N);
        for k in 1..=w {
            assert!(s.coeff(k).unwrap().eq_at_prec(&binom(ctx, a, k as usize)), "a={a} k={k}");
        }
    }
}

#[test]
fn commutes_with_f() {
    for lt in [cyc(), std3(), std9()] {
        let ctx = lt.ctx();
        let a = PadicScalar::from_coeffs(ctx, &[4, 5][..ctx.deg()], 30).unwrap();
        let s = lt.mult_by(&a, 30).unwrap();
        let lhs = lt.f_series(30).substitute(&s).unwrap();
        let rhs = s.substitute(&lt.f_series(30)).unwrap();
        assert!(lhs.eq_at_prec(&rhs));
    }
}

#[test]
fn formal_log_cyclotomic() {
    let lt = cyc();
    let ctx = lt.ctx();
    let l = lt.formal_log(30).unwrap();
    assert!(l.coeff(1).unwrap().eq_at_prec(&PadicScalar::one(ctx, N)));
    for k in 1..=30i64 {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let expect = PadicScalar::from_ratio(ctx, sign, k, N).unwrap();
        assert!(l.coeff(k).unwrap().eq_at_prec(&expect), "k={k}");
    }
}

#[test]
fn formal_log_matches_functional_equation() {
    for lt in [std3(), std9(), cyc()] {
        let l = lt.formal_log(60).unwrap();
        let oracle = log_by_functional_equation(&lt, 60);
        assert!(l.precision() >= N);
        for k in 1..=60 {
            assert!(l.coeff(k).unwrap().eq_at_prec(&oracle[k as usize]), "{lt:?} k={k}");
        }
    }
}

#[test]
fn formal_log_standard_leading_terms() {
    // the T^q coefficient is 1/(p − p^q), which is 1/p only modulo p^(q−2)
    for lt in [std3(), std9()] {
        let ctx = lt.ctx();
        let q = lt.q() as i64;
        let l = lt.formal_log(q * q).unwrap();
        let third = PadicScalar::from_ratio(ctx, 1, 3, N).unwrap();
        let pq = exact(ctx, 3) - exact(ctx, 1).mul_p_pow(q as i32);
        assert!(l.coeff(q).unwrap().eq_at_prec(&exact(ctx, 1).div(&pq).unwrap()));
        assert!(l.coeff(q).unwrap().eq_mod(&third, q as i32 - 2));
        assert!(!l.coeff(q).unwrap().eq_at_prec(&third));
        for k in 2..q {
            assert!(l.coeff(k).unwrap().is_zero());
        }
    }
}

#[test]
fn formal_exp_inverts_log() {
    for lt in [cyc(), std3(), std9()] {
        let w = 30;
        let l = lt.formal_log(w).unwrap();
        let e = lt.formal_exp(w).unwrap();
        assert!(e.coeff(1).unwrap().eq_at_prec(&PadicScalar::one(lt.ctx(), N)));
        let t = LaurentWindow::t(lt.ctx(), w);
        assert!(l.substitute(&e).unwrap().eq_at_prec(&t), "{lt:?}");
        assert!(e.substitute(&l).unwrap().eq_at_prec(&t), "{lt:?}");
    }
}

#[test]
fn formal_exp_cyclotomic_is_exponential() {
    let lt = cyc();
    let ctx = lt.ctx();
    let e = lt.formal_exp(25).unwrap();
    let mut fact = exact(ctx, 1);
    for k in 1..=25i64 {
        fact = fact.div_exact_int(k);
        assert!(e.coeff(k).unwrap().eq_at_prec(&fact), "k={k}");
    }
}

#[test]
fn log_linearizes_endomorphisms() {
    for lt in [cyc(), std9()] {
        let ctx = lt.ctx();
        let w = 20;
        let l = lt.formal_log(w).unwrap();
        let a = PadicScalar::from_coeffs(ctx, &[7, 2][..ctx.deg()], 30).unwrap();
        let lhs = l.substitute(&lt.mult_by(&a, w).unwrap()).unwrap();
        assert!(lhs.eq_at_prec(&l.scale(&a)));
    }
}

#[test]
fn group_law_examples() {
    let lt = cyc();
    let ctx = lt.ctx();
    let g = lt.group_law(8).unwrap();
    let x = MultiSeries::var(ctx, 2, 8, 0);
    let y = MultiSeries::var(ctx, 2, 8, 1);
    let expect = x.add(&y).unwrap().add(&x.mul(&y).unwrap()).unwrap();
    assert!(g.eq_at_prec(&expect), "{g}");
    assert!(g.precision() >= N);
}

fn check_axioms(lt: &LubinTateData, deg: u32) {
    let ctx = lt.ctx();
    let g = lt.group_law(deg).unwrap();
    assert!(g.precision() >= N, "{lt:?}: {}", g.precision());
    let x = MultiSeries::var(ctx, 2, deg, 0);
    let y = MultiSeries::var(ctx, 2, deg, 1);
    for (m, c) in g.terms() {
        if m.iter().sum::<u32>() == 1 {
            assert!(c.eq_at_prec(&PadicScalar::one(ctx, N)));
        }
        assert!(c.eq_at_prec(&g.coeff(&[m[1], m[0]])), "commutativity at {m:?}");
    }
    let zero = MultiSeries::zero(ctx, 2, deg);
    assert!(g.substitute(&[x.clone(), zero]).unwrap().eq_at_prec(&x));
    assert!(g.substitute(&[y.clone(), x.clone()]).unwrap().eq_at_prec(&g));
    let v = |i| MultiSeries::var(ctx, 3, deg, i);
    let gxy = g.substitute(&[v(0), v(1)]).unwrap();
    let gyz = g.substitute(&[v(1), v(2)]).unwrap();
    let lhs = g.substitute(&[gxy, v(2)]).unwrap();
    let rhs = g.substitute(&[v(0), gyz]).unwrap();
    assert!(lhs.eq_at_prec(&rhs), "associativity {lt:?}");
    // log_LT(G(X, Y)) = log_LT(X) + log_LT(Y)
    let l = lt.formal_log(deg as i64).unwrap();
    let lg = MultiSeries::compose_univariate(&l, &g).unwrap();
    let sum = MultiSeries::from_univariate(&l, 2, deg, 0)
        .unwrap()
        .add(&MultiSeries::from_univariate(&l, 2, deg, 1).unwrap())
        .unwrap();
    assert!(lg.eq_at_prec(&sum));
}

#[test]
fn group_law_axioms() {
    check_axioms(&cyc(), 8);
    check_axioms(&std3(), 8);
    check_axioms(&std9(), 8);
}

#[test]
fn gamma_and_phi_examples() {
    let lt = cyc();
    let ctx = lt.ctx();
    let t = LaurentWindow::t(ctx, 10);
    assert!(lt.gamma_act(&exact(ctx, 1), &t).unwrap().eq_at_prec(&t));
    let g2 = lt.gamma_act(&exact(ctx, 2), &t).unwrap();
    assert!(g2.eq_at_prec(&parse_series("T^2 + 2*T", ctx, 10, N).unwrap()));
    assert!(lt.gamma_act(&exact(ctx, 3), &t).is_err());
    for lt in [cyc(), std9()] {
        let ctx = lt.ctx();
        let t = LaurentWindow::t(ctx, 12);
        assert!(lt.phi_act(&t).unwrap().eq_at_prec(&lt.f_series(12)));
        let c = LaurentWindow::constant(PadicScalar::omega(ctx, N), 12);
        assert!(lt.phi_act(&c).unwrap().eq_at_prec(&c));
        let t2 = t.mul(&t).unwrap();
        let f = lt.f_series(12);
        assert!(lt.phi_act(&t2).unwrap().eq_at_prec(&f.mul(&f).unwrap()));
    }
}

#[test]
fn gamma_acts_on_laurent_series() {
    let lt = std9();
    let ctx = lt.ctx();
    let g = parse_series("T^-2 + w*T", ctx, 10, N).unwrap();
    let u = PadicScalar::omega(ctx, 20);
    let v = PadicScalar::from_coeffs(ctx, &[4, 3], 20).unwrap();
    let lhs = lt.gamma_act(&u, &lt.gamma_act(&v, &g).unwrap()).unwrap();
    let rhs = lt.gamma_act(&(u * v), &g).unwrap();
    assert_eq!(lhs.n_min(), -2);
    assert!(lhs.eq_at_prec(&rhs));
}

#[test]
fn valuation_gain_exists() {
    let lt = cyc();
    let ctx = lt.ctx();
    let ws: Vec<_> = [1i64, 2, 5].iter().map(|&w| PadicScalar::from_int(ctx, w, 20)).collect();
    let fs: Vec<_> = ["T", "T^-1 + 3*T^2", "1 + T^3"]
        .iter()
        .map(|s| parse_series(s, ctx, 20, N).unwrap())
        .collect();
    for (s, r) in [(Rational64::new(1, 4), Rational64::new(1, 2)), (Rational64::new(1, 2), Rational64::new(1, 1))] {
        let rep = valuation_gain_search(&lt, s, r, &ws, &fs, 6).unwrap();
        assert!(rep.n >= 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn endomorphism_ring(a in proptest::collection::vec(-100_000i64..100_000, 2),
                         b in proptest::collection::vec(-100_000i64..100_000, 2),
                         d in 1usize..=2) {
        let lt = if d == 1 { std3() } else { std9() };
        let ctx = lt.ctx();
        let w = 16;
        let (x, y) = (random_int(ctx, &a, 20), random_int(ctx, &b, 20));
        let (ma, mb) = (lt.mult_by(&x, w).unwrap(), lt.mult_by(&y, w).unwrap());
        let ab = lt.mult_by(&(x * y), w).unwrap();
        prop_assert!(ma.substitute(&mb).unwrap().eq_at_prec(&ab));
        prop_assert!(mb.substitute(&ma).unwrap().eq_at_prec(&ab));
    }

    #[test]
    fn phi_commutes_with_gamma(a in proptest::collection::vec(-1000i64..1000, 2),
                               c in proptest::collection::vec(-50i64..50, 6)) {
        let lt = std9();
        let ctx = lt.ctx();
        let u = PadicScalar::one(ctx, 20) + random_int(ctx, &a, 20).mul_p_pow(1);
        let g = LaurentWindow::from_ints(ctx, &c, N);
        let lhs = lt.phi_act(&lt.gamma_act(&u, &g).unwrap()).unwrap();
        let rhs = lt.gamma_act(&u, &lt.phi_act(&g).unwrap()).unwrap();
        prop_assert!(lhs.eq_at_prec(&rhs));
    }
}
