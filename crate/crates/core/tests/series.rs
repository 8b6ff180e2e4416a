use ltphi_core::padic::{field_ctx, FieldCtx, PadicScalar};
use ltphi_core::series::{parse_series, LaurentWindow};
use ltphi_core::Error;
use num_rational::Rational64;
use proptest::prelude::*;

fn ctx3() -> &'static FieldCtx {
    field_ctx(3, 1).unwrap()
}

fn ctx9() -> &'static FieldCtx {
    field_ctx(3, 2).unwrap()
}

fn ser(s: &str, n_max: i64) -> LaurentWindow {
    parse_series(s, ctx3(), n_max, 12).unwrap()
}

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// Binomial coefficients of `(1+T)^a - 1` as plain integers.
fn binom_minus_one(a: i64, n_max: usize) -> Vec<i64> {
    let mut out = vec![0i64; n_max + 1];
    let mut c: i128 = 1;
    for k in 1..=n_max.min(a as usize) {
        c = c * (a as i128 - k as i128 + 1) / k as i128;
        out[k] = c as i64;
    }
    out
}

#[test]
fn t_times_t() {
    let t = LaurentWindow::t(ctx3(), 10);
    let t2 = t.mul(&t).unwrap();
    assert_eq!(t2.strip_leading_zeros().n_min(), 2);
    assert_eq!(t2.n_max(), 10);
    assert!(t2.eq_at_prec(&ser("T^2", 10)));
    assert!(t2.coeff(2).unwrap().eq_at_prec(&PadicScalar::one(ctx3(), 12)));
}

#[test]
fn cancellation_leaves_constant() {
    let a = ser("p + T", 8);
    let b = ser("-T", 8);
    let s = a.add(&b).unwrap();
    assert!(s.eq_at_prec(&ser("3", 8)));
    assert_eq!(s.lowest_nonzero(), Some(0));
}

#[test]
fn window_collapse_is_reported() {
    let a = LaurentWindow::monomial(PadicScalar::one(ctx3(), 5), -3, 0).unwrap();
    let b = LaurentWindow::monomial(PadicScalar::one(ctx3(), 5), -2, -2).unwrap();
    // n_max' = min(0 + (-2), -2 + (-3)) = -5 = n_min'
    assert_eq!(a.mul(&b).unwrap().n_max(), -5);
    assert_eq!(a.truncate(-4).unwrap_err(), Error::WindowCollapse);
}

#[test]
fn substitution_examples() {
    let g = ser("1 + 2*T - 5*T^3 + w*0", 10);
    let t = LaurentWindow::t(ctx3(), 10);
    assert!(g.substitute(&t).unwrap().eq_at_prec(&g));
    let sq = ser("T^2", 10);
    assert!(sq.substitute(&ser("2*T", 10)).unwrap().eq_at_prec(&ser("4*T^2", 10)));
    assert_eq!(
        sq.substitute(&ser("1 + T", 10)).unwrap_err(),
        Error::BadSubstitutionTarget("substitution target has T-adic order 0 <= 0".into())
    );
}

#[test]
fn cyclotomic_composition_matches_binomial_oracle() {
    let n = 20;
    let g = ser("(1+T)^2 - 1", n);
    let f = ser("(1+T)^3 - 1", n);
    let h = g.substitute(&f).unwrap();
    assert_eq!(h.n_max(), n);
    let expect = binom_minus_one(6, n as usize);
    for (k, c) in h.terms() {
        assert!(c.eq_at_prec(&PadicScalar::from_int(ctx3(), expect[k as usize], 12)), "T^{k}");
    }
}

#[test]
fn laurent_substitution() {
    // T^{-1} ∘ (T + T^2) = T^{-1}(1 - T + T^2 - ...)
    let g = ser("T^-1", 8);
    let f = ser("T + T^2", 8);
    let h = g.substitute(&f).unwrap();
    assert_eq!(h.n_min(), -1);
    for (k, c) in h.terms() {
        let sign = if (k + 1) % 2 == 0 { 1 } else { -1 };
        assert!(c.eq_at_prec(&PadicScalar::from_int(ctx3(), sign, 12)));
    }
    assert!(g.substitute(&ser("3*T", 8)).is_err());
}

#[test]
fn annulus_valuation_examples() {
    let v = ser("p + T", 10).v_annulus(q(1, 2));
    assert_eq!(v.value, q(1, 2));
    assert!(!v.lower_bound_only);
    assert_eq!(ser("T^-1", 10).v_annulus(q(1, 3)).value, q(-1, 3));
    for r in [q(0, 1), q(1, 7), q(5, 2)] {
        assert_eq!(ser("1", 10).v_annulus(r).value, q(0, 1));
    }
}

#[test]
fn box_valuation_examples() {
    assert_eq!(ser("p + T", 10).v_box(q(1, 2), q(2, 1)).unwrap().value, q(1, 2));
    for (s, r) in [(q(1, 3), q(1, 2)), (q(1, 1), q(4, 1))] {
        assert_eq!(ser("T", 10).v_box(s, r).unwrap().value, s);
    }
    assert_eq!(ser("p*T^-1", 10).v_box(q(1, 2), q(2, 1)).unwrap().value, q(-1, 1));
    assert!(ser("T", 10).v_box(q(2, 1), q(1, 1)).is_err());
}

#[test]
fn lower_bound_flag_for_short_windows() {
    // With only one stored coefficient the unseen T^1 term could be a unit.
    let f = ser("p", 0);
    let v = f.v_annulus(q(1, 2));
    assert_eq!(v.value, q(1, 1));
    assert!(v.lower_bound_only);
    assert!(!ser("p", 1).v_annulus(q(1, 2)).lower_bound_only);
}

#[test]
fn json_round_trip() {
    let f = parse_series("p*T^-2 + w - 1/2*T^3", ctx9(), 6, 8).unwrap();
    let s = serde_json::to_string(&f).unwrap();
    let back: LaurentWindow = serde_json::from_str(&s).unwrap();
    assert_eq!((back.n_min(), back.n_max()), (-2, 6));
    assert!(back.eq_at_prec(&f));
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["coeffs"].as_object().unwrap().len(), 3);
    let j = r#"{"p":3,"deg":1,"n_min":0,"n_max":3,"coeffs":{"1":{"p":3,"deg":1,"prec":5,"coeffs":[1]}}}"#;
    let t: LaurentWindow = serde_json::from_str(j).unwrap();
    assert!(t.eq_at_prec(&LaurentWindow::t(ctx3(), 3)));
    assert!(t.coeff(2).unwrap().is_zero());
}

#[test]
fn parser_rejects_garbage() {
    assert!(parse_series("T +", ctx3(), 5, 5).is_err());
    assert!(parse_series("(T", ctx3(), 5, 5).is_err());
    assert!(parse_series("x", ctx3(), 5, 5).is_err());
}

fn window_strategy() -> impl Strategy<Value = LaurentWindow> {
    (-4i64..=0, 1usize..12, proptest::collection::vec((-40i64..40, 0u32..4), 12)).prop_map(|(n_min, len, cs)| {
        let ctx = ctx3();
        let coeffs = cs[..len].iter().map(|&(c, k)| PadicScalar::from_int(ctx, c * 3i64.pow(k), 12)).collect();
        LaurentWindow::new(ctx, n_min, coeffs).unwrap()
    })
}

fn power_series_strategy(len: usize) -> impl Strategy<Value = LaurentWindow> {
    proptest::collection::vec(-500i64..500, len)
        .prop_map(|cs| LaurentWindow::from_ints(ctx3(), &cs, 10))
}

fn radius() -> impl Strategy<Value = Rational64> {
    (1i64..40, 1i64..10).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #[test]
    fn convolution_oracle(a in proptest::collection::vec(-1000i64..1000, 8),
                          b in proptest::collection::vec(-1000i64..1000, 8)) {
        let f = LaurentWindow::from_ints(ctx3(), &a, 10);
        let g = LaurentWindow::from_ints(ctx3(), &b, 10);
        let h = f.mul(&g).unwrap();
        prop_assert_eq!(h.n_max(), 7);
        for k in 0..8usize {
            let c: i64 = (0..=k).map(|i| a[i] * b[k - i]).sum();
            prop_assert!(h.coeff(k as i64).unwrap().eq_at_prec(&PadicScalar::from_int(ctx3(), c, 10)));
        }
    }

    #[test]
    fn endpoint_rule_matches_grid(f in window_strategy(), s in radius(), w in radius()) {
        let r = s + w;
        let boxed = f.v_box(s, r).unwrap().value;
        let grid = (0..100)
            .map(|i| f.v_annulus(s + (r - s) * q(i, 99)).value)
            .min()
            .unwrap();
        prop_assert_eq!(boxed, grid);
    }

    #[test]
    fn ultrametric(f in window_strategy(), g in window_strategy(), s in radius(), w in radius()) {
        let r = s + w;
        let sum = f.add(&g).unwrap();
        let lhs = sum.v_box(s, r).unwrap().value;
        let rhs = f.v_box(s, r).unwrap().value.min(g.v_box(s, r).unwrap().value);
        prop_assert!(lhs >= rhs);
    }

    #[test]
    fn multiplicative(f in window_strategy(), g in window_strategy(), r in radius()) {
        let (vf, vg) = (f.v_annulus(r), g.v_annulus(r));
        let vfg = f.mul(&g).unwrap().v_annulus(r);
        if !vf.lower_bound_only && !vg.lower_bound_only && !vfg.lower_bound_only {
            prop_assert_eq!(vfg.value, vf.value + vg.value);
        }
    }

    #[test]
    fn substitution_is_linear(g1 in power_series_strategy(10), g2 in power_series_strategy(10),
                              f in power_series_strategy(10)) {
        let f = LaurentWindow::t(ctx3(), 9).add(&f.shift(2).truncate(9).unwrap()).unwrap();
        let lhs = g1.add(&g2).unwrap().substitute(&f).unwrap();
        let rhs = g1.substitute(&f).unwrap().add(&g2.substitute(&f).unwrap()).unwrap();
        prop_assert!(lhs.eq_at_prec(&rhs));
    }

    #[test]
    fn substitution_is_associative(g in power_series_strategy(9), a in power_series_strategy(9),
                                   b in power_series_strategy(9)) {
        let f1 = a.shift(1).truncate(8).unwrap();
        let f2 = b.shift(1).truncate(8).unwrap();
        prop_assume!(!f1.coeff(1).unwrap().is_zero() && !f2.coeff(1).unwrap().is_zero());
        let g = g.truncate(8).unwrap();
        let lhs = g.substitute(&f1).unwrap().substitute(&f2).unwrap();
        let rhs = g.substitute(&f1.substitute(&f2).unwrap()).unwrap();
        prop_assert!(lhs.eq_at_prec(&rhs));
    }
}
