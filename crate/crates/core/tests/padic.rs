use ltphi_core::padic::{field_ctx, padic_exp, padic_log, PadicScalar, Valuation};
use ltphi_core::Error;
use proptest::prelude::*;

/// Extended Euclid, independent of the library's Newton inversion.
fn egcd_inverse(a: i64, m: i64) -> i64 {
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert_eq!(old_r, 1);
    old_s.rem_euclid(m)
}

#[test]
fn small_integer_arithmetic() {
    let ctx = field_ctx(3, 1).unwrap();
    let two = PadicScalar::from_int(ctx, 2, 2);
    assert_eq!((two + two).numerator(), &[4]);
    let half = PadicScalar::one(ctx, 2).div(&two).unwrap();
    assert_eq!(half.numerator(), &[egcd_inverse(2, 9) as u64]);
    assert_eq!(half.numerator(), &[5]);
}

#[test]
fn omega_squared_matches_polynomial_reduction() {
    let ctx = field_ctx(3, 2).unwrap();
    let w = PadicScalar::omega(ctx, 2);
    let sq = w * w;
    // schoolbook: x^2 mod (x^2 + m1 x + m0) = -m1 x - m0, reduced mod 9
    let m = ctx.minpoly();
    let expect = [(9 - m[0] % 9) % 9, (9 - m[1] % 9) % 9];
    assert_eq!(sq.numerator(), &expect);
}

#[test]
fn valuations() {
    let ctx = field_ctx(3, 2).unwrap();
    assert_eq!(PadicScalar::from_int(ctx, 9, 5).valuation(), Valuation::Exact(2));
    assert_eq!(PadicScalar::from_int(ctx, 1, 5).valuation(), Valuation::Exact(0));
    let x = PadicScalar::from_coeffs(ctx, &[9, 9], 2).unwrap();
    assert_eq!(x.valuation(), Valuation::AtLeast(2));
    let third = PadicScalar::from_ratio(ctx, 1, 3, 5).unwrap();
    assert_eq!(third.valuation(), Valuation::Exact(-1));
}

#[test]
fn teichmuller_examples() {
    let ctx = field_ctx(3, 1).unwrap();
    let one = PadicScalar::teichmuller(ctx, &[1], 3).unwrap();
    assert_eq!(one.numerator(), &[1]);
    // oracle: iterate x -> x^p on integers mod 27
    let mut x = 2u64;
    for _ in 0..10 {
        x = x.pow(3) % 27;
    }
    let t = PadicScalar::teichmuller(ctx, &[2], 3).unwrap();
    assert_eq!(t.numerator(), &[x]);
    assert_eq!(x, 26);
    assert!(PadicScalar::teichmuller(ctx, &[0], 3).is_err());

    let ctx9 = field_ctx(3, 2).unwrap();
    let t = PadicScalar::teichmuller(ctx9, &[0, 1], 12).unwrap();
    assert!(t.pow(8).eq_at_prec(&PadicScalar::one(ctx9, 12)));
    assert!(t.eq_at_prec(&PadicScalar::omega(ctx9, 12)));
}

#[test]
fn frobenius_examples() {
    let ctx = field_ctx(3, 2).unwrap();
    let a = PadicScalar::from_int(ctx, 7, 10);
    assert_eq!(a.frobenius(), a);
    let w = PadicScalar::omega(ctx, 10);
    assert!(w.frobenius().eq_at_prec(&w.pow(3)));
    let x = PadicScalar::from_coeffs(ctx, &[5, 11], 10).unwrap();
    assert!(x.frobenius().frobenius().eq_at_prec(&x));
}

#[test]
fn exp_log_examples() {
    let ctx = field_ctx(3, 1).unwrap();
    assert!(padic_exp(&PadicScalar::zero(ctx, 3)).unwrap().eq_at_prec(&PadicScalar::one(ctx, 3)));
    let e3 = padic_exp(&PadicScalar::from_int(ctx, 3, 3)).unwrap();
    assert_eq!(e3.numerator(), &[13]);
    let lhs = padic_exp(&PadicScalar::from_int(ctx, 3, 3)).unwrap()
        * padic_exp(&PadicScalar::from_int(ctx, 6, 3)).unwrap();
    assert!(lhs.eq_at_prec(&padic_exp(&PadicScalar::from_int(ctx, 9, 3)).unwrap()));
    assert!(padic_log(&PadicScalar::one(ctx, 3)).unwrap().is_zero());
    assert_eq!(padic_log(&e3).unwrap().numerator(), &[3]);
    assert_eq!(padic_log(&PadicScalar::from_int(ctx, 4, 3)).unwrap().numerator(), &[21]);
}

#[test]
fn division_by_zero_at_precision() {
    let ctx = field_ctx(3, 1).unwrap();
    let z = PadicScalar::from_int(ctx, 27, 3);
    assert_eq!(PadicScalar::one(ctx, 3).div(&z), Err(Error::InexactZeroDivisor));
}

#[test]
fn division_by_p_tracks_loss() {
    let ctx = field_ctx(3, 1).unwrap();
    let a = PadicScalar::from_int(ctx, 6, 5);
    let b = PadicScalar::from_int(ctx, 3, 5);
    let q = a.div(&b).unwrap();
    assert_eq!(q.numerator(), &[2]);
    // min(N_a - v_b, v_a + N_b - 2 v_b) = min(4, 4)
    assert_eq!(q.prec(), 4);
}

#[test]
fn json_round_trip_and_schema() {
    let ctx = field_ctx(3, 2).unwrap();
    let x = PadicScalar::from_coeffs(ctx, &[4, 7], 6).unwrap();
    let s = serde_json::to_string(&x).unwrap();
    assert_eq!(s, r#"{"p":3,"deg":2,"prec":6,"coeffs":[4,7]}"#);
    let back: PadicScalar = serde_json::from_str(&s).unwrap();
    assert_eq!(back, x);
    let bad = r#"{"p":3,"deg":2,"prec":2,"coeffs":[9,0]}"#;
    assert!(serde_json::from_str::<PadicScalar>(bad).is_err());
}

fn scalar(p: u64, d: usize, prec: i32, c: &[i64]) -> PadicScalar {
    PadicScalar::from_coeffs(field_ctx(p, d).unwrap(), &c[..d], prec).unwrap()
}

proptest! {
    #[test]
    fn ring_axioms(a in proptest::collection::vec(0i64..100_000, 2),
                   b in proptest::collection::vec(0i64..100_000, 2),
                   c in proptest::collection::vec(0i64..100_000, 2)) {
        let (x, y, z) = (scalar(3, 2, 8, &a), scalar(3, 2, 8, &b), scalar(3, 2, 8, &c));
        prop_assert!(((x * y) * z).eq_at_prec(&(x * (y * z))));
        prop_assert!((x * (y + z)).eq_at_prec(&(x * y + x * z)));
        prop_assert!(((x + y) + z).eq_at_prec(&(x + (y + z))));
        prop_assert!((x * y).eq_at_prec(&(y * x)));
    }

    #[test]
    fn frobenius_is_automorphism(a in proptest::collection::vec(0i64..100_000, 3),
                                 b in proptest::collection::vec(0i64..100_000, 3)) {
        let (x, y) = (scalar(5, 3, 6, &a), scalar(5, 3, 6, &b));
        prop_assert!((x * y).frobenius().eq_at_prec(&(x.frobenius() * y.frobenius())));
        prop_assert!((x + y).frobenius().eq_at_prec(&(x.frobenius() + y.frobenius())));
        prop_assert!(x.frobenius().frobenius().frobenius().eq_at_prec(&x));
    }

    #[test]
    fn teichmuller_root_of_unity(r0 in 0u64..3, r1 in 0u64..3) {
        prop_assume!(r0 != 0 || r1 != 0);
        let ctx = field_ctx(3, 2).unwrap();
        let t = PadicScalar::teichmuller(ctx, &[r0, r1], 12).unwrap();
        prop_assert!(t.pow(8).eq_at_prec(&PadicScalar::one(ctx, 12)));
        prop_assert_eq!(t.residue().unwrap(), vec![r0, r1]);
    }

    #[test]
    fn exp_log_inverse(a in proptest::collection::vec(-10_000i64..10_000, 2)) {
        let ctx = field_ctx(3, 2).unwrap();
        let x = PadicScalar::from_coeffs(ctx, &[3 * a[0], 3 * a[1]], 12).unwrap();
        let e = padic_exp(&x).unwrap();
        prop_assert!(padic_log(&e).unwrap().eq_at_prec(&x));
        let u = PadicScalar::one(ctx, 12) + x;
        prop_assert!(padic_exp(&padic_log(&u).unwrap()).unwrap().eq_at_prec(&u));
    }

    #[test]
    fn precision_is_conservative(a in proptest::collection::vec(1i64..1_000_000, 2),
                                 b in proptest::collection::vec(1i64..1_000_000, 2),
                                 n in 3i32..10) {
        let lo = |c: &[i64]| scalar(3, 2, n, c);
        let hi = |c: &[i64]| scalar(3, 2, n + 2, c);
        let (x, y) = (lo(&a), lo(&b));
        let (xh, yh) = (hi(&a), hi(&b));
        prop_assert!((x * y).eq_at_prec(&(xh * yh).truncate(n)));
        if let (Ok(q), Ok(qh)) = (x.div(&y), xh.div(&yh)) {
            prop_assert!(q.eq_at_prec(&qh.truncate(q.prec())));
        }
        let three = PadicScalar::from_int(field_ctx(3, 2).unwrap(), 3, n);
        let e = padic_exp(&(x * three)).unwrap();
        let eh = padic_exp(&(xh * three)).unwrap();
        prop_assert!(e.eq_at_prec(&eh.truncate(n)));
    }
}
