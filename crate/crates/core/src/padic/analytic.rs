//! Convergent power series in one scalar variable: `exp` and `log`.

use super::scalar::{PadicScalar, Valuation};
use crate::error::{Error, Result};

/// Lower bound for `v_p(a^i / i!)` given `v_p(a) ≥ v`: `i·v − (i−1)/(p−1)`.
fn exp_term_bound(i: u64, v: i32, p: u64) -> f64 {
    i as f64 * v as f64 - (i as f64 - 1.0) / (p as f64 - 1.0)
}

/// `Σ a^i / i!`, defined for `v_p(a) > 1/(p−1)`.
pub fn padic_exp(a: &PadicScalar) -> Result<PadicScalar> {
    let p = a.p();
    let v = a.val_bound();
    // valuations in an unramified field are integers, so v ≥ 1 is the condition
    if v < 1 {
        return Err(Error::ExpDivergent(a.valuation().to_string()));
    }
    let target = a.prec();
    let ctx = a.ctx();
    let mut sum = PadicScalar::one(ctx, ctx.emax() as i32);
    let mut term = sum;
    let mut i = 1u64;
    loop {
        if exp_term_bound(i, v, p) >= target as f64 {
            break;
        }
        term = term.mul(a).div_exact_int(i as i64);
        sum = sum.add(&term);
        i += 1;
    }
    Ok(sum.truncate(target))
}

/// `Σ (−1)^{i−1} (a−1)^i / i`, defined for `v_p(a − 1) > 0`.
pub fn padic_log(a: &PadicScalar) -> Result<PadicScalar> {
    let ctx = a.ctx();
    let y = a.sub(&PadicScalar::one(ctx, ctx.emax() as i32));
    let v = match y.valuation() {
        Valuation::Exact(v) => v,
        Valuation::AtLeast(v) => v,
    };
    if v < 1 || !a.is_integral() {
        return Err(Error::LogDivergent);
    }
    let p = a.p() as f64;
    let target = a.prec();
    let mut sum = PadicScalar::zero(ctx, ctx.emax() as i32);
    let mut power = y;
    let mut i = 1u64;
    loop {
        let term = power.div_exact_int(i as i64);
        sum = if i % 2 == 1 { sum.add(&term) } else { sum.sub(&term) };
        i += 1;
        // v_p(y^j / j) ≥ j·v − log_p(j), increasing in j for v ≥ 1
        if i as f64 * v as f64 - (i as f64).ln() / p.ln() >= target as f64 {
            break;
        }
        power = power.mul(&y);
    }
    Ok(sum.truncate(target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::field_ctx;

    #[test]
    fn exp_zero_is_one() {
        let ctx = field_ctx(3, 1).unwrap();
        let e = padic_exp(&PadicScalar::zero(ctx, 5)).unwrap();
        assert!(e.eq_at_prec(&PadicScalar::one(ctx, 5)));
    }

    #[test]
    fn exp_of_three_mod_27() {
        // full series 1 + 3 + 9/2 + 27/6 + 81/24 + ... ≡ 13 (mod 27)
        let ctx = field_ctx(3, 1).unwrap();
        let e = padic_exp(&PadicScalar::from_int(ctx, 3, 3)).unwrap();
        assert_eq!(e.numerator(), &[13]);
        assert_eq!(e.prec(), 3);
    }

    #[test]
    fn log_of_four_mod_27() {
        let ctx = field_ctx(3, 1).unwrap();
        let l = padic_log(&PadicScalar::from_int(ctx, 4, 3)).unwrap();
        assert_eq!(l.numerator(), &[21]);
    }

    #[test]
    fn log_exp_round_trip() {
        let ctx = field_ctx(3, 1).unwrap();
        let x = PadicScalar::from_int(ctx, 3, 3);
        let l = padic_log(&padic_exp(&x).unwrap()).unwrap();
        assert!(l.eq_at_prec(&x));
        assert_eq!(l.numerator(), &[3]);
    }

    #[test]
    fn log_one_is_zero() {
        let ctx = field_ctx(5, 2).unwrap();
        assert!(padic_log(&PadicScalar::one(ctx, 10)).unwrap().is_zero());
    }

    #[test]
    fn divergence_errors() {
        let ctx = field_ctx(3, 1).unwrap();
        assert!(matches!(padic_exp(&PadicScalar::from_int(ctx, 1, 5)), Err(Error::ExpDivergent(_))));
        assert_eq!(padic_log(&PadicScalar::from_int(ctx, 2, 5)), Err(Error::LogDivergent));
    }

    #[test]
    fn exp_is_homomorphism() {
        let ctx = field_ctx(3, 1).unwrap();
        let a = PadicScalar::from_int(ctx, 3, 10);
        let b = PadicScalar::from_int(ctx, 6, 10);
        let lhs = padic_exp(&a).unwrap().mul(&padic_exp(&b).unwrap());
        let rhs = padic_exp(&a.add(&b)).unwrap();
        assert!(lhs.eq_at_prec(&rhs));
    }
}
