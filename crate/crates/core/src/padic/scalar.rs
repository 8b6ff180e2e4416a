use std::fmt;

use serde::{Deserialize, Serialize};

use super::ctx::{field_ctx, FieldCtx, Raw, MAX_DEG};
use crate::error::{Error, Result};

/// Valuation of a scalar known only modulo `p^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Exact(i32),
    /// Indistinguishable from zero: the valuation is at least this bound.
    AtLeast(i32),
}

impl Valuation {
    /// The exact value, or the lower bound.
    pub fn bound(self) -> i32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }
    pub fn is_exact(self) -> bool {
        matches!(self, Valuation::Exact(_))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

/// Element of the unramified extension `L = Q_{p^d}` at capped absolute
/// precision.
///
/// The value is `(Σ c_j ω^j) / p^shift`, known modulo `p^prec`; the numerator
/// coefficients are reduced modulo `p^(prec + shift)`. The shift is kept
/// minimal, so integral elements have `shift == 0` and store their residues
/// modulo `p^prec` directly.
#[derive(Clone, Copy)]
pub struct PadicScalar {
    ctx: &'static FieldCtx,
    c: Raw,
    shift: u32,
    prec: i32,
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.ctx.deg();
        let mut terms = Vec::new();
        for j in 0..d {
            let c = self.c[j];
            if c == 0 {
                continue;
            }
            terms.push(match j {
                0 => format!("{c}"),
                1 => format!("{c}*w"),
                _ => format!("{c}*w^{j}"),
            });
        }
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        if self.shift > 0 {
            write!(f, "({body})/{}^{}", self.ctx.p(), self.shift)?;
        } else {
            write!(f, "{body}")?;
        }
        write!(f, " + O({}^{})", self.ctx.p(), self.prec)
    }
}

fn v_p_u64(mut x: u64, p: u64) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// `p`-adic valuation of a nonzero integer.
pub fn v_p_int(n: i64, p: u64) -> u32 {
    v_p_u64(n.unsigned_abs(), p)
}

impl PadicScalar {
    fn build(ctx: &'static FieldCtx, mut c: Raw, mut shift: u32, mut prec: i32) -> Self {
        let emax = ctx.emax() as i32;
        if prec + shift as i32 > emax {
            prec = emax - shift as i32;
        }
        let mut e = prec + shift as i32;
        if e <= 0 {
            return PadicScalar { ctx, c: [0; MAX_DEG], shift: (-prec).max(0) as u32, prec };
        }
        let m = ctx.modulus(e as u32);
        for x in c.iter_mut().take(ctx.deg()) {
            *x %= m;
        }
        for x in c.iter_mut().skip(ctx.deg()) {
            *x = 0;
        }
        let p = ctx.p();
        if c[..ctx.deg()].iter().all(|&x| x == 0) {
            let shift = (-prec).max(0) as u32;
            return PadicScalar { ctx, c: [0; MAX_DEG], shift, prec };
        }
        while shift > 0 && c[..ctx.deg()].iter().all(|&x| x % p == 0) {
            for x in c.iter_mut().take(ctx.deg()) {
                *x /= p;
            }
            shift -= 1;
            e -= 1;
        }
        debug_assert!(e >= 0);
        PadicScalar { ctx, c, shift, prec }
    }

    pub fn zero(ctx: &'static FieldCtx, prec: i32) -> Self {
        Self::build(ctx, [0; MAX_DEG], 0, prec)
    }

    pub fn one(ctx: &'static FieldCtx, prec: i32) -> Self {
        Self::from_int(ctx, 1, prec)
    }

    pub fn from_int(ctx: &'static FieldCtx, n: i64, prec: i32) -> Self {
        let mut c = [0; MAX_DEG];
        let e = (prec.max(0) as u32).min(ctx.emax());
        let m = ctx.modulus(e) as i128;
        c[0] = (n as i128).rem_euclid(m) as u64;
        Self::build(ctx, c, 0, prec)
    }

    /// `num / den` for integers, `den ≠ 0`; the denominator is treated as
    /// exact.
    pub fn from_ratio(ctx: &'static FieldCtx, num: i64, den: i64, prec: i32) -> Result<Self> {
        if den == 0 {
            return Err(Error::InexactZeroDivisor);
        }
        let v = v_p_int(den, ctx.p()) as i32;
        Ok(Self::from_int(ctx, num, prec + v).div_exact_int(den))
    }

    /// Integral element from coefficients in the `ω`-power basis.
    pub fn from_coeffs(ctx: &'static FieldCtx, coeffs: &[i64], prec: i32) -> Result<Self> {
        if coeffs.len() > ctx.deg() {
            return Err(Error::Incompatible(format!(
                "{} coefficients for degree {}",
                coeffs.len(),
                ctx.deg()
            )));
        }
        let e = (prec.max(0) as u32).min(ctx.emax());
        let m = ctx.modulus(e) as i128;
        let mut c = [0; MAX_DEG];
        for (j, &x) in coeffs.iter().enumerate() {
            c[j] = (x as i128).rem_euclid(m) as u64;
        }
        Ok(Self::build(ctx, c, 0, prec))
    }

    /// The Teichmüller generator `ω`.
    pub fn omega(ctx: &'static FieldCtx, prec: i32) -> Self {
        let mut c = [0; MAX_DEG];
        if ctx.deg() == 1 {
            let m = ctx.modulus((prec.max(0) as u32).min(ctx.emax()));
            c[0] = (ctx.modulus(ctx.emax()) - ctx.minpoly()[0]) % ctx.modulus(ctx.emax()) % m;
        } else {
            c[1] = 1;
        }
        Self::build(ctx, c, 0, prec)
    }

    pub fn ctx(&self) -> &'static FieldCtx {
        self.ctx
    }
    pub fn p(&self) -> u64 {
        self.ctx.p()
    }
    pub fn deg(&self) -> usize {
        self.ctx.deg()
    }
    /// Absolute precision: the value is known modulo `p^prec`.
    pub fn prec(&self) -> i32 {
        self.prec
    }
    pub fn shift(&self) -> u32 {
        self.shift
    }
    /// Stored numerator coefficients (before division by `p^shift`).
    pub fn numerator(&self) -> &[u64] {
        &self.c[..self.ctx.deg()]
    }

    fn storage_exp(&self) -> u32 {
        (self.prec + self.shift as i32).max(0) as u32
    }

    pub fn same_field(&self, other: &Self) -> bool {
        std::ptr::eq(self.ctx, other.ctx)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(Error::Incompatible(format!(
                "(p, d) = ({}, {}) vs ({}, {})",
                self.p(),
                self.deg(),
                other.p(),
                other.deg()
            )))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c[..self.ctx.deg()].iter().all(|&x| x == 0)
    }

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::AtLeast(self.prec);
        }
        let p = self.ctx.p();
        let w = self.c[..self.ctx.deg()].iter().map(|&x| v_p_u64(x, p)).min().unwrap();
        Valuation::Exact(w as i32 - self.shift as i32)
    }

    /// Valuation, with zero-at-precision elements contributing their precision.
    pub fn val_bound(&self) -> i32 {
        self.valuation().bound()
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Exact(0)
    }

    pub fn is_integral(&self) -> bool {
        self.shift == 0
    }

    /// Treat the stored representative as known to `prec` digits (used to
    /// run integral recursions with guard digits; callers truncate back).
    pub fn lift_to(&self, prec: i32) -> Self {
        if prec <= self.prec {
            return *self;
        }
        Self::build(self.ctx, self.c, self.shift, prec)
    }

    /// Drop precision to at most `prec`.
    pub fn truncate(&self, prec: i32) -> Self {
        if prec >= self.prec {
            return *self;
        }
        Self::build(self.ctx, self.c, self.shift, prec)
    }

    /// Numerator rewritten over `p^k` with `k ≥ shift`, reduced mod `p^(prec+k)`.
    fn numerator_at(&self, k: u32, prec: i32) -> Raw {
        let e = prec + k as i32;
        if e <= 0 {
            return [0; MAX_DEG];
        }
        let up = k - self.shift;
        let keep = e - up as i32;
        if keep <= 0 {
            return [0; MAX_DEG];
        }
        let base = self.ctx.reduce_raw(&self.c, keep as u32);
        self.ctx.scale_raw(&base, self.ctx.p_pow(up), e as u32)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(self.same_field(other));
        let k = self.shift.max(other.shift);
        let mut prec = self.prec.min(other.prec);
        prec = prec.min(self.ctx.emax() as i32 - k as i32);
        let e = prec + k as i32;
        if e <= 0 {
            return Self::zero(self.ctx, prec);
        }
        let a = self.numerator_at(k, prec);
        let b = other.numerator_at(k, prec);
        Self::build(self.ctx, self.ctx.add_raw(&a, &b, e as u32), k, prec)
    }

    pub fn neg(&self) -> Self {
        let e = self.storage_exp();
        let zero = [0; MAX_DEG];
        Self::build(self.ctx, self.ctx.sub_raw(&zero, &self.c, e), self.shift, self.prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Numerator stripped of its common `p`-power: `(w, unit-ish numerator)`
    /// with the stripped numerator known modulo `p^(storage - w)`.
    fn stripped(&self) -> (u32, Raw) {
        let p = self.ctx.p();
        let w = self.c[..self.ctx.deg()].iter().map(|&x| v_p_u64(x, p)).min().unwrap();
        let mut c = self.c;
        let pw = self.ctx.p_pow(w);
        for x in c.iter_mut().take(self.ctx.deg()) {
            *x /= pw;
        }
        (w, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert!(self.same_field(other));
        let v1 = self.val_bound();
        let v2 = other.val_bound();
        let mut prec = (self.prec + v2).min(other.prec + v1);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ctx, prec);
        }
        let e = v1 + v2;
        if prec <= e {
            return Self::zero(self.ctx, prec);
        }
        let shift = (-e).max(0) as u32;
        prec = prec.min(self.ctx.emax() as i32 - shift as i32);
        let unit_exp = prec + shift as i32 - e.max(0);
        if unit_exp <= 0 {
            return Self::zero(self.ctx, prec);
        }
        let (_, a) = self.stripped();
        let (_, b) = other.stripped();
        let prod = self.ctx.mul_raw(&a, &b, unit_exp as u32);
        let total = (prec + shift as i32) as u32;
        let num = self.ctx.scale_raw(&prod, self.ctx.p_pow(e.max(0) as u32), total);
        Self::build(self.ctx, num, shift, prec)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InexactZeroDivisor);
        }
        let v = self.val_bound();
        let (w, u) = self.stripped();
        let unit_exp = self.storage_exp() - w;
        let inv = self
            .ctx
            .inv_unit_raw(&u, unit_exp)
            .ok_or_else(|| Error::InternalInconsistency("stripped numerator is not a unit".into()))?;
        let prec = self.prec - 2 * v;
        if v >= 0 {
            Ok(Self::build(self.ctx, inv, v as u32, prec))
        } else {
            let up = (-v) as u32;
            let total = ((prec).min(self.ctx.emax() as i32)).max(0) as u32;
            let num = self.ctx.scale_raw(&inv, self.ctx.p_pow(up.min(self.ctx.emax())), total);
            Ok(Self::build(self.ctx, num, 0, prec))
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul(&other.inv()?))
    }

    /// Multiply by an exact integer; precision grows by `v_p(n)`.
    pub fn mul_exact_int(&self, n: i64) -> Self {
        if n == 0 {
            return Self::zero(self.ctx, self.ctx.emax() as i32);
        }
        let p = self.ctx.p();
        let v = v_p_int(n, p);
        let u = n / (p.pow(v) as i64);
        let e = self.storage_exp();
        let m = self.ctx.modulus(e) as i128;
        let scaled = self.ctx.scale_raw(&self.c, (u as i128).rem_euclid(m.max(1)) as u64, e);
        Self::build(self.ctx, scaled, self.shift, self.prec).mul_p_pow(v as i32)
    }

    /// Divide by an exact nonzero integer; precision drops by `v_p(n)`.
    pub fn div_exact_int(&self, n: i64) -> Self {
        assert!(n != 0, "division by exact zero");
        let p = self.ctx.p();
        let v = v_p_int(n, p);
        let u = n / (p.pow(v) as i64);
        let e = self.storage_exp();
        let mut ur: Raw = [0; MAX_DEG];
        let m = self.ctx.modulus(e.max(1)) as i128;
        ur[0] = (u as i128).rem_euclid(m) as u64;
        let uinv = self.ctx.inv_unit_raw(&ur, e).expect("unit integer");
        let scaled = self.ctx.mul_raw(&self.c, &uinv, e);
        Self::build(self.ctx, scaled, self.shift, self.prec).mul_p_pow(-(v as i32))
    }

    /// Multiply by the exact power `p^k` (`k` may be negative).
    pub fn mul_p_pow(&self, k: i32) -> Self {
        if k == 0 {
            return *self;
        }
        if k < 0 {
            return Self::build(self.ctx, self.c, self.shift + (-k) as u32, self.prec + k);
        }
        let k = k as u32;
        if self.shift >= k {
            return Self::build(self.ctx, self.c, self.shift - k, self.prec + k as i32);
        }
        let extra = k - self.shift;
        let prec = (self.prec + k as i32).min(self.ctx.emax() as i32);
        let total = prec.max(0) as u32;
        let num = self.ctx.scale_raw(&self.c, self.ctx.p_pow(extra.min(self.ctx.emax())), total);
        Self::build(self.ctx, num, 0, prec)
    }

    pub fn pow(&self, mut n: u64) -> Self {
        if n == 0 {
            return Self::one(self.ctx, self.ctx.emax() as i32);
        }
        let mut result: Option<Self> = None;
        let mut base = *self;
        while n > 0 {
            if n & 1 == 1 {
                result = Some(match result {
                    Some(r) => r.mul(&base),
                    None => base,
                });
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result.unwrap()
    }

    /// Lift of Frobenius `ω ↦ ω^p`.
    pub fn frobenius(&self) -> Self {
        let e = self.storage_exp();
        Self::build(self.ctx, self.ctx.frobenius_raw(&self.c, e), self.shift, self.prec)
    }

    /// Residue modulo `p` of an integral element, in the `ω̄`-basis.
    pub fn residue(&self) -> Result<Vec<u64>> {
        if !self.is_integral() || self.prec < 1 {
            return Err(Error::NotIntegral(self.to_string()));
        }
        let p = self.ctx.p();
        Ok(self.c[..self.ctx.deg()].iter().map(|&x| x % p).collect())
    }

    /// Unique `(q - 1)`-th root of unity with the given nonzero residue.
    pub fn teichmuller(ctx: &'static FieldCtx, residue: &[u64], prec: i32) -> Result<Self> {
        let p = ctx.p();
        if residue.len() > ctx.deg() || residue.iter().all(|&r| r % p == 0) {
            return Err(Error::Precondition("teichmuller of a zero residue".into()));
        }
        let e = (prec.max(1) as u32).min(ctx.emax());
        let mut x: Raw = [0; MAX_DEG];
        for (j, &r) in residue.iter().enumerate() {
            x[j] = r % p;
        }
        for _ in 0..e {
            x = ctx.pow_raw(&x, ctx.q(), e);
        }
        Ok(Self::build(ctx, x, 0, prec))
    }

    /// Coordinate `j` (numerator, shift) in the `ω`-power basis.
    pub fn coordinate(&self, j: usize) -> (u64, u32) {
        (self.c[j], self.shift)
    }

    /// The `j`-th `Z_p`-coordinate (in the basis `1, ω, …`) as a scalar.
    pub fn coordinate_scalar(&self, j: usize) -> Self {
        let mut c = [0; MAX_DEG];
        c[0] = self.c[j];
        Self::build(self.ctx, c, self.shift, self.prec)
    }

    /// `self ≡ other` modulo the smaller of the two precisions.
    pub fn eq_at_prec(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// `self ≡ other (mod p^n)`; false if either precision is below `n`.
    pub fn eq_mod(&self, other: &Self, n: i32) -> bool {
        let d = self.sub(other);
        d.prec >= n && d.val_bound() >= n
    }

    pub fn to_json(&self) -> ScalarJson {
        ScalarJson {
            p: self.p(),
            deg: self.deg(),
            prec: self.prec,
            coeffs: self.numerator().to_vec(),
            den_exp: self.shift,
        }
    }

    pub fn from_json(j: &ScalarJson) -> Result<Self> {
        let ctx = field_ctx(j.p, j.deg)?;
        if j.coeffs.len() != j.deg {
            return Err(Error::Parse(format!("expected {} coefficients", j.deg)));
        }
        let e = j.prec + j.den_exp as i32;
        if e < 0 || e > ctx.emax() as i32 {
            return Err(Error::Parse(format!("precision {} out of range", j.prec)));
        }
        let m = ctx.modulus(e as u32);
        if j.coeffs.iter().any(|&c| c >= m) {
            return Err(Error::Parse(format!("coefficient out of range [0, {m})")));
        }
        let mut c = [0; MAX_DEG];
        c[..j.deg].copy_from_slice(&j.coeffs);
        Ok(Self::build(ctx, c, j.den_exp, j.prec))
    }
}

impl PartialEq for PadicScalar {
    /// Equality as stored representatives (same value, same precision).
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other) && self.prec == other.prec && self.shift == other.shift && self.c == other.c
    }
}

/// JSON form `{"p", "deg", "prec", "coeffs"}`; `den_exp` (the power of `p`
/// dividing the numerator) is omitted for integral elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub p: u64,
    pub deg: usize,
    pub prec: i32,
    pub coeffs: Vec<u64>,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    pub den_exp: u32,
}

fn is_zero_u32(x: &u32) -> bool {
    *x == 0
}

impl Serialize for PadicScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PadicScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ScalarJson::deserialize(d)?;
        PadicScalar::from_json(&j).map_err(serde::de::Error::custom)
    }
}

impl std::ops::Add for PadicScalar {
    type Output = PadicScalar;
    fn add(self, rhs: Self) -> Self {
        PadicScalar::add(&self, &rhs)
    }
}

impl std::ops::Sub for PadicScalar {
    type Output = PadicScalar;
    fn sub(self, rhs: Self) -> Self {
        PadicScalar::sub(&self, &rhs)
    }
}

impl std::ops::Mul for PadicScalar {
    type Output = PadicScalar;
    fn mul(self, rhs: Self) -> Self {
        PadicScalar::mul(&self, &rhs)
    }
}

impl std::ops::Neg for PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> Self {
        PadicScalar::neg(&self)
    }
}
