use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{padic_exp, padic_log, FieldCtx, PadicScalar, ScalarJson};

/// Value of a character on a pro-`p` generator `u_i`.
#[derive(Clone, Debug)]
pub enum CharValue {
    /// `δ(u_i)` itself.
    Direct(PadicScalar),
    /// Only `δ(u_i^e)` is known over the coefficient field (`e` a power of `p`).
    Deferred { e: u64, value: PadicScalar },
}

impl CharValue {
    pub fn value(&self) -> &PadicScalar {
        match self {
            CharValue::Direct(v) | CharValue::Deferred { value: v, .. } => v,
        }
    }
    pub fn exponent(&self) -> u64 {
        match self {
            CharValue::Direct(_) => 1,
            CharValue::Deferred { e, .. } => *e,
        }
    }
}

/// A character `δ: F^× → L^×` recorded on `π = p`, the torsion generator
/// `ζ` and the pro-`p` generators `u_i = exp(p·ω^(i−1))`.
#[derive(Clone, Debug)]
pub struct TwistCharacter {
    pub pi: PadicScalar,
    pub zeta: PadicScalar,
    pub gens: Vec<CharValue>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharValueJson {
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub e: u64,
    pub value: ScalarJson,
}

fn one() -> u64 {
    1
}
fn is_one(e: &u64) -> bool {
    *e == 1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacterJson {
    pub pi: ScalarJson,
    pub zeta: ScalarJson,
    pub gens: Vec<CharValueJson>,
}

/// Torsion generator `ζ` and pro-`p` generators `exp(p·ω^i)`, exact to storage.
pub fn standard_units(ctx: &'static FieldCtx) -> Result<(PadicScalar, Vec<PadicScalar>)> {
    let e = ctx.emax() as i32;
    let w = PadicScalar::omega(ctx, e);
    let p = PadicScalar::from_int(ctx, ctx.p() as i64, e);
    let mut gens = Vec::with_capacity(ctx.deg());
    let mut b = PadicScalar::one(ctx, e);
    for _ in 0..ctx.deg() {
        gens.push(padic_exp(&p.mul(&b))?);
        b = b.mul(&w);
    }
    Ok((w, gens))
}

impl TwistCharacter {
    /// Character given by a map on units (applied to the standard generators).
    pub fn from_unit_map(ctx: &'static FieldCtx, pi: PadicScalar, f: impl Fn(&PadicScalar) -> PadicScalar) -> Result<Self> {
        let (zeta, gens) = standard_units(ctx)?;
        Ok(TwistCharacter { pi, zeta: f(&zeta), gens: gens.iter().map(|u| CharValue::Direct(f(u))).collect() })
    }

    pub fn trivial(ctx: &'static FieldCtx) -> Self {
        let one = PadicScalar::one(ctx, ctx.emax() as i32);
        TwistCharacter { pi: one, zeta: one, gens: vec![CharValue::Direct(one); ctx.deg()] }
    }

    /// `δ(u) = u`, `δ(p) = p`.
    pub fn identity(ctx: &'static FieldCtx) -> Result<Self> {
        let p = PadicScalar::from_int(ctx, ctx.p() as i64, ctx.emax() as i32);
        Self::from_unit_map(ctx, p, |u| *u)
    }

    /// `δ(u) = σ(u)` (arithmetic Frobenius), `δ(p) = 1`.
    pub fn frobenius(ctx: &'static FieldCtx) -> Result<Self> {
        Self::from_unit_map(ctx, PadicScalar::one(ctx, ctx.emax() as i32), |u| u.frobenius())
    }

    /// `δ(ζ) = ζ^k`, trivial on `1 + pO_F` and at `p`.
    pub fn torsion(ctx: &'static FieldCtx, k: u64) -> Self {
        let mut d = Self::trivial(ctx);
        d.zeta = PadicScalar::omega(ctx, ctx.emax() as i32).pow(k);
        d
    }

    pub fn ctx(&self) -> &'static FieldCtx {
        self.pi.ctx()
    }

    pub fn is_rational(&self) -> bool {
        self.gens.iter().all(|g| matches!(g, CharValue::Direct(_)))
    }

    /// Root obligations `(i, e_i)` for deferred generators (1-based).
    pub fn root_obligations(&self) -> Vec<(usize, u64)> {
        self.gens.iter().enumerate().filter(|(_, g)| g.exponent() > 1).map(|(i, g)| (i + 1, g.exponent())).collect()
    }

    /// Pointwise product; deferred entries multiply on the common power.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.gens.len() != other.gens.len() {
            return Err(Error::Incompatible("characters on different fields".into()));
        }
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(a, b)| {
                let e = a.exponent().max(b.exponent());
                let va = a.value().pow(e / a.exponent());
                let vb = b.value().pow(e / b.exponent());
                if e == 1 {
                    CharValue::Direct(va.mul(&vb))
                } else {
                    CharValue::Deferred { e, value: va.mul(&vb) }
                }
            })
            .collect();
        Ok(TwistCharacter { pi: self.pi.mul(&other.pi), zeta: self.zeta.mul(&other.zeta), gens })
    }

    /// `δ^{-1}`.
    pub fn inverse(&self) -> Result<Self> {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                Ok(match g {
                    CharValue::Direct(v) => CharValue::Direct(v.inv()?),
                    CharValue::Deferred { e, value } => CharValue::Deferred { e: *e, value: value.inv()? },
                })
            })
            .collect::<Result<_>>()?;
        Ok(TwistCharacter { pi: self.pi.inv()?, zeta: self.zeta.inv()?, gens })
    }

    /// Values at `ζ` must be `(q−1)`-th roots of unity, values at `u_i`
    /// principal units, the value at `p` nonzero.
    pub fn validate(&self) -> Result<()> {
        let ctx = self.ctx();
        if self.gens.len() != ctx.deg() {
            return Err(Error::Precondition(format!("{} generator values for degree {}", self.gens.len(), ctx.deg())));
        }
        if self.pi.is_zero() {
            return Err(Error::NotAUnit("character value at p vanishes".into()));
        }
        let one = PadicScalar::one(ctx, ctx.emax() as i32);
        if !self.zeta.is_unit() || !self.zeta.pow(ctx.q() - 1).eq_at_prec(&one) {
            return Err(Error::NotAUnit(format!("value at zeta {} is not a root of unity", self.zeta)));
        }
        for (i, g) in self.gens.iter().enumerate() {
            let v = g.value();
            if !v.is_integral() || v.sub(&one).val_bound() < 1 {
                return Err(Error::NotAUnit(format!("value at u{} is not a principal unit", i + 1)));
            }
            let e = g.exponent();
            if e > 1 && ctx.p().pow(e.ilog(ctx.p())) != e {
                return Err(Error::Precondition(format!("root obligation {e} is not a power of p")));
            }
        }
        Ok(())
    }

    /// `log δ(u_i)/(p·e_i)`: the `Z_p`-linear map `λ` with `λ(ω^(i−1)) = …`
    /// satisfies `δ(exp(p·x)) = exp(p·λ(x))`.
    pub fn lambda(&self, i: usize) -> Result<PadicScalar> {
        let g = &self.gens[i];
        let l = padic_log(g.value())?;
        Ok(l.div_exact_int(g.exponent() as i64 * self.ctx().p() as i64))
    }

    pub fn to_json(&self) -> CharacterJson {
        CharacterJson {
            pi: self.pi.to_json(),
            zeta: self.zeta.to_json(),
            gens: self.gens.iter().map(|g| CharValueJson { e: g.exponent(), value: g.value().to_json() }).collect(),
        }
    }

    pub fn from_json(j: &CharacterJson) -> Result<Self> {
        let gens = j
            .gens
            .iter()
            .map(|g| {
                let value = PadicScalar::from_json(&g.value)?;
                Ok(if g.e == 1 { CharValue::Direct(value) } else { CharValue::Deferred { e: g.e, value } })
            })
            .collect::<Result<_>>()?;
        let d = TwistCharacter { pi: PadicScalar::from_json(&j.pi)?, zeta: PadicScalar::from_json(&j.zeta)?, gens };
        d.validate()?;
        Ok(d)
    }
}
