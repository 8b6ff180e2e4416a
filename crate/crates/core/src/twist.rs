//! Rank-one twisting pipeline: scalar defects `c_i`, the character that
//! cancels them, and verification on the twisted module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{padic_exp, PadicScalar, ScalarJson};
use crate::phigamma::{default_basis, matrix, CharValue, CharacterJson, PhiGammaModule, TwistCharacter};

/// `(0, c_2, …, c_d)` with `∇_(β_1) − ∇_(β_i) = c_i · id`.
pub fn compute_constants(m: &PhiGammaModule, basis: Option<&[PadicScalar]>) -> Result<Vec<PadicScalar>> {
    let a = m.is_f_analytic(basis)?;
    match a.constants {
        Some(c) => Ok(c),
        None => {
            let i = a.defects.iter().position(|d| crate::phigamma::scalar_of(d).is_none()).unwrap_or(0);
            Err(Error::EndNotScalar(i + 2))
        }
    }
}

/// Least `k >= 0` with `v(c) + 1 + k > 1/(p−1)`, so that
/// `exp(c · log(u_i^(p^k)))` converges.
fn root_exponent(c: &PadicScalar) -> u32 {
    let p = c.p() as i32;
    let v = c.val_bound();
    let mut k = 0;
    while (v + 1 + k) * (p - 1) <= 1 {
        k += 1;
    }
    k as u32
}

/// `δ = 1` on `π`, `ζ`, `u_1`; `δ(u_i^(e_i)) = exp(c_i · log u_i^(e_i))`
/// with `log u_i = p β_i`. With this sign the twist's constants are
/// `c_i(M) − c_i(M) = 0`.
pub fn construct_twist_character(c: &[PadicScalar], basis: Option<&[PadicScalar]>) -> Result<TwistCharacter> {
    let ctx = c.first().ok_or_else(|| Error::Precondition("no constants".into()))?.ctx();
    let std = default_basis(ctx);
    if let Some(b) = basis {
        if b.len() != std.len() || b.iter().zip(&std).any(|(x, y)| !x.eq_at_prec(y)) {
            return Err(Error::Precondition("generators are tied to the basis 1, w, ..., w^(d-1)".into()));
        }
    }
    if c.len() != ctx.deg() || !c[0].is_zero() {
        return Err(Error::Precondition("need c_1 = 0 and one constant per basis element".into()));
    }
    let mut delta = TwistCharacter::trivial(ctx);
    for (i, ci) in c.iter().enumerate().skip(1) {
        if ci.is_zero() {
            continue;
        }
        let e = ctx.p().pow(root_exponent(ci));
        let log_ue = std[i].mul_exact_int((ctx.p() * e) as i64);
        let value = padic_exp(&ci.mul(&log_ue))?;
        delta.gens[i] = if e == 1 { CharValue::Direct(value) } else { CharValue::Deferred { e, value } };
    }
    Ok(delta)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RootObligation {
    pub generator: usize,
    pub e: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistReport {
    /// Constants of the input module (empty when only verifying).
    pub constants: Vec<ScalarJson>,
    pub character: CharacterJson,
    /// Constants of the twisted module, when its defects are scalar.
    pub residual: Option<Vec<ScalarJson>>,
    /// Per defect matrix: smallest coefficient valuation, `null` if it
    /// vanishes at precision.
    pub defect_valuations: Vec<Option<i32>>,
    /// Working precision of the twisted module.
    pub precision: i32,
    pub verdict: String,
    pub root_obligations: Vec<RootObligation>,
    /// Degree bound `Π e_i` of the extension needed to define `δ` on all of
    /// `O_F^×`.
    pub extension_degree: u64,
}

impl TwistReport {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

/// Twist (in open-subgroup mode when `δ` has deferred values) and test.
pub fn verify_twist(m: &PhiGammaModule, delta: &TwistCharacter) -> Result<TwistReport> {
    let t = m.twist(delta)?;
    let a = t.is_f_analytic(None)?;
    let defect_valuations = a
        .defects
        .iter()
        .map(|d| {
            if matrix::is_zero(d) {
                None
            } else {
                d.iter().flatten().filter(|x| !x.is_zero()).map(|x| x.min_coeff_valuation()).min()
            }
        })
        .collect();
    let obligations: Vec<RootObligation> =
        delta.root_obligations().into_iter().map(|(generator, e)| RootObligation { generator, e }).collect();
    Ok(TwistReport {
        constants: vec![],
        character: delta.to_json(),
        residual: a.constants.map(|c| c.iter().map(PadicScalar::to_json).collect()),
        defect_valuations,
        precision: t.precision(),
        verdict: if a.analytic { "pass" } else { "fail" }.into(),
        extension_degree: obligations.iter().map(|o| o.e).product(),
        root_obligations: obligations,
    })
}

/// `compute_constants → construct_twist_character → verify_twist`.
pub fn run_pipeline(m: &PhiGammaModule) -> Result<TwistReport> {
    let c = compute_constants(m, None)?;
    let delta = construct_twist_character(&c, None)?;
    let mut r = verify_twist(m, &delta)?;
    r.constants = c.iter().map(PadicScalar::to_json).collect();
    Ok(r)
}
