//! Twisting by characters and moving to open subgroups.

use super::character::{CharValue, TwistCharacter};
use super::matrix;
use super::module::{generator_units, Generator, PhiGammaModule};
use crate::error::{Error, Result};

impl PhiGammaModule {
    /// The same module with generator `u_i` replaced by `u_i^(scales[i])`
    /// (each a multiple of the current scale).
    pub fn restrict(&self, scales: &[u64]) -> Result<Self> {
        if scales.len() != self.ctx().deg() {
            return Err(Error::Incompatible(format!("{} scales for degree {}", scales.len(), self.ctx().deg())));
        }
        if scales == self.scales().as_slice() {
            return Ok(self.clone());
        }
        let units = generator_units(self.ctx(), scales)?;
        let mut gens = vec![self.gens[0].clone()];
        for ((g, (name, unit, scale)), &e) in self.gens[1..].iter().zip(units.into_iter().skip(1)).zip(scales) {
            if e % g.scale != 0 {
                return Err(Error::Precondition(format!("scale {e} is not a multiple of {}", g.scale)));
            }
            let (_, mat) = self.pair_pow((g.unit, g.mat.clone()), e / g.scale)?;
            gens.push(Generator { name, unit, scale, mat });
        }
        Ok(PhiGammaModule { gens, ..self.clone() })
    }

    /// `M(δ)`: `Φ ↦ δ(π)Φ`, `M_u ↦ δ(u)M_u`. Deferred values move the module
    /// to the open subgroup where they are defined.
    pub fn twist(&self, delta: &TwistCharacter) -> Result<Self> {
        if !std::ptr::eq(delta.ctx(), self.ctx()) {
            return Err(Error::Incompatible("character over another field".into()));
        }
        delta.validate()?;
        let scales: Vec<u64> =
            self.scales().iter().zip(&delta.gens).map(|(&s, v)| s.max(v.exponent())).collect();
        let base = self.restrict(&scales)?;
        let mut gens = vec![Generator { mat: matrix::scale(&base.gens[0].mat, &delta.zeta), ..base.gens[0].clone() }];
        for (g, v) in base.gens[1..].iter().zip(&delta.gens) {
            let value = match v {
                CharValue::Direct(x) => x.pow(g.scale),
                CharValue::Deferred { e, value } => value.pow(g.scale / e),
            };
            gens.push(Generator { mat: matrix::scale(&g.mat, &value), ..g.clone() });
        }
        let phi = matrix::scale(&base.phi, &delta.pi);
        let label = format!("{}(delta)", self.label);
        PhiGammaModule::new(base.lt.clone(), phi, gens, label, self.blocks)
    }
}
