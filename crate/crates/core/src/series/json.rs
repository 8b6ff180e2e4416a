use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::window::{exact_zero, LaurentWindow};
use crate::error::{Error, Result};
use crate::padic::{field_ctx, PadicScalar, ScalarJson};

/// `{"n_min", "n_max", "coeffs": {"n": scalar}}`; entries omitted inside the
/// window are exact zeros. `p` and `deg` are repeated at the top level so an
/// all-zero window still names its coefficient field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub p: u64,
    pub deg: usize,
    pub n_min: i64,
    pub n_max: i64,
    pub coeffs: BTreeMap<String, ScalarJson>,
}

impl LaurentWindow {
    pub fn to_json(&self) -> SeriesJson {
        let emax = self.ctx().emax() as i32;
        let coeffs = self
            .terms()
            .filter(|(_, c)| !(c.is_zero() && c.prec() >= emax))
            .map(|(n, c)| (n.to_string(), c.to_json()))
            .collect();
        SeriesJson { p: self.ctx().p(), deg: self.ctx().deg(), n_min: self.n_min(), n_max: self.n_max(), coeffs }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let ctx = field_ctx(j.p, j.deg)?;
        if j.n_max < j.n_min {
            return Err(Error::WindowCollapse);
        }
        let mut coeffs = vec![exact_zero(ctx); (j.n_max - j.n_min + 1) as usize];
        for (k, v) in &j.coeffs {
            let n: i64 = k.parse().map_err(|_| Error::Parse(format!("bad index {k:?}")))?;
            if n < j.n_min || n > j.n_max {
                return Err(Error::Parse(format!("index {n} outside window")));
            }
            let c = PadicScalar::from_json(v)?;
            if !std::ptr::eq(c.ctx(), ctx) {
                return Err(Error::Incompatible("coefficient field mismatch".into()));
            }
            coeffs[(n - j.n_min) as usize] = c;
        }
        LaurentWindow::new(ctx, j.n_min, coeffs)
    }
}

impl Serialize for LaurentWindow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentWindow {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SeriesJson::deserialize(d)?;
        LaurentWindow::from_json(&j).map_err(serde::de::Error::custom)
    }
}
