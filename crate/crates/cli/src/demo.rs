//! Built-in modules.

use std::sync::Arc;

use ltphi_core::lubin_tate::LubinTateData;
use ltphi_core::phigamma::{PhiGammaModule, TwistCharacter};

use crate::{compute, usage, Failure};

pub const NAMES: [&str; 3] = ["trivial", "identity-char", "frobenius-demo"];

pub fn build(name: &str, lt: Arc<LubinTateData>, window: i64) -> Result<PhiGammaModule, Failure> {
    let ctx = lt.ctx();
    let m = match name {
        "trivial" => PhiGammaModule::trivial(lt, window),
        "identity-char" => {
            let d = TwistCharacter::identity(ctx).map_err(compute)?;
            PhiGammaModule::rank1_from_character(lt, &d, window)
        }
        // Rank one twisted by the Frobenius σ: analytic only when F = Q_p.
        "frobenius-demo" => {
            let d = TwistCharacter::frobenius(ctx).map_err(compute)?;
            PhiGammaModule::rank1_from_character(lt, &d, window)
        }
        _ => return Err(usage(format!("unknown module {name:?}; expected one of {} or @file.json", NAMES.join(", ")))),
    };
    Ok(m.map_err(compute)?.with_label(name))
}
