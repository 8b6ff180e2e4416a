//! `(φ_q, Γ)`-modules of finite rank over windowed series.

mod action;
mod character;
mod ext;
mod lie;
pub mod matrix;
mod module;
mod twist;

pub use action::{Decomposition, Pair};
pub use character::{standard_units, CharValue, CharValueJson, CharacterJson, TwistCharacter};
pub use ext::{align, ext_pull, ext_push, hom_extension, hom_module, ExtData};
pub use lie::{default_basis, scalar_of, Analyticity, LimitCheck, LogGammaReport, GAIN_BUDGET};
pub use matrix::{Mat, ModuleVector};
pub use module::{Generator, ModuleJson, PhiGammaModule};
