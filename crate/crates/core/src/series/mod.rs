//! Truncated Laurent series with annulus valuations: the finite-precision
//! model of `E^{[s,r]}` and the Robba ring.

mod json;
mod parse;
mod subst;
mod valuation;
mod window;

pub use json::SeriesJson;
pub use parse::parse_series;
pub use subst::Substitution;
pub use valuation::AnnulusValuation;
pub use window::LaurentWindow;

#[allow(unused_imports)]
pub(crate) use window::{exact_int, exact_zero};
