//! Capped-precision p-adic kernel for Lubin-Tate formal groups and
//! `(φ_q, Γ)`-modules over a truncated Robba ring.

pub mod acceptance;
pub mod batch;
pub mod error;
pub mod padic;
pub mod series;
pub mod lubin_tate;
pub mod phigamma;
pub mod twist;

pub use error::{Error, Result};
