//! Capped-precision arithmetic in `Q_p` and its unramified extensions.

mod analytic;
mod ctx;
mod scalar;

pub use analytic::{padic_exp, padic_log};
pub use ctx::{field_ctx, FieldCtx, MAX_DEG};
pub use scalar::{v_p_int, PadicScalar, ScalarJson, Valuation};
