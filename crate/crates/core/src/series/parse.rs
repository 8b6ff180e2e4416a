//! Series literals such as `p + T`, `T^-1`, `3*w*T^2 - 1/2`, `(1+T)^3 - 1`.

use super::window::{exact_int, LaurentWindow};
use crate::error::{Error, Result};
use crate::padic::{FieldCtx, PadicScalar};

#[derive(Clone)]
enum Value {
    Scalar(PadicScalar),
    Series(LaurentWindow),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'static FieldCtx,
    n_max: i64,
    prec: i32,
}

/// Parse a series expression over `ctx` with `T`-adic window `n_max` and
/// scalar precision `prec`. Atoms: integers, `p`, `w` (the Teichmüller
/// generator), `T`; operators `+ - * /` and `^` with integer exponents.
pub fn parse_series(src: &str, ctx: &'static FieldCtx, n_max: i64, prec: i32) -> Result<LaurentWindow> {
    // Literals are exact; only the final nonzero coefficients are truncated,
    // so cancelled terms stay exact zeros (relevant for substitution targets).
    let exact = ctx.emax() as i32;
    let mut p = Parser { src: src.as_bytes(), pos: 0, ctx, n_max, prec: exact };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Parse(format!("unexpected input at offset {} in {src:?}", p.pos)));
    }
    let s = match v {
        Value::Scalar(c) => LaurentWindow::constant(c, n_max),
        Value::Series(s) => s,
    };
    Ok(s.map(|c| if c.is_zero() && c.prec() >= exact { *c } else { c.truncate(prec) }))
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            if c != b'+' && c != b'-' {
                break;
            }
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { self.add(acc, rhs)? } else { self.add(acc, self.neg(rhs))? };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.power()?;
        while let Some(c) = self.peek() {
            if c != b'*' && c != b'/' {
                break;
            }
            self.pos += 1;
            let rhs = self.power()?;
            acc = if c == b'*' { self.mul(acc, rhs)? } else { self.div(acc, rhs)? };
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Value> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let v = self.power()?;
            return Ok(self.neg(v));
        }
        // `T^k` is read as an exact monomial so negative powers keep the window.
        if self.peek() == Some(b'T') {
            let save = self.pos;
            self.pos += 1;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let k = self.integer()?;
                return Ok(Value::Series(LaurentWindow::monomial(exact_int(self.ctx, 1), k, self.n_max)?));
            }
            self.pos = save;
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.integer()?;
            return self.pow(base, k);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len() && (self.src[self.pos] == b'-' || self.src[self.pos] == b'+') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse(format!("expected integer at offset {start}")))
    }

    fn atom(&mut self) -> Result<Value> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Parse("unbalanced parenthesis".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'p') => {
                self.pos += 1;
                Ok(Value::Scalar(PadicScalar::from_int(self.ctx, self.ctx.p() as i64, self.prec)))
            }
            Some(b'w') => {
                self.pos += 1;
                Ok(Value::Scalar(PadicScalar::omega(self.ctx, self.prec)))
            }
            Some(b'T') => {
                self.pos += 1;
                Ok(Value::Series(LaurentWindow::t(self.ctx, self.n_max)))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Value::Scalar(PadicScalar::from_int(self.ctx, n, self.prec)))
            }
            other => Err(Error::Parse(format!(
                "unexpected {:?} at offset {}",
                other.map(|c| c as char),
                self.pos
            ))),
        }
    }

    fn neg(&self, v: Value) -> Value {
        match v {
            Value::Scalar(c) => Value::Scalar(c.neg()),
            Value::Series(s) => Value::Series(s.neg()),
        }
    }

    fn add(&self, a: Value, b: Value) -> Result<Value> {
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x.add(&y)),
            (Value::Scalar(c), Value::Series(s)) | (Value::Series(s), Value::Scalar(c)) => {
                Value::Series(s.add(&LaurentWindow::constant(c, s.n_max()))?)
            }
            (Value::Series(x), Value::Series(y)) => Value::Series(x.add(&y)?),
        })
    }

    fn mul(&self, a: Value, b: Value) -> Result<Value> {
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x.mul(&y)),
            (Value::Scalar(c), Value::Series(s)) | (Value::Series(s), Value::Scalar(c)) => Value::Series(s.scale(&c)),
            (Value::Series(x), Value::Series(y)) => Value::Series(x.mul(&y)?),
        })
    }

    fn div(&self, a: Value, b: Value) -> Result<Value> {
        match b {
            Value::Scalar(c) => {
                let inv = exact_int(self.ctx, 1).div(&c)?;
                self.mul(a, Value::Scalar(inv))
            }
            Value::Series(s) => self.mul(a, Value::Series(s.inverse()?)),
        }
    }

    fn pow(&self, base: Value, k: i64) -> Result<Value> {
        match base {
            Value::Scalar(c) => {
                let c = if k < 0 { exact_int(self.ctx, 1).div(&c)? } else { c };
                Ok(Value::Scalar(c.pow(k.unsigned_abs())))
            }
            Value::Series(s) => {
                let s = if k < 0 { s.inverse()? } else { s };
                Ok(Value::Series(s.pow(k.unsigned_abs() as u32)?))
            }
        }
    }
}
