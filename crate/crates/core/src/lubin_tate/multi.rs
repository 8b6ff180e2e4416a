//! Multivariate power series truncated at a total degree.

use std::collections::BTreeMap;
use std::fmt;

use super::log::compositional_inverse;
use super::LubinTateData;
use crate::error::{Error, Result};
use crate::padic::{FieldCtx, PadicScalar};
use crate::series::{exact_int, exact_zero, LaurentWindow};

/// `Σ c_m X^m` over exponent vectors `m` with `|m| ≤ deg`; every monomial of
/// total degree at most `deg` is known (absent ones are exact zeros).
#[derive(Clone)]
pub struct MultiSeries {
    ctx: &'static FieldCtx,
    nvars: usize,
    deg: u32,
    terms: BTreeMap<Vec<u32>, PadicScalar>,
}

impl MultiSeries {
    pub fn zero(ctx: &'static FieldCtx, nvars: usize, deg: u32) -> Self {
        MultiSeries { ctx, nvars, deg, terms: BTreeMap::new() }
    }

    pub fn constant(c: PadicScalar, nvars: usize, deg: u32) -> Self {
        let mut s = Self::zero(c.ctx(), nvars, deg);
        s.terms.insert(vec![0; nvars], c);
        s
    }

    /// The `i`-th variable.
    pub fn var(ctx: &'static FieldCtx, nvars: usize, deg: u32, i: usize) -> Self {
        let mut s = Self::zero(ctx, nvars, deg);
        let mut m = vec![0; nvars];
        m[i] = 1;
        s.terms.insert(m, exact_int(ctx, 1));
        s
    }

    /// A univariate power series placed in variable `i`.
    pub fn from_univariate(f: &LaurentWindow, nvars: usize, deg: u32, i: usize) -> Result<Self> {
        if f.n_min() < 0 || f.n_max() < deg as i64 {
            return Err(Error::WindowCollapse);
        }
        let mut s = Self::zero(f.ctx(), nvars, deg);
        for k in 0..=deg {
            let c = f.coeff(k as i64).unwrap();
            let mut m = vec![0; nvars];
            m[i] = k;
            s.insert(m, c);
        }
        Ok(s)
    }

    fn insert(&mut self, m: Vec<u32>, c: PadicScalar) {
        if c.is_zero() && c.prec() >= self.ctx.emax() as i32 {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, c);
        }
    }

    pub fn ctx(&self) -> &'static FieldCtx {
        self.ctx
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn deg(&self) -> u32 {
        self.deg
    }

    pub fn coeff(&self, m: &[u32]) -> PadicScalar {
        self.terms.get(m).copied().unwrap_or_else(|| exact_zero(self.ctx))
    }

    /// Stored (possibly zero-at-precision) terms.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &PadicScalar)> {
        self.terms.iter()
    }

    pub fn precision(&self) -> i32 {
        self.terms.values().map(|c| c.prec()).min().unwrap_or(self.ctx.emax() as i32)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || !std::ptr::eq(self.ctx, other.ctx) {
            return Err(Error::Incompatible("multivariate series shapes differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let deg = self.deg.min(other.deg);
        let mut out = Self::zero(self.ctx, self.nvars, deg);
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            if m.iter().sum::<u32>() <= deg {
                let cur = out.coeff(m);
                out.insert(m.clone(), cur.add(c));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let deg = self.deg.min(other.deg);
        let mut out = Self::zero(self.ctx, self.nvars, deg);
        for (m1, a) in &self.terms {
            let d1: u32 = m1.iter().sum();
            for (m2, b) in &other.terms {
                if d1 + m2.iter().sum::<u32>() > deg {
                    continue;
                }
                let m: Vec<u32> = m1.iter().zip(m2).map(|(x, y)| x + y).collect();
                let cur = out.coeff(&m);
                out.insert(m, cur.add(&a.mul(b)));
            }
        }
        Ok(out)
    }

    fn has_constant_term(&self) -> bool {
        self.terms.get(&vec![0; self.nvars]).is_some_and(|c| !c.is_zero())
    }

    /// `h(x) = Σ_k h_k x^k` for a univariate `h` and `x` without constant term.
    pub fn compose_univariate(h: &LaurentWindow, x: &MultiSeries) -> Result<Self> {
        if x.has_constant_term() {
            return Err(Error::BadSubstitutionTarget("argument has a constant term".into()));
        }
        if h.n_min() < 0 || h.n_max() < x.deg as i64 {
            return Err(Error::WindowCollapse);
        }
        let mut acc = Self::constant(h.coeff(x.deg as i64).unwrap(), x.nvars, x.deg);
        for k in (0..x.deg).rev() {
            acc = acc.mul(x)?.add(&Self::constant(h.coeff(k as i64).unwrap(), x.nvars, x.deg))?;
        }
        Ok(acc)
    }

    /// `self(args_1, …, args_n)` for arguments without constant term.
    pub fn substitute(&self, args: &[MultiSeries]) -> Result<Self> {
        if args.len() != self.nvars {
            return Err(Error::Incompatible(format!("{} arguments for {} variables", args.len(), self.nvars)));
        }
        let first = &args[0];
        let deg = args.iter().map(|a| a.deg).min().unwrap().min(self.deg);
        for a in args {
            first.check(a)?;
            if a.has_constant_term() {
                return Err(Error::BadSubstitutionTarget("argument has a constant term".into()));
            }
        }
        let one = Self::constant(exact_int(self.ctx, 1), first.nvars, deg);
        let powers: Vec<Vec<MultiSeries>> = args
            .iter()
            .map(|a| {
                let mut v = vec![one.clone()];
                for _ in 0..deg {
                    let next = v.last().unwrap().mul(a)?;
                    v.push(next);
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        let mut out = Self::zero(self.ctx, first.nvars, deg);
        for (m, c) in &self.terms {
            if m.iter().sum::<u32>() > deg {
                continue;
            }
            let mut t = Self::constant(*c, first.nvars, deg);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize])?;
                }
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    pub fn truncate_prec(&self, prec: i32) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.truncate(prec);
        }
        out
    }

    /// Equality at precision on every monomial of degree `≤ min(deg)`.
    pub fn eq_at_prec(&self, other: &Self) -> bool {
        self.sub(other).map(|d| d.terms.values().all(|c| c.is_zero())).unwrap_or(false)
    }
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 6] = ["X", "Y", "Z", "U", "V", "W"];
        let mut first = true;
        for (m, c) in &self.terms {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let body = c.to_string();
            write!(f, "({})", body.split(" + O(").next().unwrap())?;
            for (i, &e) in m.iter().enumerate() {
                let name = NAMES.get(i).copied().unwrap_or("X?");
                match e {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{e}")?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(deg {})", self.deg + 1)
    }
}

impl fmt::Debug for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl LubinTateData {
    /// `G_π(X, Y) = exp_LT(log_LT(X) + log_LT(Y))` to total degree `deg`.
    /// Computed with guard digits (the denominators of `exp_LT` cost about
    /// `deg/(p−1)`), then truncated to the working precision.
    pub fn group_law(&self, deg: u32) -> Result<MultiSeries> {
        if deg < 1 {
            return Err(Error::WindowCollapse);
        }
        let guard = deg as i32 / (self.p() as i32 - 1) + 2;
        let mut last_err = Error::NoStabilization(0);
        let mut log = None;
        for prec in (self.prec..=self.prec + guard).rev() {
            match self.formal_log_at(deg as i64, prec) {
                Ok(l) => {
                    log = Some(l);
                    break;
                }
                Err(e) => last_err = e,
            }
        }
        let log = log.ok_or(last_err)?;
        let exp = compositional_inverse(&log)?;
        let x = MultiSeries::from_univariate(&log, 2, deg, 0)?;
        let y = MultiSeries::from_univariate(&log, 2, deg, 1)?;
        let g = MultiSeries::compose_univariate(&exp, &x.add(&y)?)?;
        Ok(g.truncate_prec(self.prec))
    }
}
