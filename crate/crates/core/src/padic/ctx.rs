//! Per-(p, d) arithmetic context for the unramified extension `Q_{p^d}`.
//!
//! A context fixes the Teichmüller generator `ω`: a primitive `(p^d - 1)`-th
//! root of unity whose residue is a root of the lexicographically first
//! monic primitive polynomial of degree `d` over `F_p`. Its minimal polynomial
//! over `Z_p` is computed once at the maximal storable precision and shared
//! for the lifetime of the process.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest supported degree of the coefficient field.
pub const MAX_DEG: usize = 8;

pub type Raw = [u64; MAX_DEG];

#[derive(Debug)]
pub struct FieldCtx {
    p: u64,
    deg: usize,
    /// Largest exponent `E` with `p^E < 2^62`.
    emax: u32,
    pow: Vec<u64>,
    /// `ω^d ≡ Σ red[j] ω^j (mod p^emax)`.
    red: Raw,
    /// Monic minimal polynomial of `ω` over `Z_p`, low degree first (mod p^emax).
    minpoly: Vec<u64>,
    /// Residue polynomial of `ω̄` over `F_p`, low degree first.
    residue_poly: Vec<u64>,
    /// `ω^{p j}` for `j < d`.
    frob: Vec<Raw>,
    dlog: OnceLock<HashMap<Vec<u64>, u64>>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Registry of contexts; each is leaked once so scalars can hold `&'static`.
pub fn field_ctx(p: u64, deg: usize) -> Result<&'static FieldCtx> {
    static REGISTRY: OnceLock<Mutex<HashMap<(u64, usize), &'static FieldCtx>>> = OnceLock::new();
    let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = reg.lock().unwrap().get(&(p, deg)) {
        return Ok(c);
    }
    let ctx: &'static FieldCtx = Box::leak(Box::new(FieldCtx::build(p, deg)?));
    let mut guard = reg.lock().unwrap();
    Ok(*guard.entry((p, deg)).or_insert(ctx))
}

impl FieldCtx {
    fn build(p: u64, deg: usize) -> Result<Self> {
        if p == 2 || !is_prime(p) || (p as u128) * (p as u128) >= (1u128 << 62) {
            return Err(Error::InvalidPrime(p));
        }
        if deg == 0 || deg > MAX_DEG {
            return Err(Error::InvalidDegree(deg));
        }
        let q = (p as u128).pow(deg as u32);
        if q > 1 << 24 {
            return Err(Error::InvalidDegree(deg));
        }
        let mut emax = 0u32;
        let mut pow = vec![1u64];
        while (*pow.last().unwrap() as u128) * (p as u128) < (1u128 << 62) {
            pow.push(pow.last().unwrap() * p);
            emax += 1;
        }
        let residue_poly = find_primitive_poly(p, deg);
        let mut ctx = FieldCtx {
            p,
            deg,
            emax,
            pow,
            red: [0; MAX_DEG],
            minpoly: Vec::new(),
            residue_poly: residue_poly.clone(),
            frob: Vec::new(),
            dlog: OnceLock::new(),
        };
        let minpoly = teichmuller_minpoly(&ctx, &residue_poly);
        let m = ctx.modulus(emax);
        for j in 0..deg {
            ctx.red[j] = (m - minpoly[j] % m) % m;
        }
        ctx.minpoly = minpoly;
        let mut omega: Raw = [0; MAX_DEG];
        if deg == 1 {
            // ω is the Teichmüller lift of the residue root.
            omega[0] = ctx.red[0];
        } else {
            omega[1] = 1;
        }
        let omega_p = ctx.pow_raw(&omega, p, emax);
        let mut acc: Raw = [0; MAX_DEG];
        acc[0] = 1;
        for _ in 0..deg {
            ctx.frob.push(acc);
            acc = ctx.mul_raw(&acc, &omega_p, emax);
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn deg(&self) -> usize {
        self.deg
    }
    pub fn emax(&self) -> u32 {
        self.emax
    }
    /// Residue field size `q = p^d`.
    pub fn q(&self) -> u64 {
        self.p.pow(self.deg as u32)
    }
    pub fn modulus(&self, e: u32) -> u64 {
        self.pow[e as usize]
    }
    pub fn p_pow(&self, e: u32) -> u64 {
        self.pow[e as usize]
    }
    pub fn minpoly(&self) -> &[u64] {
        &self.minpoly
    }
    pub fn residue_poly(&self) -> &[u64] {
        &self.residue_poly
    }

    pub(crate) fn reduce_raw(&self, a: &Raw, e: u32) -> Raw {
        let m = self.modulus(e);
        let mut out = *a;
        for x in out.iter_mut().take(self.deg) {
            *x %= m;
        }
        out
    }

    pub(crate) fn add_raw(&self, a: &Raw, b: &Raw, e: u32) -> Raw {
        let m = self.modulus(e);
        let mut out = [0; MAX_DEG];
        for j in 0..self.deg {
            out[j] = ((a[j] % m) + (b[j] % m)) % m;
        }
        out
    }

    pub(crate) fn sub_raw(&self, a: &Raw, b: &Raw, e: u32) -> Raw {
        let m = self.modulus(e);
        let mut out = [0; MAX_DEG];
        for j in 0..self.deg {
            out[j] = ((a[j] % m) + m - (b[j] % m)) % m;
        }
        out
    }

    pub(crate) fn scale_raw(&self, a: &Raw, s: u64, e: u32) -> Raw {
        let m = self.modulus(e) as u128;
        let s = s as u128 % m;
        let mut out = [0; MAX_DEG];
        for j in 0..self.deg {
            out[j] = ((a[j] as u128 % m) * s % m) as u64;
        }
        out
    }

    /// Product in `Z[ω]/(minpoly, p^e)`.
    pub(crate) fn mul_raw(&self, a: &Raw, b: &Raw, e: u32) -> Raw {
        let m = self.modulus(e) as u128;
        let d = self.deg;
        if d == 1 {
            let mut out = [0; MAX_DEG];
            out[0] = ((a[0] as u128 % m) * (b[0] as u128 % m) % m) as u64;
            return out;
        }
        let mut acc = [0u128; 2 * MAX_DEG];
        for i in 0..d {
            let ai = a[i] as u128 % m;
            if ai == 0 {
                continue;
            }
            for j in 0..d {
                acc[i + j] = (acc[i + j] + ai * (b[j] as u128 % m)) % m;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let top = acc[k];
            if top == 0 {
                continue;
            }
            for j in 0..d {
                acc[k - d + j] = (acc[k - d + j] + top * (self.red[j] as u128 % m)) % m;
            }
        }
        let mut out = [0; MAX_DEG];
        for j in 0..d {
            out[j] = acc[j] as u64;
        }
        out
    }

    pub(crate) fn pow_raw(&self, a: &Raw, mut n: u64, e: u32) -> Raw {
        let mut result: Raw = [0; MAX_DEG];
        result[0] = 1 % self.modulus(e);
        let mut base = self.reduce_raw(a, e);
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul_raw(&result, &base, e);
            }
            base = self.mul_raw(&base, &base, e);
            n >>= 1;
        }
        result
    }

    /// Inverse of a unit of `Z[ω]/(p^e)`; `None` when `a` is not a unit.
    pub(crate) fn inv_unit_raw(&self, a: &Raw, e: u32) -> Option<Raw> {
        if e == 0 {
            return Some([0; MAX_DEG]);
        }
        let q = self.q();
        let mut y = self.pow_raw(a, q - 2, 1);
        let check = self.mul_raw(&y, a, 1);
        if check[0] != 1 || check[1..self.deg].iter().any(|&c| c != 0) {
            return None;
        }
        let mut k = 1u32;
        while k < e {
            k = (2 * k).min(e);
            let ay = self.mul_raw(a, &y, k);
            let mut two: Raw = [0; MAX_DEG];
            two[0] = 2 % self.modulus(k);
            let t = self.sub_raw(&two, &ay, k);
            y = self.mul_raw(&y, &t, k);
        }
        Some(y)
    }

    /// Lift of the `p`-power Frobenius: `ω ↦ ω^p`, identity on `Z_p`.
    pub(crate) fn frobenius_raw(&self, a: &Raw, e: u32) -> Raw {
        let m = self.modulus(e) as u128;
        let mut out = [0u128; MAX_DEG];
        for j in 0..self.deg {
            let c = a[j] as u128 % m;
            if c == 0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate().take(self.deg) {
                *o = (*o + c * (self.frob[j][k] as u128 % m)) % m;
            }
        }
        let mut res = [0; MAX_DEG];
        for j in 0..self.deg {
            res[j] = out[j] as u64;
        }
        res
    }

    /// Discrete logarithm of a nonzero residue (coefficients in the `ω̄`-basis)
    /// with respect to `ω̄`.
    pub fn residue_dlog(&self, r: &[u64]) -> Option<u64> {
        let table = self.dlog.get_or_init(|| {
            let mut t = HashMap::new();
            let mut x: Raw = [0; MAX_DEG];
            x[0] = 1;
            let mut w: Raw = [0; MAX_DEG];
            if self.deg == 1 {
                w[0] = self.red[0] % self.p;
            } else {
                w[1] = 1;
            }
            for k in 0..self.q() - 1 {
                t.entry(x[..self.deg].to_vec()).or_insert(k);
                x = self.mul_raw(&x, &w, 1);
            }
            t
        });
        let key: Vec<u64> = (0..self.deg).map(|j| r.get(j).copied().unwrap_or(0) % self.p).collect();
        table.get(&key).copied()
    }
}

/// Multiplicative order test in `F_p[x]/(g)`: order `q - 1` forces `g` to be
/// irreducible with a primitive root.
fn find_primitive_poly(p: u64, d: usize) -> Vec<u64> {
    let q = p.pow(d as u32);
    if d == 1 {
        // smallest primitive root
        let factors = prime_factors(p - 1);
        for g in 2..p.max(3) {
            if factors.iter().all(|&l| mod_pow(g, (p - 1) / l, p) != 1) {
                return vec![(p - g) % p, 1];
            }
        }
        return vec![p - 1, 1];
    }
    let factors = prime_factors(q - 1);
    let total = p.pow(d as u32);
    for code in 0..total {
        let mut g = vec![0u64; d + 1];
        let mut c = code;
        for j in 0..d {
            g[j] = c % p;
            c /= p;
        }
        g[d] = 1;
        if g[0] == 0 {
            continue;
        }
        let x = {
            let mut v = vec![0u64; d];
            v[1] = 1;
            v
        };
        let one = {
            let mut v = vec![0u64; d];
            v[0] = 1;
            v
        };
        if polymod_pow(&x, q - 1, &g, p) != one {
            continue;
        }
        if factors.iter().all(|&l| polymod_pow(&x, (q - 1) / l, &g, p) != one) {
            return g;
        }
    }
    unreachable!("a primitive polynomial exists for every degree")
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

fn polymod_mul(a: &[u64], b: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let d = g.len() - 1;
    let mut acc = vec![0u64; 2 * d];
    for i in 0..d {
        for j in 0..d {
            acc[i + j] = (acc[i + j] + a[i] * b[j]) % p;
        }
    }
    for k in (d..2 * d).rev() {
        let t = acc[k];
        if t == 0 {
            continue;
        }
        acc[k] = 0;
        for j in 0..d {
            acc[k - d + j] = (acc[k - d + j] + p * p - t * g[j] % p) % p;
        }
    }
    acc.truncate(d);
    acc
}

fn polymod_pow(a: &[u64], mut e: u64, g: &[u64], p: u64) -> Vec<u64> {
    let d = g.len() - 1;
    let mut r = vec![0u64; d];
    r[0] = 1;
    let mut b = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            r = polymod_mul(&r, &b, g, p);
        }
        b = polymod_mul(&b, &b, g, p);
        e >>= 1;
    }
    r
}

/// Minimal polynomial over `Z_p` (mod `p^emax`) of the Teichmüller lift of a
/// root of `g`: the characteristic polynomial of `C^{q^emax}` for the
/// companion matrix `C` of `g`, whose eigenvalues converge to the lifts.
fn teichmuller_minpoly(ctx: &FieldCtx, g: &[u64]) -> Vec<u64> {
    let d = ctx.deg;
    let e = ctx.emax;
    let m = ctx.modulus(e);
    if d == 1 {
        // root r of x - r; lift by r ↦ r^p iterated.
        let r0 = (m - g[0] % m) % m;
        let mut r = r0;
        for _ in 0..=e {
            r = mod_pow(r, ctx.p, m);
        }
        return vec![(m - r) % m, 1];
    }
    let mut c = vec![vec![0u64; d]; d];
    for i in 1..d {
        c[i][i - 1] = 1;
    }
    for i in 0..d {
        c[i][d - 1] = (m - g[i] % m) % m;
    }
    let q = ctx.q();
    for _ in 0..=e {
        c = mat_pow(&c, q, m);
    }
    charpoly(&c, m)
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], m: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k] as u128;
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = ((out[i][j] as u128 + aik * b[k][j] as u128) % m as u128) as u64;
            }
        }
    }
    out
}

fn mat_pow(a: &[Vec<u64>], mut e: u64, m: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut r = vec![vec![0u64; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = 1;
    }
    let mut b = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            r = mat_mul(&r, &b, m);
        }
        b = mat_mul(&b, &b, m);
        e >>= 1;
    }
    r
}

/// Division-free `det(xI - A)` by Laplace expansion memoized over column sets.
fn charpoly(a: &[Vec<u64>], m: u64) -> Vec<u64> {
    let n = a.len();
    let mm = m as u128;
    let poly_mul = |x: &[u64], y: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; x.len() + y.len() - 1];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                out[i + j] = ((out[i + j] as u128 + xi as u128 * yj as u128) % mm) as u64;
            }
        }
        out
    };
    let entry = |i: usize, j: usize| -> Vec<u64> {
        let neg = (m - a[i][j] % m) % m;
        if i == j {
            vec![neg, 1]
        } else {
            vec![neg]
        }
    };
    let mut memo: HashMap<u32, Vec<u64>> = HashMap::new();
    memo.insert(0, vec![1]);
    for mask in 1u32..(1 << n) {
        let k = mask.count_ones() as usize - 1;
        let mut acc = vec![0u64; k + 2];
        let mut pos = 0usize;
        for j in 0..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            let sub = &memo[&(mask & !(1 << j))];
            let term = poly_mul(&entry(k, j), sub);
            let sign_neg = (k + pos) % 2 == 1;
            for (t, &c) in term.iter().enumerate() {
                acc[t] = if sign_neg {
                    ((acc[t] as u128 + mm - c as u128) % mm) as u64
                } else {
                    ((acc[t] as u128 + c as u128) % mm) as u64
                };
            }
            pos += 1;
        }
        memo.insert(mask, acc);
    }
    let mut out = memo.remove(&((1u32 << n) - 1)).unwrap();
    out.truncate(n + 1);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_residue_poly_is_primitive() {
        let ctx = field_ctx(3, 2).unwrap();
        assert_eq!(ctx.residue_poly(), &[2, 1, 1]);
        assert_eq!(ctx.minpoly().len(), 3);
        // minpoly reduces to the residue polynomial mod p
        for (a, b) in ctx.minpoly().iter().zip(ctx.residue_poly()) {
            assert_eq!(a % 3, *b);
        }
    }

    #[test]
    fn omega_is_root_of_unity() {
        for (p, d) in [(3, 1), (3, 2), (3, 3), (5, 2), (7, 1)] {
            let ctx = field_ctx(p, d).unwrap();
            let mut w: Raw = [0; MAX_DEG];
            if d == 1 {
                w[0] = ctx.red[0];
            } else {
                w[1] = 1;
            }
            let r = ctx.pow_raw(&w, ctx.q() - 1, ctx.emax());
            assert_eq!(r[0], 1, "p={p} d={d}");
            assert!(r[1..d].iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn rejects_bad_primes() {
        assert!(field_ctx(2, 1).is_err());
        assert!(field_ctx(9, 1).is_err());
        assert!(field_ctx(3, 0).is_err());
    }

    #[test]
    fn unit_inverse() {
        let ctx = field_ctx(3, 2).unwrap();
        let a: Raw = [2, 5, 0, 0, 0, 0, 0, 0];
        let inv = ctx.inv_unit_raw(&a, 12).unwrap();
        let prod = ctx.mul_raw(&a, &inv, 12);
        assert_eq!(&prod[..2], &[1, 0]);
        let nonunit: Raw = [3, 6, 0, 0, 0, 0, 0, 0];
        assert!(ctx.inv_unit_raw(&nonunit, 12).is_none());
    }
}
