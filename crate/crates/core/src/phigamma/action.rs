//! Semilinear actions of `φ_q` and of arbitrary units on modules.

use super::matrix::{self, Mat, ModuleVector};
use super::module::PhiGammaModule;
use crate::error::{Error, Result};
use crate::padic::{padic_log, PadicScalar};
use crate::series::LaurentWindow;

/// A unit together with the matrix of its action.
pub type Pair = (PadicScalar, Mat);

/// `u = ζ^k · Π u_i^(a_i)`, exponents as representatives modulo a power of `p`
/// (already divided by the stored scale of `u_i`).
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub k: u64,
    pub exps: Vec<PadicScalar>,
}

impl PhiGammaModule {
    fn subst_entries(&self, m: &Mat, f: impl Fn(&LaurentWindow) -> Result<LaurentWindow>) -> Result<Mat> {
        matrix::map(m, |x| if matrix::as_constant(x).is_some() { Ok(x.clone()) } else { f(x) })
    }

    /// Entrywise `g ↦ g([u](T))`.
    pub fn subst_gamma(&self, u: &PadicScalar, m: &Mat) -> Result<Mat> {
        self.subst_entries(m, |x| self.lt.gamma_act(u, x))
    }

    /// Entrywise `g ↦ g(f_π(T))`.
    pub fn subst_phi(&self, m: &Mat) -> Result<Mat> {
        self.subst_entries(m, |x| self.lt.phi_act(x))
    }

    /// `(u, A)(v, B) = (uv, A·γ_u(B))`.
    pub fn pair_mul(&self, a: &Pair, b: &Pair) -> Result<Pair> {
        let m = if matrix::is_constant(&b.1) {
            matrix::mul(&a.1, &b.1)?
        } else {
            matrix::mul(&a.1, &self.subst_gamma(&a.0, &b.1)?)?
        };
        Ok((a.0.mul(&b.0), m))
    }

    pub fn pair_pow(&self, base: Pair, mut n: u64) -> Result<Pair> {
        let ctx = self.ctx();
        let mut acc: Pair = (PadicScalar::one(ctx, ctx.emax() as i32), matrix::identity(ctx, self.rank, self.window));
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.pair_mul(&acc, &b)?;
            }
            n >>= 1;
            if n > 0 {
                b = self.pair_mul(&b, &b)?;
            }
        }
        Ok(acc)
    }

    /// Write `u` over the stored generators: discrete log on the residue,
    /// then `log(u ζ^(−k)) = Σ a_i · log(u_i^(e_i))` with `log u_i = p ω^(i−1)`.
    pub fn decompose(&self, u: &PadicScalar) -> Result<Decomposition> {
        let ctx = self.ctx();
        if !u.is_unit() {
            return Err(Error::NotAUnit(format!("{u}")));
        }
        let k = ctx
            .residue_dlog(&u.residue()?)
            .ok_or_else(|| Error::Decomposition(format!("no discrete log for {u}")))?;
        let zeta = self.gens[0].unit;
        let w = u.mul(&zeta.pow((ctx.q() - 1 - k) % (ctx.q() - 1)));
        let y = padic_log(&w)?;
        let p = ctx.p() as i64;
        let exps = self.gens[1..]
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let a = y.coordinate_scalar(i).div_exact_int(p * g.scale as i64);
                if !a.is_integral() {
                    Err(Error::Decomposition(format!("{u} is not in the stored open subgroup ({})", g.name)))
                } else {
                    Ok(a)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Decomposition { k, exps })
    }

    /// The matrix of `γ_u`, assembled from the generators.
    pub fn gamma_matrix(&self, u: &PadicScalar) -> Result<Mat> {
        if let Some(g) = self.gens.iter().find(|g| g.unit.eq_at_prec(u) && g.unit.prec() <= u.prec()) {
            return Ok(g.mat.clone());
        }
        let dec = self.decompose(u)?;
        // Exponents beyond the working precision only move the matrix by
        // elements that are trivial at that precision.
        let digits = (self.precision() + 2).max(1);
        let mut acc = self.pair_pow((self.gens[0].unit, self.gens[0].mat.clone()), dec.k)?;
        for (g, a) in self.gens[1..].iter().zip(&dec.exps) {
            let a = a.truncate(digits.min(a.prec()));
            let n = a.numerator()[0];
            if n == 0 {
                continue;
            }
            let pw = self.pair_pow((g.unit, g.mat.clone()), n)?;
            acc = self.pair_mul(&acc, &pw)?;
        }
        let check = digits.min(u.prec());
        if !acc.0.eq_mod(u, check.min(dec.exps.iter().map(|a| a.prec() + 1).min().unwrap_or(check))) {
            return Err(Error::Decomposition(format!("reassembled unit {} differs from {u}", acc.0)));
        }
        Ok(acc.1)
    }

    /// `γ_u(x) = M_u · x([u](T))`.
    pub fn apply_gamma(&self, u: &PadicScalar, x: &ModuleVector) -> Result<ModuleVector> {
        let m = self.gamma_matrix(u)?;
        self.apply_gamma_with(u, &m, x)
    }

    pub(crate) fn apply_gamma_with(&self, u: &PadicScalar, m: &Mat, x: &ModuleVector) -> Result<ModuleVector> {
        self.check_vector(x)?;
        x.map(|c| self.lt.gamma_act(u, c))?.apply_matrix(m)
    }

    /// `φ(x) = Φ · x(f_π(T))`.
    pub fn apply_phi(&self, x: &ModuleVector) -> Result<ModuleVector> {
        self.check_vector(x)?;
        x.map(|c| self.lt.phi_act(c))?.apply_matrix(&self.phi)
    }

    pub(crate) fn check_vector(&self, x: &ModuleVector) -> Result<()> {
        if x.rank() != self.rank || !std::ptr::eq(x.ctx(), self.ctx()) {
            return Err(Error::Incompatible(format!("vector of rank {} for module of rank {}", x.rank(), self.rank)));
        }
        Ok(())
    }
}
