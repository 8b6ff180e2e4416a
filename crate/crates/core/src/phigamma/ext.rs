//! Hom modules and explicit extensions `0 → D → D̃ → Δ → 0`.

use serde::{Deserialize, Serialize};

use super::matrix::{self, Mat, ModuleVector};
use super::module::{Generator, PhiGammaModule};
use crate::error::{Error, Result};
use crate::padic::PadicScalar;

/// A 1-cocycle of `Hom(Δ, D)`: the values `(φ − 1)h̃` and `(γ − 1)h̃` on each
/// stored generator (in generator order), as vectors of the hom module
/// (row-major `r_D × r_Δ` matrices).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtData {
    pub phi: ModuleVector,
    pub gamma: Vec<ModuleVector>,
}

impl ExtData {
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.gamma.len() != other.gamma.len() {
            return Err(Error::Incompatible("ext data for different generator sets".into()));
        }
        Ok(ExtData {
            phi: self.phi.add(&other.phi)?,
            gamma: self.gamma.iter().zip(&other.gamma).map(|(a, b)| a.add(b)).collect::<Result<_>>()?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let m = |v: &ModuleVector| v.map(|c| Ok(c.neg())).unwrap();
        ExtData { phi: m(&self.phi), gamma: self.gamma.iter().map(m).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.phi.is_zero() && self.gamma.iter().all(ModuleVector::is_zero)
    }

    pub fn eq_at_prec(&self, other: &Self) -> bool {
        self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

/// Bring two modules to common generator scales.
pub fn align(a: &PhiGammaModule, b: &PhiGammaModule) -> Result<(PhiGammaModule, PhiGammaModule)> {
    if !std::ptr::eq(a.ctx(), b.ctx()) || a.lt.kind() != b.lt.kind() {
        return Err(Error::Incompatible("modules over different bases".into()));
    }
    let s: Vec<u64> = a.scales().iter().zip(b.scales()).map(|(&x, y)| x.max(y)).collect();
    Ok((a.restrict(&s)?, b.restrict(&s)?))
}

/// `Hom(Δ, D)` with `γ.h = γ_D ∘ h ∘ γ_Δ^(−1)`, `φ.h = φ_D ∘ h ∘ φ_Δ^(−1)`.
pub fn hom_module(delta: &PhiGammaModule, d: &PhiGammaModule) -> Result<PhiGammaModule> {
    let (delta, d) = align(delta, d)?;
    let kr = |a: &Mat, b: &Mat| -> Result<Mat> { matrix::kron(a, &matrix::transpose(&matrix::inverse(b)?)) };
    let phi = kr(&d.phi, &delta.phi)?;
    let gens = d
        .gens
        .iter()
        .zip(&delta.gens)
        .map(|(gd, gx)| Ok(Generator { mat: kr(&gd.mat, &gx.mat)?, ..gd.clone() }))
        .collect::<Result<_>>()?;
    PhiGammaModule::new(d.lt.clone(), phi, gens, format!("Hom({}, {})", delta.label, d.label), None)
}

impl PhiGammaModule {
    /// `((φ − 1)h, (γ_u − 1)h)` for `h` in this module.
    pub fn coboundary(&self, h: &ModuleVector) -> Result<ExtData> {
        let phi = self.apply_phi(h)?.sub(h)?;
        let gamma = self
            .gens
            .iter()
            .map(|g| self.apply_gamma_with(&g.unit, &g.mat, h)?.sub(h))
            .collect::<Result<_>>()?;
        Ok(ExtData { phi, gamma })
    }

    /// Checks `(γ − 1)c_φ = (φ − 1)c_γ` and `c_(uv) = c_u + u·c_v` on the
    /// stored generators.
    pub fn check_cocycle(&self, c: &ExtData) -> Result<()> {
        if c.gamma.len() != self.gens.len() {
            return Err(Error::Cocycle("one value per generator required".into()));
        }
        for (i, (g, cg)) in self.gens.iter().zip(&c.gamma).enumerate() {
            let lhs = self.apply_gamma_with(&g.unit, &g.mat, &c.phi)?.sub(&c.phi)?;
            let rhs = self.apply_phi(cg)?.sub(cg)?;
            if !lhs.eq_at_prec(&rhs) {
                return Err(Error::Cocycle(format!("phi/{} relation fails", g.name)));
            }
            for (h, ch) in self.gens[i + 1..].iter().zip(&c.gamma[i + 1..]) {
                let a = cg.add(&self.apply_gamma_with(&g.unit, &g.mat, ch)?)?;
                let b = ch.add(&self.apply_gamma_with(&h.unit, &h.mat, cg)?)?;
                if !a.eq_at_prec(&b) {
                    return Err(Error::Cocycle(format!("{}/{} relation fails", g.name, h.name)));
                }
            }
        }
        Ok(())
    }
}

/// The extension `D̃ = D ⊕ Δ` with
/// `Φ̃ = [[Φ_D, C_φ Φ_Δ], [0, Φ_Δ]]` and likewise for each generator, i.e.
/// `φ̃(x) = φ_Δ(x) + c_φ(φ_Δ(x))`.
pub fn ext_push(delta: &PhiGammaModule, d: &PhiGammaModule, data: &ExtData) -> Result<PhiGammaModule> {
    let (delta, d) = align(delta, d)?;
    let (rd, rx) = (d.rank, delta.rank);
    if data.phi.rank() != rd * rx || data.gamma.len() != d.gens.len() {
        return Err(Error::Incompatible("ext data does not match Hom(Delta, D)".into()));
    }
    let ctx = d.ctx();
    let w = d.window.min(delta.window);
    let block = |top: &Mat, c: &ModuleVector, bot: &Mat| -> Result<Mat> {
        let cm = matrix::mul(&matrix::unvec(c.coords(), rd, rx)?, bot)?;
        let mut out = matrix::zeros(ctx, rd + rx, rd + rx, w);
        for i in 0..rd {
            for j in 0..rd {
                out[i][j] = top[i][j].clone();
            }
            for j in 0..rx {
                out[i][rd + j] = cm[i][j].clone();
            }
        }
        for i in 0..rx {
            for j in 0..rx {
                out[rd + i][rd + j] = bot[i][j].clone();
            }
        }
        Ok(out)
    };
    let phi = block(&d.phi, &data.phi, &delta.phi)?;
    let gens = d
        .gens
        .iter()
        .zip(&delta.gens)
        .zip(&data.gamma)
        .map(|((gd, gx), c)| Ok(Generator { mat: block(&gd.mat, c, &gx.mat)?, ..gd.clone() }))
        .collect::<Result<_>>()?;
    let label = format!("Ext({}, {})", delta.label, d.label);
    PhiGammaModule::new(d.lt.clone(), phi, gens, label, Some((rd, rx)))
}

fn sub_block(m: &Mat, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
    m[rows].iter().map(|r| r[cols.clone()].to_vec()).collect()
}

impl PhiGammaModule {
    /// Sub-object `D` and quotient `Δ` of a block-triangular module.
    pub fn ext_parts(&self) -> Result<(PhiGammaModule, PhiGammaModule)> {
        let (rd, rx) = self.blocks.ok_or_else(|| Error::Precondition("module has no declared blocks".into()))?;
        let n = rd + rx;
        let part = |r: std::ops::Range<usize>, label: &str| {
            let gens = self.gens.iter().map(|g| Generator { mat: sub_block(&g.mat, r.clone(), r.clone()), ..g.clone() }).collect();
            PhiGammaModule::new(self.lt.clone(), sub_block(&self.phi, r.clone(), r.clone()), gens, label, None)
        };
        Ok((part(0..rd, "sub")?, part(rd..n, "quotient")?))
    }
}

/// `((φ − 1)s, (γ_u − 1)s)` for the section `s = [X; I]` of `D̃ → Δ`, as a
/// cocycle of `Hom(Δ, D)`.
pub fn ext_pull(dt: &PhiGammaModule, section: &Mat) -> Result<ExtData> {
    let (rd, rx) = dt.blocks.ok_or_else(|| Error::Precondition("module has no declared blocks".into()))?;
    if section.len() != rd || section.iter().any(|r| r.len() != rx) {
        return Err(Error::Incompatible(format!("section must be {rd}x{rx}")));
    }
    let (_, quot) = dt.ext_parts()?;
    let ctx = dt.ctx();
    let mut s = section.clone();
    s.extend(matrix::identity(ctx, rx, dt.window));
    let act = |big: &Mat, small: &Mat, moved: Mat| -> Result<ModuleVector> {
        let full = matrix::mul(&matrix::mul(big, &moved)?, &matrix::inverse(small)?)?;
        let diff = matrix::sub(&full, &s)?;
        if !matrix::is_zero(&sub_block(&diff, rd..rd + rx, 0..rx)) {
            return Err(Error::Precondition("section does not split the quotient map".into()));
        }
        ModuleVector::new(matrix::vec_of(&sub_block(&diff, 0..rd, 0..rx)))
    };
    let phi = act(&dt.phi, &quot.phi, dt.subst_phi(&s)?)?;
    let gamma = dt
        .gens
        .iter()
        .zip(&quot.gens)
        .map(|(g, gq)| act(&g.mat, &gq.mat, dt.subst_gamma(&g.unit, &s)?))
        .collect::<Result<_>>()?;
    Ok(ExtData { phi, gamma })
}

/// The extension of `R` by `Hom(Δ, D)` carrying the same cocycle.
pub fn hom_extension(delta: &PhiGammaModule, d: &PhiGammaModule, data: &ExtData) -> Result<PhiGammaModule> {
    let h = hom_module(delta, d)?;
    let r = PhiGammaModule::trivial(h.lt.clone(), h.window)?;
    ext_push(&r, &h, data)
}

impl PhiGammaModule {
    /// For a rank-1 module with constant `Φ = (a)`, find `h` with
    /// `((φ − 1)h, (γ_u − 1)h) = c`, solving `(a p^k − 1) h_k = …` degree by
    /// degree (`φ(T^k)` has order `k`). `None` when `c` is not a coboundary
    /// at precision.
    pub fn solve_coboundary(&self, c: &ExtData) -> Result<Option<ModuleVector>> {
        let a = match (self.rank, matrix::as_constant(&self.phi[0][0])) {
            (1, Some(a)) if self.phi[0][0].is_power_series() => a,
            _ => return Err(Error::Precondition("coboundary solver needs a rank-1 module with constant Phi".into())),
        };
        let ctx = self.ctx();
        let cphi = &c.phi.coords()[0];
        if !cphi.is_power_series() {
            return Err(Error::Precondition("coboundary solver needs power-series data".into()));
        }
        let w = cphi.n_max();
        let zero = crate::series::exact_zero(ctx);
        let one = PadicScalar::one(ctx, ctx.emax() as i32);
        let mut h = vec![zero; w as usize + 1];
        let mut free0 = false;
        for k in 0..=w {
            // coefficient k of a·φ(h_<k) with h_k = 0
            let partial = crate::series::LaurentWindow::new(ctx, 0, h.clone())?;
            let lower = self.lt.phi_act(&partial)?.scale(&a).coeff(k).unwrap_or(zero);
            let rhs = cphi.coeff(k).unwrap_or(zero).sub(&lower);
            let div = a.mul(&one.mul_p_pow(k as i32)).sub(&one);
            if div.is_zero() {
                if !rhs.is_zero() {
                    return Ok(None);
                }
                free0 |= k == 0;
                continue;
            }
            h[k as usize] = rhs.div(&div)?;
        }
        let mut hv = ModuleVector::new(vec![crate::series::LaurentWindow::new(ctx, 0, h)?])?;
        if free0 {
            // fix the constant from the first generator acting nontrivially
            for (g, cg) in self.gens.iter().zip(&c.gamma) {
                let m = matrix::as_constant(&g.mat[0][0]).unwrap_or(one);
                let d = m.sub(&one);
                if d.is_zero() {
                    continue;
                }
                let r = cg.sub(&self.apply_gamma_with(&g.unit, &g.mat, &hv)?.sub(&hv)?)?;
                let h0 = r.coords()[0].coeff(0).unwrap_or(zero).div(&d)?;
                let shift = crate::series::LaurentWindow::constant(h0, w);
                hv = hv.add(&ModuleVector::new(vec![shift])?)?;
                break;
            }
        }
        Ok(if self.coboundary(&hv)?.eq_at_prec(c) { Some(hv) } else { None })
    }
}
