use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::character::{standard_units, CharValue, TwistCharacter};
use super::matrix::{self, Mat};
use crate::error::{Error, Result};
use crate::lubin_tate::{LtJson, LubinTateData};
use crate::padic::{FieldCtx, PadicScalar};
use crate::series::SeriesJson;

/// A stored element of `Γ ≅ O_F^×` with the matrix of its action.
#[derive(Clone, Debug)]
pub struct Generator {
    /// `"zeta"` or `"u<i>"`.
    pub name: String,
    /// The unit itself: `ζ`, or `u_i^scale`.
    pub unit: PadicScalar,
    /// Power of `u_i` actually stored (1 unless the module only carries an
    /// open subgroup).
    pub scale: u64,
    pub mat: Mat,
}

/// A finite free `(φ_q, Γ)`-module over the windowed Robba model, given by
/// `Φ` and the matrices of the stored generators, with
/// `φ(x) = Φ·φ(coords)` and `γ_u(x) = M_u·γ_u(coords)`.
#[derive(Clone, Debug)]
pub struct PhiGammaModule {
    pub(crate) lt: Arc<LubinTateData>,
    pub(crate) rank: usize,
    pub(crate) window: i64,
    pub(crate) phi: Mat,
    pub(crate) gens: Vec<Generator>,
    pub(crate) label: String,
    /// `(sub, quotient)` ranks of a block-triangular extension.
    pub(crate) blocks: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleJson {
    pub rank: usize,
    pub window: i64,
    #[serde(default)]
    pub label: String,
    pub phi: Vec<Vec<SeriesJson>>,
    pub gamma: BTreeMap<String, Vec<Vec<SeriesJson>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub scales: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<(usize, usize)>,
    pub lt: LtJson,
}

/// Names and units of the standard generators, with the given scales.
pub(crate) fn generator_units(ctx: &'static FieldCtx, scales: &[u64]) -> Result<Vec<(String, PadicScalar, u64)>> {
    let (zeta, us) = standard_units(ctx)?;
    let mut out = vec![("zeta".to_string(), zeta, 1)];
    for (i, u) in us.iter().enumerate() {
        let e = scales.get(i).copied().unwrap_or(1);
        out.push((format!("u{}", i + 1), u.pow(e), e));
    }
    Ok(out)
}

impl PhiGammaModule {
    /// Assemble and validate.
    pub fn new(
        lt: Arc<LubinTateData>,
        phi: Mat,
        gens: Vec<Generator>,
        label: impl Into<String>,
        blocks: Option<(usize, usize)>,
    ) -> Result<Self> {
        let m = Self::new_unchecked(lt, phi, gens, label, blocks)?;
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        lt: Arc<LubinTateData>,
        phi: Mat,
        gens: Vec<Generator>,
        label: impl Into<String>,
        blocks: Option<(usize, usize)>,
    ) -> Result<Self> {
        let rank = phi.len();
        if rank == 0 || phi.iter().any(|r| r.len() != rank) {
            return Err(Error::Incompatible("Phi must be square and nonempty".into()));
        }
        if gens.len() != lt.ctx().deg() + 1 {
            return Err(Error::Incompatible(format!("expected {} generators", lt.ctx().deg() + 1)));
        }
        for g in &gens {
            if g.mat.len() != rank || g.mat.iter().any(|r| r.len() != rank) {
                return Err(Error::Incompatible(format!("matrix of {} has the wrong shape", g.name)));
            }
        }
        let window = phi.iter().chain(gens.iter().flat_map(|g| g.mat.iter())).flatten().map(|x| x.n_max()).min().unwrap();
        Ok(PhiGammaModule { lt, rank, window, phi, gens, label: label.into(), blocks })
    }

    /// The trivial module `R`.
    pub fn trivial(lt: Arc<LubinTateData>, window: i64) -> Result<Self> {
        let one = TwistCharacter::trivial(lt.ctx());
        Self::from_character_at(lt, &one, window, "trivial")
    }

    /// `R(δ)`: `Φ = (δ(π))`, `M_u = (δ(u))`.
    pub fn rank1_from_character(lt: Arc<LubinTateData>, delta: &TwistCharacter, window: i64) -> Result<Self> {
        if !delta.is_rational() {
            let i = delta.root_obligations()[0].0;
            return Err(Error::CharacterNotRational(i));
        }
        Self::from_character_at(lt, delta, window, "R(delta)")
    }

    fn from_character_at(lt: Arc<LubinTateData>, delta: &TwistCharacter, window: i64, label: &str) -> Result<Self> {
        let ctx = lt.ctx();
        if !std::ptr::eq(delta.ctx(), ctx) {
            return Err(Error::Incompatible("character over another field".into()));
        }
        delta.validate()?;
        let scales: Vec<u64> = delta.gens.iter().map(CharValue::exponent).collect();
        let units = generator_units(ctx, &scales)?;
        let c = |x: &PadicScalar| matrix::scalar_matrix(&[vec![*x]], window);
        let mut gens = vec![Generator { name: units[0].0.clone(), unit: units[0].1, scale: 1, mat: c(&delta.zeta) }];
        for ((name, unit, scale), v) in units.into_iter().skip(1).zip(&delta.gens) {
            gens.push(Generator { name, unit, scale, mat: c(v.value()) });
        }
        Self::new(lt, c(&delta.pi), gens, label, None)
    }

    pub fn lt(&self) -> &Arc<LubinTateData> {
        &self.lt
    }
    pub fn ctx(&self) -> &'static FieldCtx {
        self.lt.ctx()
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn window(&self) -> i64 {
        self.window
    }
    pub fn phi(&self) -> &Mat {
        &self.phi
    }
    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn blocks(&self) -> Option<(usize, usize)> {
        self.blocks
    }
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
    pub fn scales(&self) -> Vec<u64> {
        self.gens[1..].iter().map(|g| g.scale).collect()
    }
    /// Working precision: the smallest precision among the structure matrices.
    pub fn precision(&self) -> i32 {
        self.gens.iter().map(|g| matrix::precision(&g.mat)).fold(matrix::precision(&self.phi), i32::min).min(self.lt.prec())
    }

    /// Checks `Φ` invertible, `ζ^(q−1)` acting trivially, the generators
    /// commuting with each other and with `Φ`.
    pub fn validate(&self) -> Result<()> {
        matrix::inverse(&self.phi)
            .map_err(|_| Error::NonInvertible(format!("Phi of {} is not invertible", self.label)))?;
        let id = matrix::identity(self.ctx(), self.rank, self.window);
        let (uz, mz) = self.pair_pow((self.gens[0].unit, self.gens[0].mat.clone()), self.ctx().q() - 1)?;
        if !uz.eq_at_prec(&PadicScalar::one(self.ctx(), uz.prec())) || !matrix::eq_at_prec(&mz, &id) {
            return Err(Error::Cocycle("zeta^(q-1) does not act trivially".into()));
        }
        for (i, g) in self.gens.iter().enumerate() {
            let a = matrix::mul(&g.mat, &self.subst_gamma(&g.unit, &self.phi)?)?;
            let b = matrix::mul(&self.phi, &self.subst_phi(&g.mat)?)?;
            if !matrix::eq_at_prec(&a, &b) {
                return Err(Error::Cocycle(format!("{} does not commute with phi", g.name)));
            }
            for h in &self.gens[i + 1..] {
                let gh = self.pair_mul(&(g.unit, g.mat.clone()), &(h.unit, h.mat.clone()))?;
                let hg = self.pair_mul(&(h.unit, h.mat.clone()), &(g.unit, g.mat.clone()))?;
                if !matrix::eq_at_prec(&gh.1, &hg.1) {
                    return Err(Error::Cocycle(format!("{} and {} fail the cocycle relation", g.name, h.name)));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> ModuleJson {
        let gamma = self.gens.iter().map(|g| (g.name.clone(), matrix::to_json(&g.mat))).collect();
        let scales = self.gens.iter().filter(|g| g.scale != 1).map(|g| (g.name.clone(), g.scale)).collect();
        ModuleJson {
            rank: self.rank,
            window: self.window,
            label: self.label.clone(),
            phi: matrix::to_json(&self.phi),
            gamma,
            scales,
            blocks: self.blocks,
            lt: self.lt.to_json(),
        }
    }

    pub fn from_json(j: &ModuleJson) -> Result<Self> {
        let lt = Arc::new(LubinTateData::from_json(&j.lt)?);
        let ctx = lt.ctx();
        let scales: Vec<u64> = (1..=ctx.deg()).map(|i| j.scales.get(&format!("u{i}")).copied().unwrap_or(1)).collect();
        let mut gens = Vec::new();
        for (name, unit, scale) in generator_units(ctx, &scales)? {
            let m = j.gamma.get(&name).ok_or_else(|| Error::Parse(format!("missing gamma matrix {name}")))?;
            gens.push(Generator { name, unit, scale, mat: matrix::from_json(m)? });
        }
        let m = Self::new(lt, matrix::from_json(&j.phi)?, gens, j.label.clone(), j.blocks)?;
        if m.rank != j.rank {
            return Err(Error::Parse(format!("rank {} does not match Phi", j.rank)));
        }
        Ok(m)
    }
}
