//! Matrices and vectors over windowed series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{FieldCtx, PadicScalar};
use crate::series::{exact_int, exact_zero, LaurentWindow, SeriesJson};

/// Row-major `rows × cols` matrix of series.
pub type Mat = Vec<Vec<LaurentWindow>>;

pub fn identity(ctx: &'static FieldCtx, r: usize, window: i64) -> Mat {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| LaurentWindow::constant(exact_int(ctx, (i == j) as i64), window))
                .collect()
        })
        .collect()
}

pub fn zeros(ctx: &'static FieldCtx, rows: usize, cols: usize, window: i64) -> Mat {
    vec![vec![LaurentWindow::zero(ctx, window); cols]; rows]
}

pub fn scalar_matrix(c: &[Vec<PadicScalar>], window: i64) -> Mat {
    c.iter().map(|row| row.iter().map(|&x| LaurentWindow::constant(x, window)).collect()).collect()
}

pub fn add(a: &Mat, b: &Mat) -> Result<Mat> {
    shape_eq(a, b)?;
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.add(y)).collect()).collect()
}

pub fn sub(a: &Mat, b: &Mat) -> Result<Mat> {
    shape_eq(a, b)?;
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.sub(y)).collect()).collect()
}

fn shape_eq(a: &Mat, b: &Mat) -> Result<()> {
    if a.len() != b.len() || a.first().map(|r| r.len()) != b.first().map(|r| r.len()) {
        return Err(Error::Incompatible("matrix shapes differ".into()));
    }
    Ok(())
}

pub fn mul(a: &Mat, b: &Mat) -> Result<Mat> {
    let inner = a.first().map_or(0, |r| r.len());
    if inner != b.len() {
        return Err(Error::Incompatible(format!("cannot multiply {}x{inner} by {}x?", a.len(), b.len())));
    }
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = Vec::with_capacity(a.len());
    for row in a {
        let mut orow = Vec::with_capacity(cols);
        for j in 0..cols {
            let mut acc: Option<LaurentWindow> = None;
            for (k, x) in row.iter().enumerate() {
                let t = mul_entry(x, &b[k][j])?;
                acc = Some(match acc {
                    Some(s) => s.add(&t)?,
                    None => t,
                });
            }
            orow.push(acc.ok_or(Error::WindowCollapse)?);
        }
        out.push(orow);
    }
    Ok(out)
}

/// Product that treats constants as scalars so windows do not shrink.
pub fn mul_entry(x: &LaurentWindow, y: &LaurentWindow) -> Result<LaurentWindow> {
    if let Some(c) = as_constant(x) {
        return Ok(y.scale(&c));
    }
    if let Some(c) = as_constant(y) {
        return Ok(x.scale(&c));
    }
    x.mul(y)
}

/// `Some(c)` when every nonconstant coefficient vanishes at precision.
pub fn as_constant(x: &LaurentWindow) -> Option<PadicScalar> {
    let mut c = None;
    for (n, a) in x.terms() {
        if n == 0 {
            c = Some(*a);
        } else if !a.is_zero() {
            return None;
        }
    }
    c.or_else(|| Some(exact_zero(x.ctx())))
}

pub fn is_constant(m: &Mat) -> bool {
    m.iter().flatten().all(|x| as_constant(x).is_some())
}

pub fn map(m: &Mat, f: impl Fn(&LaurentWindow) -> Result<LaurentWindow>) -> Result<Mat> {
    m.iter().map(|row| row.iter().map(&f).collect()).collect()
}

pub fn scale(m: &Mat, c: &PadicScalar) -> Mat {
    m.iter().map(|row| row.iter().map(|x| x.scale(c)).collect()).collect()
}

pub fn transpose(m: &Mat) -> Mat {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Kronecker product: `vec(A X B) = (A ⊗ Bᵀ) vec(X)` for row-major `vec`.
pub fn kron(a: &Mat, b: &Mat) -> Result<Mat> {
    let (ra, ca) = (a.len(), a.first().map_or(0, |r| r.len()));
    let (rb, cb) = (b.len(), b.first().map_or(0, |r| r.len()));
    let mut out = Vec::with_capacity(ra * rb);
    for i in 0..ra * rb {
        let mut row = Vec::with_capacity(ca * cb);
        for j in 0..ca * cb {
            row.push(mul_entry(&a[i / rb][j / cb], &b[i % rb][j % cb])?);
        }
        out.push(row);
    }
    Ok(out)
}

/// Row-major flattening of an `rows × cols` matrix into a column.
pub fn vec_of(m: &Mat) -> Vec<LaurentWindow> {
    m.iter().flatten().cloned().collect()
}

pub fn unvec(v: &[LaurentWindow], rows: usize, cols: usize) -> Result<Mat> {
    if v.len() != rows * cols {
        return Err(Error::Incompatible(format!("{} entries for {rows}x{cols}", v.len())));
    }
    Ok(v.chunks(cols).map(|c| c.to_vec()).collect())
}

pub fn is_zero(m: &Mat) -> bool {
    m.iter().flatten().all(|x| x.is_zero())
}

pub fn eq_at_prec(a: &Mat, b: &Mat) -> bool {
    sub(a, b).map(|d| is_zero(&d)).unwrap_or(false)
}

pub fn precision(m: &Mat) -> i32 {
    m.iter().flatten().map(|x| x.precision()).min().unwrap_or(i32::MAX)
}

pub fn truncate_prec(m: &Mat, prec: i32) -> Mat {
    m.iter().map(|row| row.iter().map(|x| x.truncate_prec(prec)).collect()).collect()
}

/// Gauss-Jordan inverse; pivots are entries whose lowest coefficient has the
/// smallest valuation.
pub fn inverse(m: &Mat) -> Result<Mat> {
    let r = m.len();
    if m.iter().any(|row| row.len() != r) {
        return Err(Error::Incompatible("inverse of a non-square matrix".into()));
    }
    if r == 0 {
        return Ok(vec![]);
    }
    let ctx = m[0][0].ctx();
    let window = m.iter().flatten().map(|x| x.n_max()).min().unwrap();
    let mut a = m.clone();
    let mut inv = identity(ctx, r, window);
    for col in 0..r {
        let mut best: Option<(usize, i32)> = None;
        for (row, entries) in a.iter().enumerate().skip(col) {
            let x = entries[col].strip_leading_zeros();
            let lead = x.coeffs()[0];
            if lead.is_zero() {
                continue;
            }
            let v = lead.val_bound();
            if best.is_none_or(|(_, bv)| v < bv) {
                best = Some((row, v));
            }
        }
        let (prow, _) = best.ok_or_else(|| Error::NonInvertible("singular matrix at precision".into()))?;
        a.swap(col, prow);
        inv.swap(col, prow);
        let piv_inv = a[col][col].strip_leading_zeros().inverse()?;
        a[col] = a[col].iter().map(|x| mul_entry(x, &piv_inv)).collect::<Result<_>>()?;
        inv[col] = inv[col].iter().map(|x| mul_entry(x, &piv_inv)).collect::<Result<_>>()?;
        for row in 0..r {
            if row == col {
                continue;
            }
            let factor = a[row][col].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..r {
                let t = mul_entry(&factor, &a[col][j])?;
                a[row][j] = a[row][j].sub(&t)?;
                let t = mul_entry(&factor, &inv[col][j])?;
                inv[row][j] = inv[row][j].sub(&t)?;
            }
        }
    }
    Ok(inv)
}

pub fn to_json(m: &Mat) -> Vec<Vec<SeriesJson>> {
    m.iter().map(|row| row.iter().map(|x| x.to_json()).collect()).collect()
}

pub fn from_json(j: &[Vec<SeriesJson>]) -> Result<Mat> {
    j.iter().map(|row| row.iter().map(LaurentWindow::from_json).collect()).collect()
}

/// An element `Σ x_j e_j` of a module, by its coordinates.
#[derive(Clone, Debug)]
pub struct ModuleVector {
    coords: Vec<LaurentWindow>,
}

impl ModuleVector {
    pub fn new(coords: Vec<LaurentWindow>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Incompatible("empty module vector".into()));
        }
        let ctx = coords[0].ctx();
        if coords.iter().any(|c| !std::ptr::eq(c.ctx(), ctx)) {
            return Err(Error::Incompatible("coordinates over different fields".into()));
        }
        Ok(ModuleVector { coords })
    }

    /// The basis vector `e_j` of a rank-`r` module.
    pub fn basis(ctx: &'static FieldCtx, r: usize, j: usize, window: i64) -> Self {
        let coords = (0..r)
            .map(|i| LaurentWindow::constant(exact_int(ctx, (i == j) as i64), window))
            .collect();
        ModuleVector { coords }
    }

    pub fn coords(&self) -> &[LaurentWindow] {
        &self.coords
    }
    pub fn rank(&self) -> usize {
        self.coords.len()
    }
    pub fn ctx(&self) -> &'static FieldCtx {
        self.coords[0].ctx()
    }

    fn zip(&self, other: &Self, f: impl Fn(&LaurentWindow, &LaurentWindow) -> Result<LaurentWindow>) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::Incompatible("vectors of different rank".into()));
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(ModuleVector { coords })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.add(b))
    }
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.sub(b))
    }
    pub fn scale(&self, c: &PadicScalar) -> Self {
        ModuleVector { coords: self.coords.iter().map(|x| x.scale(c)).collect() }
    }
    /// `f · x` for a series `f`.
    pub fn mul_series(&self, f: &LaurentWindow) -> Result<Self> {
        let coords = self.coords.iter().map(|x| mul_entry(f, x)).collect::<Result<_>>()?;
        Ok(ModuleVector { coords })
    }
    pub fn map(&self, f: impl Fn(&LaurentWindow) -> Result<LaurentWindow>) -> Result<Self> {
        Ok(ModuleVector { coords: self.coords.iter().map(f).collect::<Result<_>>()? })
    }
    pub fn truncate_prec(&self, prec: i32) -> Self {
        ModuleVector { coords: self.coords.iter().map(|x| x.truncate_prec(prec)).collect() }
    }
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }
    pub fn eq_at_prec(&self, other: &Self) -> bool {
        self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
    pub fn precision(&self) -> i32 {
        self.coords.iter().map(|x| x.precision()).min().unwrap()
    }
    pub fn n_max(&self) -> i64 {
        self.coords.iter().map(|x| x.n_max()).min().unwrap()
    }
    /// Minimum coefficient valuation (the `r = 0` annulus valuation).
    pub fn min_valuation(&self) -> i32 {
        self.coords.iter().map(|x| x.min_coeff_valuation()).min().unwrap()
    }
    /// `M · x` for a matrix with series entries.
    pub fn apply_matrix(&self, m: &Mat) -> Result<Self> {
        let col: Mat = self.coords.iter().map(|x| vec![x.clone()]).collect();
        let prod = mul(m, &col)?;
        Ok(ModuleVector { coords: prod.into_iter().map(|mut r| r.remove(0)).collect() })
    }
}

impl Serialize for ModuleVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModuleVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<LaurentWindow>::deserialize(d)?;
        ModuleVector::new(coords).map_err(serde::de::Error::custom)
    }
}
