//! Linear maps on `X_F` (in orthonormal coordinates) and on the coefficient
//! space, with the Moore–Penrose pseudo-inverse, the PSD ordering, and the
//! range-inclusion criteria of Douglas and of the range-sum variant.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::dense;
use crate::error::{Error, Result};
use crate::tol::{PSD_SLACK, RANK_CUTOFF};

/// A real matrix acting on orthonormal coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap(DMatrix<f64>);

impl LinearMap {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("linear map"));
        }
        Ok(Self(matrix))
    }

    /// Row-major nested rows; all rows must share a length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != ncols) {
            return Err(Error::Shape(format!("row {i} has {} entries, expected {ncols}", r.len())));
        }
        Self::new(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub(crate) fn from_matrix(m: DMatrix<f64>) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.0.is_square()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self(&self.0 * alpha)
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.0 * x
    }

    /// `M M*`.
    pub fn gramian(&self) -> Self {
        Self(&self.0 * self.0.transpose())
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.0.norm()
    }

    /// `(M + Mᵀ) / 2`.
    pub fn symmetric_part(&self) -> Self {
        Self((&self.0 + self.0.transpose()) * 0.5)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.0.row_iter().map(|r| r.iter().copied().collect()).collect()
    }
}

impl Mul for &LinearMap {
    type Output = LinearMap;
    fn mul(self, rhs: &LinearMap) -> LinearMap {
        LinearMap(&self.0 * &rhs.0)
    }
}

impl Add for &LinearMap {
    type Output = LinearMap;
    fn add(self, rhs: &LinearMap) -> LinearMap {
        LinearMap(&self.0 + &rhs.0)
    }
}

impl Sub for &LinearMap {
    type Output = LinearMap;
    fn sub(self, rhs: &LinearMap) -> LinearMap {
        LinearMap(&self.0 - &rhs.0)
    }
}

fn singular_values(m: &DMatrix<f64>) -> DVector<f64> {
    dense::singular_values(m)
}

/// Numerical rank with the relative cutoff `σ > 1e-10 σ_max`.
pub fn rank(m: &LinearMap) -> usize {
    let sv = singular_values(&m.0);
    let max = sv.max();
    if sv.is_empty() || max <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_CUTOFF * max).count()
}

/// Orthonormal basis of the range, one column per retained singular value.
pub fn range_basis(m: &LinearMap) -> DMatrix<f64> {
    if m.0.is_empty() {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = dense::svd(&m.0);
    let u = svd.u;
    let max = svd.s.max();
    let keep: Vec<usize> = svd
        .s
        .iter()
        .enumerate()
        .filter(|(_, &s)| max > 0.0 && s > RANK_CUTOFF * max)
        .map(|(i, _)| i)
        .collect();
    u.select_columns(keep.iter())
}

/// Largest singular value.
pub fn operator_norm(m: &LinearMap) -> f64 {
    let sv = singular_values(&m.0);
    if sv.is_empty() {
        0.0
    } else {
        sv.max()
    }
}

/// Moore–Penrose pseudo-inverse through the SVD; singular values at or below
/// `1e-10 σ_max` are treated as zero.
pub fn pseudo_inverse(u: &LinearMap) -> LinearMap {
    let (rows, cols) = u.0.shape();
    if u.0.is_empty() {
        return LinearMap::zeros(cols, rows);
    }
    let svd = dense::svd(&u.0);
    let max = svd.s.max();
    if max <= 0.0 {
        return LinearMap::zeros(cols, rows);
    }
    let mut out = DMatrix::zeros(cols, rows);
    for (k, &s) in svd.s.iter().enumerate() {
        if s > RANK_CUTOFF * max {
            out += svd.v.column(k) * svd.u.column(k).transpose() / s;
        }
    }
    LinearMap(out)
}

/// Eigenvalues of the symmetric part, ascending.
pub fn symmetric_eigenvalues(m: &LinearMap) -> Result<DVector<f64>> {
    if !m.is_square() {
        return Err(Error::Shape(format!("expected a square matrix, got {}x{}", m.nrows(), m.ncols())));
    }
    if m.0.is_empty() {
        return Ok(DVector::zeros(0));
    }
    let mut ev = dense::symmetric_eigen(&m.0).values;
    ev.as_mut_slice().sort_by(f64::total_cmp);
    Ok(ev)
}

/// Whether the symmetric part of `m` is positive semidefinite: the smallest
/// eigenvalue is at least `-1e-10 (max |λ| + 1)`.
pub fn is_psd(m: &LinearMap) -> Result<bool> {
    let ev = symmetric_eigenvalues(m)?;
    if ev.is_empty() {
        return Ok(true);
    }
    let spread = ev.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    Ok(ev[0] >= -PSD_SLACK * (spread + 1.0))
}

/// Outcome of the three equivalent Douglas criteria for `U` against `V`.
#[derive(Debug, Clone)]
pub struct DouglasCertificate {
    /// Range inclusion `R(U) ⊆ R(V)` by rank test.
    pub holds: bool,
    /// `‖V† U‖`, the smallest `λ` for which `U U* ≤ λ² V V*` when it holds.
    pub lambda: f64,
    /// `W = V† U`.
    pub witness: LinearMap,
    /// `‖U - V W‖₂`.
    pub residual: f64,
    /// Whether `λ² V V* - U U*` is PSD.
    pub inequality_holds: bool,
    /// Whether the residual is within `1e-8` of the operator scale.
    pub factorization_holds: bool,
}

impl DouglasCertificate {
    /// All three criteria give the same answer.
    pub fn criteria_agree(&self) -> bool {
        self.holds == self.inequality_holds && self.holds == self.factorization_holds
    }
}

const FACTOR_TOL: f64 = 1e-8;

/// Checks `R(U) ⊆ R(V)` three ways: a rank test on `[V | U]`, the operator
/// inequality with `λ = ‖V†U‖`, and the residual of `U = V (V†U)`.
pub fn douglas_check(u: &LinearMap, v: &LinearMap) -> Result<DouglasCertificate> {
    if u.nrows() != v.nrows() {
        return Err(Error::Shape(format!(
            "U has {} rows but V has {}",
            u.nrows(),
            v.nrows()
        )));
    }
    let stacked = LinearMap(concat_columns(&[&v.0, &u.0]));
    let holds = rank(&stacked) == rank(v);
    let witness = &pseudo_inverse(v) * u;
    let lambda = operator_norm(&witness);
    let residual = operator_norm(&(u - &(v * &witness)));
    let scale = operator_norm(u).max(operator_norm(v) * lambda).max(f64::MIN_POSITIVE);
    let gap = &v.gramian().scaled(lambda * lambda) - &u.gramian();
    Ok(DouglasCertificate {
        holds,
        lambda,
        witness,
        residual,
        inequality_holds: is_psd(&gap)?,
        factorization_holds: residual <= FACTOR_TOL * scale,
    })
}

/// Outcome of the range-sum criteria for `S` against `T` and `U`.
#[derive(Debug, Clone)]
pub struct RangeSumCertificate {
    /// `R(S) ⊆ R(T) + R(U)` by rank test.
    pub holds: bool,
    /// `‖[T|U]† S‖`, certifying `S S* ≤ λ² (T T* + U U*)`.
    pub lambda: f64,
    pub a: LinearMap,
    pub b: LinearMap,
    /// `‖S - (T A + U B)‖₂`.
    pub residual: f64,
    pub inequality_holds: bool,
    pub factorization_holds: bool,
}

impl RangeSumCertificate {
    pub fn criteria_agree(&self) -> bool {
        self.holds == self.inequality_holds && self.holds == self.factorization_holds
    }
}

/// Factors `S` through the block operator `[T | U]`.
pub fn range_sum_check(s: &LinearMap, t: &LinearMap, u: &LinearMap) -> Result<RangeSumCertificate> {
    if s.nrows() != t.nrows() || s.nrows() != u.nrows() {
        return Err(Error::Shape(format!(
            "codomains differ: S {}, T {}, U {}",
            s.nrows(),
            t.nrows(),
            u.nrows()
        )));
    }
    let block = LinearMap(concat_columns(&[&t.0, &u.0]));
    let with_s = LinearMap(concat_columns(&[&t.0, &u.0, &s.0]));
    let holds = rank(&with_s) == rank(&block);
    let stacked = &pseudo_inverse(&block) * s;
    let lambda = operator_norm(&stacked);
    let a = LinearMap(stacked.0.rows(0, t.ncols()).into_owned());
    let b = LinearMap(stacked.0.rows(t.ncols(), u.ncols()).into_owned());
    let recon = &(t * &a) + &(u * &b);
    let residual = operator_norm(&(s - &recon));
    let scale = operator_norm(s).max(operator_norm(&block) * lambda).max(f64::MIN_POSITIVE);
    let gap = &(&t.gramian() + &u.gramian()).scaled(lambda * lambda) - &s.gramian();
    Ok(RangeSumCertificate {
        holds,
        lambda,
        a,
        b,
        residual,
        inequality_holds: is_psd(&gap)?,
        factorization_holds: residual <= FACTOR_TOL * scale,
    })
}

pub(crate) fn concat_columns(parts: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let rows = parts.first().map_or(0, |p| p.nrows());
    let cols = parts.iter().map(|p| p.ncols()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut at = 0;
    for p in parts {
        out.columns_mut(at, p.ncols()).copy_from(*p);
        at += p.ncols();
    }
    out
}

/// Residuals of the four Moore–Penrose identities, each relative to the
/// norm of the matrix it should reproduce.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PenroseResiduals {
    pub reproduce: f64,
    pub reproduce_inverse: f64,
    pub left_symmetric: f64,
    pub right_symmetric: f64,
}

impl PenroseResiduals {
    pub fn max(&self) -> f64 {
        self.reproduce
            .max(self.reproduce_inverse)
            .max(self.left_symmetric)
            .max(self.right_symmetric)
    }
}

pub fn penrose_residuals(u: &LinearMap, pinv: &LinearMap) -> PenroseResiduals {
    let rel = |m: &LinearMap, r: &LinearMap| operator_norm(m) / operator_norm(r).max(1.0);
    let upu = &(u * pinv) * u;
    let pup = &(pinv * u) * pinv;
    let up = u * pinv;
    let pu = pinv * u;
    PenroseResiduals {
        reproduce: rel(&(&upu - u), u),
        reproduce_inverse: rel(&(&pup - pinv), pinv),
        left_symmetric: rel(&(&up - &up.adjoint()), &up),
        right_symmetric: rel(&(&pu - &pu.adjoint()), &pu),
    }
}
