//! The derived Hilbert space `X_F`.
//!
//! `L_F` is the span of the anchors and `⟨·,·⟩_F = ⟨·,· | a₂,…,aₙ⟩` vanishes on
//! it, so `X_F` is represented by a complement `M_F` of `L_F`. The canonical
//! complement is the Euclidean orthogonal complement, spanned by a pivoted
//! Gram–Schmidt pass over the standard basis. Coordinates come in two
//! flavours: raw coordinates `c` in `basis`, where `⟨x,y⟩_F = cₓᵀ·gram·c_y`,
//! and orthonormal coordinates `u = R·c` with `gram = RᵀR`, where
//! `⟨x,y⟩_F = uₓ·u_y`. Operators elsewhere act on orthonormal coordinates.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::nspace::{n_inner, AmbientSpace, AnchorSet, Vector};
use crate::random;
use crate::tol::RANK_CUTOFF;

#[derive(Debug, Clone)]
pub struct QuotientSpace {
    anchors: AnchorSet,
    basis: Vec<Vector>,
    /// `q × d`, maps an ambient vector to its raw coordinates along `L_F`.
    coord_map: DMatrix<f64>,
    gram: DMatrix<f64>,
    /// Upper triangular, `gram = rᵀ r`.
    r: DMatrix<f64>,
    r_inv: DMatrix<f64>,
}

/// Builds `X_F` over the Euclidean orthogonal complement of the anchors.
pub fn build_quotient(space: AmbientSpace, anchors: &AnchorSet) -> Result<QuotientSpace> {
    if anchors.space() != space {
        return Err(Error::InvalidSpace("anchor set belongs to a different space".into()));
    }
    let d = space.dim();
    let q = space.quotient_dim();
    let a = anchors.matrix();
    let qa = orthonormal_columns(&a);

    let mut picked: Vec<DVector<f64>> = Vec::with_capacity(q);
    let mut used = vec![false; d];
    for _ in 0..q {
        let mut best: Option<(usize, DVector<f64>, f64)> = None;
        for j in (0..d).filter(|&j| !used[j]) {
            let mut r = DVector::zeros(d);
            r[j] = 1.0;
            // two passes of classical Gram–Schmidt
            for _ in 0..2 {
                r -= &qa * (qa.transpose() * &r);
                for b in &picked {
                    let c = b.dot(&r);
                    r.axpy(-c, b, 1.0);
                }
            }
            let n = r.norm();
            if best.as_ref().is_none_or(|(_, _, bn)| n > bn + 1e-12) {
                best = Some((j, r, n));
            }
        }
        let (j, r, n) = best.expect("a candidate always remains");
        if n < 1e-8 {
            return Err(Error::DegenerateAnchors { ratio: n });
        }
        used[j] = true;
        picked.push(r / n);
    }
    let b = DMatrix::from_columns(&picked);
    let coord_map = b.transpose();
    QuotientSpace::assemble(anchors.clone(), b, coord_map)
}

/// Modified Gram–Schmidt with one reorthogonalization pass; the anchors are
/// independent, so no column vanishes.
fn orthonormal_columns(a: &DMatrix<f64>) -> DMatrix<f64> {
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(a.ncols());
    for c in a.column_iter() {
        let mut r = c.into_owned();
        for _ in 0..2 {
            for b in &cols {
                let d = b.dot(&r);
                r.axpy(-d, b, 1.0);
            }
        }
        let n = r.norm();
        cols.push(r / n);
    }
    DMatrix::from_columns(&cols)
}

impl QuotientSpace {
    /// `X_F` over a random (generally non-orthogonal) complement `M_F`,
    /// obtained by shearing the canonical basis along the anchors.
    ///
    /// Only meant for checking that `X_F` quantities do not depend on the
    /// complement.
    #[doc(hidden)]
    pub fn with_random_complement(space: AmbientSpace, anchors: &AnchorSet, seed: u64) -> Result<Self> {
        let canonical = build_quotient(space, anchors)?;
        let mut rng = random::rng(seed, 0x636f6d70);
        let a = anchors.matrix();
        let shear = random::uniform_matrix(&mut rng, a.ncols(), canonical.dim()) * 2.0;
        let b = canonical.basis_matrix() + &a * shear;
        let mut full = DMatrix::zeros(space.dim(), space.dim());
        full.columns_mut(0, b.ncols()).copy_from(&b);
        full.columns_mut(b.ncols(), a.ncols()).copy_from(&a);
        let inv = full
            .try_inverse()
            .ok_or_else(|| Error::InvalidSpace("complement is not complementary".into()))?;
        let coord_map = inv.rows(0, b.ncols()).into_owned();
        Self::assemble(anchors.clone(), b, coord_map)
    }

    fn assemble(anchors: AnchorSet, b: DMatrix<f64>, coord_map: DMatrix<f64>) -> Result<Self> {
        let q = b.ncols();
        let basis: Vec<Vector> = b.column_iter().map(|c| Vector::from_dvector(c.into_owned())).collect();
        let mut gram = DMatrix::zeros(q, q);
        for i in 0..q {
            for j in i..q {
                let g = n_inner(&basis[i], &basis[j], &anchors)?;
                gram[(i, j)] = g;
                gram[(j, i)] = g;
            }
        }
        let eig = crate::dense::symmetric_eigen(&gram).values;
        let (lo, hi) = (eig.min(), eig.max());
        if !(hi > 0.0 && lo > RANK_CUTOFF * hi) {
            return Err(Error::DegenerateAnchors {
                ratio: if hi > 0.0 { lo / hi } else { 0.0 },
            });
        }
        let l = gram
            .clone()
            .cholesky()
            .ok_or_else(|| Error::DegenerateAnchors { ratio: lo / hi })?
            .l();
        let r = l.transpose();
        let r_inv = r
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateAnchors { ratio: lo / hi })?;
        Ok(Self {
            anchors,
            basis,
            coord_map,
            gram,
            r,
            r_inv,
        })
    }

    /// `q = d - (n - 1)`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn space(&self) -> AmbientSpace {
        self.anchors.space()
    }

    pub fn anchors(&self) -> &AnchorSet {
        &self.anchors
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_columns(&self.basis.iter().map(|b| b.as_dvector().clone()).collect::<Vec<_>>())
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// Upper-triangular `R` with `gram = RᵀR`.
    pub fn gram_factor(&self) -> &DMatrix<f64> {
        &self.r
    }

    /// Raw coordinates of the `M_F` component of `x` in `basis`.
    pub fn project(&self, x: &Vector) -> Result<DVector<f64>> {
        self.space().check(x)?;
        Ok(&self.coord_map * x.as_dvector())
    }

    /// Coordinates in which `⟨·,·⟩_F` is the dot product.
    pub fn orthonormal_coords(&self, x: &Vector) -> Result<DVector<f64>> {
        Ok(&self.r * self.project(x)?)
    }

    /// The `M_F` representative with the given orthonormal coordinates.
    pub fn lift(&self, u: &DVector<f64>) -> Result<Vector> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.len(),
            });
        }
        let c = &self.r_inv * u;
        let mut x = DVector::zeros(self.space().dim());
        for (ci, b) in c.iter().zip(&self.basis) {
            x.axpy(*ci, b.as_dvector(), 1.0);
        }
        Ok(Vector::from_dvector(x))
    }

    /// `⟨x, y⟩_F`, evaluated directly through the n-inner product.
    pub fn f_inner(&self, x: &Vector, y: &Vector) -> Result<f64> {
        n_inner(x, y, &self.anchors)
    }

    /// `⟨x, y⟩_F` through raw coordinates and the Gram matrix.
    pub fn f_inner_coords(&self, x: &Vector, y: &Vector) -> Result<f64> {
        let cx = self.project(x)?;
        let cy = self.project(y)?;
        Ok((cx.transpose() * &self.gram * cy)[(0, 0)])
    }

    pub fn f_norm(&self, x: &Vector) -> Result<f64> {
        Ok(self.orthonormal_coords(x)?.norm())
    }
}
