//! Dense decompositions, computed with faer on nalgebra storage.
//!
//! nalgebra 0.35 returns wrong singular vectors for some rank-deficient
//! inputs, so every SVD and symmetric eigendecomposition goes through here.

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};

fn to_faer(m: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Thin SVD `m = U diag(s) Vᵀ`, singular values nonincreasing.
pub(crate) struct Svd {
    pub u: DMatrix<f64>,
    pub s: DVector<f64>,
    pub v: DMatrix<f64>,
}

pub(crate) fn svd(m: &DMatrix<f64>) -> Svd {
    let (r, c) = m.shape();
    let k = r.min(c);
    if k == 0 {
        return Svd {
            u: DMatrix::zeros(r, 0),
            s: DVector::zeros(0),
            v: DMatrix::zeros(c, 0),
        };
    }
    let d = to_faer(m).thin_svd().expect("SVD of a finite matrix converges");
    let s = d.S().column_vector();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let u = from_faer(d.U());
    let v = from_faer(d.V());
    Svd {
        u: u.select_columns(order.iter()),
        s: DVector::from_iterator(k, order.iter().map(|&i| s[i])),
        v: v.select_columns(order.iter()),
    }
}

pub(crate) fn singular_values(m: &DMatrix<f64>) -> DVector<f64> {
    if m.is_empty() {
        return DVector::zeros(0);
    }
    let mut s: Vec<f64> = to_faer(m)
        .singular_values()
        .expect("SVD of a finite matrix converges");
    s.sort_by(|a, b| b.total_cmp(a));
    DVector::from_vec(s)
}

/// Eigenpairs of the symmetric part of `m`, eigenvalues ascending.
pub(crate) struct SymmetricEigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

pub(crate) fn symmetric_eigen(m: &DMatrix<f64>) -> SymmetricEigen {
    let n = m.nrows();
    if n == 0 {
        return SymmetricEigen {
            values: DVector::zeros(0),
            vectors: DMatrix::zeros(0, 0),
        };
    }
    let sym = (m + m.transpose()) * 0.5;
    let e = to_faer(&sym)
        .self_adjoint_eigen(Side::Lower)
        .expect("symmetric eigendecomposition converges");
    let vals = e.S().column_vector();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    SymmetricEigen {
        values: DVector::from_iterator(n, order.iter().map(|&i| vals[i])),
        vectors: from_faer(e.U()).select_columns(order.iter()),
    }
}
