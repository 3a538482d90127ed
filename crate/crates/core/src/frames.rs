//! Finite frames associated to an anchor set: analysis, synthesis and frame
//! operators, and the optimal frame bounds in `X_F`.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linop::{symmetric_eigenvalues, LinearMap};
use crate::nspace::Vector;
use crate::quotient::QuotientSpace;
use crate::tol::RANK_CUTOFF;

/// A finite sequence `f₁,…,f_m` of ambient vectors together with the `X_F`
/// it is measured in.
#[derive(Debug, Clone)]
pub struct FrameSequence {
    space: Arc<QuotientSpace>,
    elements: Vec<Vector>,
    /// `q × m`; column `i` holds the orthonormal coordinates of `f_i`.
    coords: DMatrix<f64>,
}

impl FrameSequence {
    pub fn new(space: Arc<QuotientSpace>, elements: Vec<Vector>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidSpace("a frame sequence needs at least one element".into()));
        }
        let cols = elements
            .iter()
            .map(|f| space.orthonormal_coords(f))
            .collect::<Result<Vec<_>>>()?;
        let coords = DMatrix::from_columns(&cols);
        Ok(Self {
            space,
            elements,
            coords,
        })
    }

    /// Sequence whose `i`-th element is the `M_F` lift of column `i`.
    pub fn from_coords(space: Arc<QuotientSpace>, coords: &DMatrix<f64>) -> Result<Self> {
        if coords.nrows() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: coords.nrows(),
            });
        }
        let elements = coords
            .column_iter()
            .map(|c| space.lift(&c.into_owned()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, elements)
    }

    pub fn space(&self) -> &Arc<QuotientSpace> {
        &self.space
    }

    pub fn elements(&self) -> &[Vector] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Orthonormal coordinates of the elements, one per column.
    pub fn coords(&self) -> &DMatrix<f64> {
        &self.coords
    }

    /// The pre-frame (synthesis) operator `T: ℓ²_m → X_F`, `T e_i = f_i`.
    pub fn synthesis(&self) -> LinearMap {
        LinearMap::from_matrix(self.coords.clone())
    }

    /// `{T f_i}` with `T` acting on `X_F`, returned as `M_F` lifts.
    pub fn mapped(&self, op: &LinearMap) -> Result<Self> {
        if op.nrows() != self.space.dim() || op.ncols() != self.space.dim() {
            return Err(Error::Shape(format!(
                "operator is {}x{}, X_F has dimension {}",
                op.nrows(),
                op.ncols(),
                self.space.dim()
            )));
        }
        Self::from_coords(self.space.clone(), &(op.matrix() * &self.coords))
    }

    /// `{α f_i}`.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        Self::new(self.space.clone(), self.elements.iter().map(|f| f.scaled(alpha)).collect())
    }

    /// `{f_i + g_i}`; both sequences must share length and space.
    pub fn sum(&self, other: &FrameSequence) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Shape(format!(
                "sequences have lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        if !Arc::ptr_eq(&self.space, &other.space) {
            return Err(Error::InvalidSpace("sequences live in different X_F".into()));
        }
        let elements = self.elements.iter().zip(&other.elements).map(|(f, g)| f.add(g)).collect();
        Self::new(self.space.clone(), elements)
    }

    /// The same ambient elements viewed in another `X_F`.
    pub fn in_space(&self, space: Arc<QuotientSpace>) -> Result<Self> {
        Self::new(space, self.elements.clone())
    }
}

/// Analysis `T*`, synthesis `T` and frame operator `S_F = T T*`.
#[derive(Debug, Clone)]
pub struct FrameOperators {
    /// `m × q`; row `i` is the functional `f ↦ ⟨f, f_i⟩_F`.
    pub analysis: LinearMap,
    /// `q × m`.
    pub synthesis: LinearMap,
    /// `q × q`.
    pub frame_op: LinearMap,
}

pub fn build_operators(fs: &FrameSequence) -> FrameOperators {
    let synthesis = fs.synthesis();
    let analysis = synthesis.adjoint();
    let frame_op = &synthesis * &analysis;
    FrameOperators {
        analysis,
        synthesis,
        frame_op,
    }
}

/// Optimal frame bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsReport {
    pub lower: f64,
    pub upper: f64,
    pub is_frame: bool,
    pub is_bessel: bool,
}

/// `A = λ_min(S_F)`, `B = λ_max(S_F)`. The sequence is a frame when
/// `A > 1e-10 max(1, B)`.
/// Below this size the frame operator is numerically zero: a relative
/// `1e-10` of the raw ambient energy of the elements.
pub(crate) fn energy_floor(fs: &FrameSequence) -> f64 {
    let raw: f64 = fs.elements().iter().map(|f| f.dot(f)).sum();
    1e-10 * raw * fs.space().anchors().scale()
}

pub fn frame_bounds(fs: &FrameSequence) -> BoundsReport {
    let ops = build_operators(fs);
    bounds_from_frame_op(&ops.frame_op)
}

pub(crate) fn bounds_from_frame_op(frame_op: &LinearMap) -> BoundsReport {
    let ev = symmetric_eigenvalues(frame_op).expect("frame operator is square");
    let upper = ev[ev.len() - 1].max(0.0);
    let lower = ev[0].max(0.0).min(upper);
    BoundsReport {
        lower,
        upper,
        is_frame: lower > RANK_CUTOFF * upper.max(1.0),
        is_bessel: upper.is_finite(),
    }
}

/// Structural facts about `S_F`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrameOperatorReport {
    /// `‖S_F - S_Fᵀ‖_F`.
    pub symmetry_residual: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// `λ_max / λ_min`, present only for frames.
    pub condition_number: Option<f64>,
    pub invertible: bool,
}

pub fn frame_operator_certificate(fs: &FrameSequence) -> FrameOperatorReport {
    let ops = build_operators(fs);
    let s = &ops.frame_op;
    let ev = symmetric_eigenvalues(s).expect("frame operator is square");
    let bounds = bounds_from_frame_op(s);
    let (min, max) = (ev[0], ev[ev.len() - 1]);
    FrameOperatorReport {
        symmetry_residual: (s - &s.adjoint()).frobenius(),
        min_eigenvalue: min,
        max_eigenvalue: max,
        condition_number: bounds.is_frame.then(|| max / min),
        invertible: bounds.is_frame,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nspace::{AmbientSpace, AnchorSet};
    use crate::quotient::build_quotient;
    use approx::assert_abs_diff_eq;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn xf() -> Arc<QuotientSpace> {
        let s = AmbientSpace::new(3, 2).unwrap();
        let f = AnchorSet::new(s, vec![v(&[0., 0., 1.])]).unwrap();
        Arc::new(build_quotient(s, &f).unwrap())
    }

    #[test]
    fn orthonormal_pair() {
        let fs = FrameSequence::new(xf(), vec![v(&[1., 0., 0.]), v(&[0., 1., 0.])]).unwrap();
        let ops = build_operators(&fs);
        assert!((ops.analysis.matrix() - DMatrix::identity(2, 2)).norm() < 1e-14);
        assert!((ops.frame_op.matrix() - DMatrix::identity(2, 2)).norm() < 1e-14);
        let b = frame_bounds(&fs);
        assert_abs_diff_eq!(b.lower, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b.upper, 1.0, epsilon = 1e-14);
        let cert = frame_operator_certificate(&fs);
        assert_abs_diff_eq!(cert.condition_number.unwrap(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn anchor_elements_vanish() {
        let fs = FrameSequence::new(xf(), vec![v(&[0., 0., 1.]), v(&[0., 0., -3.])]).unwrap();
        let ops = build_operators(&fs);
        assert!(ops.analysis.frobenius() < 1e-14);
        assert!(ops.frame_op.frobenius() < 1e-14);
        assert!(!frame_bounds(&fs).is_frame);
    }

    #[test]
    fn repeated_element() {
        let fs = FrameSequence::new(xf(), vec![v(&[1., 0., 0.]), v(&[1., 0., 0.]), v(&[0., 1., 0.])]).unwrap();
        let ops = build_operators(&fs);
        assert!((ops.frame_op.matrix() - LinearMap::diagonal(&[2., 1.]).matrix()).norm() < 1e-14);
        let b = frame_bounds(&fs);
        assert_abs_diff_eq!(b.lower, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b.upper, 2.0, epsilon = 1e-14);
        let cert = frame_operator_certificate(&fs);
        assert_abs_diff_eq!(cert.condition_number.unwrap(), 2.0, epsilon = 1e-13);
    }

    #[test]
    fn non_spanning() {
        let fs = FrameSequence::new(xf(), vec![v(&[1., 0., 5.])]).unwrap();
        let b = frame_bounds(&fs);
        assert_eq!(b.lower, 0.0);
        assert!(!b.is_frame && b.is_bessel);
        let cert = frame_operator_certificate(&fs);
        assert!(!cert.invertible && cert.condition_number.is_none());
    }

    #[test]
    fn analysis_matches_n_inner() {
        let space = xf();
        let fs = FrameSequence::new(space.clone(), vec![v(&[1., 2., 3.]), v(&[-1., 0.5, 0.])]).unwrap();
        let ops = build_operators(&fs);
        let f = v(&[0.3, -0.4, 2.0]);
        let coeffs = ops.analysis.apply(&space.orthonormal_coords(&f).unwrap());
        for (i, fi) in fs.elements().iter().enumerate() {
            assert_abs_diff_eq!(coeffs[i], space.f_inner(&f, fi).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_empty_and_mismatched() {
        assert!(FrameSequence::new(xf(), vec![]).is_err());
        assert!(FrameSequence::new(xf(), vec![v(&[1., 0.])]).is_err());
    }
}
