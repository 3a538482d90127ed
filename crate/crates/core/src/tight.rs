//! Tight and Parseval K-frames.
//!
//! `{f_i}` is a tight K-frame with constant `A` when `S_F = A K K*`. The
//! constant is fitted by least squares, `A = tr(S_F K K*) / tr((K K*)²)`,
//! and the identity is then tested as a matrix equation.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{build_operators, energy_floor, frame_bounds, FrameSequence};
use crate::linop::{operator_norm, pseudo_inverse, LinearMap};
use crate::random::{self, SampleSpec};

const TIGHT_TOL: f64 = 1e-9;
const PARSEVAL_TOL: f64 = 1e-9;
const CROSS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TightnessReport {
    pub is_tight: bool,
    /// Least-squares constant `A`.
    pub constant: f64,
    /// `max |⟨(S_F - A K K*) f, f⟩| / ‖f‖²` over `e_j` and `e_j + e_k`.
    pub residual: f64,
    /// `‖S_F - A K K*‖_F / ‖S_F‖_F`.
    pub relative_residual: f64,
    pub is_parseval: bool,
    /// `K = 0` and `S_F = 0`.
    pub degenerate: bool,
}

pub fn tightness(fs: &FrameSequence, k: &LinearMap) -> Result<TightnessReport> {
    let q = fs.space().dim();
    if k.nrows() != q || k.ncols() != q {
        return Err(Error::Shape(format!("K is {}x{}, X_F has dimension {q}", k.nrows(), k.ncols())));
    }
    let s = build_operators(fs).frame_op;
    Ok(tightness_from_frame_op(&s, k, energy_floor(fs)))
}

pub(crate) fn tightness_from_frame_op(s: &LinearMap, k: &LinearMap, floor: f64) -> TightnessReport {
    let m = k.gramian();
    let s_norm = s.frobenius();
    let m_sq = m.matrix().component_mul(m.matrix()).sum();
    let s_zero = s_norm <= floor;
    if m_sq == 0.0 {
        return TightnessReport {
            is_tight: false,
            constant: 0.0,
            residual: s_norm,
            relative_residual: if s_zero { 0.0 } else { 1.0 },
            is_parseval: false,
            degenerate: s_zero,
        };
    }
    let constant = s.matrix().component_mul(m.matrix()).sum() / m_sq;
    let diff = s - &m.scaled(constant);
    let q = diff.nrows();
    let mut residual = 0.0f64;
    for j in 0..q {
        for l in j..q {
            let mut f = DVector::zeros(q);
            f[j] += 1.0;
            f[l] += 1.0;
            let val = f.dot(&diff.apply(&f)) / f.norm_squared();
            residual = residual.max(val.abs());
        }
    }
    let relative_residual = if s_zero { 1.0 } else { diff.frobenius() / s_norm };
    let is_tight = !s_zero && constant > 0.0 && relative_residual <= TIGHT_TOL;
    TightnessReport {
        is_tight,
        constant,
        residual,
        relative_residual,
        is_parseval: is_tight && (constant - 1.0).abs() <= PARSEVAL_TOL,
        degenerate: false,
    }
}

fn require_tight(fs: &FrameSequence, k: &LinearMap, what: &str) -> Result<TightnessReport> {
    let r = tightness(fs, k)?;
    if !r.is_tight {
        return Err(Error::precondition(format!("input is not {what}")));
    }
    Ok(r)
}

/// `{A^{-1/2} f_i}` for a tight K-frame with constant `A`.
pub fn scale_to_parseval(fs: &FrameSequence, k: &LinearMap) -> Result<FrameSequence> {
    let r = require_tight(fs, k, "a tight K-frame")?;
    fs.scaled(r.constant.sqrt().recip())
}

/// A construction together with the tightness of its input and output.
#[derive(Debug, Clone)]
pub struct TightConstruction {
    pub frame: FrameSequence,
    pub input: TightnessReport,
    pub output: TightnessReport,
}

impl TightConstruction {
    /// Output is tight and `|A_out - A_in| ≤ tol · A_in`.
    pub fn constant_preserved(&self, tol: f64) -> bool {
        self.output.is_tight && (self.output.constant - self.input.constant).abs() <= tol * self.input.constant
    }
}

/// `{K f_i}` from a tight frame `{f_i}`; a tight K-frame with the same constant.
pub fn construct_theorem_4_3(fs_tight: &FrameSequence, k: &LinearMap) -> Result<TightConstruction> {
    let q = fs_tight.space().dim();
    let input = require_tight(fs_tight, &LinearMap::identity(q), "a tight frame")?;
    let frame = fs_tight.mapped(k)?;
    let output = tightness(&frame, k)?;
    Ok(TightConstruction { frame, input, output })
}

/// `{T f_i}` from a tight K-frame; a tight `TK`-frame with the same constant.
pub fn construct_theorem_4_4(fs: &FrameSequence, k: &LinearMap, t: &LinearMap) -> Result<TightConstruction> {
    let input = require_tight(fs, k, "a tight K-frame")?;
    let frame = fs.mapped(t)?;
    let output = tightness(&frame, &(t * k))?;
    Ok(TightConstruction { frame, input, output })
}

/// A dual Bessel sequence for a tight K-frame.
#[derive(Debug, Clone)]
pub struct DualBessel {
    pub duals: FrameSequence,
    pub tight_constant: f64,
    /// Optimal Bessel bound of the duals.
    pub bessel_bound: f64,
    /// Worst `‖K f - Σ ⟨f, g_i⟩_F f_i‖ / (‖K‖ ‖f‖)` over the samples.
    pub reconstruction_residual: f64,
    /// Worst `‖K* f - Σ ⟨f, f_i⟩_F g_i‖ / (‖K‖ ‖f‖)` over the samples.
    pub adjoint_residual: f64,
}

impl DualBessel {
    pub fn product(&self) -> f64 {
        self.tight_constant * self.bessel_bound
    }
}

/// Builds `g_i = W* e_i` from the minimal-norm factor `W = T† K` of `K = T W`
/// and checks both reconstruction formulas on sampled ambient vectors, with
/// coefficients computed through the n-inner product.
pub fn dual_bessel_theorem_4_5(fs: &FrameSequence, k: &LinearMap, samples: SampleSpec) -> Result<DualBessel> {
    let r = require_tight(fs, k, "a tight K-frame")?;
    let t = fs.synthesis();
    let w = &pseudo_inverse(&t) * k;
    let space = fs.space().clone();
    let duals = FrameSequence::from_coords(space.clone(), &w.adjoint().into_matrix())?;
    let bessel_bound = frame_bounds(&duals).upper;

    let knorm = operator_norm(k);
    let mut rng = random::rng(samples.seed, 0x6475616c);
    let d = space.space().dim();
    let mut reconstruction_residual = 0.0f64;
    let mut adjoint_residual = 0.0f64;
    for _ in 0..samples.count {
        let f = crate::nspace::Vector::new(random::uniform_vector(&mut rng, d).as_slice().to_vec())?;
        let uf = space.orthonormal_coords(&f)?;
        let scale = knorm * uf.norm();
        if scale == 0.0 {
            continue;
        }
        let mut kf = DVector::zeros(space.dim());
        let mut kstar_f = DVector::zeros(space.dim());
        for (fi, gi) in fs.elements().iter().zip(duals.elements()) {
            kf.axpy(space.f_inner(&f, gi)?, &space.orthonormal_coords(fi)?, 1.0);
            kstar_f.axpy(space.f_inner(&f, fi)?, &space.orthonormal_coords(gi)?, 1.0);
        }
        reconstruction_residual = reconstruction_residual.max((k.apply(&uf) - kf).norm() / scale);
        adjoint_residual = adjoint_residual.max((k.adjoint().apply(&uf) - kstar_f).norm() / scale);
    }
    Ok(DualBessel {
        duals,
        tight_constant: r.constant,
        bessel_bound,
        reconstruction_residual,
        adjoint_residual,
    })
}

/// Result of summing two Parseval K-frames with orthogonal synthesis.
#[derive(Debug, Clone)]
pub struct DisjointSum {
    pub frame: FrameSequence,
    pub report: TightnessReport,
    /// `‖T L*‖`.
    pub cross_norm: f64,
    /// Worst `|‖K* f‖² - ‖T* f‖²| / ‖f‖²` over the samples.
    pub first_parseval_residual: f64,
    /// Same for `L`.
    pub second_parseval_residual: f64,
}

/// `{f_i + g_i}` for Parseval K-frames whose synthesis operators satisfy
/// `T L* = 0`; a tight K-frame with constant 2.
pub fn disjoint_sum_theorem_4_6(
    fs: &FrameSequence,
    gs: &FrameSequence,
    k: &LinearMap,
    samples: SampleSpec,
) -> Result<DisjointSum> {
    let rf = tightness(fs, k)?;
    if !rf.is_parseval {
        return Err(Error::precondition("first sequence is not a Parseval K-frame"));
    }
    let rg = tightness(gs, k)?;
    if !rg.is_parseval {
        return Err(Error::precondition("second sequence is not a Parseval K-frame"));
    }
    let t = fs.synthesis();
    let l = gs.synthesis();
    if t.ncols() != l.ncols() {
        return Err(Error::Shape(format!("sequences have lengths {} and {}", t.ncols(), l.ncols())));
    }
    let cross_norm = operator_norm(&(&t * &l.adjoint()));
    if cross_norm > CROSS_TOL * (1.0 + operator_norm(&t) * operator_norm(&l)) {
        return Err(Error::precondition("T L* is not the null operator"));
    }
    let q = fs.space().dim();
    let mut rng = random::rng(samples.seed, 0x73756d);
    let mut first = 0.0f64;
    let mut second = 0.0f64;
    for _ in 0..samples.count {
        let f = random::uniform_vector(&mut rng, q);
        let ff = f.norm_squared();
        let kf = k.adjoint().apply(&f).norm_squared();
        first = first.max((kf - t.adjoint().apply(&f).norm_squared()).abs() / ff);
        second = second.max((kf - l.adjoint().apply(&f).norm_squared()).abs() / ff);
    }
    let frame = fs.sum(gs)?;
    let report = tightness(&frame, k)?;
    Ok(DisjointSum {
        frame,
        report,
        cross_norm,
        first_parseval_residual: first,
        second_parseval_residual: second,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nspace::{AmbientSpace, AnchorSet, Vector};
    use crate::quotient::{build_quotient, QuotientSpace};
    use approx::assert_abs_diff_eq;
    use std::sync::Arc;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn xf() -> Arc<QuotientSpace> {
        let s = AmbientSpace::new(3, 2).unwrap();
        let f = AnchorSet::new(s, vec![v(&[0., 0., 1.])]).unwrap();
        Arc::new(build_quotient(s, &f).unwrap())
    }

    fn onb() -> FrameSequence {
        FrameSequence::new(xf(), vec![v(&[1., 0., 0.]), v(&[0., 1., 0.])]).unwrap()
    }

    #[test]
    fn tightness_examples() {
        let i = LinearMap::identity(2);
        let r = tightness(&onb(), &i).unwrap();
        assert!(r.is_tight && r.is_parseval);
        assert_abs_diff_eq!(r.constant, 1.0, epsilon = 1e-14);

        let r3 = tightness(&onb().scaled(3f64.sqrt()).unwrap(), &i).unwrap();
        assert!(r3.is_tight && !r3.is_parseval);
        assert_abs_diff_eq!(r3.constant, 3.0, epsilon = 1e-13);

        let single = FrameSequence::new(xf(), vec![v(&[1., 0., 0.])]).unwrap();
        assert!(!tightness(&single, &i).unwrap().is_tight);
    }

    #[test]
    fn zero_operator() {
        let z = LinearMap::zeros(2, 2);
        let r = tightness(&onb(), &z).unwrap();
        assert!(!r.is_tight && !r.degenerate);
        let anchors_only = FrameSequence::new(xf(), vec![v(&[0., 0., 2.])]).unwrap();
        let r = tightness(&anchors_only, &z).unwrap();
        assert!(r.degenerate && !r.is_tight);
    }

    #[test]
    fn parseval_rescaling() {
        let i = LinearMap::identity(2);
        let fs = onb().scaled(3f64.sqrt()).unwrap();
        let p = scale_to_parseval(&fs, &i).unwrap();
        let r = tightness(&p, &i).unwrap();
        assert!(r.is_parseval);
        assert_abs_diff_eq!(r.constant, 1.0, epsilon = 1e-12);

        let same = scale_to_parseval(&onb(), &i).unwrap();
        for (a, b) in same.elements().iter().zip(onb().elements()) {
            assert!(a.sub(b).norm() < 1e-12);
        }

        let proj = LinearMap::diagonal(&[1.0, 0.0]);
        let four = FrameSequence::new(xf(), vec![v(&[2., 0., 0.])]).unwrap();
        assert_abs_diff_eq!(tightness(&four, &proj).unwrap().constant, 4.0, epsilon = 1e-12);
        let p = scale_to_parseval(&four, &proj).unwrap();
        assert_abs_diff_eq!(tightness(&p, &proj).unwrap().constant, 1.0, epsilon = 1e-12);

        let single = FrameSequence::new(xf(), vec![v(&[1., 0., 0.])]).unwrap();
        assert!(scale_to_parseval(&single, &i).is_err());
    }

    #[test]
    fn theorem_4_3_and_4_4() {
        let proj = LinearMap::diagonal(&[1.0, 0.0]);
        let c = construct_theorem_4_3(&onb(), &proj).unwrap();
        assert!(c.constant_preserved(1e-12));
        assert_abs_diff_eq!(c.output.constant, 1.0, epsilon = 1e-12);

        let k = LinearMap::from_rows(&[vec![1.0, 0.5], vec![0.0, 2.0]]).unwrap();
        let tk = construct_theorem_4_3(&onb(), &k).unwrap();
        let c = construct_theorem_4_4(&tk.frame, &k, &LinearMap::identity(2).scaled(2.0)).unwrap();
        assert!(c.constant_preserved(1e-12));

        let single = FrameSequence::new(xf(), vec![v(&[1., 0., 0.])]).unwrap();
        assert!(construct_theorem_4_3(&single, &proj).is_err());
    }

    #[test]
    fn theorem_4_5_self_dual_and_scaled() {
        let i = LinearMap::identity(2);
        let spec = SampleSpec { count: 16, seed: 3 };
        let d = dual_bessel_theorem_4_5(&onb(), &i, spec).unwrap();
        assert_abs_diff_eq!(d.product(), 1.0, epsilon = 1e-12);
        for (g, f) in d.duals.elements().iter().zip(onb().elements()) {
            assert!(g.sub(f).norm() < 1e-12);
        }
        assert!(d.reconstruction_residual < 1e-12 && d.adjoint_residual < 1e-12);

        let d = dual_bessel_theorem_4_5(&onb().scaled(3f64.sqrt()).unwrap(), &i, spec).unwrap();
        assert_abs_diff_eq!(d.bessel_bound, 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.product(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn theorem_4_6_block_example() {
        // q = 2, m = 2: T = I, L = 0 would break Parseval for L, so use a
        // 4-element coefficient space with orthogonal supports.
        let space = xf();
        let s = 0.5f64.sqrt();
        let k = LinearMap::identity(2);
        let t = nalgebra::DMatrix::from_row_slice(2, 4, &[s, s, 0., 0., 0., 0., s, s]);
        let l = nalgebra::DMatrix::from_row_slice(2, 4, &[s, -s, 0., 0., 0., 0., s, -s]);
        let fs = FrameSequence::from_coords(space.clone(), &t).unwrap();
        let gs = FrameSequence::from_coords(space, &l).unwrap();
        let out = disjoint_sum_theorem_4_6(&fs, &gs, &k, SampleSpec { count: 8, seed: 0 }).unwrap();
        assert!(out.report.is_tight);
        assert_abs_diff_eq!(out.report.constant, 2.0, epsilon = 1e-12);

        let same = disjoint_sum_theorem_4_6(&fs, &fs, &k, SampleSpec { count: 8, seed: 0 });
        assert!(matches!(same, Err(Error::Precondition(m)) if m.contains("null operator")));
    }
}
