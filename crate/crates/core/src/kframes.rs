//! K-frames: optimal bounds and certified versions of the constructions that
//! turn one K-frame into another.
//!
//! A sequence is a K-frame when `A ‖K* f‖² ≤ Σ |⟨f, f_i⟩_F|² ≤ B ‖f‖²`. In
//! operator form the lower inequality is `S_F ⪰ A K K*`, so the optimal `A`
//! is `1/λ²` with `λ = ‖S_F^{+1/2} K‖`, and it exists only when
//! `R(K) ⊆ R(S_F)`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{build_operators, energy_floor, frame_bounds, FrameSequence};
use crate::linop::{
    douglas_check, is_psd, operator_norm, pseudo_inverse, range_sum_check, LinearMap, DouglasCertificate,
};
use crate::random::{self, SampleSpec};
use crate::tol::{Tolerances, RANK_CUTOFF};

/// Relative slack on `‖(I - P_S) K‖` below which `R(K) ⊆ R(S_F)` is accepted.
const INCLUSION_TOL: f64 = 1e-8;

/// Relative slack for hypotheses stated as exact operator identities.
const HYPOTHESIS_TOL: f64 = 1e-8;

/// Optimal K-frame bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KFrameReport {
    /// Largest `A` with `S_F ⪰ A K K*`; `+∞` when `K = 0`.
    pub lower: f64,
    /// Optimal Bessel bound `λ_max(S_F)`.
    pub upper: f64,
    pub is_kframe: bool,
    /// `λ` with `K K* ≤ λ² S_F`, so `lower = 1/λ²`; `+∞` when none exists.
    pub lambda_certificate: f64,
    /// `K = 0`: the lower inequality is vacuous.
    pub degenerate_k: bool,
}

fn check_operator(fs: &FrameSequence, k: &LinearMap, name: &str) -> Result<()> {
    let q = fs.space().dim();
    if k.nrows() != q || k.ncols() != q {
        return Err(Error::Shape(format!(
            "{name} is {}x{}, X_F has dimension {q}",
            k.nrows(),
            k.ncols()
        )));
    }
    Ok(())
}

/// Optimal K-frame bounds of `fs`.
pub fn kframe_bounds(fs: &FrameSequence, k: &LinearMap) -> Result<KFrameReport> {
    check_operator(fs, k, "K")?;
    let s = build_operators(fs).frame_op;
    Ok(kframe_bounds_from_frame_op(&s, k, energy_floor(fs)))
}

/// Eigenvalues of `s` at or below `floor` count as zero.
pub(crate) fn kframe_bounds_from_frame_op(s: &LinearMap, k: &LinearMap, floor: f64) -> KFrameReport {
    let eig = crate::dense::symmetric_eigen(s.matrix());
    let upper = eig.values.max().max(0.0);
    if operator_norm(k) == 0.0 {
        return KFrameReport {
            lower: f64::INFINITY,
            upper,
            is_kframe: true,
            lambda_certificate: 0.0,
            degenerate_k: true,
        };
    }
    let keep: Vec<usize> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > floor && l > RANK_CUTOFF * upper)
        .map(|(i, _)| i)
        .collect();
    let basis = eig.vectors.select_columns(keep.iter());
    let outside = k.matrix() - &basis * (basis.transpose() * k.matrix());
    let knorm = operator_norm(k);
    if keep.is_empty() || operator_norm(&LinearMap::from_matrix(outside)) > INCLUSION_TOL * knorm {
        return KFrameReport {
            lower: 0.0,
            upper,
            is_kframe: false,
            lambda_certificate: f64::INFINITY,
            degenerate_k: false,
        };
    }
    let inv_sqrt = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(keep.len(), keep.iter().map(|&i| eig.values[i].sqrt().recip())));
    let w = inv_sqrt * basis.transpose() * k.matrix();
    let lambda = operator_norm(&LinearMap::from_matrix(w));
    let lower = 1.0 / (lambda * lambda);
    KFrameReport {
        lower,
        upper,
        is_kframe: lower > 0.0 && lower.is_finite(),
        lambda_certificate: lambda,
        degenerate_k: false,
    }
}

/// Worst relative violation of the two inequality chains that hold on
/// `R(K)` and on `S_F(R(K))` for a K-frame.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClosedRangeReport {
    pub lower: f64,
    pub upper: f64,
    pub pinv_norm: f64,
    /// `A ‖K†‖⁻² ‖f‖² ≤ ⟨S_F f, f⟩` on `R(K)`.
    pub range_lower_violation: f64,
    /// `⟨S_F f, f⟩ ≤ B ‖f‖²` on `R(K)`.
    pub range_upper_violation: f64,
    /// `B⁻¹ ‖f‖² ≤ ⟨S_F⁻¹ f, f⟩` on `S_F(R(K))`.
    pub image_lower_violation: f64,
    /// `⟨S_F⁻¹ f, f⟩ ≤ A⁻¹ ‖K†‖² ‖f‖²` on `S_F(R(K))`.
    pub image_upper_violation: f64,
}

impl ClosedRangeReport {
    pub fn max_violation(&self) -> f64 {
        self.range_lower_violation
            .max(self.range_upper_violation)
            .max(self.image_lower_violation)
            .max(self.image_upper_violation)
    }
}

/// Samples `f = K r` and `f = S_F K r` and measures both sandwiches.
/// `S_F⁻¹` is the inverse of `S_F` restricted to `R(K)`, realized as `S_F†`.
pub fn closed_range_bounds_check(
    fs: &FrameSequence,
    k: &LinearMap,
    samples: SampleSpec,
) -> Result<ClosedRangeReport> {
    let report = kframe_bounds(fs, k)?;
    if !report.is_kframe || report.degenerate_k {
        return Err(Error::precondition("sequence is not a K-frame for a nonzero K"));
    }
    let s = build_operators(fs).frame_op;
    let s_pinv = pseudo_inverse(&s);
    let kp = operator_norm(&pseudo_inverse(k));
    let (a, b) = (report.lower, report.upper);
    let mut out = ClosedRangeReport {
        lower: a,
        upper: b,
        pinv_norm: kp,
        range_lower_violation: 0.0,
        range_upper_violation: 0.0,
        image_lower_violation: 0.0,
        image_upper_violation: 0.0,
    };
    let mut rng = random::rng(samples.seed, 0x6e6f7465);
    let q = fs.space().dim();
    for _ in 0..samples.count {
        let r = random::uniform_vector(&mut rng, q);
        let f = k.apply(&r);
        let ff = f.norm_squared();
        if ff == 0.0 {
            continue;
        }
        let sff = f.dot(&s.apply(&f));
        let scale = b * ff;
        out.range_lower_violation = out.range_lower_violation.max((a / (kp * kp) * ff - sff) / scale);
        out.range_upper_violation = out.range_upper_violation.max((sff - b * ff) / scale);

        let g = s.apply(&f);
        let gg = g.norm_squared();
        let inv = g.dot(&s_pinv.apply(&g));
        let scale = kp * kp / a * gg;
        out.image_lower_violation = out.image_lower_violation.max((gg / b - inv) / scale);
        out.image_upper_violation = out.image_upper_violation.max((inv - kp * kp / a * gg) / scale);
    }
    Ok(out)
}

/// Predicted versus optimal bounds for one of the K-frame constructions.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub theorem: &'static str,
    pub predicted_lower: f64,
    pub achieved_lower: f64,
    pub predicted_upper: f64,
    pub achieved_upper: f64,
    pub is_kframe: bool,
    /// Relative residual of an operator identity the construction relies on.
    pub identity_residual: Option<f64>,
    /// Operator inequality used as an intermediate step, when there is one.
    pub proof_chain: Option<bool>,
}

impl TheoremReport {
    /// Magnitude that inequality slack is measured against.
    pub fn scale(&self) -> f64 {
        [1.0, self.predicted_upper, self.achieved_upper]
            .into_iter()
            .filter(|x| x.is_finite())
            .fold(0.0, f64::max)
    }

    /// `predicted - achieved` for the lower bound (positive is a violation).
    pub fn lower_gap(&self) -> f64 {
        if self.predicted_lower.is_infinite() && self.achieved_lower.is_infinite() {
            0.0
        } else {
            self.predicted_lower - self.achieved_lower
        }
    }

    /// `achieved - predicted` for the upper bound (positive is a violation).
    pub fn upper_gap(&self) -> f64 {
        self.achieved_upper - self.predicted_upper
    }

    pub fn passed(&self, tol: &Tolerances) -> bool {
        let slack = tol.inequality * self.scale();
        self.is_kframe
            && self.lower_gap() <= slack
            && self.upper_gap() <= slack
            && self.identity_residual.is_none_or(|r| r <= tol.identity)
            && self.proof_chain.unwrap_or(true)
    }
}

fn require_kframe(fs: &FrameSequence, k: &LinearMap) -> Result<KFrameReport> {
    let r = kframe_bounds(fs, k)?;
    if !r.is_kframe {
        return Err(Error::precondition("input sequence is not a K-frame"));
    }
    Ok(r)
}

fn commutator_ok(t: &LinearMap, k: &LinearMap) -> bool {
    let residual = operator_norm(&(&(t * k) - &(k * t)));
    residual <= HYPOTHESIS_TOL * (1.0 + operator_norm(k) * operator_norm(t))
}

/// A K-frame is a T-frame whenever `R(T) ⊆ R(K)`, with lower bound `A/λ²`
/// where `λ` is the Douglas constant for `T T* ≤ λ² K K*`.
pub fn restrict_theorem_3_3(fs: &FrameSequence, k: &LinearMap, t: &LinearMap) -> Result<TheoremReport> {
    check_operator(fs, t, "T")?;
    let kr = require_kframe(fs, k)?;
    let dc = douglas_check(t, k)?;
    if !dc.holds {
        return Err(Error::precondition("R(T) is not contained in R(K)"));
    }
    let tr = kframe_bounds(fs, t)?;
    let predicted_lower = if dc.lambda > 0.0 {
        kr.lower / (dc.lambda * dc.lambda)
    } else {
        f64::INFINITY
    };
    Ok(TheoremReport {
        theorem: "3.3",
        predicted_lower,
        achieved_lower: tr.lower,
        predicted_upper: kr.upper,
        achieved_upper: tr.upper,
        is_kframe: tr.is_kframe,
        identity_residual: None,
        proof_chain: None,
    })
}

/// `{T f_i}` for invertible `T` commuting with `K`; bounds
/// `A ‖T⁻¹‖⁻²` and `B ‖T‖²`.
pub fn transform_theorem_3_4(
    fs: &FrameSequence,
    k: &LinearMap,
    t: &LinearMap,
) -> Result<(FrameSequence, TheoremReport)> {
    check_operator(fs, t, "T")?;
    let sv = crate::dense::singular_values(t.matrix());
    let (smin, smax) = (sv.min(), sv.max());
    if !(smax > 0.0 && smin > RANK_CUTOFF * smax) {
        return Err(Error::precondition("T is not invertible"));
    }
    if !commutator_ok(t, k) {
        return Err(Error::precondition("T and K do not commute"));
    }
    let kr = require_kframe(fs, k)?;
    let out = fs.mapped(t)?;
    let nr = kframe_bounds(&out, k)?;
    let report = TheoremReport {
        theorem: "3.4",
        predicted_lower: kr.lower * smin * smin,
        achieved_lower: nr.lower,
        predicted_upper: kr.upper * smax * smax,
        achieved_upper: nr.upper,
        is_kframe: nr.is_kframe,
        identity_residual: None,
        proof_chain: None,
    };
    Ok((out, report))
}

/// `{T f_i}` for a co-isometry `T T* = I` commuting with `K`; the lower
/// bound `A` is preserved.
pub fn transform_theorem_3_5(
    fs: &FrameSequence,
    k: &LinearMap,
    t: &LinearMap,
) -> Result<(FrameSequence, TheoremReport)> {
    check_operator(fs, t, "T")?;
    let q = t.nrows();
    let tn = operator_norm(t);
    let coiso = operator_norm(&(&t.gramian() - &LinearMap::identity(q)));
    if coiso > HYPOTHESIS_TOL * (1.0 + operator_norm(k) * tn) {
        return Err(Error::precondition("T T* is not the identity"));
    }
    if !commutator_ok(t, k) {
        return Err(Error::precondition("T and K do not commute"));
    }
    let kr = require_kframe(fs, k)?;
    let out = fs.mapped(t)?;
    let nr = kframe_bounds(&out, k)?;
    let report = TheoremReport {
        theorem: "3.5",
        predicted_lower: kr.lower,
        achieved_lower: nr.lower,
        predicted_upper: kr.upper * tn * tn,
        achieved_upper: nr.upper,
        is_kframe: nr.is_kframe,
        identity_residual: None,
        proof_chain: None,
    };
    Ok((out, report))
}

/// Both sides of "K-frame iff `R(K) ⊆ R(T)`" for the synthesis operator `T`.
#[derive(Debug, Clone)]
pub struct SynthesisCertificate {
    /// Largest coefficient-basis reconstruction error `‖T e_i - f_i‖`.
    pub synthesis_residual: f64,
    pub is_kframe: bool,
    pub range_inclusion: bool,
    pub douglas: DouglasCertificate,
}

impl SynthesisCertificate {
    pub fn agree(&self) -> bool {
        self.is_kframe == self.range_inclusion
    }
}

pub fn synthesis_characterization(fs: &FrameSequence, k: &LinearMap) -> Result<SynthesisCertificate> {
    check_operator(fs, k, "K")?;
    let t = fs.synthesis();
    let m = fs.len();
    let mut synthesis_residual = 0.0f64;
    for i in 0..m {
        let mut e = nalgebra::DVector::zeros(m);
        e[i] = 1.0;
        let fi = fs.space().orthonormal_coords(&fs.elements()[i])?;
        synthesis_residual = synthesis_residual.max((t.apply(&e) - fi).norm());
    }
    // a numerically null sequence synthesizes the zero operator
    let t_route = if t.frobenius().powi(2) <= energy_floor(fs) { LinearMap::zeros(t.nrows(), m) } else { t };
    let douglas = douglas_check(k, &t_route)?;
    let kr = kframe_bounds(fs, k)?;
    Ok(SynthesisCertificate {
        synthesis_residual,
        is_kframe: kr.is_kframe,
        range_inclusion: douglas.holds,
        douglas,
    })
}

/// `{f_i + g_i}` when `T L*` and `L T*` are positive. Lower bound `1/λ²` from
/// the range-sum certificate of `K` against `T` and `L`; upper bound
/// `(√B_f + √B_g)²` from the two Bessel bounds.
pub fn sum_theorem_3_7(
    fs: &FrameSequence,
    gs: &FrameSequence,
    k: &LinearMap,
) -> Result<(FrameSequence, TheoremReport)> {
    check_operator(fs, k, "K")?;
    let t = fs.synthesis();
    let l = gs.synthesis();
    if t.ncols() != l.ncols() {
        return Err(Error::Shape(format!("sequences have lengths {} and {}", t.ncols(), l.ncols())));
    }
    if !is_psd(&(&t * &l.adjoint()))? {
        return Err(Error::precondition("T L* is not positive"));
    }
    if !is_psd(&(&l * &t.adjoint()))? {
        return Err(Error::precondition("L T* is not positive"));
    }
    let rs = range_sum_check(k, &t, &l)?;
    if !rs.holds {
        return Err(Error::precondition("R(K) is not contained in R(T) + R(L)"));
    }
    let bf = frame_bounds(fs).upper;
    let bg = frame_bounds(gs).upper;
    let out = fs.sum(gs)?;
    let s_sum = build_operators(&out).frame_op;
    let nr = kframe_bounds(&out, k)?;
    let chain = is_psd(&(&s_sum - &(&t.gramian() + &l.gramian())))?;
    let predicted_lower = if rs.lambda > 0.0 {
        1.0 / (rs.lambda * rs.lambda)
    } else {
        f64::INFINITY
    };
    let report = TheoremReport {
        theorem: "3.7",
        predicted_lower,
        achieved_lower: nr.lower,
        predicted_upper: (bf.sqrt() + bg.sqrt()).powi(2),
        achieved_upper: nr.upper,
        is_kframe: nr.is_kframe,
        identity_residual: None,
        proof_chain: Some(chain),
    };
    Ok((out, report))
}

/// `{f_i + U f_i}` for positive `U`. The new frame operator is
/// `(I+U) S_F (I+U)*`; the lower bound `A` is certified through
/// `(I+U) S_F (I+U)* ⪰ S_F`, which is reported in `proof_chain`.
pub fn perturb_theorem_3_8(
    fs: &FrameSequence,
    k: &LinearMap,
    u: &LinearMap,
) -> Result<(FrameSequence, TheoremReport)> {
    check_operator(fs, u, "U")?;
    if !is_psd(u)? {
        return Err(Error::precondition("U is not positive"));
    }
    let kr = require_kframe(fs, k)?;
    let q = u.nrows();
    let shift = &LinearMap::identity(q) + u;
    let out = fs.mapped(&shift)?;
    let s = build_operators(fs).frame_op;
    let s_new = build_operators(&out).frame_op;
    let expected = &(&shift * &s) * &shift.adjoint();
    let identity_residual = (&s_new - &expected).frobenius() / expected.frobenius().max(f64::MIN_POSITIVE);
    let chain = is_psd(&(&s_new - &s))?;
    let nr = kframe_bounds(&out, k)?;
    let sn = operator_norm(&shift);
    let report = TheoremReport {
        theorem: "3.8",
        predicted_lower: kr.lower,
        achieved_lower: nr.lower,
        predicted_upper: kr.upper * sn * sn,
        achieved_upper: nr.upper,
        is_kframe: nr.is_kframe,
        identity_residual: Some(identity_residual),
        proof_chain: Some(chain),
    };
    Ok((out, report))
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

    fn diag21() -> FrameSequence {
        FrameSequence::new(xf(), vec![v(&[1., 0., 0.]), v(&[1., 0., 0.]), v(&[0., 1., 0.])]).unwrap()
    }

    #[test]
    fn identity_reduces_to_frame_bounds() {
        let fs = diag21();
        let r = kframe_bounds(&fs, &LinearMap::identity(2)).unwrap();
        let b = frame_bounds(&fs);
        assert_abs_diff_eq!(r.lower, b.lower, epsilon = 1e-12);
        assert_abs_diff_eq!(r.upper, b.upper, epsilon = 1e-12);
        assert!(r.is_kframe);
    }

    #[test]
    fn projection_with_single_vector() {
        let fs = FrameSequence::new(xf(), vec![v(&[1., 0., 0.])]).unwrap();
        let p = LinearMap::diagonal(&[1.0, 0.0]);
        let r = kframe_bounds(&fs, &p).unwrap();
        assert!(r.is_kframe);
        assert_abs_diff_eq!(r.lower, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.upper, 1.0, epsilon = 1e-12);
        let c = closed_range_bounds_check(&fs, &p, SampleSpec { count: 20, seed: 1 }).unwrap();
        assert!(c.max_violation() <= 1e-12);
    }

    #[test]
    fn zero_operator_is_degenerate() {
        let fs = diag21();
        let r = kframe_bounds(&fs, &LinearMap::zeros(2, 2)).unwrap();
        assert!(r.is_kframe && r.degenerate_k && r.lower.is_infinite());
    }

    #[test]
    fn optimal_bound_matches_definition_when_frame_operator_is_singular() {
        // S = [[1,1],[1,1]], K = diag(1,0): R(K) is not in R(S), so no A > 0.
        let fs = FrameSequence::new(xf(), vec![v(&[1., 1., 0.])]).unwrap();
        let r = kframe_bounds(&fs, &LinearMap::diagonal(&[1.0, 0.0])).unwrap();
        assert!(!r.is_kframe);
        assert_eq!(r.lower, 0.0);
    }

    #[test]
    fn feasibility_and_maximality() {
        let fs = diag21();
        let k = LinearMap::from_rows(&[vec![1.0, 0.5], vec![-0.3, 2.0]]).unwrap();
        let r = kframe_bounds(&fs, &k).unwrap();
        let s = build_operators(&fs).frame_op;
        let kk = k.gramian();
        assert!(is_psd(&(&s - &kk.scaled(r.lower))).unwrap());
        assert!(!is_psd(&(&s - &kk.scaled(r.lower * (1.0 + 1e-6)))).unwrap());
    }

    #[test]
    fn theorem_3_3_scaling() {
        let fs = diag21();
        let k = LinearMap::from_rows(&[vec![1.0, 0.5], vec![-0.3, 2.0]]).unwrap();
        let same = restrict_theorem_3_3(&fs, &k, &k).unwrap();
        assert_abs_diff_eq!(same.predicted_lower, same.achieved_lower, epsilon = 1e-9);
        let half = restrict_theorem_3_3(&fs, &k, &k.scaled(0.5)).unwrap();
        assert!(half.passed(&Tolerances::default()));
        assert_abs_diff_eq!(half.predicted_lower, 4.0 * same.predicted_lower, epsilon = 1e-9);
        let bad = restrict_theorem_3_3(&fs, &LinearMap::diagonal(&[1.0, 0.0]), &LinearMap::identity(2));
        assert!(matches!(bad, Err(Error::Precondition(_))));
    }

    #[test]
    fn theorem_3_4_doubling() {
        let fs = diag21();
        let k = LinearMap::identity(2);
        let (_, r) = transform_theorem_3_4(&fs, &k, &LinearMap::identity(2).scaled(2.0)).unwrap();
        assert_abs_diff_eq!(r.achieved_lower, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.achieved_upper, 8.0, epsilon = 1e-12);
        assert!(r.passed(&Tolerances::default()));
        let singular = transform_theorem_3_4(&fs, &k, &LinearMap::diagonal(&[1.0, 0.0]));
        assert!(matches!(singular, Err(Error::Precondition(_))));
        let noncommuting = transform_theorem_3_4(
            &fs,
            &LinearMap::diagonal(&[1.0, 2.0]),
            &LinearMap::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
        );
        assert!(matches!(noncommuting, Err(Error::Precondition(_))));
    }

    #[test]
    fn theorem_3_5_rotation() {
        let fs = diag21();
        let (c, s) = (0.6f64, 0.8f64);
        let rot = LinearMap::from_rows(&[vec![c, -s], vec![s, c]]).unwrap();
        let (_, r) = transform_theorem_3_5(&fs, &LinearMap::identity(2), &rot).unwrap();
        assert_abs_diff_eq!(r.achieved_lower, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.achieved_upper, 2.0, epsilon = 1e-12);
        assert!(transform_theorem_3_5(&fs, &LinearMap::identity(2), &LinearMap::identity(2).scaled(2.0)).is_err());
    }

    #[test]
    fn theorem_3_6_examples() {
        let fs = FrameSequence::new(xf(), vec![v(&[1., 0., 0.]), v(&[0., 1., 0.])]).unwrap();
        let c = synthesis_characterization(&fs, &LinearMap::identity(2)).unwrap();
        assert!(c.is_kframe && c.range_inclusion && c.agree());
        let line = FrameSequence::new(xf(), vec![v(&[1., 0., 0.]), v(&[2., 0., 0.])]).unwrap();
        let c = synthesis_characterization(&line, &LinearMap::diagonal(&[0.0, 1.0])).unwrap();
        assert!(!c.is_kframe && !c.range_inclusion && c.agree());
    }

    #[test]
    fn theorem_3_7_doubling_and_zero_partner() {
        let fs = diag21();
        let k = LinearMap::identity(2);
        let (_, r) = sum_theorem_3_7(&fs, &fs, &k).unwrap();
        assert_abs_diff_eq!(r.achieved_lower, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.achieved_upper, 8.0, epsilon = 1e-12);
        assert!(r.passed(&Tolerances::default()));
        let zeros = FrameSequence::new(fs.space().clone(), vec![Vector::zeros(3); 3]).unwrap();
        let (sum, r) = sum_theorem_3_7(&fs, &zeros, &k).unwrap();
        assert!(r.passed(&Tolerances::default()));
        assert_eq!(sum.elements(), fs.elements());
        let neg = fs.scaled(-1.0).unwrap();
        assert!(matches!(sum_theorem_3_7(&fs, &neg, &k), Err(Error::Precondition(_))));
    }

    #[test]
    fn theorem_3_8_examples() {
        let fs = diag21();
        let k = LinearMap::from_rows(&[vec![1.0, 0.5], vec![-0.3, 2.0]]).unwrap();
        let (_, r) = perturb_theorem_3_8(&fs, &k, &LinearMap::zeros(2, 2)).unwrap();
        assert!(r.passed(&Tolerances::default()));
        assert_abs_diff_eq!(r.achieved_lower, r.predicted_lower, epsilon = 1e-12);
        let (out, r) = perturb_theorem_3_8(&fs, &k, &LinearMap::identity(2)).unwrap();
        let s = build_operators(&fs).frame_op;
        let s2 = build_operators(&out).frame_op;
        assert!((s2.matrix() - s.matrix() * 4.0).norm() < 1e-12);
        assert!(r.passed(&Tolerances::default()));
        assert!(perturb_theorem_3_8(&fs, &k, &LinearMap::diagonal(&[1.0, -1.0])).is_err());
    }

    #[test]
    fn theorem_3_8_chain_needs_commuting_perturbation() {
        // With S singular and U rotating R(S) away from R(K), the perturbed
        // sequence stops being a K-frame and the intermediate ordering fails.
        let fs = FrameSequence::new(xf(), vec![v(&[1., 0., 0.])]).unwrap();
        let k = LinearMap::diagonal(&[1.0, 0.0]);
        let u = LinearMap::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let (_, r) = perturb_theorem_3_8(&fs, &k, &u).unwrap();
        assert_eq!(r.proof_chain, Some(false));
        assert!(!r.is_kframe);
        assert!(r.identity_residual.unwrap() < 1e-12);
    }
}
