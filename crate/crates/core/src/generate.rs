//! Seeded random instances that satisfy the hypotheses of each construction.
//!
//! Random matrices almost never satisfy commutation, positivity or
//! orthogonality hypotheses, so each family is built to satisfy them:
//! commuting pairs as polynomials in `K`, positive cross terms through
//! spectral functions of `S_F`, disjoint Parseval pairs through orthogonal
//! coefficient supports, and tight K-frames as `√A · K · V` with `V` having
//! orthonormal rows.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::dense;
use crate::frames::{build_operators, FrameSequence};
use crate::linop::LinearMap;
use crate::nspace::{AmbientSpace, AnchorSet, Vector};
use crate::quotient::{build_quotient, QuotientSpace};
use crate::random::{self, InstanceRng};

/// `(d, n)` pairs of the default grid: `d ∈ 3..=8`, `n ∈ 2..=4`, `n ≤ d`.
pub fn default_grid() -> Vec<(usize, usize)> {
    (3..=8)
        .flat_map(|d| (2..=4).filter(move |&n| n <= d).map(move |n| (d, n)))
        .collect()
}

/// Random independent anchors, redrawn until well conditioned.
pub fn random_anchors(rng: &mut InstanceRng, space: AmbientSpace) -> AnchorSet {
    loop {
        let anchors = (0..space.arity() - 1)
            .map(|_| Vector::from_dvector(random::uniform_vector(rng, space.dim())))
            .collect();
        if let Ok(f) = AnchorSet::new(space, anchors) {
            let sv = dense::singular_values(&f.matrix());
            if sv.min() > 0.05 * sv.max() {
                return f;
            }
        }
    }
}

pub fn random_xf(rng: &mut InstanceRng, dim: usize, arity: usize) -> Result<Arc<QuotientSpace>> {
    let space = AmbientSpace::new(dim, arity)?;
    let anchors = random_anchors(rng, space);
    Ok(Arc::new(build_quotient(space, &anchors)?))
}

/// Sequence with the given orthonormal coordinates whose ambient
/// representatives carry random anchor components.
pub fn lift_with_noise(rng: &mut InstanceRng, xf: &Arc<QuotientSpace>, coords: &DMatrix<f64>) -> Result<FrameSequence> {
    let a = xf.anchors().matrix();
    let elements = coords
        .column_iter()
        .map(|c| {
            let base = xf.lift(&c.into_owned())?;
            let noise = &a * random::uniform_vector(rng, a.ncols());
            Ok(Vector::from_dvector(base.as_dvector() + noise))
        })
        .collect::<Result<Vec<_>>>()?;
    FrameSequence::new(xf.clone(), elements)
}

/// Random frame: `m ≥ q` uniform coordinate columns.
pub fn random_frame(rng: &mut InstanceRng, xf: &Arc<QuotientSpace>, m: usize) -> Result<FrameSequence> {
    let q = xf.dim();
    if m < q {
        return Err(Error::Unsatisfiable(format!("a frame for X_F of dimension {q} needs at least {q} elements, got {m}")));
    }
    loop {
        let c = random::uniform_matrix(rng, q, m);
        let sv = dense::singular_values(&c);
        if sv.min() > 0.05 * sv.max() {
            return lift_with_noise(rng, xf, &c);
        }
    }
}

/// A K-frame together with its `K`.
pub struct KFrameInstance {
    pub frame: FrameSequence,
    pub k: LinearMap,
}

/// Random `q × q` operator of the given rank, redrawn until its nonzero
/// singular values lie within a factor 20 of each other and whose norm is at
/// least 0.1.
pub fn random_operator(rng: &mut InstanceRng, q: usize, rank: usize) -> LinearMap {
    loop {
        let k = random::with_rank(rng, q, rank);
        let sv = dense::singular_values(&k);
        if rank == 0 || (sv[0] >= 0.1 && sv[rank - 1] > 0.05 * sv[0]) {
            return LinearMap::from_matrix(k);
        }
    }
}

/// K-frame with synthesis `K R`, `R` uniform `q × m`. `K` has random rank
/// `r ≤ min(q, m)`, so `R(T) = R(K)` and `S_F` may be singular.
pub fn random_kframe(rng: &mut InstanceRng, xf: &Arc<QuotientSpace>, m: usize) -> Result<KFrameInstance> {
    let q = xf.dim();
    let r = random::index(rng, 1, q.min(m));
    let k = random_operator(rng, q, r);
    kframe_for(rng, xf, k, m)
}

/// K-frame for a given `K`, synthesis `K R`, redrawn until the nonzero
/// singular values of `K R` lie within a factor 20 of each other.
pub fn kframe_for(rng: &mut InstanceRng, xf: &Arc<QuotientSpace>, k: LinearMap, m: usize) -> Result<KFrameInstance> {
    let q = xf.dim();
    let rank = crate::linop::rank(&k);
    if m < rank {
        return Err(Error::Unsatisfiable(format!("K has rank {rank}, a K-frame needs at least {rank} elements, got {m}")));
    }
    for attempt in 0.. {
        // after enough rejections use orthonormal rows, for which cond(K R) = cond(K)
        let r = if attempt >= 200 && m >= q {
            random::orthonormal_rows(rng, q, m)
        } else {
            random::uniform_matrix(rng, q, m)
        };
        let t = k.matrix() * &r;
        let sv = dense::singular_values(&t);
        if rank == 0 || sv[rank - 1] > 0.05 * sv[0] || attempt >= 400 {
            let frame = lift_with_noise(rng, xf, &t)?;
            return Ok(KFrameInstance { frame, k });
        }
    }
    unreachable!()
}

/// Tight K-frame with constant `a`: synthesis `√a K V`, `V` with orthonormal rows.
pub fn random_tight_kframe(
    rng: &mut InstanceRng,
    xf: &Arc<QuotientSpace>,
    k: LinearMap,
    m: usize,
    a: f64,
) -> Result<FrameSequence> {
    let q = xf.dim();
    if m < q {
        return Err(Error::Unsatisfiable(format!("a tight K-frame construction needs at least {q} elements, got {m}")));
    }
    let v = random::orthonormal_rows(rng, q, m);
    lift_with_noise(rng, xf, &(k.matrix() * v * a.sqrt()))
}

/// Two Parseval K-frames whose synthesis operators `K V₁`, `K V₂` satisfy
/// `T L* = 0` because `V₁ V₂ᵀ = 0`.
pub fn parseval_disjoint_pair(
    rng: &mut InstanceRng,
    xf: &Arc<QuotientSpace>,
    k: &LinearMap,
    m: usize,
) -> Result<(FrameSequence, FrameSequence)> {
    let q = xf.dim();
    if m < 2 * q {
        return Err(Error::Unsatisfiable(format!(
            "a disjoint Parseval pair needs at least {} elements, got {m}",
            2 * q
        )));
    }
    let o = random::orthogonal(rng, m);
    let v1 = o.rows(0, q).into_owned();
    let v2 = o.rows(q, q).into_owned();
    let fs = lift_with_noise(rng, xf, &(k.matrix() * v1))?;
    let gs = lift_with_noise(rng, xf, &(k.matrix() * v2))?;
    Ok((fs, gs))
}

/// Invertible polynomial `c₀ I + c₁ K + c₂ K²` in `K`.
pub fn commuting_invertible(rng: &mut InstanceRng, k: &LinearMap) -> LinearMap {
    let q = k.nrows();
    let kn = crate::linop::operator_norm(k).max(1e-300);
    let k1 = k.scaled(1.0 / kn);
    let k2 = &k1 * &k1;
    loop {
        let c0 = random::uniform(rng) * 2.0;
        let c1 = random::uniform(rng);
        let c2 = random::uniform(rng) * 0.5;
        let t = &(&LinearMap::identity(q).scaled(c0) + &k1.scaled(c1)) + &k2.scaled(c2);
        let sv = dense::singular_values(t.matrix());
        if sv.min() > 0.05 * sv.max() {
            return t;
        }
    }
}

/// Positive operator `Q diag(p) Qᵀ` with `Q` the eigenvectors of `s`, so that
/// it commutes with `s`.
pub fn spectral_positive(rng: &mut InstanceRng, s: &LinearMap) -> LinearMap {
    let eig = dense::symmetric_eigen(s.matrix());
    let q = s.nrows();
    let p = DVector::from_fn(q, |_, _| random::uniform(rng) + 1.0);
    let v = eig.vectors;
    LinearMap::from_matrix(&v * DMatrix::from_diagonal(&p) * v.transpose())
}

/// Frame operator of `fs`.
pub fn frame_op(fs: &FrameSequence) -> LinearMap {
    build_operators(fs).frame_op
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kframes::kframe_bounds;
    use crate::tight::tightness;

    #[test]
    fn grid_covers_all_valid_pairs() {
        let g = default_grid();
        assert_eq!(g.len(), 17);
        assert!(g.iter().all(|&(d, n)| n <= d));
    }

    #[test]
    fn families_satisfy_their_hypotheses() {
        let mut rng = random::rng(9, 0);
        let xf = random_xf(&mut rng, 6, 3).unwrap();
        let q = xf.dim();
        let kf = random_kframe(&mut rng, &xf, q + 1).unwrap();
        assert!(kframe_bounds(&kf.frame, &kf.k).unwrap().is_kframe);

        let t = random_tight_kframe(&mut rng, &xf, kf.k.clone(), q + 2, 2.5).unwrap();
        let r = tightness(&t, &kf.k).unwrap();
        assert!(r.is_tight && (r.constant - 2.5).abs() < 1e-9);

        let (fs, gs) = parseval_disjoint_pair(&mut rng, &xf, &kf.k, 2 * q).unwrap();
        assert!(tightness(&fs, &kf.k).unwrap().is_parseval);
        assert!(tightness(&gs, &kf.k).unwrap().is_parseval);

        let p = commuting_invertible(&mut rng, &kf.k);
        assert!((&(&p * &kf.k) - &(&kf.k * &p)).frobenius() < 1e-10);

        assert!(random_frame(&mut rng, &xf, q - 1).is_err());
    }
}
