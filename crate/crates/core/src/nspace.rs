//! The ambient space `X` with its Gram-determinant n-inner product.
//!
//! For anchors `a₂,…,aₙ` the product `⟨x, y | a₂,…,aₙ⟩` is the determinant
//! of the `n×n` matrix whose first row/column pair `x` and `y` against the
//! anchors and whose lower block is the anchor Gram matrix. [`n_inner`] is the
//! only place that evaluates it; everything downstream goes through it.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::random::{self, SampleSpec};
use crate::tol::RANK_CUTOFF;

/// Real coordinate space of dimension `dim` carrying an `arity`-inner product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AmbientSpace {
    dim: usize,
    arity: usize,
}

impl AmbientSpace {
    pub fn new(dim: usize, arity: usize) -> Result<Self> {
        if arity < 2 {
            return Err(Error::InvalidSpace(format!("arity must be at least 2, got {arity}")));
        }
        if dim < arity {
            return Err(Error::InvalidSpace(format!(
                "dimension {dim} is smaller than arity {arity}"
            )));
        }
        Ok(Self { dim, arity })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Dimension of the derived Hilbert space, `d - (n - 1)`.
    pub fn quotient_dim(&self) -> usize {
        self.dim + 1 - self.arity
    }

    pub fn vector(&self, coords: impl Into<Vec<f64>>) -> Result<Vector> {
        let v = Vector::new(coords)?;
        self.check(&v)?;
        Ok(v)
    }

    pub(crate) fn check(&self, v: &Vector) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }
}

/// A point of the ambient space. Entries are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(DVector<f64>);

impl Vector {
    pub fn new(coords: impl Into<Vec<f64>>) -> Result<Self> {
        let coords = coords.into();
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("vector"));
        }
        Ok(Self(DVector::from_vec(coords)))
    }

    pub(crate) fn from_dvector(v: DVector<f64>) -> Self {
        Self(v)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DVector::zeros(dim))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn as_dvector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn scaled(&self, alpha: f64) -> Vector {
        Vector(&self.0 * alpha)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(&self.0 - &other.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }
}

/// The tuple `(a₂,…,aₙ)` of linearly independent anchors.
#[derive(Debug, Clone)]
pub struct AnchorSet {
    space: AmbientSpace,
    anchors: Vec<Vector>,
    gram: DMatrix<f64>,
}

impl AnchorSet {
    /// Validates count, dimensions and linear independence.
    ///
    /// Anchors count as independent when the smallest singular value of
    /// their matrix exceeds `1e-10` times the largest.
    pub fn new(space: AmbientSpace, anchors: Vec<Vector>) -> Result<Self> {
        if anchors.len() != space.arity() - 1 {
            return Err(Error::InvalidSpace(format!(
                "arity {} needs {} anchors, got {}",
                space.arity(),
                space.arity() - 1,
                anchors.len()
            )));
        }
        for a in &anchors {
            space.check(a)?;
        }
        let mat = DMatrix::from_columns(&anchors.iter().map(|a| a.0.clone()).collect::<Vec<_>>());
        let sv = crate::dense::singular_values(&mat);
        let max = sv.max();
        let min = sv.min();
        let ratio = if max > 0.0 { min / max } else { 0.0 };
        if ratio.is_nan() || ratio <= RANK_CUTOFF {
            return Err(Error::DegenerateAnchors { ratio });
        }
        let gram = mat.transpose() * &mat;
        Ok(Self {
            space,
            anchors,
            gram,
        })
    }

    pub fn space(&self) -> AmbientSpace {
        self.space
    }

    pub fn anchors(&self) -> &[Vector] {
        &self.anchors
    }

    /// `d × (n-1)` matrix with the anchors as columns.
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_columns(&self.anchors.iter().map(|a| a.0.clone()).collect::<Vec<_>>())
    }

    /// The same anchors in a different order.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let anchors = order.iter().map(|&i| self.anchors[i].clone()).collect();
        Self::new(self.space, anchors)
    }

    /// Product of the squared Euclidean anchor lengths; the natural magnitude
    /// of `⟨x, y | F⟩` for unit `x`, `y` (Hadamard's inequality).
    pub fn scale(&self) -> f64 {
        self.anchors.iter().map(|a| a.dot(a)).product()
    }
}

/// `⟨x, y | a₂,…,aₙ⟩` as a Gram determinant over the Euclidean dot product.
pub fn n_inner(x: &Vector, y: &Vector, anchors: &AnchorSet) -> Result<f64> {
    anchors.space.check(x)?;
    anchors.space.check(y)?;
    let k = anchors.anchors.len();
    let mut m = DMatrix::zeros(k + 1, k + 1);
    m[(0, 0)] = x.dot(y);
    for (j, a) in anchors.anchors.iter().enumerate() {
        m[(0, j + 1)] = x.dot(a);
        m[(j + 1, 0)] = a.dot(y);
    }
    m.view_mut((1, 1), (k, k)).copy_from(&anchors.gram);
    Ok(m.determinant())
}

/// `‖x, a₂,…,aₙ‖`. Small negative round-off in `⟨x, x | F⟩` clamps to zero.
pub fn n_norm(x: &Vector, anchors: &AnchorSet) -> Result<f64> {
    let sq = n_inner(x, x, anchors)?;
    let floor = 1e-12 * x.dot(x) * anchors.scale();
    if sq < 0.0 && sq >= -floor {
        return Ok(0.0);
    }
    Ok(sq.max(0.0).sqrt())
}

/// Maximum relative violation of each n-inner-product property over a sample.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub samples: usize,
    pub seed: u64,
    pub nonnegativity: f64,
    pub symmetry: f64,
    pub homogeneity: f64,
    pub additivity: f64,
    pub permutation: f64,
    pub cauchy_schwarz: f64,
    pub polarization: f64,
    pub parallelogram: f64,
    pub tolerance: f64,
}

impl AxiomReport {
    pub fn max_violation(&self) -> f64 {
        [
            self.nonnegativity,
            self.symmetry,
            self.homogeneity,
            self.additivity,
            self.permutation,
            self.cauchy_schwarz,
            self.polarization,
            self.parallelogram,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_violation() <= self.tolerance
    }
}

/// Samples random tuples and measures how far the product strays from the
/// n-inner-product axioms, Cauchy–Schwarz, polarization and the
/// parallelogram law. Violations are relative to `(‖x‖+‖y‖+‖z‖)² · scale(F)`.
pub fn axiom_report(
    space: AmbientSpace,
    anchors: &AnchorSet,
    samples: SampleSpec,
    tolerance: f64,
) -> Result<AxiomReport> {
    if anchors.space() != space {
        return Err(Error::InvalidSpace("anchor set belongs to a different space".into()));
    }
    let mut rng = random::rng(samples.seed, 0);
    let d = space.dim();
    let mut report = AxiomReport {
        samples: samples.count,
        seed: samples.seed,
        nonnegativity: 0.0,
        symmetry: 0.0,
        homogeneity: 0.0,
        additivity: 0.0,
        permutation: 0.0,
        cauchy_schwarz: 0.0,
        polarization: 0.0,
        parallelogram: 0.0,
        tolerance,
    };
    let mut order: Vec<usize> = (0..anchors.anchors().len()).collect();
    for _ in 0..samples.count {
        let x = Vector(random::uniform_vector(&mut rng, d));
        let y = Vector(random::uniform_vector(&mut rng, d));
        let z = Vector(random::uniform_vector(&mut rng, d));
        let alpha = random::uniform(&mut rng) * 4.0;
        order.shuffle(&mut rng);
        let permuted = anchors.permuted(&order)?;

        let size = x.norm() + y.norm() + z.norm();
        let scale = (size * size * anchors.scale()).max(f64::MIN_POSITIVE);
        let rel = |v: f64| v.abs() / scale;

        let xy = n_inner(&x, &y, anchors)?;
        let yx = n_inner(&y, &x, anchors)?;
        let xx = n_inner(&x, &x, anchors)?;
        let yy = n_inner(&y, &y, anchors)?;
        let xz = n_inner(&x, &z, anchors)?;
        let yz = n_inner(&y, &z, anchors)?;
        let sum_z = n_inner(&x.add(&y), &z, anchors)?;
        let ax_y = n_inner(&x.scaled(alpha), &y, anchors)?;
        let xy_perm = n_inner(&x, &y, &permuted)?;
        let nx = n_norm(&x, anchors)?;
        let ny = n_norm(&y, anchors)?;
        let plus = n_norm(&x.add(&y), anchors)?;
        let minus = n_norm(&x.sub(&y), anchors)?;

        let bump = |slot: &mut f64, v: f64| *slot = slot.max(v);
        bump(&mut report.nonnegativity, rel((-xx).max(-yy).max(0.0)));
        bump(&mut report.symmetry, rel(xy - yx));
        bump(&mut report.homogeneity, rel(ax_y - alpha * xy) / (1.0 + alpha.abs()));
        bump(&mut report.additivity, rel(sum_z - xz - yz));
        bump(&mut report.permutation, rel(xy - xy_perm));
        bump(&mut report.cauchy_schwarz, rel((xy.abs() - nx * ny).max(0.0)));
        bump(&mut report.polarization, rel(xy - 0.25 * (plus * plus - minus * minus)));
        bump(
            &mut report.parallelogram,
            rel(plus * plus + minus * minus - 2.0 * (nx * nx + ny * ny)),
        );
    }
    Ok(report)
}
