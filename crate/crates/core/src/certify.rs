//! Randomized certification runs, one per theorem id.
//!
//! Instance `i` of a run seeded with `s` draws everything from stream `i` of
//! the generator seeded with `s`, so instances are independent and can run
//! in parallel while the assembled outcome stays deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{build_operators, energy_floor};
use crate::generate::{self, KFrameInstance};
use crate::kframes::{self, kframe_bounds};
use crate::linop::{self, douglas_check, is_psd, penrose_residuals, pseudo_inverse, range_sum_check, LinearMap};
use crate::nspace::axiom_report;
use crate::random::{self, InstanceRng, SampleSpec};
use crate::tight;
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    Axioms,
    Douglas,
    RangeSum,
    Pinv,
    KFrameOrdering,
    Note32,
    Restrict33,
    Invertible34,
    CoIsometry35,
    Synthesis36,
    Sum37,
    Perturb38,
    Parseval42,
    Tight43,
    Tight44,
    Dual45,
    Disjoint46,
}

impl TheoremId {
    pub const ALL: [TheoremId; 17] = [
        TheoremId::Axioms,
        TheoremId::Douglas,
        TheoremId::RangeSum,
        TheoremId::Pinv,
        TheoremId::KFrameOrdering,
        TheoremId::Note32,
        TheoremId::Restrict33,
        TheoremId::Invertible34,
        TheoremId::CoIsometry35,
        TheoremId::Synthesis36,
        TheoremId::Sum37,
        TheoremId::Perturb38,
        TheoremId::Parseval42,
        TheoremId::Tight43,
        TheoremId::Tight44,
        TheoremId::Dual45,
        TheoremId::Disjoint46,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::Axioms => "axioms",
            TheoremId::Douglas => "douglas",
            TheoremId::RangeSum => "range-sum",
            TheoremId::Pinv => "pinv",
            TheoremId::KFrameOrdering => "2.8",
            TheoremId::Note32 => "note-3.2",
            TheoremId::Restrict33 => "3.3",
            TheoremId::Invertible34 => "3.4",
            TheoremId::CoIsometry35 => "3.5",
            TheoremId::Synthesis36 => "3.6",
            TheoremId::Sum37 => "3.7",
            TheoremId::Perturb38 => "3.8",
            TheoremId::Parseval42 => "4.2",
            TheoremId::Tight43 => "4.3",
            TheoremId::Tight44 => "4.4",
            TheoremId::Dual45 => "4.5",
            TheoremId::Disjoint46 => "4.6",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub count: usize,
    pub dim: Option<usize>,
    pub arity: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceOutcome {
    pub index: usize,
    pub dim: usize,
    pub arity: usize,
    pub frame_len: Option<usize>,
    pub passed: bool,
    pub metrics: BTreeMap<&'static str, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyOutcome {
    pub theorem: &'static str,
    pub seed: u64,
    pub count: usize,
    pub passed: usize,
    pub failed: usize,
    /// Largest value of each metric across instances.
    pub max_metrics: BTreeMap<&'static str, f64>,
    pub instances: Vec<InstanceOutcome>,
}

impl VerifyOutcome {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

pub fn verify(theorem: TheoremId, opts: VerifyOptions, tol: &Tolerances) -> Result<VerifyOutcome> {
    let grid: Vec<(usize, usize)> = match (opts.dim, opts.arity) {
        (Some(d), Some(n)) => {
            crate::nspace::AmbientSpace::new(d, n)?;
            vec![(d, n)]
        }
        (Some(d), None) => generate::default_grid().into_iter().filter(|&(gd, n)| gd == d || (d > 8 && n == 2)).map(|(_, n)| (d, n)).filter(|&(d, n)| n <= d).collect(),
        (None, Some(n)) => generate::default_grid().into_iter().filter(|&(_, gn)| gn == n).collect(),
        (None, None) => generate::default_grid(),
    };
    let mut grid = grid;
    grid.dedup();
    if grid.is_empty() {
        return Err(Error::InvalidSpace(format!(
            "no valid (dim, arity) for dim={:?}, arity={:?}",
            opts.dim, opts.arity
        )));
    }
    let instances: Vec<InstanceOutcome> = (0..opts.count)
        .into_par_iter()
        .map(|i| {
            let (d, n) = grid[i % grid.len()];
            run_instance(theorem, opts.seed, i, d, n, tol)
        })
        .collect();
    let passed = instances.iter().filter(|o| o.passed).count();
    let mut max_metrics: BTreeMap<&'static str, f64> = BTreeMap::new();
    for o in &instances {
        for (&k, &v) in &o.metrics {
            let slot = max_metrics.entry(k).or_insert(f64::NEG_INFINITY);
            if v > *slot || v.is_nan() {
                *slot = v;
            }
        }
    }
    Ok(VerifyOutcome {
        theorem: theorem.as_str(),
        seed: opts.seed,
        count: opts.count,
        passed,
        failed: instances.len() - passed,
        max_metrics,
        instances,
    })
}

type Metrics = BTreeMap<&'static str, f64>;

struct Checked {
    passed: bool,
    frame_len: Option<usize>,
    metrics: Metrics,
    note: Option<String>,
}

impl Checked {
    fn new(passed: bool, frame_len: Option<usize>, metrics: Metrics) -> Self {
        Self {
            passed,
            frame_len,
            metrics,
            note: None,
        }
    }
}

/// Runs instance `index` of a certification run on `ℝ^dim` with arity `arity`.
pub fn run_instance(theorem: TheoremId, seed: u64, index: usize, dim: usize, arity: usize, tol: &Tolerances) -> InstanceOutcome {
    let mut rng = random::rng(seed, index as u64);
    let result = check(theorem, &mut rng, index, dim, arity, tol);
    let (passed, frame_len, metrics, note) = match result {
        Ok(c) => (c.passed, c.frame_len, c.metrics, c.note),
        Err(e) => (false, None, Metrics::new(), Some(e.to_string())),
    };
    InstanceOutcome {
        index,
        dim,
        arity,
        frame_len,
        passed,
        metrics,
        note,
    }
}

fn frame_len(rng: &mut InstanceRng, q: usize) -> usize {
    random::index(rng, q, 2 * q + 2)
}

/// Random operator whose rank is uniform on `lo..=hi`.
fn op_rank(rng: &mut InstanceRng, q: usize, lo: usize, hi: usize) -> LinearMap {
    let r = random::index(rng, lo, hi);
    generate::random_operator(rng, q, r)
}

fn random_rank(rng: &mut InstanceRng, q: usize) -> usize {
    random::index(rng, 1, q)
}

fn check(theorem: TheoremId, rng: &mut InstanceRng, index: usize, dim: usize, arity: usize, tol: &Tolerances) -> Result<Checked> {
    let xf = generate::random_xf(rng, dim, arity)?;
    let q = xf.dim();
    let mut metrics = Metrics::new();
    match theorem {
        TheoremId::Axioms => {
            let sub_seed = rng_seed(rng);
            let r = axiom_report(xf.space(), xf.anchors(), SampleSpec { count: 250, seed: sub_seed }, tol.identity)?;
            metrics.insert("max_violation", r.max_violation());
            Ok(Checked::new(r.passed(), None, metrics))
        }
        TheoremId::Douglas => {
            let (u, v, expected) = douglas_case(rng, q, index % 4);
            let c = douglas_check(&u, &v)?;
            let scale = linop::operator_norm(&u).max(linop::operator_norm(&v) * c.lambda).max(f64::MIN_POSITIVE);
            metrics.insert("relative_residual", if c.holds { c.residual / scale } else { 0.0 });
            metrics.insert("lambda", c.lambda);
            metrics.insert("holds", c.holds as u8 as f64);
            let ok = c.criteria_agree() && c.holds == expected && (!c.holds || c.residual <= tol.inequality * scale);
            Ok(Checked::new(ok, None, metrics))
        }
        TheoremId::RangeSum => {
            let (s, t, u, expected) = range_sum_case(rng, q, index % 3);
            let c = range_sum_check(&s, &t, &u)?;
            metrics.insert("holds", c.holds as u8 as f64);
            let block = LinearMap::from_matrix(linop::concat_columns(&[t.matrix(), u.matrix()]));
            let scale = linop::operator_norm(&s).max(linop::operator_norm(&block) * c.lambda).max(f64::MIN_POSITIVE);
            metrics.insert("relative_residual", if c.holds { c.residual / scale } else { 0.0 });
            let ok = c.criteria_agree() && c.holds == expected && (!c.holds || c.residual <= tol.inequality * scale);
            Ok(Checked::new(ok, None, metrics))
        }
        TheoremId::Pinv => {
            let cols = random::index(rng, 1, q + 2);
            let rank = random::index(rng, 0, q.min(cols));
            let u = LinearMap::from_matrix(random::uniform_matrix(rng, q, rank) * random::uniform_matrix(rng, rank, cols));
            let p = pseudo_inverse(&u);
            let pr = penrose_residuals(&u, &p);
            let mut range_res = 0.0f64;
            for _ in 0..100 {
                let x = u.apply(&random::uniform_vector(rng, cols));
                let n = x.norm();
                if n > 0.0 {
                    range_res = range_res.max((u.apply(&p.apply(&x)) - &x).norm() / n);
                }
            }
            metrics.insert("penrose", pr.max());
            metrics.insert("range_residual", range_res);
            Ok(Checked::new(pr.max() <= tol.identity && range_res <= tol.identity, None, metrics))
        }
        TheoremId::KFrameOrdering => {
            let (fs, k) = ordering_case(rng, &xf, index % 3)?;
            let r = kframe_bounds(&fs, &k)?;
            let s = build_operators(&fs).frame_op;
            let s_route = if linop::operator_norm(&s) <= energy_floor(&fs) { LinearMap::zeros(q, q) } else { s.clone() };
            let inclusion = douglas_check(&k, &s_route)?.holds;
            let kk = k.gramian();
            let mut ok = r.is_kframe == inclusion;
            if r.is_kframe && !r.degenerate_k {
                // tested on S / ‖S‖ so that the absolute part of the PSD slack
                // does not depend on the units of S
                let unit = 1.0 / linop::operator_norm(&s).max(f64::MIN_POSITIVE);
                let at = (&s - &kk.scaled(r.lower)).scaled(unit);
                let past = (&s - &kk.scaled(r.lower * (1.0 + 1e-6))).scaled(unit);
                let feasible = is_psd(&at)?;
                let maximal = !is_psd(&past)?;
                ok &= feasible && maximal;
                metrics.insert("min_eig_at_bound", -linop::symmetric_eigenvalues(&at)?[0]);
                metrics.insert("min_eig_past_bound", linop::symmetric_eigenvalues(&past)?[0]);
            }
            metrics.insert("is_kframe", r.is_kframe as u8 as f64);
            metrics.insert("lower", r.lower);
            Ok(Checked::new(ok, Some(fs.len()), metrics))
        }
        TheoremId::Note32 => {
            let m = frame_len(rng, q);
            let KFrameInstance { frame, k } = generate::random_kframe(rng, &xf, m)?;
            let sub_seed = rng_seed(rng);
            let r = kframes::closed_range_bounds_check(&frame, &k, SampleSpec { count: 50, seed: sub_seed })?;
            metrics.insert("max_violation", r.max_violation());
            Ok(Checked::new(r.max_violation() <= tol.inequality, Some(m), metrics))
        }
        TheoremId::Restrict33 => {
            let m = frame_len(rng, q);
            let KFrameInstance { frame, k } = generate::random_kframe(rng, &xf, m)?;
            let w = LinearMap::from_matrix(random::uniform_matrix(rng, q, q));
            let r = kframes::restrict_theorem_3_3(&frame, &k, &(&k * &w))?;
            Ok(theorem_checked(&r, m, tol))
        }
        TheoremId::Invertible34 => {
            let m = frame_len(rng, q);
            let KFrameInstance { frame, k } = generate::random_kframe(rng, &xf, m)?;
            let t = generate::commuting_invertible(rng, &k);
            let (_, r) = kframes::transform_theorem_3_4(&frame, &k, &t)?;
            Ok(theorem_checked(&r, m, tol))
        }
        TheoremId::CoIsometry35 => {
            let m = frame_len(rng, q);
            let (frame, k, t) = if index.is_multiple_of(2) {
                let c = 0.5 + 1.5 * (random::uniform(rng) + 1.0) / 2.0;
                let k = LinearMap::identity(q).scaled(c);
                let frame = generate::random_frame(rng, &xf, m)?;
                (frame, k, LinearMap::from_matrix(random::orthogonal(rng, q)))
            } else {
                let basis = random::orthogonal(rng, q);
                let rank = random_rank(rng, q);
                let d = DVector::from_fn(q, |i, _| if i < rank { 0.5 + random::uniform(rng).abs() } else { 0.0 });
                let k = LinearMap::from_matrix(&basis * DMatrix::from_diagonal(&d) * basis.transpose());
                let signs = DVector::from_fn(q, |_, _| if random::uniform(rng) < 0.0 { -1.0 } else { 1.0 });
                let t = LinearMap::from_matrix(&basis * DMatrix::from_diagonal(&signs) * basis.transpose());
                let KFrameInstance { frame, k } = generate::kframe_for(rng, &xf, k, m)?;
                (frame, k, t)
            };
            let (_, r) = kframes::transform_theorem_3_5(&frame, &k, &t)?;
            Ok(theorem_checked(&r, m, tol))
        }
        TheoremId::Synthesis36 => {
            let m = frame_len(rng, q);
            let (frame, k, expected) = synthesis_case(rng, &xf, m, index % 4)?;
            let c = kframes::synthesis_characterization(&frame, &k)?;
            metrics.insert("is_kframe", c.is_kframe as u8 as f64);
            metrics.insert("synthesis_residual", c.synthesis_residual);
            let ok = c.agree() && expected.is_none_or(|e| e == c.is_kframe) && c.synthesis_residual <= tol.identity;
            Ok(Checked::new(ok, Some(m), metrics))
        }
        TheoremId::Sum37 => {
            let m = frame_len(rng, q);
            let KFrameInstance { frame, k } = generate::random_kframe(rng, &xf, m)?;
            let gs = if index.is_multiple_of(3) {
                frame.scaled((random::uniform(rng) + 1.0) / 2.0)?
            } else {
                let p = generate::spectral_positive(rng, &generate::frame_op(&frame));
                frame.mapped(&p)?
            };
            let (_, r) = kframes::sum_theorem_3_7(&frame, &gs, &k)?;
            Ok(theorem_checked(&r, m, tol))
        }
        TheoremId::Perturb38 => {
            let m = frame_len(rng, q);
            let KFrameInstance { frame, k } = generate::random_kframe(rng, &xf, m)?;
            let u = generate::spectral_positive(rng, &generate::frame_op(&frame));
            let (_, r) = kframes::perturb_theorem_3_8(&frame, &k, &u)?;
            Ok(theorem_checked(&r, m, tol))
        }
        TheoremId::Parseval42 => {
            let m = frame_len(rng, q);
            let k = op_rank(rng, q, 1, q);
            let a = 0.2 + 4.8 * (random::uniform(rng) + 1.0) / 2.0;
            let fs = generate::random_tight_kframe(rng, &xf, k.clone(), m, a)?;
            let p = tight::scale_to_parseval(&fs, &k)?;
            let r = tight::tightness(&p, &k)?;
            metrics.insert("constant_error", (r.constant - 1.0).abs());
            Ok(Checked::new(r.is_parseval && (r.constant - 1.0).abs() <= 1e-10, Some(m), metrics))
        }
        TheoremId::Tight43 => {
            let m = frame_len(rng, q);
            let a = 0.2 + 4.8 * (random::uniform(rng) + 1.0) / 2.0;
            let fs = generate::random_tight_kframe(rng, &xf, LinearMap::identity(q), m, a)?;
            let k = op_rank(rng, q, 1, q);
            let c = tight::construct_theorem_4_3(&fs, &k)?;
            metrics.insert("constant_error", (c.output.constant - c.input.constant).abs() / c.input.constant);
            Ok(Checked::new(c.constant_preserved(tol.identity), Some(m), metrics))
        }
        TheoremId::Tight44 => {
            let m = frame_len(rng, q);
            let a = 0.2 + 4.8 * (random::uniform(rng) + 1.0) / 2.0;
            let k = op_rank(rng, q, 1, q);
            let fs = generate::random_tight_kframe(rng, &xf, k.clone(), m, a)?;
            let t = generate::random_operator(rng, q, q);
            let c = tight::construct_theorem_4_4(&fs, &k, &t)?;
            metrics.insert("constant_error", (c.output.constant - c.input.constant).abs() / c.input.constant);
            Ok(Checked::new(c.constant_preserved(tol.identity), Some(m), metrics))
        }
        TheoremId::Dual45 => {
            let m = frame_len(rng, q);
            let a = 0.2 + 4.8 * (random::uniform(rng) + 1.0) / 2.0;
            let k = op_rank(rng, q, 1, q);
            let fs = generate::random_tight_kframe(rng, &xf, k.clone(), m, a)?;
            let sub_seed = rng_seed(rng);
            let d = tight::dual_bessel_theorem_4_5(&fs, &k, SampleSpec { count: 20, seed: sub_seed })?;
            metrics.insert("reconstruction_residual", d.reconstruction_residual);
            metrics.insert("adjoint_residual", d.adjoint_residual);
            metrics.insert("one_minus_ab", 1.0 - d.product());
            let ok = d.reconstruction_residual <= tol.inequality
                && d.adjoint_residual <= tol.inequality
                && d.product() >= 1.0 - tol.inequality;
            Ok(Checked::new(ok, Some(m), metrics))
        }
        TheoremId::Disjoint46 => {
            let m = random::index(rng, 2 * q, 2 * q + 2);
            let k = op_rank(rng, q, 1, q);
            let (fs, gs) = generate::parseval_disjoint_pair(rng, &xf, &k, m)?;
            let sub_seed = rng_seed(rng);
            let out = tight::disjoint_sum_theorem_4_6(&fs, &gs, &k, SampleSpec { count: 20, seed: sub_seed })?;
            let err = (out.report.constant - 2.0).abs();
            metrics.insert("constant_error", err);
            metrics.insert("parseval_residual", out.first_parseval_residual.max(out.second_parseval_residual));
            let ok = out.report.is_tight
                && err <= tol.inequality
                && out.first_parseval_residual <= tol.inequality
                && out.second_parseval_residual <= tol.inequality;
            Ok(Checked::new(ok, Some(m), metrics))
        }
    }
}

fn rng_seed(rng: &mut InstanceRng) -> u64 {
    use rand::Rng;
    rng.random()
}

fn theorem_checked(r: &kframes::TheoremReport, m: usize, tol: &Tolerances) -> Checked {
    let mut metrics = Metrics::new();
    let scale = r.scale();
    metrics.insert("lower_gap", r.lower_gap() / scale);
    metrics.insert("upper_gap", r.upper_gap() / scale);
    if let Some(res) = r.identity_residual {
        metrics.insert("identity_residual", res);
    }
    if let Some(chain) = r.proof_chain {
        metrics.insert("proof_chain", chain as u8 as f64);
    }
    Checked::new(r.passed(tol), Some(m), metrics)
}

/// `(U, V, expected inclusion)`.
fn douglas_case(rng: &mut InstanceRng, q: usize, case: usize) -> (LinearMap, LinearMap, bool) {
    let case = if q == 1 && case == 3 { 0 } else { case };
    match case {
        0 => {
            let v = op_rank(rng, q, 1, q);
            let w = random::uniform_matrix(rng, q, q);
            (LinearMap::from_matrix(v.matrix() * w), v, true)
        }
        1 => {
            let v = op_rank(rng, q, 0, q - 1);
            let u = generate::random_operator(rng, q, q);
            (u, v, false)
        }
        2 => {
            let v = generate::random_operator(rng, q, q);
            let u = op_rank(rng, q, 0, q);
            (u, v, true)
        }
        _ => {
            let v = op_rank(rng, q, 1, q - 1);
            let basis = linop::range_basis(&v);
            let outside = DMatrix::identity(q, q) - &basis * basis.transpose();
            let u = v.matrix() * random::uniform_matrix(rng, q, q) + outside * random::uniform_matrix(rng, q, q);
            (LinearMap::from_matrix(u), v, false)
        }
    }
}

/// `(S, T, U, expected inclusion)`.
fn range_sum_case(rng: &mut InstanceRng, q: usize, case: usize) -> (LinearMap, LinearMap, LinearMap, bool) {
    let case = if q == 1 && case == 1 { 0 } else { case };
    match case {
        0 => {
            let t = op_rank(rng, q, 1, q);
            let u = op_rank(rng, q, 0, q);
            let s = t.matrix() * random::uniform_matrix(rng, q, q) + u.matrix() * random::uniform_matrix(rng, q, q);
            (LinearMap::from_matrix(s), t, u, true)
        }
        1 => {
            let r1 = random::index(rng, 1, q - 1);
            let r2 = random::index(rng, 0, q - 1 - r1);
            let t = generate::random_operator(rng, q, r1);
            let u = generate::random_operator(rng, q, r2);
            let s = generate::random_operator(rng, q, q);
            (s, t, u, false)
        }
        _ => {
            let t = op_rank(rng, q, 1, q);
            (t.clone(), t, LinearMap::zeros(q, q), true)
        }
    }
}

fn ordering_case(
    rng: &mut InstanceRng,
    xf: &std::sync::Arc<crate::quotient::QuotientSpace>,
    case: usize,
) -> Result<(crate::frames::FrameSequence, LinearMap)> {
    let q = xf.dim();
    let m = frame_len(rng, q);
    match case {
        0 => {
            let KFrameInstance { frame, k } = generate::random_kframe(rng, xf, m)?;
            Ok((frame, k))
        }
        1 => {
            let frame = generate::random_frame(rng, xf, m)?;
            Ok((frame, op_rank(rng, q, 1, q)))
        }
        _ => {
            let inner = op_rank(rng, q, 0, q - 1);
            let KFrameInstance { frame, .. } = generate::kframe_for(rng, xf, inner, m)?;
            Ok((frame, generate::random_operator(rng, q, q)))
        }
    }
}

/// `(fs, K, expected verdict)`; `None` leaves only the biconditional to check.
fn synthesis_case(
    rng: &mut InstanceRng,
    xf: &std::sync::Arc<crate::quotient::QuotientSpace>,
    m: usize,
    case: usize,
) -> Result<(crate::frames::FrameSequence, LinearMap, Option<bool>)> {
    let q = xf.dim();
    match case {
        0 => {
            let KFrameInstance { frame, k } = generate::random_kframe(rng, xf, m)?;
            Ok((frame, k, Some(true)))
        }
        1 => {
            let frame = generate::random_frame(rng, xf, m)?;
            Ok((frame, op_rank(rng, q, 1, q), Some(true)))
        }
        2 => {
            let inner = op_rank(rng, q, 0, q - 1);
            let KFrameInstance { frame, .. } = generate::kframe_for(rng, xf, inner, m)?;
            Ok((frame, generate::random_operator(rng, q, q), Some(false)))
        }
        _ => {
            // partially overlapping ranges
            let inner = op_rank(rng, q, 1, q);
            let KFrameInstance { frame, .. } = generate::kframe_for(rng, xf, inner, m)?;
            let k = op_rank(rng, q, 1, q);
            Ok((frame, k, None))
        }
    }
}
