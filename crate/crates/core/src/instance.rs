//! JSON instance files: parsing, validation, analysis and generation.
//!
//! Operators are `q × q` row-major matrices in orthonormal coordinates of
//! `X_F`, where `q = dim - (arity - 1)` and `X_F` is built from the anchors
//! with the canonical complement. Frame elements are ambient vectors.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{frame_bounds, frame_operator_certificate, BoundsReport, FrameOperatorReport, FrameSequence};
use crate::generate;
use crate::kframes::{kframe_bounds, KFrameReport};
use crate::linop::LinearMap;
use crate::nspace::{AmbientSpace, AnchorSet, Vector};
use crate::quotient::{build_quotient, QuotientSpace};
use crate::random::{self, SampleSpec};
use crate::tight::{self, tightness, TightnessReport};

/// Version of the instance file layout; see `schema/instance.schema.json`.
pub const INSTANCE_SCHEMA_VERSION: u32 = 1;

pub type Matrix = Vec<Vec<f64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    Frame,
    #[value(name = "kframe")]
    #[serde(rename = "kframe")]
    KFrame,
    #[value(name = "tight-kframe")]
    #[serde(rename = "tight-kframe")]
    TightKFrame,
    ParsevalDisjointPair,
}

impl InstanceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            InstanceKind::Frame => "frame",
            InstanceKind::KFrame => "kframe",
            InstanceKind::TightKFrame => "tight-kframe",
            InstanceKind::ParsevalDisjointPair => "parseval-disjoint-pair",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Operators {
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Matrix>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Matrix>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Matrix>,
    #[serde(rename = "U", default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Matrix>,
}

impl Operators {
    fn is_empty(&self) -> bool {
        self.k.is_none() && self.t.is_none() && self.l.is_none() && self.u.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<InstanceKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub dim: usize,
    pub arity: usize,
    pub anchors: Matrix,
    pub frame: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_frame: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Operators::is_empty")]
    pub operators: Operators,
}

/// A validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub kind: Option<InstanceKind>,
    pub seed: Option<u64>,
    pub space: Arc<QuotientSpace>,
    pub frame: FrameSequence,
    pub second_frame: Option<FrameSequence>,
    pub k: Option<LinearMap>,
    pub t: Option<LinearMap>,
    pub l: Option<LinearMap>,
    pub u: Option<LinearMap>,
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        field: field.into(),
        message: message.into(),
    }
}

/// Parses instance JSON; errors carry the line, column and field path.
pub fn parse_instance(text: &str) -> Result<InstanceSpec> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let spec: InstanceSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = match e.path().to_string() {
            p if p == "?" || p == "." => "document root".to_string(),
            p => p,
        };
        let inner = e.into_inner();
        let message = inner.to_string();
        let message = message.rsplit_once(" at line ").map_or(message.as_str(), |(m, _)| m).to_string();
        Error::Parse {
            path,
            line: inner.line(),
            column: inner.column(),
            message,
        }
    })?;
    Ok(spec)
}

pub fn read_instance(path: &std::path::Path) -> Result<InstanceSpec> {
    parse_instance(&std::fs::read_to_string(path)?)
}

fn vectors(field: &str, rows: &[Vec<f64>], dim: usize) -> Result<Vec<Vector>> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != dim {
                return Err(schema(format!("{field}[{i}]"), format!("expected {dim} entries, found {}", r.len())));
            }
            Vector::new(r.clone()).map_err(|_| schema(format!("{field}[{i}]"), "entries must be finite"))
        })
        .collect()
}

fn operator(field: &str, rows: &Option<Matrix>, q: usize) -> Result<Option<LinearMap>> {
    let Some(rows) = rows else { return Ok(None) };
    if rows.len() != q {
        return Err(schema(field, format!("expected {q} rows (q = dim - arity + 1), found {}", rows.len())));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != q {
            return Err(schema(format!("{field}[{i}]"), format!("expected {q} entries, found {}", r.len())));
        }
    }
    LinearMap::from_rows(rows).map(Some).map_err(|e| schema(field, e.to_string()))
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<Instance> {
        if self.schema_version != INSTANCE_SCHEMA_VERSION {
            return Err(schema(
                "schema_version",
                format!("unsupported version {}, expected {INSTANCE_SCHEMA_VERSION}", self.schema_version),
            ));
        }
        let space = AmbientSpace::new(self.dim, self.arity).map_err(|e| schema("arity", e.to_string()))?;
        if self.anchors.len() != self.arity - 1 {
            return Err(schema("anchors", format!("expected {} anchors (arity - 1), found {}", self.arity - 1, self.anchors.len())));
        }
        let anchors = AnchorSet::new(space, vectors("anchors", &self.anchors, self.dim)?)?;
        let xf = Arc::new(build_quotient(space, &anchors)?);
        if self.frame.is_empty() {
            return Err(schema("frame", "at least one element is required"));
        }
        let frame = FrameSequence::new(xf.clone(), vectors("frame", &self.frame, self.dim)?)?;
        let second_frame = match &self.second_frame {
            Some(rows) => {
                if rows.len() != self.frame.len() {
                    return Err(schema("second_frame", format!("expected {} elements, found {}", self.frame.len(), rows.len())));
                }
                Some(FrameSequence::new(xf.clone(), vectors("second_frame", rows, self.dim)?)?)
            }
            None => None,
        };
        let q = xf.dim();
        let ops = &self.operators;
        if self.kind == Some(InstanceKind::ParsevalDisjointPair) && second_frame.is_none() {
            return Err(schema("second_frame", "required for kind parseval-disjoint-pair"));
        }
        Ok(Instance {
            kind: self.kind,
            seed: self.seed,
            frame,
            second_frame,
            k: operator("operators.K", &ops.k, q)?,
            t: operator("operators.T", &ops.t, q)?,
            l: operator("operators.L", &ops.l, q)?,
            u: operator("operators.U", &ops.u, q)?,
            space: xf,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameAnalysis {
    pub frame_len: usize,
    pub bounds: BoundsReport,
    pub frame_operator: FrameOperatorReport,
    pub kframe: KFrameReport,
    pub tightness: TightnessReport,
}

fn analyze_frame(fs: &FrameSequence, k: &LinearMap) -> Result<FrameAnalysis> {
    Ok(FrameAnalysis {
        frame_len: fs.len(),
        bounds: frame_bounds(fs),
        frame_operator: frame_operator_certificate(fs),
        kframe: kframe_bounds(fs, k)?,
        tightness: tightness(fs, k)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DisjointSumAnalysis {
    pub cross_norm: f64,
    pub constant: f64,
    pub is_tight: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub kind: Option<InstanceKind>,
    pub dim: usize,
    pub arity: usize,
    pub quotient_dim: usize,
    /// `K` was absent and the identity was used.
    pub k_is_identity: bool,
    pub frame: FrameAnalysis,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_frame: Option<FrameAnalysis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disjoint_sum: Option<DisjointSumAnalysis>,
    /// Whether the property named by `kind` holds; absent without a kind.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub advertised_property_holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Analysis {
    pub fn passed(&self) -> bool {
        self.advertised_property_holds.unwrap_or(true)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "space: d={} n={} q={}", self.dim, self.arity, self.quotient_dim);
        let mut block = |label: &str, a: &FrameAnalysis| {
            let b = &a.bounds;
            let _ = writeln!(s, "{label}: m={}", a.frame_len);
            let _ = writeln!(s, "  frame bounds: A={:.12} B={:.12} is_frame={}", b.lower, b.upper, b.is_frame);
            let kname = if self.k_is_identity { "K=I" } else { "K" };
            let _ = writeln!(
                s,
                "  {kname}-frame bounds: A={:.12} B={:.12} is_kframe={}{}",
                a.kframe.lower,
                a.kframe.upper,
                a.kframe.is_kframe,
                if a.kframe.degenerate_k { " (degenerate K)" } else { "" }
            );
            let _ = writeln!(
                s,
                "  tightness: tight={} A={:.12} parseval={} residual={:.3e}",
                a.tightness.is_tight, a.tightness.constant, a.tightness.is_parseval, a.tightness.relative_residual
            );
        };
        block("frame", &self.frame);
        if let Some(g) = &self.second_frame {
            block("second frame", g);
        }
        if let Some(d) = &self.disjoint_sum {
            let _ = writeln!(s, "disjoint sum: |T L*|={:.3e} tight={} A={:.12}", d.cross_norm, d.is_tight, d.constant);
        }
        if let (Some(kind), Some(ok)) = (self.kind, self.advertised_property_holds) {
            let _ = writeln!(s, "{}: {}", kind.as_str(), if ok { "holds" } else { "FAILS" });
        }
        if let Some(n) = &self.note {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }
}

pub fn analyze(inst: &Instance) -> Result<Analysis> {
    let q = inst.space.dim();
    let k = inst.k.clone().unwrap_or_else(|| LinearMap::identity(q));
    let frame = analyze_frame(&inst.frame, &k)?;
    let second_frame = inst.second_frame.as_ref().map(|g| analyze_frame(g, &k)).transpose()?;
    let mut note = None;
    let disjoint_sum = match &inst.second_frame {
        Some(g) => {
            let samples = SampleSpec {
                count: 20,
                seed: inst.seed.unwrap_or(0),
            };
            match tight::disjoint_sum_theorem_4_6(&inst.frame, g, &k, samples) {
                Ok(d) => Some(DisjointSumAnalysis {
                    cross_norm: d.cross_norm,
                    constant: d.report.constant,
                    is_tight: d.report.is_tight,
                }),
                Err(Error::Precondition(m)) => {
                    note = Some(m);
                    None
                }
                Err(e) => return Err(e),
            }
        }
        None => None,
    };
    let advertised_property_holds = inst.kind.map(|kind| match kind {
        InstanceKind::Frame => frame.bounds.is_frame,
        InstanceKind::KFrame => frame.kframe.is_kframe,
        InstanceKind::TightKFrame => frame.tightness.is_tight,
        InstanceKind::ParsevalDisjointPair => disjoint_sum.as_ref().is_some_and(|d| d.is_tight),
    });
    Ok(Analysis {
        kind: inst.kind,
        dim: inst.space.space().dim(),
        arity: inst.space.space().arity(),
        quotient_dim: q,
        k_is_identity: inst.k.is_none(),
        frame,
        second_frame,
        disjoint_sum,
        advertised_property_holds,
        note,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct GenerateOptions {
    pub kind: InstanceKind,
    pub seed: u64,
    pub dim: usize,
    pub arity: usize,
    /// Number of frame elements; defaults to `q + 2`, or `2q` for a pair.
    pub size: Option<usize>,
}

fn rows(fs: &FrameSequence) -> Matrix {
    fs.elements().iter().map(|v| v.as_slice().to_vec()).collect()
}

/// Draws an instance of the requested kind and checks its advertised
/// property by re-reading it through [`parse_instance`] and [`analyze`].
pub fn generate_instance(opts: GenerateOptions) -> Result<InstanceSpec> {
    let mut rng = random::rng(opts.seed, 0);
    let xf = generate::random_xf(&mut rng, opts.dim, opts.arity)?;
    let q = xf.dim();
    let m = opts.size.unwrap_or(match opts.kind {
        InstanceKind::ParsevalDisjointPair => 2 * q,
        _ => q + 2,
    });
    if m == 0 {
        return Err(Error::Unsatisfiable("size must be positive".into()));
    }
    let mut operators = Operators::default();
    let mut second_frame = None;
    let frame = match opts.kind {
        InstanceKind::Frame => generate::random_frame(&mut rng, &xf, m)?,
        InstanceKind::KFrame => {
            let inst = generate::random_kframe(&mut rng, &xf, m)?;
            operators.k = Some(inst.k.to_rows());
            inst.frame
        }
        InstanceKind::TightKFrame => {
            let rank = random::index(&mut rng, 1, q);
            let k = generate::random_operator(&mut rng, q, rank);
            let a = 0.5 + 1.5 * (random::uniform(&mut rng) + 1.0) / 2.0;
            let fs = generate::random_tight_kframe(&mut rng, &xf, k.clone(), m, a)?;
            operators.k = Some(k.to_rows());
            fs
        }
        InstanceKind::ParsevalDisjointPair => {
            let rank = random::index(&mut rng, 1, q);
            let k = generate::random_operator(&mut rng, q, rank);
            let (fs, gs) = generate::parseval_disjoint_pair(&mut rng, &xf, &k, m)?;
            operators.k = Some(k.to_rows());
            second_frame = Some(rows(&gs));
            fs
        }
    };
    let spec = InstanceSpec {
        schema_version: INSTANCE_SCHEMA_VERSION,
        kind: Some(opts.kind),
        seed: Some(opts.seed),
        dim: opts.dim,
        arity: opts.arity,
        anchors: xf.anchors().anchors().iter().map(|v| v.as_slice().to_vec()).collect(),
        frame: rows(&frame),
        second_frame,
        operators,
    };
    let reread = parse_instance(&serde_json::to_string(&spec)?)?;
    let analysis = analyze(&reread.validate()?)?;
    if !analysis.passed() {
        return Err(Error::Unsatisfiable(format!(
            "generated {} instance failed its own check",
            opts.kind.as_str()
        )));
    }
    Ok(spec)
}
