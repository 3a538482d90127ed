//! Frames, K-frames and tight K-frames in finite-dimensional n-Hilbert spaces.
//!
//! The ambient space is `ℝ^d` with the Gram-determinant n-inner product.
//! Fixing anchors `a₂,…,aₙ` yields the Hilbert space `X_F`
//! ([`quotient::QuotientSpace`]) in which frame bounds, K-frame bounds and
//! tightness are computed, and in which each construction on K-frames is
//! checked numerically.

pub mod certify;
pub mod cli;
mod dense;
pub mod error;
pub mod frames;
pub mod generate;
pub mod instance;
pub mod kframes;
pub mod linop;
pub mod nspace;
pub mod quotient;
pub mod random;
pub mod report;
pub mod tight;
pub mod tol;

pub use error::{Error, Result};
pub use frames::{build_operators, frame_bounds, frame_operator_certificate, BoundsReport, FrameSequence};
pub use kframes::{kframe_bounds, KFrameReport, TheoremReport};
pub use linop::{douglas_check, is_psd, operator_norm, pseudo_inverse, range_sum_check, LinearMap};
pub use nspace::{n_inner, n_norm, AmbientSpace, AnchorSet, Vector};
pub use quotient::{build_quotient, QuotientSpace};
pub use tight::{tightness, TightnessReport};
pub use tol::Tolerances;

/// Version string written into every report.
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
