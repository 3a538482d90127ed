//! Numerical tolerances shared across the toolkit.

/// Relative singular-value cutoff used for every rank decision.
pub const RANK_CUTOFF: f64 = 1e-10;

/// Relative eigenvalue slack used by [`crate::linop::is_psd`].
pub const PSD_SLACK: f64 = 1e-10;

/// Environment variable that overrides both check tolerances.
pub const TOL_ENV: &str = "NFRAME_TOL";

/// Tolerances used when turning residuals into pass/fail verdicts.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Tolerances {
    /// Slack for inequalities (bounds, PSD orderings).
    pub inequality: f64,
    /// Slack for identities (operator equalities, reconstruction).
    pub identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            inequality: 1e-8,
            identity: 1e-9,
        }
    }
}

impl Tolerances {
    /// Defaults, unless `NFRAME_TOL` holds a positive float, in which case
    /// that value is used for both inequalities and identities.
    pub fn from_env() -> Self {
        match std::env::var(TOL_ENV).ok().and_then(|s| s.trim().parse::<f64>().ok()) {
            Some(t) if t.is_finite() && t > 0.0 => Self {
                inequality: t,
                identity: t,
            },
            _ => Self::default(),
        }
    }
}
