//! JSON certification reports.

use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;
use crate::random::PRNG_NAME;
use crate::tol::Tolerances;
use crate::TOOLKIT_VERSION;

/// Version of the report layout.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Field holding everything that varies between otherwise identical runs.
pub const TIMESTAMP_FIELD: &str = "timestamp";

#[derive(Debug, Clone, Serialize)]
pub struct Timestamp {
    pub unix_ms: u128,
    pub wall_clock_ms: f64,
}

impl Timestamp {
    pub fn since(start: Instant) -> Self {
        let unix_ms = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0);
        Self {
            unix_ms,
            wall_clock_ms: start.elapsed().as_secs_f64() * 1e3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificationReport {
    pub schema_version: u32,
    pub toolkit_version: &'static str,
    pub command: String,
    pub prng: &'static str,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub passed: bool,
    pub result: Value,
    pub timestamp: Timestamp,
}

impl CertificationReport {
    pub fn new(
        command: impl Into<String>,
        seed: Option<u64>,
        tolerances: Tolerances,
        passed: bool,
        result: &impl Serialize,
        started: Instant,
    ) -> Result<Self> {
        Ok(Self {
            schema_version: REPORT_SCHEMA_VERSION,
            toolkit_version: TOOLKIT_VERSION,
            command: command.into(),
            prng: PRNG_NAME,
            seed,
            tolerances,
            passed,
            result: serde_json::to_value(result)?,
            timestamp: Timestamp::since(started),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// Removes the timestamp object from a parsed report, leaving the part that
/// is reproducible from seed and input.
pub fn strip_timestamp(report: &mut Value) {
    if let Value::Object(map) = report {
        map.remove(TIMESTAMP_FIELD);
    }
}
