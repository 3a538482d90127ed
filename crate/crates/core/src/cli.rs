//! The `nframe` command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for bad
//! input (unreadable or malformed files, unknown theorem ids, unsatisfiable
//! generation requests).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::certify::{verify, TheoremId, VerifyOptions};
use crate::error::{Error, Result};
use crate::instance::{analyze, generate_instance, read_instance, GenerateOptions, InstanceKind};
use crate::report::CertificationReport;
use crate::tol::Tolerances;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "nframe", version, about = "Frames and K-frames in n-Hilbert spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frame, K-frame and tightness report for an instance file.
    Analyze {
        file: PathBuf,
        /// Also write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Certify a theorem on seeded random instances.
    Verify {
        /// douglas, range-sum, pinv, axioms, note-3.2, 2.8, 3.3 ... 3.8, 4.2 ... 4.6
        theorem: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write a random instance whose advertised property holds.
    Generate {
        #[arg(value_enum)]
        kind: InstanceKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        /// Number of frame elements.
        #[arg(long)]
        size: Option<usize>,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_PASS };
        }
    };
    match execute(cli.command) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                EXIT_INPUT_ERROR
            } else {
                EXIT_CHECK_FAILED
            }
        }
    }
}

fn execute(command: Command) -> Result<bool> {
    let started = Instant::now();
    let tol = Tolerances::from_env();
    let stdout = std::io::stdout();
    match command {
        Command::Analyze { file, json } => {
            let spec = read_instance(&file)?;
            let inst = spec.validate()?;
            let analysis = analyze(&inst)?;
            let passed = analysis.passed();
            let report = CertificationReport::new(
                format!("analyze {}", file.display()),
                spec.seed,
                tol,
                passed,
                &analysis,
                started,
            )?;
            let mut out = stdout.lock();
            write!(out, "{}", analysis.summary())?;
            if let Some(path) = json {
                report.write(&path)?;
                writeln!(out, "report written to {}", path.display())?;
            }
            Ok(passed)
        }
        Command::Verify {
            theorem,
            seed,
            count,
            dim,
            arity,
            json,
        } => {
            let id: TheoremId = theorem.parse()?;
            let opts = VerifyOptions { seed, count, dim, arity };
            let outcome = verify(id, opts, &tol)?;
            let passed = outcome.all_passed();
            let mut command = format!("verify {id} --seed {seed} --count {count}");
            if let Some(d) = dim {
                command.push_str(&format!(" --dim {d}"));
            }
            if let Some(a) = arity {
                command.push_str(&format!(" --arity {a}"));
            }
            let report = CertificationReport::new(command, Some(seed), tol, passed, &outcome, started)?;
            let mut out = stdout.lock();
            writeln!(out, "{id}: {}/{} passed (seed {seed})", outcome.passed, outcome.count)?;
            for (k, v) in &outcome.max_metrics {
                writeln!(out, "  max {k} = {v:.3e}")?;
            }
            for o in outcome.instances.iter().filter(|o| !o.passed).take(10) {
                writeln!(
                    out,
                    "  FAIL instance {} (d={}, n={}){}",
                    o.index,
                    o.dim,
                    o.arity,
                    o.note.as_deref().map(|n| format!(": {n}")).unwrap_or_default()
                )?;
            }
            if let Some(path) = json {
                report.write(&path)?;
            }
            Ok(passed)
        }
        Command::Generate {
            kind,
            seed,
            dim,
            arity,
            size,
            out,
        } => {
            let spec = generate_instance(GenerateOptions { kind, seed, dim, arity, size })?;
            let mut text = serde_json::to_string_pretty(&spec)?;
            text.push('\n');
            match out {
                Some(path) => std::fs::write(&path, text).map_err(Error::from)?,
                None => stdout.lock().write_all(text.as_bytes())?,
            }
            Ok(true)
        }
    }
}
