// Seeded certification runs over the default (d, n) grid.

use std::time::Instant;

use nframe::certify::{verify, TheoremId, VerifyOptions};
use nframe::report::CertificationReport;
use nframe::{Result, Tolerances};

pub fn run_example() -> Result<()> {
    let tol = Tolerances::default();
    for id in [TheoremId::Douglas, TheoremId::Invertible34, TheoremId::Disjoint46] {
        let started = Instant::now();
        let opts = VerifyOptions { seed: 42, count: 40, dim: None, arity: None };
        let outcome = verify(id, opts, &tol)?;
        println!("{id}: {}/{} passed", outcome.passed, outcome.count);
        for (name, value) in &outcome.max_metrics {
            println!("  max {name} = {value:.2e}");
        }
        let report = CertificationReport::new(format!("verify {id}"), Some(42), tol, outcome.all_passed(), &outcome, started)?;
        println!("  report is {} bytes of JSON", report.to_json()?.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("certification example");
}
