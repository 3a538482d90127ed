//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the verdict lines always reach stdout.

use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;
use nframe::certify::{verify, TheoremId, VerifyOptions, VerifyOutcome};
use nframe::generate::{default_grid, lift_with_noise, random_anchors, random_operator, random_tight_kframe, random_xf};
use nframe::nspace::axiom_report;
use nframe::random::{self, SampleSpec};
use nframe::report::strip_timestamp;
use nframe::tight::dual_bessel_theorem_4_5;
use nframe::{build_quotient, frame_bounds, AmbientSpace, FrameSequence, Tolerances};

/// Tolerances pinned here rather than read from `NFRAME_TOL`.
const TOL: Tolerances = Tolerances {
    inequality: 1e-8,
    identity: 1e-9,
};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn run(id: TheoremId, seed: u64, count: usize) -> VerifyOutcome {
    verify(id, VerifyOptions { seed, count, dim: None, arity: None }, &TOL).expect("grid is valid")
}

fn summarize(outcomes: &[VerifyOutcome]) -> (bool, String) {
    let passed = outcomes.iter().all(|o| o.all_passed() && o.count > 0);
    let parts: Vec<String> = outcomes.iter().map(|o| format!("{} {}/{}", o.theorem, o.passed, o.count)).collect();
    (passed, parts.join(", "))
}

fn metric(o: &VerifyOutcome, name: &str) -> f64 {
    o.max_metrics.get(name).copied().unwrap_or(f64::NAN)
}

fn axioms() -> Verdict {
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for (i, (d, n)) in default_grid().into_iter().enumerate() {
        let space = AmbientSpace::new(d, n).unwrap();
        let mut rng = random::rng(101, i as u64);
        let anchors = random_anchors(&mut rng, space);
        let r = axiom_report(space, &anchors, SampleSpec { count: 1000, seed: 7 + i as u64 }, TOL.identity).unwrap();
        worst = worst.max(r.max_violation());
        pairs += 1;
    }
    verdict(worst <= 1e-9, format!("1000 tuples x {pairs} (d,n) pairs, max relative violation {worst:.2e} (limit 1e-9)"))
}

fn douglas() -> Verdict {
    let d = run(TheoremId::Douglas, 202, 500);
    let r = run(TheoremId::RangeSum, 203, 500);
    let holds = d.instances.iter().chain(&r.instances).filter(|o| o.metrics.get("holds") == Some(&1.0)).count();
    let (ok, s) = summarize(&[d.clone(), r.clone()]);
    verdict(
        ok,
        format!(
            "{s}; {holds} of 1000 instances have the inclusion; max factorization residual {:.2e} / {:.2e} (limit 1e-8 x scale)",
            metric(&d, "relative_residual"),
            metric(&r, "relative_residual")
        ),
    )
}

fn pinv() -> Verdict {
    let p = run(TheoremId::Pinv, 303, 200);
    let (ok, s) = summarize(std::slice::from_ref(&p));
    verdict(
        ok && metric(&p, "penrose") <= 1e-9 && metric(&p, "range_residual") <= 1e-9,
        format!(
            "{s}; 100 range samples each; max Penrose residual {:.2e}, max U U+ x residual {:.2e} (limit 1e-9)",
            metric(&p, "penrose"),
            metric(&p, "range_residual")
        ),
    )
}

fn exact_bounds() -> Verdict {
    let mut worst = 0.0f64;
    let mut cases = 0;
    // {e1, e1, e2} in the e3-anchored plane
    let space = AmbientSpace::new(3, 2).unwrap();
    let anchors = nframe::AnchorSet::new(space, vec![space.vector([0.0, 0.0, 1.0]).unwrap()]).unwrap();
    let xf = Arc::new(build_quotient(space, &anchors).unwrap());
    let e1 = space.vector([1.0, 0.0, 0.0]).unwrap();
    let e2 = space.vector([0.0, 1.0, 0.0]).unwrap();
    let b = frame_bounds(&FrameSequence::new(xf, vec![e1.clone(), e1, e2]).unwrap());
    worst = worst.max((b.lower - 1.0).abs()).max((b.upper - 2.0).abs());
    cases += 1;
    for (i, (d, n)) in default_grid().into_iter().enumerate() {
        let mut rng = random::rng(404, i as u64);
        let xf = random_xf(&mut rng, d, n).unwrap();
        let q = xf.dim();
        // orthonormal X_F basis, with random anchor components added
        let basis = lift_with_noise(&mut rng, &xf, &DMatrix::identity(q, q)).unwrap();
        let b = frame_bounds(&basis);
        worst = worst.max((b.lower - 1.0).abs()).max((b.upper - 1.0).abs());
        // e1 repeated, then the rest of the basis
        let mut c = DMatrix::zeros(q, q + 1);
        c[(0, 0)] = 1.0;
        for j in 0..q {
            c[(j, j + 1)] = 1.0;
        }
        let b = frame_bounds(&lift_with_noise(&mut rng, &xf, &c).unwrap());
        let expected_lower = if q == 1 { 2.0 } else { 1.0 };
        worst = worst.max((b.lower - expected_lower).abs()).max((b.upper - 2.0).abs());
        cases += 2;
    }
    verdict(worst <= 1e-10, format!("{cases} constructed frames, max deviation from (1,2) / (1,1) {worst:.2e} (limit 1e-10)"))
}

fn kframe_optimality() -> Verdict {
    let o = run(TheoremId::KFrameOrdering, 505, 200);
    let (ok, s) = summarize(std::slice::from_ref(&o));
    verdict(
        ok,
        format!(
            "{s}; biconditional and feasibility/maximality at eps = 1e-6 A; worst PSD deficit at A_opt {:.2e}, largest min eigenvalue past A_opt {:.2e} (must be negative)",
            metric(&o, "min_eig_at_bound"),
            metric(&o, "min_eig_past_bound")
        ),
    )
}

fn sandwiches() -> Verdict {
    let o = run(TheoremId::Note32, 606, 200);
    let (ok, s) = summarize(std::slice::from_ref(&o));
    let v = metric(&o, "max_violation");
    verdict(ok && v <= 1e-8, format!("{s}; max violation {v:.2e} (limit 1e-8)"))
}

fn theorems_3() -> Verdict {
    let ids = [
        TheoremId::Restrict33,
        TheoremId::Invertible34,
        TheoremId::CoIsometry35,
        TheoremId::Synthesis36,
        TheoremId::Sum37,
        TheoremId::Perturb38,
    ];
    let outcomes: Vec<VerifyOutcome> = ids.iter().enumerate().map(|(i, &id)| run(id, 700 + i as u64, 200)).collect();
    let (mut ok, s) = summarize(&outcomes);
    let gap = outcomes
        .iter()
        .flat_map(|o| [metric(o, "lower_gap"), metric(o, "upper_gap")])
        .filter(|x| x.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    let identity = metric(&outcomes[5], "identity_residual");
    ok &= gap <= 1e-8 && identity <= 1e-9;
    verdict(
        ok,
        format!("{s}; worst (predicted - achieved)/scale {gap:.2e} (limit 1e-8); 3.8 identity residual {identity:.2e} (limit 1e-9)"),
    )
}

fn synthesis_biconditional() -> Verdict {
    let o = run(TheoremId::Synthesis36, 808, 500);
    let failures = o.instances.iter().filter(|i| i.metrics.get("is_kframe") == Some(&0.0)).count();
    let (ok, s) = summarize(std::slice::from_ref(&o));
    verdict(ok, format!("{s}; {failures} instances are not K-frames; no disagreement allowed"))
}

fn section_4() -> Verdict {
    let r42 = run(TheoremId::Parseval42, 901, 200);
    let r43 = run(TheoremId::Tight43, 902, 200);
    let r44 = run(TheoremId::Tight44, 903, 200);
    let r45 = run(TheoremId::Dual45, 904, 200);
    let r46 = run(TheoremId::Disjoint46, 905, 100);
    let (mut ok, s) = summarize(&[r42.clone(), r43.clone(), r44.clone(), r45.clone(), r46.clone()]);

    // Parseval K-frames: the constructed dual makes A B = 1
    let mut self_dual = 0.0f64;
    for (i, (d, n)) in default_grid().into_iter().cycle().take(200).enumerate() {
        let mut rng = random::rng(906, i as u64);
        let xf = random_xf(&mut rng, d, n).unwrap();
        let q = xf.dim();
        let rank = random::index(&mut rng, 1, q);
        let k = random_operator(&mut rng, q, rank);
        let m = random::index(&mut rng, q, 2 * q + 2);
        let fs = random_tight_kframe(&mut rng, &xf, k.clone(), m, 1.0).unwrap();
        let dual = dual_bessel_theorem_4_5(&fs, &k, SampleSpec { count: 5, seed: i as u64 }).unwrap();
        self_dual = self_dual.max((dual.product() - 1.0).abs());
    }
    ok &= self_dual <= 1e-9
        && metric(&r42, "constant_error") <= 1e-10
        && metric(&r43, "constant_error") <= 1e-9
        && metric(&r44, "constant_error") <= 1e-9
        && metric(&r45, "reconstruction_residual") <= 1e-8
        && metric(&r45, "one_minus_ab") <= 1e-8
        && metric(&r46, "constant_error") <= 1e-8;
    verdict(
        ok,
        format!(
            "{s}; |A-1| {:.1e}; 4.3/4.4 relative drift {:.1e}/{:.1e}; 4.5 residual {:.1e}, 1-AB {:.1e}, Parseval |AB-1| {:.1e}; 4.6 |A-2| {:.1e}",
            metric(&r42, "constant_error"),
            metric(&r43, "constant_error"),
            metric(&r44, "constant_error"),
            metric(&r45, "reconstruction_residual"),
            metric(&r45, "one_minus_ab"),
            self_dual,
            metric(&r46, "constant_error")
        ),
    )
}

fn nframe_cmd(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_nframe"))
        .args(args)
        .current_dir(dir)
        .env_remove("NFRAME_TOL")
        .output()
        .expect("binary runs")
}

fn cli_determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for _ in 0..2 {
        let out = nframe_cmd(dir.path(), &["verify", "3.7", "--seed", "42", "--count", "50", "--json", "out.json"]);
        if !out.status.success() {
            return verdict(false, format!("verify exited with {:?}", out.status.code()));
        }
        let text = std::fs::read_to_string(dir.path().join("out.json")).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        strip_timestamp(&mut v);
        reports.push(serde_json::to_string(&v).unwrap());
    }
    let identical = reports[0] == reports[1];

    let kinds = ["frame", "kframe", "tight-kframe", "parseval-disjoint-pair"];
    let mut round_trips = 0;
    let mut failures = Vec::new();
    for (i, kind) in kinds.iter().enumerate() {
        for seed in 0..10u64 {
            let (d, n) = default_grid()[(seed as usize * 5 + i) % default_grid().len()];
            let file = format!("{kind}-{seed}.json");
            let gen = nframe_cmd(
                dir.path(),
                &["generate", kind, "--seed", &seed.to_string(), "--dim", &d.to_string(), "--arity", &n.to_string(), "--out", &file],
            );
            let ana = nframe_cmd(dir.path(), &["analyze", &file]);
            if gen.status.success() && ana.status.success() {
                round_trips += 1;
            } else {
                failures.push(format!("{kind} seed {seed}: {}", String::from_utf8_lossy(&ana.stderr).trim()));
            }
        }
    }
    verdict(
        identical && failures.is_empty(),
        format!(
            "reports identical modulo timestamp: {identical}; generate -> analyze {round_trips}/{} clean{}",
            kinds.len() * 10,
            if failures.is_empty() { String::new() } else { format!(" ({})", failures.join("; ")) }
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 10] = [
        ("n-inner product axioms", axioms),
        ("Douglas and range-sum equivalence", douglas),
        ("pseudo-inverse contract", pinv),
        ("optimal frame bounds exactness", exact_bounds),
        ("K-frame biconditional and A_opt optimality", kframe_optimality),
        ("closed-range sandwiches", sandwiches),
        ("K-frame constructions", theorems_3),
        ("synthesis range biconditional", synthesis_biconditional),
        ("tight K-frame constructions", section_4),
        ("CLI determinism and round-trip", cli_determinism),
    ];
    let started = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = check();
        if !v.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<45} {}  [{:.1}s] {}",
            i + 1,
            name,
            if v.passed { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
