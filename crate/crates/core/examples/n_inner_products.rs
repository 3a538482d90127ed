// The Gram-determinant n-inner product on ℝ^d and its axioms.

use nframe::nspace::axiom_report;
use nframe::random::SampleSpec;
use nframe::{n_inner, n_norm, AmbientSpace, AnchorSet, Result};

pub fn run_example() -> Result<()> {
    let space = AmbientSpace::new(4, 3)?;
    let anchors = AnchorSet::new(space, vec![space.vector([0.0, 0.0, 1.0, 0.0])?, space.vector([0.0, 0.0, 1.0, 2.0])?])?;

    let x = space.vector([1.0, 2.0, 0.5, -1.0])?;
    let y = space.vector([3.0, -1.0, 4.0, 0.0])?;
    println!("<x, y | a2, a3> = {:.6}", n_inner(&x, &y, &anchors)?);
    println!("||x, a2, a3||   = {:.6}", n_norm(&x, &anchors)?);

    // an anchor has zero n-norm
    let a2 = anchors.anchors()[0].clone();
    println!("||a2, a2, a3||  = {:.1e}", n_norm(&a2, &anchors)?);

    let report = axiom_report(space, &anchors, SampleSpec { count: 500, seed: 1 }, 1e-9)?;
    println!("axioms over {} tuples: max violation {:.2e}, passed {}", report.samples, report.max_violation(), report.passed());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("n-inner product example");
}
