// Optimal frame bounds from the frame operator.

use std::sync::Arc;

use nframe::{build_quotient, frame_bounds, frame_operator_certificate, AmbientSpace, AnchorSet, FrameSequence, Result};

pub fn run_example() -> Result<()> {
    let space = AmbientSpace::new(3, 2)?;
    let anchors = AnchorSet::new(space, vec![space.vector([0.0, 0.0, 1.0])?])?;
    let xf = Arc::new(build_quotient(space, &anchors)?);

    let e1 = space.vector([1.0, 0.0, 0.0])?;
    let e2 = space.vector([0.0, 1.0, 0.0])?;
    let fs = FrameSequence::new(xf.clone(), vec![e1.clone(), e1.clone(), e2.clone()])?;
    let b = frame_bounds(&fs);
    println!("{{e1, e1, e2}}: A = {}, B = {}, frame = {}", b.lower, b.upper, b.is_frame);

    let cert = frame_operator_certificate(&fs);
    println!("S_F condition number {:?}, invertible {}", cert.condition_number, cert.invertible);

    let basis = FrameSequence::new(xf.clone(), vec![e1.clone(), e2])?;
    let b = frame_bounds(&basis);
    println!("orthonormal basis: A = {}, B = {}", b.lower, b.upper);

    let short = FrameSequence::new(xf, vec![e1])?;
    let b = frame_bounds(&short);
    println!("{{e1}} alone: A = {}, frame = {}, Bessel = {}", b.lower, b.is_frame, b.is_bessel);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("frame bounds example");
}
