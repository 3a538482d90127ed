// Building X_F from anchors: basis, gram matrix and coordinates.

use std::sync::Arc;

use nframe::quotient::QuotientSpace;
use nframe::{build_quotient, AmbientSpace, AnchorSet, Result};

pub fn run_example() -> Result<()> {
    let space = AmbientSpace::new(3, 2)?;
    let anchors = AnchorSet::new(space, vec![space.vector([0.0, 0.0, 1.0])?])?;
    let xf: Arc<QuotientSpace> = Arc::new(build_quotient(space, &anchors)?);

    println!("dim X_F = {}", xf.dim());
    for (i, b) in xf.basis().iter().enumerate() {
        println!("b{} = {:?}", i + 1, b.as_slice());
    }
    println!("gram = {:?}", xf.gram().as_slice());

    let x = space.vector([2.0, 3.0, 7.0])?;
    let c = xf.project(&x)?;
    println!("project (2,3,7) -> ({}, {})", c[0], c[1]);

    // the anchor component is invisible to the derived inner product
    let shifted = x.add(&space.vector([0.0, 0.0, -100.0])?);
    println!("<x,x>_F = {}, <x - 100 a2, x - 100 a2>_F = {}", xf.f_inner(&x, &x)?, xf.f_inner(&shifted, &shifted)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("quotient space example");
}
