// Range inclusion, majorization and factorization, plus the pseudo-inverse.

use nframe::linop::{penrose_residuals, range_sum_check};
use nframe::{douglas_check, pseudo_inverse, LinearMap, Result};

pub fn run_example() -> Result<()> {
    let v = LinearMap::diagonal(&[1.0, 0.0]);
    let u = LinearMap::from_rows(&[vec![2.0, 3.0], vec![0.0, 0.0]])?;
    let c = douglas_check(&u, &v)?;
    println!(
        "R(U) in R(V): {} with lambda = {:.4}, residual {:.1e}, criteria agree {}",
        c.holds,
        c.lambda,
        c.residual,
        c.criteria_agree()
    );
    println!("witness W = {:?}", c.witness.to_rows());

    let outside = LinearMap::diagonal(&[0.0, 1.0]);
    println!("R(diag(0,1)) in R(diag(1,0)): {}", douglas_check(&outside, &v)?.holds);

    let t = LinearMap::diagonal(&[1.0, 0.0]);
    let w = LinearMap::diagonal(&[0.0, 1.0]);
    let r = range_sum_check(&LinearMap::identity(2), &t, &w)?;
    println!("R(I) in R(T) + R(W): {} with lambda = {}", r.holds, r.lambda);

    let a = LinearMap::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]])?;
    let p = pseudo_inverse(&a);
    println!("rank-one 2x3 pseudo-inverse: Penrose residual {:.1e}", penrose_residuals(&a, &p).max());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("Douglas example");
}
