// Tight and Parseval K-frames: rescaling, transforms, duals and sums.

use nframe::generate::{parseval_disjoint_pair, random_operator, random_tight_kframe, random_xf};
use nframe::random::{self, SampleSpec};
use nframe::tight::{construct_theorem_4_4, disjoint_sum_theorem_4_6, dual_bessel_theorem_4_5, scale_to_parseval};
use nframe::{tightness, Result};

pub fn run_example() -> Result<()> {
    let mut rng = random::rng(7, 0);
    let xf = random_xf(&mut rng, 5, 2)?;
    let q = xf.dim();
    let k = random_operator(&mut rng, q, 3);

    let fs = random_tight_kframe(&mut rng, &xf, k.clone(), 6, 2.5)?;
    let r = tightness(&fs, &k)?;
    println!("tight {} with A = {:.6}", r.is_tight, r.constant);

    let parseval = scale_to_parseval(&fs, &k)?;
    println!("rescaled: Parseval {}", tightness(&parseval, &k)?.is_parseval);

    let t = random_operator(&mut rng, q, q);
    let c = construct_theorem_4_4(&fs, &k, &t)?;
    println!("{{T f_i}} is a tight TK-frame with A = {:.6}", c.output.constant);

    let dual = dual_bessel_theorem_4_5(&fs, &k, SampleSpec { count: 20, seed: 3 })?;
    println!(
        "dual Bessel bound {:.6}, A B = {:.6}, reconstruction residual {:.1e}",
        dual.bessel_bound,
        dual.product(),
        dual.reconstruction_residual
    );

    let (f, g) = parseval_disjoint_pair(&mut rng, &xf, &k, 2 * q)?;
    let sum = disjoint_sum_theorem_4_6(&f, &g, &k, SampleSpec { count: 20, seed: 4 })?;
    println!("sum of disjoint Parseval K-frames: tight {} with A = {:.6}", sum.report.is_tight, sum.report.constant);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("tight K-frame example");
}
