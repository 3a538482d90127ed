// K-frame bounds and the constructions that produce new K-frames.

use nframe::generate::{commuting_invertible, frame_op, random_kframe, random_xf, spectral_positive, KFrameInstance};
use nframe::kframes::{
    closed_range_bounds_check, perturb_theorem_3_8, restrict_theorem_3_3, sum_theorem_3_7, synthesis_characterization,
    transform_theorem_3_4,
};
use nframe::random::{self, SampleSpec};
use nframe::{kframe_bounds, LinearMap, Result, TheoremReport, Tolerances};

fn show(r: &TheoremReport) {
    println!(
        "  {}: predicted [{:.4}, {:.4}] achieved [{:.4}, {:.4}] passed {}",
        r.theorem,
        r.predicted_lower,
        r.predicted_upper,
        r.achieved_lower,
        r.achieved_upper,
        r.passed(&Tolerances::default())
    );
}

pub fn run_example() -> Result<()> {
    let mut rng = random::rng(2024, 0);
    let xf = random_xf(&mut rng, 6, 3)?;
    let KFrameInstance { frame, k } = random_kframe(&mut rng, &xf, 6)?;

    let r = kframe_bounds(&frame, &k)?;
    println!("K-frame bounds A = {:.4}, B = {:.4}, is K-frame {}", r.lower, r.upper, r.is_kframe);

    let sandwich = closed_range_bounds_check(&frame, &k, SampleSpec { count: 50, seed: 1 })?;
    println!("closed-range sandwiches: max violation {:.1e}", sandwich.max_violation());

    let syn = synthesis_characterization(&frame, &k)?;
    println!("R(K) in R(T): {}, K-frame: {}", syn.range_inclusion, syn.is_kframe);

    let q = xf.dim();
    let w = LinearMap::new(random::uniform_matrix(&mut rng, q, q))?;
    show(&restrict_theorem_3_3(&frame, &k, &(&k * &w))?);

    let t = commuting_invertible(&mut rng, &k);
    show(&transform_theorem_3_4(&frame, &k, &t)?.1);

    let p = spectral_positive(&mut rng, &frame_op(&frame));
    let gs = frame.mapped(&p)?;
    show(&sum_theorem_3_7(&frame, &gs, &k)?.1);

    let u = spectral_positive(&mut rng, &frame_op(&frame));
    show(&perturb_theorem_3_8(&frame, &k, &u)?.1);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("K-frame example");
}
