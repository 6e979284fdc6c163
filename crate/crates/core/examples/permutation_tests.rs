//! Freedman-Lane permutation p-values on simulated functional regression
//! data, pointwise and Fmax-adjusted.
//!
//! cargo run --release --example permutation_tests -- [permutations]

use ffdr::engines::{permutation_test, FunctionalSampleSet};
use ffdr::fdr::fbh_adjust;
use ffdr::fields::{bspline_design, noise_curve, step_signal, SplineBasis};
use ffdr::grid::{build_lattice, GridSpec};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let permutations: usize = std::env::args().nth(1).map_or(Ok(999), |s| s.parse())?;
    let grid = build_lattice(&GridSpec::unit_interval(100)?)?;
    let t: Vec<f64> = grid.points().map(|p| p[0]).collect();
    let basis = SplineBasis::cubic40();
    let design = bspline_design(&basis, &t)?;
    // the effect lives on the left half of the interval
    let signal = step_signal(&basis, 20, 4.0, &t)?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let covariate: Vec<f64> = (0..10).map(|i| i as f64).collect();
    let x_mean = 4.5;
    let mut curves = DMatrix::zeros(10, t.len());
    for (i, &x) in covariate.iter().enumerate() {
        let noise = noise_curve(&design, &mut rng);
        for g in 0..t.len() {
            curves[(i, g)] = (x - x_mean) / 3.0 * signal[g] + noise[g];
        }
    }

    let data = FunctionalSampleSet::with_intercept(curves, &covariate)?;
    let res = permutation_test(&data, permutations, 11)?;
    let fbh = fbh_adjust(&res.pointwise, &grid, 0.05)?;
    let count = |mask: Vec<bool>| mask.iter().filter(|&&r| r).count();

    println!("{permutations} permutations, 100 grid points, effect on t < {:.3}", basis.knots[23]);
    println!("unadjusted rejections: {}", count(res.pointwise.threshold(0.05)));
    println!("fBH rejections:        {}", fbh.rejected_count());
    println!("Fmax rejections:       {}", count(res.fmax.threshold(0.05)));
    println!("\n{:>6} {:>10} {:>10} {:>10}", "t", "T^2", "p", "p_fmax");
    for g in (0..t.len()).step_by(10) {
        println!(
            "{:>6.3} {:>10.3} {:>10.4} {:>10.4}",
            t[g],
            res.observed[g],
            res.pointwise.values()[g],
            res.fmax.values()[g]
        );
    }
    Ok(())
}
