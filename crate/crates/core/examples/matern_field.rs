//! Draw Matérn fields by circulant embedding and check their moments.
//!
//! cargo run --release --example matern_field -- [draws]

use ffdr::fields::{matern_correlation, MaternGenerator, MaternSpec};
use ffdr::grid::{build_lattice, GridSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let draws: usize = std::env::args().nth(1).map_or(Ok(2000), |s| s.parse())?;
    let side = 64;
    let grid = build_lattice(&GridSpec::unit_square(side)?)?;
    let spec = MaternSpec::default();
    let generator = MaternGenerator::new(&grid, &spec)?;
    println!("{side}x{side} lattice, embedding factor {}", generator.embedding_factor());

    let fields = generator.sample_many(draws, &mut ChaCha8Rng::seed_from_u64(5));
    let n = fields.len() as f64;
    // a point in the middle and its neighbours along the second axis
    let centre = (side / 2) * side + side / 4;
    let var = fields.iter().map(|f| f[centre] * f[centre]).sum::<f64>() / n;
    println!("variance at the centre: {var:.4} (target {})", spec.variance);
    println!("{:>5} {:>10} {:>10} {:>10}", "lag", "distance", "empirical", "matern");
    for lag in [1, 2, 4, 8, 16] {
        let emp = fields.iter().map(|f| f[centre] * f[centre + lag]).sum::<f64>() / n;
        let h = lag as f64 / side as f64;
        println!("{lag:>5} {h:>10.4} {:>10.4} {:>10.4}", emp / var, matern_correlation(h, spec.range, spec.smoothness));
    }
    Ok(())
}
