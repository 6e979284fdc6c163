//! Trend tests and sphere-weighted fBH on a synthetic temperature cube.
//!
//! Pass a path to also write the cube as a `lon,lat,year,temp` CSV that the
//! `ffdr climate` command reads.
//!
//! cargo run --release --example climate_synthetic -- [out.csv]

use ffdr::climate::{run_climate, write_cube_csv, SyntheticClimate, DEFAULT_LEVELS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let generator = SyntheticClimate {
        missing_fraction: 0.02,
        ..SyntheticClimate::default()
    };
    let cube = generator.cube()?;
    if let Some(path) = std::env::args().nth(1) {
        write_cube_csv(&cube, path.as_ref())?;
        println!("wrote {path}");
    }
    let run = run_climate(&cube, &DEFAULT_LEVELS)?;
    let meta = run.metadata(&cube);
    println!(
        "{} tiles, {} tested, years {}-{}",
        meta.tiles, meta.tested_tiles, meta.first_year, meta.last_year
    );
    println!("{:>7} {:>11} {:>13}", "level", "unadjusted", "fbh_adjusted");
    for r in &run.coverage.rows {
        println!("{:>7} {:>11.3} {:>13.3}", r.level, r.unadjusted, r.fbh_adjusted);
    }
    Ok(())
}
