//! fBH threshold and rejected measure on refining lattices.
//!
//! cargo run --release --example convergence -- [levels] [alpha]

use ffdr::experiments::{convergence_study, PFunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let levels: usize = args.next().map_or(Ok(5), |s| s.parse())?;
    let alpha: f64 = args.next().map_or(Ok(0.05), |s| s.parse())?;
    for f in PFunction::ALL {
        println!(
            "{}: limit alpha* = {:.6}, limit rejected measure = {:.6}",
            f.name(),
            f.limit_alpha_star(alpha),
            f.limit_rejected_measure(alpha)
        );
        for l in convergence_study(f, 10, levels, alpha)? {
            println!(
                "  m = {:>6}  alpha* = {:.6}  rejected = {:.6}",
                l.resolution, l.alpha_star, l.rejected_measure
            );
        }
    }
    Ok(())
}
