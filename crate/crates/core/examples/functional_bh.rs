//! fBH on the p-value function p(t) = t^2 over (0, 1).
//!
//! The limiting threshold is alpha^2 and the rejected set is (0, alpha),
//! so the printed values approach 0.0025 and 0.05.
//!
//! cargo run --example functional_bh -- [grid points] [alpha]

use ffdr::fdr::{cumulated_pvalue_eval, fbh_adjust, PValueField};
use ffdr::grid::{build_lattice, GridSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let m: usize = args.next().map_or(Ok(1000), |s| s.parse())?;
    let alpha: f64 = args.next().map_or(Ok(0.05), |s| s.parse())?;

    let grid = build_lattice(&GridSpec::unit_interval(m)?)?;
    let field = PValueField::on_grid(grid.points().map(|t| t[0] * t[0]).collect(), &grid)?;
    let res = fbh_adjust(&field, &grid, alpha)?;

    println!("{m} grid points, alpha = {alpha}");
    println!("alpha*            = {:.6}", res.alpha_star);
    println!("rejected measure  = {:.6}", res.rejected_measure);
    println!("points rejected   = {}", res.rejected_count());
    for r in [0.001, 0.0025, 0.01] {
        // the cumulated p-value function of t^2 is sqrt(r)
        println!("W({r}) = {:.4}", cumulated_pvalue_eval(&field, &grid, r)?);
    }
    Ok(())
}
