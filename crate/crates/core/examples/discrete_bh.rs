//! Classical BH on a handful of p-values, plain and weighted.
//!
//! cargo run --example discrete_bh

use ffdr::fdr::{adjusted_pvalues, adjusted_pvalues_weighted, bh_discrete, bh_weighted};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = [0.01, 0.02, 0.04, 0.20];
    let alpha = 0.05;
    let reject = bh_discrete(&p, alpha)?;
    let adjusted = adjusted_pvalues(&p)?;
    println!("{:>6} {:>10} {:>8}", "p", "adjusted", "reject");
    for ((p, a), r) in p.iter().zip(&adjusted).zip(&reject) {
        println!("{p:>6} {a:>10.4} {r:>8}");
    }

    // a weight vector summing to one; heavy points need smaller p-values
    let p = [0.01, 0.5, 0.9];
    let w = [0.5, 0.25, 0.25];
    println!("\nweighted: p = {p:?}, w = {w:?}");
    println!("reject at 0.05:   {:?}", bh_weighted(&p, &w, 0.05)?);
    println!("adjusted:         {:?}", adjusted_pvalues_weighted(&p, &w)?);
    Ok(())
}
