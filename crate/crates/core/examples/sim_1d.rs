//! 1D functional regression study: unadjusted, fBH and Fmax rejection
//! regions from Freedman-Lane permutation p-values.
//!
//! cargo run --release --example sim_1d -- [replications] [permutations]

use ffdr::experiments::{run_sim_1d, scenario_label_1d, Sim1DConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let replications: usize = args.next().map_or(Ok(50), |s| s.parse())?;
    let permutations: usize = args.next().map_or(Ok(199), |s| s.parse())?;
    let config = Sim1DConfig {
        replications,
        permutations,
        h_values: vec![20],
        d_values: vec![0.0, 1.0, 3.0, 5.0],
        ..Sim1DConfig::default()
    };
    let report = run_sim_1d(&config)?;

    println!("{:<12} {:<11} {:>6} {:>6} {:>6} {:>11}", "scenario", "method", "fwer", "fdr", "fpr", "sensitivity");
    for (h, d) in config.scenarios() {
        let label = scenario_label_1d(h, d);
        for method in ["unadjusted", "fbh", "fmax"] {
            let get = |metric| report.get(&label, config.alpha, method, metric).unwrap().estimate;
            println!(
                "{label:<12} {method:<11} {:>6.3} {:>6.3} {:>6.3} {:>11.3}",
                get("fwer"),
                get("fdr"),
                get("fpr"),
                get("sensitivity")
            );
        }
    }
    Ok(())
}
