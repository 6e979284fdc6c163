//! Nine-spike 2D study at desk scale: fBH against unadjusted thresholds.
//!
//! cargo run --release --example sim_2d -- [setup 1..5] [replications]

use ffdr::experiments::{run_sim_2d, Sim2DConfig, METHOD_FBH, METHOD_UNADJUSTED};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let setup: usize = args.next().map_or(Ok(1), |s| s.parse())?;
    let replications: usize = args.next().map_or(Ok(100), |s| s.parse())?;
    let config = Sim2DConfig {
        replications,
        ..Sim2DConfig::setup(setup)?
    };
    let report = run_sim_2d(&config)?;
    let label = config.scenario_label();

    println!("{label}, {}x{} grid, {replications} replications", config.grid_side, config.grid_side);
    println!("{:>6} {:>12} {:>10} {:>10} {:>14}", "alpha", "sensitivity", "fpr", "fdr", "fdr_unadj");
    for &alpha in &config.alphas {
        let get = |method, metric| report.get(&label, alpha, method, metric).unwrap().estimate;
        println!(
            "{alpha:>6} {:>12.4} {:>10.5} {:>10.4} {:>14.4}",
            get(METHOD_FBH, "sensitivity"),
            get(METHOD_FBH, "fpr"),
            get(METHOD_FBH, "fdr"),
            get(METHOD_UNADJUSTED, "fdr"),
        );
    }
    Ok(())
}
