//! Command-line front end.
//!
//! Every successful command writes `manifest.json` into the output
//! directory. The manifest records the parsed configuration and the exact
//! arguments, so `ffdr replay <manifest>` reproduces the outputs.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::climate::{ingest_temperature_csv, run_climate, ClimateCube, SyntheticClimate, DEFAULT_LEVELS};
use crate::error::{invalid, Error, Result};
use crate::experiments::{
    convergence_study, run_sim_1d, run_sim_2d, write_convergence_csv, write_figure2_csv, write_figure4_csv,
    PFunction, ScenarioReport, Sim1DConfig, Sim2DConfig, DEFAULT_ALPHAS_2D,
};
use crate::fdr::{fbh_adjust, write_result, AdjustmentResult, PValueField};
use crate::fields::MaternSpec;
use crate::grid::WeightedGrid;

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
#[command(name = "ffdr", version, about = "Functional FDR control with the functional Benjamini-Hochberg procedure")]
pub struct Cli {
    /// Directory for all outputs (created if missing) [default: out]
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Base seed of every random draw
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads for the simulation harnesses [default: all cores]
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Format of the main result tables
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Adjust a p-value field read from CSV
    Adjust(AdjustArgs),
    /// 1D functional regression study with permutation tests
    Sim1d(Sim1dArgs),
    /// 2D spikes-plus-Matérn study with pointwise t-tests
    Sim2d(Sim2dArgs),
    /// Temperature trend tests on the sphere
    Climate(ClimateArgs),
    /// fBH on refining lattices for an analytic p-value function
    Converge(ConvergeArgs),
    /// Re-run the command recorded in a manifest
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    /// Every point has weight one
    Uniform,
    /// `lon,lat` columns in degrees, weights proportional to cos(lat)
    Sphere,
    /// Weights from the `weight` column
    WeightColumn,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct AdjustArgs {
    /// CSV with a `p` column, optional coordinate columns and an optional
    /// `weight` column
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Measure::Uniform)]
    pub measure: Measure,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Sim1dArgs {
    #[arg(long, default_value_t = 200)]
    pub replications: usize,
    #[arg(long, default_value_t = 200)]
    pub permutations: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0])]
    pub d_values: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [10usize, 20, 30])]
    pub h_values: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub grid_points: usize,
    #[arg(long, default_value_t = 10)]
    pub n_curves: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Sim2dArgs {
    /// Preset signal size and sample count (1-5); explicit flags override it
    #[arg(long)]
    pub setup: Option<usize>,
    #[arg(long, default_value_t = 64)]
    pub grid_side: usize,
    /// Cone height multiplier [default: 2]
    #[arg(long)]
    pub signal_size: Option<f64>,
    /// Samples per pointwise t-test [default: 20]
    #[arg(long)]
    pub samples_per_test: Option<usize>,
    #[arg(long, default_value_t = 200)]
    pub replications: usize,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ALPHAS_2D)]
    pub alphas: Vec<f64>,
    /// Matérn scale parameter
    #[arg(long, default_value_t = 0.125)]
    pub range: f64,
    #[arg(long, default_value_t = 2.5)]
    pub smoothness: f64,
    #[arg(long, default_value_t = 1.0)]
    pub variance: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ClimateArgs {
    /// Long CSV `lon,lat,year,temp`
    #[arg(required_unless_present = "synthetic")]
    pub input: Option<PathBuf>,
    /// Generate a synthetic cube from `--seed` instead of reading a file
    #[arg(long, conflicts_with = "input")]
    pub synthetic: bool,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_LEVELS)]
    pub alphas: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ConvergeArgs {
    /// tsq, cube or shifted
    #[arg(long, default_value = "tsq")]
    pub function: String,
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 100)]
    pub base_resolution: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

/// Record of one successful run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config: Cli,
    /// Arguments after the program name, for replay.
    pub args: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<PathBuf>,
    pub duration_seconds: f64,
}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

fn init_workers(workers: Option<usize>) -> Result<()> {
    if let Some(n) = workers {
        if n == 0 {
            return invalid("--workers must be at least 1");
        }
        // the global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parse `args` (without the program name) and run the command.
pub fn run_from(args: Vec<String>) -> Result<RunManifest> {
    let cli = Cli::try_parse_from(std::iter::once("ffdr".to_string()).chain(args.iter().cloned()))
        .map_err(|e| Error::Validation(e.to_string()))?;
    execute(cli, args)
}

/// Run a parsed command line; `args` is recorded in the manifest.
pub fn execute(cli: Cli, args: Vec<String>) -> Result<RunManifest> {
    if let Command::Replay(r) = &cli.command {
        let text = std::fs::read_to_string(&r.manifest).map_err(|e| Error::io(&r.manifest, e))?;
        let old: RunManifest = serde_json::from_str(&text)?;
        let mut replayed = old.config;
        if cli.out_dir.is_some() {
            replayed.out_dir = cli.out_dir.clone();
        }
        if cli.workers.is_some() {
            replayed.workers = cli.workers;
        }
        if let Command::Replay(_) = replayed.command {
            return invalid("a replay manifest cannot point to another replay");
        }
        return execute(replayed, old.args);
    }

    init_workers(cli.workers)?;
    let start = Instant::now();
    let out_dir = cli.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;

    let (name, inputs, outputs) = match &cli.command {
        Command::Adjust(a) => ("adjust", vec![a.input.clone()], cmd_adjust(a, cli.format, &out_dir)?),
        Command::Sim1d(a) => ("sim1d", vec![], cmd_sim1d(a, cli.seed, cli.format, &out_dir)?),
        Command::Sim2d(a) => ("sim2d", vec![], cmd_sim2d(a, cli.seed, cli.format, &out_dir)?),
        Command::Climate(a) => (
            "climate",
            a.input.iter().cloned().collect(),
            cmd_climate(a, cli.seed, cli.format, &out_dir)?,
        ),
        Command::Converge(a) => ("converge", vec![], cmd_converge(a, cli.format, &out_dir)?),
        Command::Replay(_) => unreachable!("handled above"),
    };

    let inputs = inputs
        .into_iter()
        .map(|path| Ok(InputDigest { sha256: sha256_file(&path)?, path }))
        .collect::<Result<Vec<_>>>()?;
    let manifest_path = out_dir.join("manifest.json");
    let mut outputs = outputs;
    outputs.push(manifest_path.clone());
    let manifest = RunManifest {
        command: name.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cli.seed,
        config: cli,
        args,
        inputs,
        outputs,
        duration_seconds: start.elapsed().as_secs_f64(),
    };
    let text = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(&manifest_path, text + "\n").map_err(|e| Error::io(&manifest_path, e))?;
    Ok(manifest)
}

/// Entry point of the `ffdr` binary.
pub fn run() -> std::process::ExitCode {
    let cli = Cli::parse();
    let args = std::env::args().skip(1).collect();
    match execute(cli, args) {
        Ok(_) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::FAILURE
        }
    }
}

/// Points, weights and p-values of an `adjust` input file.
pub struct PValueInput {
    pub grid: WeightedGrid,
    pub field: PValueField,
    pub coord_names: Vec<String>,
}

/// Read a p-value CSV. Columns other than `p` and `weight` are coordinates;
/// without any, the row index serves as the coordinate.
pub fn read_pvalue_csv(path: &Path, measure: Measure) -> Result<PValueInput> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::Validation(format!("{}: {other:?}", path.display())),
        })?;
    let perr = |line: u64, message: String| Error::Parse {
        path: path.into(),
        line,
        message,
    };
    let header = rdr.headers()?.clone();
    if header.is_empty() {
        return Err(perr(1, "no rows: the file is empty".into()));
    }
    let p_col = header
        .iter()
        .position(|h| h == "p")
        .ok_or_else(|| perr(1, "missing `p` column".into()))?;
    let w_col = header.iter().position(|h| h == "weight");
    let coord_cols: Vec<usize> = (0..header.len()).filter(|&k| k != p_col && Some(k) != w_col).collect();
    let mut coord_names: Vec<String> = coord_cols.iter().map(|&k| header[k].to_string()).collect();

    match measure {
        Measure::Sphere if coord_names != ["lon", "lat"] => {
            return Err(perr(1, "the sphere measure needs exactly the coordinate columns lon,lat".into()))
        }
        Measure::WeightColumn if w_col.is_none() => {
            return Err(perr(1, "the weight-column measure needs a `weight` column".into()))
        }
        _ => {}
    }

    let mut points = Vec::new();
    let mut pvalues = Vec::new();
    let mut weights = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let line = row as u64 + 2;
        let rec = rec.map_err(|e| perr(line, e.to_string()))?;
        let num = |k: usize| {
            rec.get(k)
                .unwrap_or("")
                .parse::<f64>()
                .map_err(|_| perr(line, format!("{} is not a number: {:?}", &header[k], rec.get(k).unwrap_or(""))))
        };
        let p = num(p_col)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(perr(line, format!("p-value {p} is outside [0, 1]")));
        }
        let mut pt = coord_cols.iter().map(|&k| num(k)).collect::<Result<Vec<_>>>()?;
        if pt.is_empty() {
            pt.push(row as f64);
        }
        let weight = match w_col {
            Some(k) => {
                let w = num(k)?;
                if !(w > 0.0 && w.is_finite()) {
                    return Err(perr(line, format!("weight must be positive, got {w} (data row {})", row + 1)));
                }
                w
            }
            None => 1.0,
        };
        let weight = match measure {
            Measure::Uniform => 1.0,
            Measure::WeightColumn => weight,
            Measure::Sphere => {
                let (lon, lat) = (pt[0], pt[1]);
                if !(lon.abs() < 180.0 && lat.abs() < 90.0) {
                    return Err(perr(line, format!("({lon}, {lat}) is off the globe")));
                }
                lat.to_radians().cos()
            }
        };
        points.push(pt);
        pvalues.push(p);
        weights.push(weight);
    }
    if points.is_empty() {
        return Err(perr(2, "no rows: the file has a header but no data".into()));
    }
    if coord_names.is_empty() {
        coord_names.push("index".into());
    }
    if measure == Measure::Sphere {
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
    }
    let grid = WeightedGrid::from_points(points, weights)?;
    let field = PValueField::on_grid(pvalues, &grid)?;
    Ok(PValueInput {
        grid,
        field,
        coord_names,
    })
}

#[derive(Serialize)]
struct ResultRow<'a> {
    coords: &'a [f64],
    p: f64,
    p_adjusted: f64,
    rejected: bool,
}

fn write_result_json(path: &Path, grid: &WeightedGrid, field: &PValueField, res: &AdjustmentResult) -> Result<()> {
    let rows: Vec<ResultRow> = grid
        .points()
        .enumerate()
        .map(|(i, coords)| ResultRow {
            coords,
            p: field.values()[i],
            p_adjusted: res.adjusted.values()[i],
            rejected: res.reject[i],
        })
        .collect();
    let doc = serde_json::json!({ "summary": res.summary(), "rejected_count": res.rejected_count(), "points": rows });
    let text = serde_json::to_string_pretty(&doc)?;
    std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

fn cmd_adjust(a: &AdjustArgs, format: Format, out: &Path) -> Result<Vec<PathBuf>> {
    let input = read_pvalue_csv(&a.input, a.measure)?;
    let res = fbh_adjust(&input.field, &input.grid, a.alpha)?;
    println!("alpha_star = {}", res.alpha_star);
    println!(
        "rejected_measure = {} of {} ({} of {} points)",
        res.rejected_measure,
        res.total_measure,
        res.rejected_count(),
        input.grid.len()
    );
    match format {
        Format::Csv => {
            let (csv_path, json_path) = (out.join("adjusted.csv"), out.join("adjusted.json"));
            let names: Vec<&str> = input.coord_names.iter().map(String::as_str).collect();
            write_result(&csv_path, &json_path, &input.grid, &input.field, &res, Some(&names))?;
            Ok(vec![csv_path, json_path])
        }
        Format::Json => {
            let json_path = out.join("adjusted.json");
            write_result_json(&json_path, &input.grid, &input.field, &res)?;
            Ok(vec![json_path])
        }
    }
}

fn write_report(report: &ScenarioReport, stem: &str, format: Format, out: &Path) -> Result<PathBuf> {
    match format {
        Format::Csv => {
            let path = out.join(format!("{stem}.csv"));
            report.write_csv(&path)?;
            Ok(path)
        }
        Format::Json => {
            let path = out.join(format!("{stem}.json"));
            report.write_json(&path)?;
            Ok(path)
        }
    }
}

fn cmd_sim1d(a: &Sim1dArgs, seed: u64, format: Format, out: &Path) -> Result<Vec<PathBuf>> {
    let config = Sim1DConfig {
        n_curves: a.n_curves,
        grid_points: a.grid_points,
        d_values: a.d_values.clone(),
        h_values: a.h_values.clone(),
        replications: a.replications,
        permutations: a.permutations,
        alpha: a.alpha,
        seed,
    };
    let report = run_sim_1d(&config)?;
    let report_path = write_report(&report, "sim1d_report", format, out)?;
    let figure = out.join("figure2.csv");
    write_figure2_csv(&report, &config, &figure)?;
    println!("{} scenarios, {} replications each", report.scenarios().len(), config.replications);
    Ok(vec![report_path, figure])
}

fn cmd_sim2d(a: &Sim2dArgs, seed: u64, format: Format, out: &Path) -> Result<Vec<PathBuf>> {
    let base = match a.setup {
        Some(k) => Sim2DConfig::setup(k)?,
        None => Sim2DConfig::default(),
    };
    let config = Sim2DConfig {
        grid_side: a.grid_side,
        signal_size: a.signal_size.unwrap_or(base.signal_size),
        samples_per_test: a.samples_per_test.unwrap_or(base.samples_per_test),
        replications: a.replications,
        alphas: a.alphas.clone(),
        matern: MaternSpec {
            variance: a.variance,
            range: a.range,
            smoothness: a.smoothness,
        },
        seed,
    };
    let report = run_sim_2d(&config)?;
    let report_path = write_report(&report, "sim2d_report", format, out)?;
    let figure = out.join("figure4.csv");
    write_figure4_csv(&report, &figure)?;
    println!("{}: {} replications on a {}^2 grid", config.scenario_label(), config.replications, config.grid_side);
    Ok(vec![report_path, figure])
}

fn cmd_climate(a: &ClimateArgs, seed: u64, format: Format, out: &Path) -> Result<Vec<PathBuf>> {
    let cube: ClimateCube = match &a.input {
        Some(path) => ingest_temperature_csv(path)?,
        None => SyntheticClimate {
            seed,
            ..SyntheticClimate::default()
        }
        .cube()?,
    };
    let run = run_climate(&cube, &a.alphas)?;
    let mut written = run.write(&cube, out)?;
    if format == Format::Json {
        let path = out.join("coverage_table.json");
        let text = serde_json::to_string_pretty(&run.coverage)?;
        std::fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    println!("level,unadjusted,fbh_adjusted");
    for r in &run.coverage.rows {
        println!("{},{:.3},{:.3}", r.level, r.unadjusted, r.fbh_adjusted);
    }
    Ok(written)
}

fn cmd_converge(a: &ConvergeArgs, format: Format, out: &Path) -> Result<Vec<PathBuf>> {
    let function = PFunction::from_name(&a.function)?;
    let levels = convergence_study(function, a.base_resolution, a.levels, a.alpha)?;
    let path = match format {
        Format::Csv => {
            let path = out.join("convergence.csv");
            write_convergence_csv(&levels, &path)?;
            path
        }
        Format::Json => {
            let path = out.join("convergence.json");
            let text = serde_json::to_string_pretty(&levels)?;
            std::fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
            path
        }
    };
    let last = levels.last().expect("at least two levels");
    println!(
        "resolution {}: alpha_star = {:.6} (limit {:.6}), rejected measure = {:.6} (limit {:.6})",
        last.resolution,
        last.alpha_star,
        function.limit_alpha_star(a.alpha),
        last.rejected_measure,
        function.limit_rejected_measure(a.alpha)
    );
    Ok(vec![path])
}
