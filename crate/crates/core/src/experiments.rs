//! Replication harnesses for the 1D permutation study, the 2D spike study,
//! and the grid-refinement convergence study.
//!
//! Replication `r` of a study draws everything from a generator seeded with
//! `seed + r`, so any subset of replications can be re-run on its own.
//! Replications run in parallel. Their metrics are collected in
//! replication order and summed sequentially, so reports are bit-identical
//! whatever the thread count.

use std::path::Path;

use nalgebra::DMatrix;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engines::{one_sample_t_test, permutation_test, FunctionalSampleSet, TestSide};
use crate::error::{invalid, Error, Result};
use crate::fdr::{fbh_adjust, ErrorMetrics, PValueField};
use crate::fields::{bspline_design, noise_curve, spike_signal, step_null_mask, step_signal, MaternGenerator, MaternSpec, SplineBasis};
use crate::grid::{build_lattice, refine, GridSpec, TruthMask, WeightedGrid};

pub const METHOD_UNADJUSTED: &str = "unadjusted";
pub const METHOD_FBH: &str = "fbh";
pub const METHOD_FMAX: &str = "fmax";

/// Configuration of the 1D functional-on-scalar regression study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sim1DConfig {
    pub n_curves: usize,
    pub grid_points: usize,
    pub d_values: Vec<f64>,
    pub h_values: Vec<usize>,
    pub replications: usize,
    pub permutations: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl Default for Sim1DConfig {
    fn default() -> Self {
        Self {
            n_curves: 10,
            grid_points: 100,
            d_values: vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            h_values: vec![10, 20, 30],
            replications: 200,
            permutations: 200,
            alpha: 0.05,
            seed: 1,
        }
    }
}

impl Sim1DConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_curves < 3 || self.grid_points == 0 || self.replications == 0 {
            return invalid("n_curves must be >= 3 and grid_points, replications positive");
        }
        if self.d_values.is_empty() || self.h_values.is_empty() {
            return invalid("d_values and h_values must be non-empty");
        }
        if let Some(h) = self.h_values.iter().find(|&&h| h > 40) {
            return invalid(format!("h = {h} exceeds the 40 basis functions"));
        }
        if self.d_values.iter().any(|d| !d.is_finite()) {
            return invalid("d_values must be finite");
        }
        if self.permutations < 99 {
            return invalid("permutations must be at least 99");
        }
        check_alpha(self.alpha)
    }

    /// Distinct `(h, d)` scenarios. All `d = 0` scenarios coincide and are
    /// run once with `h = None`.
    pub fn scenarios(&self) -> Vec<(Option<usize>, f64)> {
        let mut out = Vec::new();
        if self.d_values.contains(&0.0) {
            out.push((None, 0.0));
        }
        for &h in &self.h_values {
            for &d in self.d_values.iter().filter(|&&d| d != 0.0) {
                out.push((Some(h), d));
            }
        }
        out
    }
}

pub fn scenario_label_1d(h: Option<usize>, d: f64) -> String {
    match h {
        Some(h) => format!("h={h};d={d}"),
        None => format!("d={d}"),
    }
}

/// Configuration of the 2D conical-spike study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sim2DConfig {
    pub grid_side: usize,
    pub signal_size: f64,
    pub samples_per_test: usize,
    pub replications: usize,
    pub alphas: Vec<f64>,
    pub matern: MaternSpec,
    pub seed: u64,
}

pub const DEFAULT_ALPHAS_2D: [f64; 7] = [0.001, 0.01, 0.02, 0.03, 0.04, 0.05, 0.10];

/// `(signal size, samples per test)` of the five reference setups.
pub const TABLE1_SETUPS: [(f64, usize); 5] = [(2.0, 20), (2.0, 10), (2.0, 40), (1.0, 20), (0.5, 20)];

impl Default for Sim2DConfig {
    fn default() -> Self {
        Self {
            grid_side: 64,
            signal_size: 2.0,
            samples_per_test: 20,
            replications: 200,
            alphas: DEFAULT_ALPHAS_2D.to_vec(),
            matern: MaternSpec::default(),
            seed: 1,
        }
    }
}

impl Sim2DConfig {
    /// Defaults with the signal size and sample count of setup `k` (1-based).
    pub fn setup(k: usize) -> Result<Self> {
        match TABLE1_SETUPS.get(k.wrapping_sub(1)) {
            Some(&(signal_size, samples_per_test)) => Ok(Self {
                signal_size,
                samples_per_test,
                ..Self::default()
            }),
            None => invalid(format!("setup must be 1..=5, got {k}")),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_side < 8 {
            return invalid(format!("grid_side must be at least 8, got {}", self.grid_side));
        }
        if self.samples_per_test < 2 || self.replications == 0 {
            return invalid("samples_per_test must be >= 2 and replications positive");
        }
        if !(self.signal_size > 0.0 && self.signal_size.is_finite()) {
            return invalid("signal_size must be positive");
        }
        if self.alphas.is_empty() {
            return invalid("at least one alpha is required");
        }
        self.alphas.iter().try_for_each(|&a| check_alpha(a))?;
        self.matern.validate()
    }

    pub fn scenario_label(&self) -> String {
        format!("signal={};n={}", self.signal_size, self.samples_per_test)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return invalid(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    Ok(())
}

/// One aggregated estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub scenario: String,
    pub alpha: f64,
    pub method: String,
    pub metric: String,
    pub estimate: f64,
    pub stderr: f64,
    pub replications: usize,
}

/// Monte-Carlo means and standard errors per scenario, level, method and
/// metric.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub rows: Vec<ReportRow>,
}

impl ScenarioReport {
    pub fn get(&self, scenario: &str, alpha: f64, method: &str, metric: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| {
            r.scenario == scenario && r.alpha == alpha && r.method == method && r.metric == metric
        })
    }

    pub fn scenarios(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.scenario.as_str()) {
                out.push(&r.scenario);
            }
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut wtr = csv::Writer::from_path(path)?;
        for row in &self.rows {
            wtr.serialize(row)?;
        }
        wtr.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.rows)?;
        std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }

    fn extend(&mut self, other: ScenarioReport) {
        self.rows.extend(other.rows);
    }
}

/// Labelled metrics of one replication, in a fixed order.
type ReplicationMetrics = Vec<(String, f64, &'static str, &'static str, f64)>;

fn push_metrics(
    out: &mut ReplicationMetrics,
    scenario: &str,
    alpha: f64,
    method: &'static str,
    m: &ErrorMetrics,
    suffix: bool,
) {
    let names: [&'static str; 4] = if suffix {
        ["fwer_one_sided", "fdr_one_sided", "fpr_one_sided", "sensitivity_one_sided"]
    } else {
        ["fwer", "fdr", "fpr", "sensitivity"]
    };
    let values = [f64::from(u8::from(m.fwer_indicator)), m.fdp, m.fpr, m.sensitivity];
    for (name, v) in names.into_iter().zip(values) {
        out.push((scenario.to_string(), alpha, method, name, v));
    }
}

/// Mean and standard error across replications, summed in replication order.
fn aggregate(per_rep: &[ReplicationMetrics]) -> ScenarioReport {
    let Some(first) = per_rep.first() else {
        return ScenarioReport::default();
    };
    let n = per_rep.len() as f64;
    let rows = first
        .iter()
        .enumerate()
        .map(|(k, (scenario, alpha, method, metric, _))| {
            let mean = per_rep.iter().map(|rep| rep[k].4).sum::<f64>() / n;
            let var = if per_rep.len() > 1 {
                per_rep.iter().map(|rep| (rep[k].4 - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            ReportRow {
                scenario: scenario.clone(),
                alpha: *alpha,
                method: method.to_string(),
                metric: metric.to_string(),
                estimate: mean,
                stderr: (var / n).sqrt(),
                replications: per_rep.len(),
            }
        })
        .collect();
    ScenarioReport { rows }
}

fn unit_interval_points(n: usize) -> Result<(WeightedGrid, Vec<f64>)> {
    let grid = build_lattice(&GridSpec::unit_interval(n)?)?;
    let t = grid.points().map(|p| p[0]).collect();
    Ok((grid, t))
}

/// The 1D study: `y_i(t) = beta(t) x_i + eps_i(t)` with `x_i = (i-1)/(n-1)`,
/// Freedman-Lane p-values, and unadjusted / fBH / Fmax rejection regions.
pub fn run_sim_1d(config: &Sim1DConfig) -> Result<ScenarioReport> {
    config.validate()?;
    let basis = SplineBasis::cubic40();
    let (grid, t) = unit_interval_points(config.grid_points)?;
    let design = bspline_design(&basis, &t)?;
    let n = config.n_curves;
    let x: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();

    let mut report = ScenarioReport::default();
    for (h, d) in config.scenarios() {
        let label = scenario_label_1d(h, d);
        let h_used = h.unwrap_or(0);
        let beta = step_signal(&basis, h_used, d, &t)?;
        let truth = TruthMask::new(step_null_mask(&basis, h_used, d, &t));
        let per_rep = (0..config.replications)
            .into_par_iter()
            .map(|r| {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(r as u64));
                let mut curves = DMatrix::zeros(n, t.len());
                for i in 0..n {
                    let noise = noise_curve(&design, &mut rng);
                    for g in 0..t.len() {
                        curves[(i, g)] = beta[g] * x[i] + noise[g];
                    }
                }
                let data = FunctionalSampleSet::with_intercept(curves, &x)?;
                let perm = permutation_test(&data, config.permutations, rng.next_u64())?;
                let mut out = ReplicationMetrics::new();
                let unadjusted = perm.pointwise.threshold(config.alpha);
                let fbh = fbh_adjust(&perm.pointwise, &grid, config.alpha)?.reject;
                let fmax = perm.fmax.threshold(config.alpha);
                for (method, mask) in [(METHOD_UNADJUSTED, unadjusted), (METHOD_FBH, fbh), (METHOD_FMAX, fmax)] {
                    let m = ErrorMetrics::from_mask(&mask, &truth, &grid)?;
                    push_metrics(&mut out, &label, config.alpha, method, &m, false);
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        report.extend(aggregate(&per_rep));
    }
    Ok(report)
}

/// The 2D study: nine conical spikes scaled by `signal_size` plus Matérn
/// noise, pointwise one-sided t-tests, unadjusted and fBH regions at every
/// level.
///
/// Metrics are reported for two null sets: `fwer`, `fdr`, `fpr`,
/// `sensitivity` use the zero set `{theta = 0}`; the `*_one_sided` variants
/// use `{theta <= 0}`, which also counts the negative spikes as null.
pub fn run_sim_2d(config: &Sim2DConfig) -> Result<ScenarioReport> {
    config.validate()?;
    let grid = build_lattice(&GridSpec::unit_square(config.grid_side)?)?;
    let theta: Vec<f64> = spike_signal(&grid)?
        .into_iter()
        .map(|v| v * config.signal_size)
        .collect();
    let zero_truth = TruthMask::new(theta.iter().map(|&v| v == 0.0).collect());
    let one_sided_truth = TruthMask::new(theta.iter().map(|&v| v <= 0.0).collect());
    let generator = MaternGenerator::new(&grid, &config.matern)?;
    let label = config.scenario_label();
    let n = config.samples_per_test;

    let per_rep = (0..config.replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(r as u64));
            let fields = generator.sample_many(n, &mut rng);
            let samples = DMatrix::from_fn(n, grid.len(), |i, g| theta[g] + fields[i][g]);
            let p = one_sample_t_test(&samples, TestSide::Greater)?;
            let mut out = ReplicationMetrics::new();
            for &alpha in &config.alphas {
                let fbh = fbh_adjust(&p, &grid, alpha)?.reject;
                let unadjusted = p.threshold(alpha);
                for (method, mask) in [(METHOD_UNADJUSTED, &unadjusted), (METHOD_FBH, &fbh)] {
                    let m = ErrorMetrics::from_mask(mask, &zero_truth, &grid)?;
                    push_metrics(&mut out, &label, alpha, method, &m, false);
                    let m = ErrorMetrics::from_mask(mask, &one_sided_truth, &grid)?;
                    push_metrics(&mut out, &label, alpha, method, &m, true);
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(&per_rep))
}

/// Wide plot data for the 1D study: one row per `(h, d, method)` with the
/// four error measures. The shared `d = 0` scenario is repeated under every
/// `h`.
pub fn write_figure2_csv(report: &ScenarioReport, config: &Sim1DConfig, path: &Path) -> Result<()> {
    let mut wtr = csv::Writer::from_path(path)?;
    wtr.write_record(["h", "d", "method", "fwer", "fdr", "fpr", "sensitivity"])?;
    for &h in &config.h_values {
        for &d in &config.d_values {
            let label = scenario_label_1d((d != 0.0).then_some(h), d);
            for method in [METHOD_UNADJUSTED, METHOD_FBH, METHOD_FMAX] {
                let mut rec = vec![h.to_string(), d.to_string(), method.to_string()];
                for metric in ["fwer", "fdr", "fpr", "sensitivity"] {
                    let v = report.get(&label, config.alpha, method, metric).map(|r| r.estimate);
                    rec.push(v.map_or(String::new(), |v| v.to_string()));
                }
                wtr.write_record(&rec)?;
            }
        }
    }
    wtr.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Wide plot data for the 2D study: sensitivity, FPR and FDR of fBH plus the
/// unadjusted FDR against the level, per scenario.
pub fn write_figure4_csv(report: &ScenarioReport, path: &Path) -> Result<()> {
    let mut wtr = csv::Writer::from_path(path)?;
    wtr.write_record(["scenario", "alpha", "sensitivity", "fpr", "fdr", "fdr_unadjusted"])?;
    let mut keys: Vec<(String, f64)> = Vec::new();
    for r in &report.rows {
        if !keys.iter().any(|(s, a)| *s == r.scenario && *a == r.alpha) {
            keys.push((r.scenario.clone(), r.alpha));
        }
    }
    for (scenario, alpha) in keys {
        let get = |method: &str, metric: &str| {
            report
                .get(&scenario, alpha, method, metric)
                .map_or(String::new(), |r| r.estimate.to_string())
        };
        wtr.write_record([
            scenario.clone(),
            alpha.to_string(),
            get(METHOD_FBH, "sensitivity"),
            get(METHOD_FBH, "fpr"),
            get(METHOD_FBH, "fdr"),
            get(METHOD_UNADJUSTED, "fdr"),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Analytic p-value functions on `(0, 1)` used by the convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PFunction {
    /// `p(t) = t^2`
    Tsq,
    /// `p(t) = t^3`
    Cube,
    /// `p(t) = min(1, t + 0.9)`
    Shifted,
}

impl PFunction {
    pub const ALL: [PFunction; 3] = [PFunction::Tsq, PFunction::Cube, PFunction::Shifted];

    pub fn name(self) -> &'static str {
        match self {
            PFunction::Tsq => "tsq",
            PFunction::Cube => "cube",
            PFunction::Shifted => "shifted",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| {
                Error::Validation(format!(
                    "unknown p-function {name:?}; expected one of tsq, cube, shifted"
                ))
            })
    }

    pub fn eval(self, t: f64) -> f64 {
        match self {
            PFunction::Tsq => t * t,
            PFunction::Cube => t * t * t,
            PFunction::Shifted => (t + 0.9).min(1.0),
        }
    }

    /// Limit of the adjusted threshold under uniform measure on `(0, 1)`.
    ///
    /// For `p = t^k`, `a(r) = r^(1/k)` and `a(r) >= r / alpha` holds up to
    /// `r = alpha^(k/(k-1))`.
    pub fn limit_alpha_star(self, alpha: f64) -> f64 {
        match self {
            PFunction::Tsq => alpha * alpha,
            PFunction::Cube => alpha.powf(1.5),
            PFunction::Shifted => 0.0,
        }
    }

    /// Limit of the rejected measure, `a(alpha*)`.
    pub fn limit_rejected_measure(self, alpha: f64) -> f64 {
        match self {
            PFunction::Tsq => alpha,
            PFunction::Cube => alpha.sqrt(),
            PFunction::Shifted => 0.0,
        }
    }
}

/// One refinement level of the convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceLevel {
    pub resolution: usize,
    pub mesh: f64,
    pub alpha_star: f64,
    pub rejected_measure: f64,
}

/// fBH on nested midpoint lattices of `(0, 1)`, refined by a factor of 3
/// per level.
pub fn convergence_study(
    function: PFunction,
    base_resolution: usize,
    levels: usize,
    alpha: f64,
) -> Result<Vec<ConvergenceLevel>> {
    if levels < 2 {
        return invalid(format!("convergence study needs at least 2 levels, got {levels}"));
    }
    check_alpha(alpha)?;
    let mut spec = GridSpec::unit_interval(base_resolution)?;
    let mut grid = build_lattice(&spec)?;
    let mut out = Vec::with_capacity(levels);
    for level in 0..levels {
        let values = grid.points().map(|p| function.eval(p[0])).collect();
        let field = PValueField::on_grid(values, &grid)?;
        let res = fbh_adjust(&field, &grid, alpha)?;
        out.push(ConvergenceLevel {
            resolution: spec.resolution[0],
            mesh: 1.0 / spec.resolution[0] as f64,
            alpha_star: res.alpha_star,
            rejected_measure: res.rejected_measure,
        });
        if level + 1 < levels {
            grid = refine(&grid, &spec, 3)?;
            spec = grid.lattice().cloned().expect("refined grids are lattices");
        }
    }
    Ok(out)
}

pub fn write_convergence_csv(levels: &[ConvergenceLevel], path: &Path) -> Result<()> {
    let mut wtr = csv::Writer::from_path(path)?;
    for l in levels {
        wtr.serialize(l)?;
    }
    wtr.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixteen_distinct_1d_scenarios() {
        let cfg = Sim1DConfig::default();
        let s = cfg.scenarios();
        assert_eq!(s.len(), 16);
        assert_eq!(s[0], (None, 0.0));
        let only_null = Sim1DConfig {
            d_values: vec![0.0],
            ..cfg
        };
        assert_eq!(only_null.scenarios(), vec![(None, 0.0)]);
    }

    #[test]
    fn config_validation() {
        assert!(Sim1DConfig { alpha: 1.0, ..Default::default() }.validate().is_err());
        assert!(Sim1DConfig { h_values: vec![41], ..Default::default() }.validate().is_err());
        assert!(Sim1DConfig { permutations: 10, ..Default::default() }.validate().is_err());
        assert!(Sim2DConfig { grid_side: 4, ..Default::default() }.validate().is_err());
        assert!(Sim2DConfig::setup(0).is_err());
        assert!(Sim2DConfig::setup(6).is_err());
        assert_eq!(Sim2DConfig::setup(5).unwrap().signal_size, 0.5);
        assert_eq!(Sim2DConfig::default().alphas.len(), 7);
    }

    #[test]
    fn aggregate_mean_and_stderr() {
        let reps: Vec<ReplicationMetrics> = [0.0, 1.0, 1.0, 0.0]
            .iter()
            .map(|&v| vec![("s".to_string(), 0.05, "fbh", "fdr", v)])
            .collect();
        let rep = aggregate(&reps);
        let row = rep.get("s", 0.05, "fbh", "fdr").unwrap();
        assert_eq!(row.estimate, 0.5);
        assert!((row.stderr - (1.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(row.replications, 4);
    }

    #[test]
    fn small_1d_study_is_reproducible() {
        let cfg = Sim1DConfig {
            grid_points: 30,
            d_values: vec![0.0, 3.0],
            h_values: vec![20],
            replications: 6,
            permutations: 99,
            ..Default::default()
        };
        let a = run_sim_1d(&cfg).unwrap();
        let b = run_sim_1d(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.scenarios(), vec!["d=0", "h=20;d=3"]);
        assert_eq!(a.rows.len(), 2 * 3 * 4);
        for r in &a.rows {
            assert!((0.0..=1.0).contains(&r.estimate) && r.stderr >= 0.0);
        }
        // nothing is non-null at d = 0
        assert_eq!(a.get("d=0", 0.05, METHOD_FBH, "sensitivity").unwrap().estimate, 0.0);
    }

    #[test]
    fn small_2d_study_is_reproducible() {
        let cfg = Sim2DConfig {
            grid_side: 16,
            replications: 4,
            alphas: vec![0.05, 0.1],
            ..Default::default()
        };
        let a = run_sim_2d(&cfg).unwrap();
        assert_eq!(a, run_sim_2d(&cfg).unwrap());
        assert_eq!(a.rows.len(), 2 * 2 * 8);
        let other = run_sim_2d(&Sim2DConfig { seed: 2, ..cfg }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn convergence_on_tsq() {
        let levels = convergence_study(PFunction::Tsq, 1000, 3, 0.05).unwrap();
        assert_eq!(levels.iter().map(|l| l.resolution).collect::<Vec<_>>(), vec![1000, 3000, 9000]);
        // midpoint lattice: alpha* = ((alpha m - 1/2) / m)^2, rejected measure = alpha
        for l in &levels {
            let m = l.resolution as f64;
            let expected = ((0.05 * m - 0.5) / m).powi(2);
            assert!((l.alpha_star - expected).abs() < 1e-15, "{l:?}");
            assert!((l.rejected_measure - 0.05).abs() < 1e-12);
        }
    }

    #[test]
    fn convergence_shifted_rejects_nothing() {
        for l in convergence_study(PFunction::Shifted, 50, 3, 0.05).unwrap() {
            assert_eq!(l.alpha_star, 0.0);
            assert_eq!(l.rejected_measure, 0.0);
        }
    }

    #[test]
    fn convergence_needs_two_levels() {
        assert!(convergence_study(PFunction::Tsq, 10, 1, 0.05).is_err());
        assert!(PFunction::from_name("nope").is_err());
        assert_eq!(PFunction::from_name("cube").unwrap(), PFunction::Cube);
    }
}
