//! Benjamini-Hochberg adjustment, discrete and functional.
//!
//! The functional procedure rejects every point with `p(t) <= alpha*`, where
//! `alpha*` is the largest `r` such that the cumulated p-value function
//! `a(r) = nu({s : p(s) <= r})` satisfies `a(r) / nu(T) >= r / alpha`. On a
//! finite weighted grid `a` is a right-continuous step function that only
//! jumps at observed p-values, so the search runs over the sorted field and
//! costs one sort.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{TruthMask, WeightedGrid};

/// A p-value per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueField {
    values: Vec<f64>,
}

impl PValueField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        validate_pvalues(&values)?;
        Ok(Self { values })
    }

    /// Build a field and check that it matches the grid's point count.
    pub fn on_grid(values: Vec<f64>, grid: &WeightedGrid) -> Result<Self> {
        let field = Self::new(values)?;
        field.check_grid(grid)?;
        Ok(field)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Mask of points with `p <= level`.
    pub fn threshold(&self, level: f64) -> Vec<bool> {
        self.values.iter().map(|&p| p <= level).collect()
    }

    fn check_grid(&self, grid: &WeightedGrid) -> Result<()> {
        if self.len() != grid.len() {
            return invalid(format!(
                "p-value field has {} values but the grid has {} points",
                self.len(),
                grid.len()
            ));
        }
        Ok(())
    }
}

/// Outcome of one functional BH run.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjustmentResult {
    pub alpha: f64,
    /// Adjusted threshold; zero when nothing is rejected.
    pub alpha_star: f64,
    pub reject: Vec<bool>,
    pub adjusted: PValueField,
    pub rejected_measure: f64,
    pub total_measure: f64,
}

impl AdjustmentResult {
    pub fn rejected_count(&self) -> usize {
        self.reject.iter().filter(|&&r| r).count()
    }

    pub fn summary(&self) -> AdjustmentSummary {
        AdjustmentSummary {
            alpha: self.alpha,
            alpha_star: self.alpha_star,
            rejected_measure: self.rejected_measure,
            total_measure: self.total_measure,
        }
    }
}

/// Scalar part of an [`AdjustmentResult`], written as the JSON sidecar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdjustmentSummary {
    pub alpha: f64,
    pub alpha_star: f64,
    pub rejected_measure: f64,
    pub total_measure: f64,
}

/// Measure-based error rates of one rejection region against the truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics {
    pub fdp: f64,
    pub fwer_indicator: bool,
    pub fpr: f64,
    pub sensitivity: f64,
}

impl ErrorMetrics {
    /// Error rates of an arbitrary rejection mask. Zero denominators give 0.
    pub fn from_mask(reject: &[bool], truth: &TruthMask, grid: &WeightedGrid) -> Result<Self> {
        if reject.len() != grid.len() || truth.len() != grid.len() {
            return invalid(format!(
                "shape mismatch: {} rejections, {} truth flags, {} grid points",
                reject.len(),
                truth.len(),
                grid.len()
            ));
        }
        let (mut false_rej, mut true_rej, mut null, mut non_null) = (0.0, 0.0, 0.0, 0.0);
        for ((&w, &r), &is_null) in grid.weights().iter().zip(reject).zip(&truth.is_null) {
            match (is_null, r) {
                (true, true) => {
                    false_rej += w;
                    null += w;
                }
                (true, false) => null += w,
                (false, true) => {
                    true_rej += w;
                    non_null += w;
                }
                (false, false) => non_null += w,
            }
        }
        let ratio = |num: f64, den: f64| if den > 0.0 { (num / den).min(1.0) } else { 0.0 };
        Ok(Self {
            fdp: ratio(false_rej, false_rej + true_rej),
            fwer_indicator: false_rej > 0.0,
            fpr: ratio(false_rej, null),
            sensitivity: ratio(true_rej, non_null),
        })
    }
}

fn validate_pvalues(p: &[f64]) -> Result<()> {
    if let Some(i) = p.iter().position(|v| !(0.0..=1.0).contains(v)) {
        return invalid(format!("p-value {i} is outside [0, 1]: {}", p[i]));
    }
    Ok(())
}

fn validate_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return invalid(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    Ok(())
}

fn validate_weights(p: &[f64], w: &[f64]) -> Result<()> {
    if p.len() != w.len() {
        return invalid(format!("{} p-values but {} weights", p.len(), w.len()));
    }
    if let Some(i) = w.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
        return invalid(format!("weight {i} must be strictly positive, got {}", w[i]));
    }
    let sum: f64 = w.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return invalid(format!("weights must sum to 1, got {sum}"));
    }
    Ok(())
}

fn sorted_order(p: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| p[a].total_cmp(&p[b]));
    order
}

/// Mask rejecting every hypothesis with `p <= threshold`.
fn mask_at(p: &[f64], threshold: Option<f64>) -> Vec<bool> {
    match threshold {
        Some(t) => p.iter().map(|&v| v <= t).collect(),
        None => vec![false; p.len()],
    }
}

/// Classic step-up BH: reject the `k` smallest p-values where `k` is the
/// largest rank with `p_(k) <= (k/m) alpha`. Ties at `p_(k)` are rejected.
pub fn bh_discrete(p: &[f64], alpha: f64) -> Result<Vec<bool>> {
    if p.is_empty() {
        return invalid("no p-values");
    }
    validate_pvalues(p)?;
    validate_alpha(alpha)?;
    let m = p.len() as f64;
    let order = sorted_order(p);
    let threshold = order
        .iter()
        .enumerate()
        .rev()
        .find(|&(i, &idx)| p[idx] <= ((i + 1) as f64 / m) * alpha)
        .map(|(_, &idx)| p[idx]);
    Ok(mask_at(p, threshold))
}

/// Cumulative weight of `{j : p_j <= p_(i)}` for each sorted position `i`.
///
/// Tied p-values share the weight of their whole tie group; the final group
/// is pinned to exactly 1.
fn tied_cumulative_weights(p: &[f64], w: &[f64], order: &[usize]) -> Vec<f64> {
    let n = order.len();
    let mut cum = vec![0.0; n];
    let mut running = 0.0;
    let mut start = 0;
    while start < n {
        let v = p[order[start]];
        let mut end = start;
        while end < n && p[order[end]] == v {
            running += w[order[end]];
            end += 1;
        }
        let total = if end == n { 1.0 } else { running.min(1.0) };
        cum[start..end].fill(total);
        start = end;
    }
    cum
}

/// Weighted step-up BH: `k` is the largest rank with
/// `p_(k) <= alpha * sum_{j : p_j <= p_(k)} w_j`.
pub fn bh_weighted(p: &[f64], w: &[f64], alpha: f64) -> Result<Vec<bool>> {
    if p.is_empty() {
        return invalid("no p-values");
    }
    validate_pvalues(p)?;
    validate_weights(p, w)?;
    validate_alpha(alpha)?;
    let order = sorted_order(p);
    let cum = tied_cumulative_weights(p, w, &order);
    let threshold = order
        .iter()
        .zip(&cum)
        .rev()
        .find(|&(&idx, &c)| p[idx] <= alpha * c)
        .map(|(&idx, _)| p[idx]);
    Ok(mask_at(p, threshold))
}

/// BH adjusted p-values, `p~_(i) = min(1, min_{j >= i} (m/j) p_(j))`, in
/// input order.
pub fn adjusted_pvalues(p: &[f64]) -> Result<Vec<f64>> {
    if p.is_empty() {
        return invalid("no p-values");
    }
    validate_pvalues(p)?;
    let m = p.len() as f64;
    let order = sorted_order(p);
    let mut out = vec![0.0; p.len()];
    let mut running = 1.0f64;
    for (i, &idx) in order.iter().enumerate().rev() {
        running = running.min(m / (i + 1) as f64 * p[idx]);
        out[idx] = running;
    }
    Ok(out)
}

/// Running minimum from the right of `p_(j) / W_j`, capped at 1, scattered
/// back to input order.
fn weighted_adjusted(p: &[f64], order: &[usize], cum: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len()];
    let mut running = 1.0f64;
    for (&idx, &c) in order.iter().zip(cum).rev() {
        running = running.min(p[idx] / c);
        out[idx] = running;
    }
    out
}

/// Adjusted p-values of the weighted BH procedure, in input order.
pub fn adjusted_pvalues_weighted(p: &[f64], w: &[f64]) -> Result<Vec<f64>> {
    if p.is_empty() {
        return invalid("no p-values");
    }
    validate_pvalues(p)?;
    validate_weights(p, w)?;
    let order = sorted_order(p);
    let cum = tied_cumulative_weights(p, w, &order);
    Ok(weighted_adjusted(p, &order, &cum))
}

/// The cumulated p-value function `a(r)`: total weight of points with `p <= r`.
pub fn cumulated_pvalue_eval(field: &PValueField, grid: &WeightedGrid, r: f64) -> Result<f64> {
    field.check_grid(grid)?;
    Ok(field
        .values()
        .iter()
        .zip(grid.weights())
        .filter(|(&p, _)| p <= r)
        .fold(0.0, |acc, (_, w)| acc + w))
}

/// Functional BH on a weighted grid.
///
/// The threshold search compares `p_(j) / W_j <= alpha`, with `W_j` the
/// normalized cumulated p-value function at `p_(j)`. The adjusted field is
/// the running minimum of the same ratios, so `p <= alpha*` and
/// `p~ <= alpha` agree pointwise without any rounding slack.
pub fn fbh_adjust(field: &PValueField, grid: &WeightedGrid, alpha: f64) -> Result<AdjustmentResult> {
    field.check_grid(grid)?;
    validate_alpha(alpha)?;
    let p = field.values();
    let w = grid.normalized_weights();
    let order = sorted_order(p);
    let cum = tied_cumulative_weights(p, &w, &order);

    let alpha_star = order
        .iter()
        .zip(&cum)
        .rev()
        .find(|&(&idx, &c)| p[idx] / c <= alpha)
        .map(|(&idx, _)| p[idx]);
    let reject = mask_at(p, alpha_star);
    let adjusted = weighted_adjusted(p, &order, &cum);
    let rejected_measure = grid.measure_of(&reject);
    Ok(AdjustmentResult {
        alpha,
        alpha_star: alpha_star.unwrap_or(0.0),
        reject,
        adjusted: PValueField { values: adjusted },
        rejected_measure,
        total_measure: grid.total_weight(),
    })
}

/// Error rates of an fBH result against the truth.
pub fn error_metrics(
    result: &AdjustmentResult,
    truth: &TruthMask,
    grid: &WeightedGrid,
) -> Result<ErrorMetrics> {
    ErrorMetrics::from_mask(&result.reject, truth, grid)
}

/// Write per-point results as `<coords>,p,p_adjusted,rejected` and the
/// scalars as a JSON sidecar.
///
/// `coord_names` defaults to `x1,...,xd`.
pub fn write_result(
    csv_path: &Path,
    json_path: &Path,
    grid: &WeightedGrid,
    field: &PValueField,
    result: &AdjustmentResult,
    coord_names: Option<&[&str]>,
) -> Result<()> {
    field.check_grid(grid)?;
    let mut header: Vec<String> = match coord_names {
        Some(names) if names.len() == grid.dim() => names.iter().map(|s| s.to_string()).collect(),
        Some(names) => {
            return invalid(format!(
                "{} coordinate names for a {}-dimensional grid",
                names.len(),
                grid.dim()
            ))
        }
        None => (1..=grid.dim()).map(|k| format!("x{k}")).collect(),
    };
    header.extend(["p", "p_adjusted", "rejected"].map(String::from));

    let mut wtr = csv::Writer::from_path(csv_path)?;
    wtr.write_record(&header)?;
    for (i, pt) in grid.points().enumerate() {
        let mut row: Vec<String> = pt.iter().map(|c| c.to_string()).collect();
        row.push(field.values()[i].to_string());
        row.push(result.adjusted.values()[i].to_string());
        row.push(u8::from(result.reject[i]).to_string());
        wtr.write_record(&row)?;
    }
    wtr.flush().map_err(|e| Error::io(csv_path, e))?;

    let json = serde_json::to_string_pretty(&result.summary())?;
    std::fs::write(json_path, json + "\n").map_err(|e| Error::io(json_path, e))?;
    Ok(())
}
