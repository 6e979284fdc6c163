//! Pointwise test engines producing unadjusted p-value fields.
//!
//! Parametric engines (one-sample t, OLS slope t) use the Student t
//! distribution. The permutation engine implements Freedman-Lane: residuals
//! of the nuisance-only model are permuted, added back to its fitted values,
//! and the full model is refit. One permutation of observation rows is
//! shared by every grid point within a draw, which is what makes the Fmax
//! adjustment and the pointwise p-values come from the same joint null.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{invalid, Result};
use crate::fdr::PValueField;

/// Direction of the alternative hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestSide {
    Greater,
    Less,
    TwoSided,
}

/// Smallest p-value a parametric engine reports.
pub const MIN_PVALUE: f64 = f64::MIN_POSITIVE;

/// P-value of a t statistic with `df` degrees of freedom.
///
/// `NaN` (0/0) is read as "no evidence" and yields 1.
pub fn t_pvalue(t: f64, df: f64, side: TestSide) -> f64 {
    if t.is_nan() {
        return 1.0;
    }
    let dist = StudentsT::new(0.0, 1.0, df).expect("degrees of freedom must be positive");
    let p = match side {
        TestSide::Greater => dist.sf(t),
        TestSide::Less => dist.cdf(t),
        TestSide::TwoSided => 2.0 * dist.sf(t.abs()),
    };
    p.clamp(MIN_PVALUE, 1.0)
}

/// Pointwise one-sample t-test of zero mean. Rows are samples, columns are
/// grid points.
///
/// A column with all samples equal is tested by its sign alone: zero gives
/// `p = 1`, a value on the alternative side gives [`MIN_PVALUE`].
pub fn one_sample_t_test(samples: &DMatrix<f64>, side: TestSide) -> Result<PValueField> {
    let n = samples.nrows();
    if n < 2 {
        return invalid(format!("one-sample t-test needs at least 2 samples, got {n}"));
    }
    let nf = n as f64;
    let df = nf - 1.0;
    let values = samples
        .column_iter()
        .map(|col| {
            let (lo, hi) = col.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
            if lo == hi {
                return degenerate_pvalue(lo, side);
            }
            let mean = col.sum() / nf;
            let ss: f64 = col.iter().map(|v| (v - mean).powi(2)).sum();
            let sd = (ss / df).sqrt();
            t_pvalue(mean / (sd / nf.sqrt()), df, side)
        })
        .collect();
    PValueField::new(values)
}

fn degenerate_pvalue(effect: f64, side: TestSide) -> f64 {
    let supports_alternative = match side {
        TestSide::Greater => effect > 0.0,
        TestSide::Less => effect < 0.0,
        TestSide::TwoSided => effect != 0.0,
    };
    if supports_alternative {
        MIN_PVALUE
    } else {
        1.0
    }
}

/// Pointwise OLS slope test of `y = a + b * year`. Rows of `series` are grid
/// points, columns are years. The slope t statistic has `T - 2` degrees of
/// freedom.
pub fn ols_trend_test(series: &DMatrix<f64>, years: &[f64], side: TestSide) -> Result<PValueField> {
    let t_len = years.len();
    if t_len < 3 {
        return invalid(format!("trend test needs at least 3 years, got {t_len}"));
    }
    if series.ncols() != t_len {
        return invalid(format!(
            "series has {} columns but there are {t_len} years",
            series.ncols()
        ));
    }
    let mean_year = years.iter().sum::<f64>() / t_len as f64;
    let centered: Vec<f64> = years.iter().map(|y| y - mean_year).collect();
    let sxx: f64 = centered.iter().map(|c| c * c).sum();
    if !(sxx > 0.0) {
        return invalid("years are all equal; the slope is not identifiable");
    }
    let df = (t_len - 2) as f64;
    let values = series
        .row_iter()
        .map(|row| trend_pvalue(row.iter().copied(), &centered, sxx, df, side))
        .collect();
    PValueField::new(values)
}

/// Slope p-value of one series against centered regressor values.
pub(crate) fn trend_pvalue(
    row: impl Iterator<Item = f64> + Clone,
    centered: &[f64],
    sxx: f64,
    df: f64,
    side: TestSide,
) -> f64 {
    let (lo, hi) = row
        .clone()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo == hi {
        return 1.0;
    }
    let n = centered.len() as f64;
    let mean = row.clone().sum::<f64>() / n;
    let sxy: f64 = row.clone().zip(centered).map(|(y, c)| (y - mean) * c).sum();
    let slope = sxy / sxx;
    let rss: f64 = row
        .zip(centered)
        .map(|(y, c)| (y - mean - slope * c).powi(2))
        .sum();
    let se = (rss / df / sxx).sqrt();
    if se == 0.0 {
        return degenerate_pvalue(slope, side);
    }
    t_pvalue(slope / se, df, side)
}

/// Functional responses on a shared grid with scalar covariates.
#[derive(Debug, Clone)]
pub struct FunctionalSampleSet {
    /// `N x G`: row `i` is curve `i` evaluated on the grid.
    pub curves: DMatrix<f64>,
    /// `N x q` design matrix.
    pub design: DMatrix<f64>,
    pub tested_column: usize,
}

impl FunctionalSampleSet {
    pub fn new(curves: DMatrix<f64>, design: DMatrix<f64>, tested_column: usize) -> Result<Self> {
        let n = curves.nrows();
        if n < 3 {
            return invalid(format!("need at least 3 observations, got {n}"));
        }
        if design.nrows() != n {
            return invalid(format!("design has {} rows, curves have {n}", design.nrows()));
        }
        if tested_column >= design.ncols() {
            return invalid(format!(
                "tested column {tested_column} out of range for {} covariates",
                design.ncols()
            ));
        }
        if design.ncols() >= n {
            return invalid(format!(
                "{} covariates leave no residual degrees of freedom with {n} observations",
                design.ncols()
            ));
        }
        if rank(&design) < design.ncols() {
            return invalid("design matrix is rank deficient");
        }
        Ok(Self {
            curves,
            design,
            tested_column,
        })
    }

    /// Intercept plus one covariate under test.
    pub fn with_intercept(curves: DMatrix<f64>, covariate: &[f64]) -> Result<Self> {
        let design = DMatrix::from_fn(covariate.len(), 2, |i, j| if j == 0 { 1.0 } else { covariate[i] });
        Self::new(curves, design, 1)
    }

    pub fn n_obs(&self) -> usize {
        self.curves.nrows()
    }

    pub fn n_points(&self) -> usize {
        self.curves.ncols()
    }
}

fn rank(m: &DMatrix<f64>) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > max * 1e-10 * m.nrows().max(m.ncols()) as f64).count()
}

/// `(X'X)^{-1} X'` for a full-rank design.
fn pseudo_inverse(x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let xtx = x.transpose() * x;
    match xtx.cholesky() {
        Some(ch) => Ok(ch.solve(&x.transpose())),
        None => invalid("design matrix is rank deficient"),
    }
}

/// Precomputed projections for the Freedman-Lane statistic.
struct FreedmanLane {
    /// Reduced-model fitted values, `N x G`.
    fitted: DMatrix<f64>,
    /// Reduced-model residuals, `N x G`.
    residuals: DMatrix<f64>,
    /// Row of `(X'X)^{-1} X'` for the tested coefficient.
    coef_row: DMatrix<f64>,
    /// `I - H` for the full model.
    residual_maker: DMatrix<f64>,
    /// `[(X'X)^{-1}]_jj * (N - q)^{-1}`.
    var_scale: f64,
}

impl FreedmanLane {
    fn new(data: &FunctionalSampleSet) -> Result<Self> {
        let x = &data.design;
        let (n, q) = x.shape();
        let j = data.tested_column;
        let pinv = pseudo_inverse(x)?;
        let xtx_inv = &pinv * pinv.transpose();
        let residual_maker = DMatrix::identity(n, n) - x * &pinv;

        let nuisance: Vec<usize> = (0..q).filter(|&c| c != j).collect();
        let (fitted, residuals) = if nuisance.is_empty() {
            (DMatrix::zeros(n, data.n_points()), data.curves.clone())
        } else {
            let z = x.select_columns(&nuisance);
            let fitted = &z * (pseudo_inverse(&z)? * &data.curves);
            let residuals = &data.curves - &fitted;
            (fitted, residuals)
        };
        Ok(Self {
            fitted,
            residuals,
            coef_row: pinv.rows(j, 1).into_owned(),
            residual_maker,
            var_scale: xtx_inv[(j, j)] / (n - q) as f64,
        })
    }

    /// Squared t statistic of the tested coefficient at every grid point.
    fn statistics(&self, y: &DMatrix<f64>) -> Vec<f64> {
        let beta = &self.coef_row * y;
        let resid = &self.residual_maker * y;
        resid
            .column_iter()
            .zip(beta.iter())
            .map(|(r, &b)| {
                let var = r.norm_squared() * self.var_scale;
                if b == 0.0 {
                    0.0
                } else {
                    b * b / var
                }
            })
            .collect()
    }

    fn permuted_statistics(&self, perm: &[usize]) -> Vec<f64> {
        let y = DMatrix::from_fn(self.fitted.nrows(), self.fitted.ncols(), |i, g| {
            self.fitted[(i, g)] + self.residuals[(perm[i], g)]
        });
        self.statistics(&y)
    }
}

/// Pointwise and Fmax p-values computed from one shared set of permutations.
#[derive(Debug, Clone)]
pub struct PermutationResult {
    /// Observed squared t statistic per grid point.
    pub observed: Vec<f64>,
    pub pointwise: PValueField,
    pub fmax: PValueField,
    pub permutations: usize,
}

/// `B` seeded permutations of `0..n`, one row per draw.
pub fn permutation_table(n: usize, permutations: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..permutations)
        .map(|_| {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            perm
        })
        .collect()
}

/// Freedman-Lane permutation test with both pointwise and Fmax p-values.
///
/// Pointwise: `p(t) = (1 + #{b : F_b(t) >= F(t)}) / (B + 1)`.
/// Fmax: `p(t) = (1 + #{b : max_s F_b(s) >= F(t)}) / (B + 1)`.
pub fn permutation_test(
    data: &FunctionalSampleSet,
    permutations: usize,
    seed: u64,
) -> Result<PermutationResult> {
    if permutations < 99 {
        return invalid(format!("need at least 99 permutations, got {permutations}"));
    }
    let fl = FreedmanLane::new(data)?;
    let observed = fl.statistics(&data.curves);
    let table = permutation_table(data.n_obs(), permutations, seed);
    let g = data.n_points();

    let (exceed, maxima) = table
        .par_iter()
        .map(|perm| {
            let stats = fl.permuted_statistics(perm);
            let hits: Vec<u32> = stats
                .iter()
                .zip(&observed)
                .map(|(s, o)| u32::from(s >= o))
                .collect();
            let max = stats.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (hits, vec![max])
        })
        .reduce(
            || (vec![0u32; g], Vec::new()),
            |(mut a, mut ma), (b, mb)| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                ma.extend(mb);
                (a, ma)
            },
        );

    let denom = (permutations + 1) as f64;
    let pointwise = exceed.iter().map(|&k| (1 + k) as f64 / denom).collect();
    let fmax = observed
        .iter()
        .map(|o| (1 + maxima.iter().filter(|&&m| m >= *o).count()) as f64 / denom)
        .collect();
    Ok(PermutationResult {
        observed,
        pointwise: PValueField::new(pointwise)?,
        fmax: PValueField::new(fmax)?,
        permutations,
    })
}

/// Pointwise Freedman-Lane permutation p-values.
pub fn freedman_lane_pvalues(
    data: &FunctionalSampleSet,
    permutations: usize,
    seed: u64,
) -> Result<PValueField> {
    Ok(permutation_test(data, permutations, seed)?.pointwise)
}

/// Fmax FWER-adjusted p-values over the whole grid.
pub fn fmax_adjust(data: &FunctionalSampleSet, permutations: usize, seed: u64) -> Result<PValueField> {
    Ok(permutation_test(data, permutations, seed)?.fmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand_distr::{Distribution, StandardNormal};

    /// Student t density integrated by composite Simpson on `[-L, x]`, with
    /// the tail below `-L` added from the closed-form series-free bound
    /// (negligible at the chosen `L`).
    fn t_cdf_quadrature(x: f64, df: f64) -> f64 {
        use statrs::function::gamma::ln_gamma;
        let c = (ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0)).exp() / (df * std::f64::consts::PI).sqrt();
        let dens = |t: f64| c * (1.0 + t * t / df).powf(-(df + 1.0) / 2.0);
        // substitute t = tan(u) to map (-inf, x] onto (-pi/2, atan x]
        let f = |u: f64| {
            let t = u.tan();
            dens(t) * (1.0 + t * t)
        };
        let (a, b) = (-std::f64::consts::FRAC_PI_2, x.atan());
        let n = 200_000;
        let h = (b - a) / n as f64;
        let mut s = 0.0;
        for i in 0..=n {
            let u = a + i as f64 * h;
            let v = if i == 0 { 0.0 } else { f(u) };
            s += v * if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn t_cdf_matches_quadrature() {
        for &df in &[3.0, 9.0, 19.0, 23.0] {
            for &x in &[-4.0, -1.7, -0.3, 0.0, 0.8, 2.5] {
                let oracle = t_cdf_quadrature(x, df);
                let p = t_pvalue(x, df, TestSide::Less);
                assert_relative_eq!(p, oracle, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn sides_sum_to_one() {
        for &t in &[-3.1, -0.2, 0.0, 0.7, 5.0] {
            let g = t_pvalue(t, 12.0, TestSide::Greater);
            let l = t_pvalue(t, 12.0, TestSide::Less);
            assert_relative_eq!(g + l, 1.0, max_relative = 1e-14);
        }
        assert_eq!(t_pvalue(0.0, 5.0, TestSide::TwoSided), 1.0);
    }

    #[test]
    fn zero_samples_give_one() {
        let s = DMatrix::zeros(5, 3);
        for side in [TestSide::Greater, TestSide::Less, TestSide::TwoSided] {
            let p = one_sample_t_test(&s, side).unwrap();
            assert!(p.values().iter().all(|&v| v == 1.0));
        }
    }

    #[test]
    fn constant_positive_samples() {
        let s = DMatrix::from_element(5, 1, 0.1);
        assert_eq!(one_sample_t_test(&s, TestSide::Greater).unwrap().values()[0], MIN_PVALUE);
        assert_eq!(one_sample_t_test(&s, TestSide::Less).unwrap().values()[0], 1.0);
    }

    #[test]
    fn symmetric_samples_two_sided() {
        let s = DMatrix::from_column_slice(4, 1, &[-1.0, 1.0, -2.0, 2.0]);
        let p = one_sample_t_test(&s, TestSide::TwoSided).unwrap();
        assert_relative_eq!(p.values()[0], 1.0, max_relative = 1e-12);
    }

    #[test]
    fn t_test_known_value() {
        // mean 1, sd 1, n 4 -> t = 2 with 3 df; P(T3 > 2) = 0.0696...
        let s = DMatrix::from_column_slice(4, 1, &[1.0 - 3f64.sqrt() / 2.0 * 1.0, 1.0, 1.0, 1.0 + 3f64.sqrt() / 2.0]);
        let col = s.column(0);
        let m = col.sum() / 4.0;
        let sd = (col.iter().map(|v| (v - m).powi(2)).sum::<f64>() / 3.0).sqrt();
        let t = m / (sd / 2.0);
        let p = one_sample_t_test(&s, TestSide::Greater).unwrap().values()[0];
        assert_relative_eq!(p, t_cdf_quadrature(-t, 3.0), max_relative = 1e-8);
    }

    #[test]
    fn t_test_needs_two_samples() {
        assert!(one_sample_t_test(&DMatrix::zeros(1, 4), TestSide::Greater).is_err());
    }

    #[test]
    fn trend_constant_series() {
        let years: Vec<f64> = (1983..=2007).map(f64::from).collect();
        let s = DMatrix::from_element(2, 25, 13.7);
        let p = ols_trend_test(&s, &years, TestSide::Greater).unwrap();
        assert_eq!(p.values(), &[1.0, 1.0]);
    }

    #[test]
    fn trend_perfect_slope() {
        let years: Vec<f64> = (1983..=2007).map(f64::from).collect();
        let s = DMatrix::from_row_slice(1, 25, &years);
        let p = ols_trend_test(&s, &years, TestSide::Greater).unwrap().values()[0];
        assert!(p < 1e-100, "p = {p}");
        assert!(p > 0.0);
        let p = ols_trend_test(&s, &years, TestSide::Less).unwrap().values()[0];
        assert!(p > 0.999);
    }

    #[test]
    fn trend_validation() {
        let s = DMatrix::zeros(1, 3);
        assert!(ols_trend_test(&s, &[1.0, 1.0, 1.0], TestSide::Greater).is_err());
        assert!(ols_trend_test(&DMatrix::zeros(1, 2), &[1.0, 2.0], TestSide::Greater).is_err());
        assert!(ols_trend_test(&s, &[1.0, 2.0, 3.0, 4.0], TestSide::Greater).is_err());
    }

    #[test]
    fn trend_matches_textbook_t() {
        // y = 1 + 0.5 x + e with fixed e; compare with an explicit normal-equation fit
        let years = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let e = [0.3, -0.1, -0.4, 0.2, 0.1, -0.2];
        let y: Vec<f64> = years.iter().zip(&e).map(|(x, e)| 1.0 + 0.5 * x + e).collect();
        let x = DMatrix::from_fn(6, 2, |i, j| if j == 0 { 1.0 } else { years[i] });
        let yv = DMatrix::from_column_slice(6, 1, &y);
        let beta = (x.transpose() * &x).try_inverse().unwrap() * x.transpose() * &yv;
        let resid = &yv - &x * &beta;
        let s2 = resid.norm_squared() / 4.0;
        let cov = (x.transpose() * &x).try_inverse().unwrap() * s2;
        let t = beta[1] / cov[(1, 1)].sqrt();
        let p = ols_trend_test(&DMatrix::from_row_slice(1, 6, &y), &years, TestSide::Greater)
            .unwrap()
            .values()[0];
        assert_relative_eq!(p, t_cdf_quadrature(-t, 4.0), max_relative = 1e-8);
    }

    fn noise_set(n: usize, g: usize, seed: u64) -> FunctionalSampleSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let curves = DMatrix::from_fn(n, g, |_, _| StandardNormal.sample(&mut rng));
        let x: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        FunctionalSampleSet::with_intercept(curves, &x).unwrap()
    }

    #[test]
    fn observed_statistic_is_squared_ols_t() {
        let data = noise_set(10, 3, 5);
        let fl = FreedmanLane::new(&data).unwrap();
        let obs = fl.statistics(&data.curves);
        let x = &data.design;
        let xtx_inv = (x.transpose() * x).try_inverse().unwrap();
        for g in 0..3 {
            let y = data.curves.column(g).into_owned();
            let beta = &xtx_inv * x.transpose() * &y;
            let s2 = (&y - x * &beta).norm_squared() / 8.0;
            let t = beta[1] / (s2 * xtx_inv[(1, 1)]).sqrt();
            assert_relative_eq!(obs[g], t * t, max_relative = 1e-10);
        }
    }

    #[test]
    fn permutation_pvalues_on_lattice() {
        let data = noise_set(10, 20, 1);
        let res = permutation_test(&data, 199, 3).unwrap();
        for &p in res.pointwise.values().iter().chain(res.fmax.values()) {
            let k = p * 200.0;
            assert!((k - k.round()).abs() < 1e-9 && k.round() >= 1.0 && k.round() <= 200.0);
        }
        for (f, p) in res.fmax.values().iter().zip(res.pointwise.values()) {
            assert!(f >= p);
        }
    }

    #[test]
    fn permutation_is_deterministic() {
        let data = noise_set(8, 15, 2);
        let a = freedman_lane_pvalues(&data, 99, 42).unwrap();
        let b = freedman_lane_pvalues(&data, 99, 42).unwrap();
        assert_eq!(a, b);
        let c = freedman_lane_pvalues(&data, 99, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn single_point_fmax_equals_pointwise() {
        let data = noise_set(10, 1, 9);
        let res = permutation_test(&data, 199, 1).unwrap();
        assert_eq!(res.pointwise, res.fmax);
    }

    #[test]
    fn minimum_pvalue_is_one_over_b_plus_one() {
        // a huge effect: no permutation reaches the observed statistic
        let n = 10;
        let x: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let curves = DMatrix::from_fn(n, 2, |i, g| 100.0 * x[i] + 0.01 * ((i * 7 + g * 3) % 5) as f64);
        let data = FunctionalSampleSet::with_intercept(curves, &x).unwrap();
        let p = freedman_lane_pvalues(&data, 99, 0).unwrap();
        assert!(p.values().iter().all(|&v| v == 0.01));
    }

    #[test]
    fn sample_set_validation() {
        let c = DMatrix::zeros(4, 3);
        assert!(FunctionalSampleSet::with_intercept(c.clone(), &[1.0; 4]).is_err());
        assert!(FunctionalSampleSet::new(c.clone(), DMatrix::from_element(4, 1, 1.0), 1).is_err());
        assert!(FunctionalSampleSet::new(DMatrix::zeros(2, 3), DMatrix::from_element(2, 1, 1.0), 0).is_err());
        assert!(FunctionalSampleSet::with_intercept(c, &[0.0, 1.0, 2.0, 3.0]).is_ok());
        let data = noise_set(5, 2, 0);
        assert!(permutation_test(&data, 50, 0).is_err());
    }
}
