//! Stationary Gaussian fields with Matérn covariance, sampled by circulant
//! embedding on an enlarged periodic lattice.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};
use crate::grid::WeightedGrid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaternSpec {
    pub variance: f64,
    /// Scale parameter.
    pub range: f64,
    pub smoothness: f64,
}

impl Default for MaternSpec {
    fn default() -> Self {
        Self {
            variance: 1.0,
            range: 0.125,
            smoothness: 2.5,
        }
    }
}

impl MaternSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("variance", self.variance),
            ("range", self.range),
            ("smoothness", self.smoothness),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return invalid(format!("Matérn {name} must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

/// Modified Bessel function of the second kind, `K_nu(x)` for `x > 0`,
/// from `K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt`.
///
/// The integrand is analytic with double-exponential decay, so the
/// trapezoidal rule converges geometrically in the step size.
pub fn bessel_k(nu: f64, x: f64) -> f64 {
    assert!(x > 0.0, "bessel_k needs x > 0");
    let nu = nu.abs();
    // log of the integrand; cosh(nu t) is expanded to avoid overflow
    let log_f = |t: f64| -x * t.cosh() + nu * t + (0.5 * (1.0 + (-2.0 * nu * t).exp())).ln();
    let peak = (nu / x).asinh();
    let log_peak = log_f(peak);
    // stop once the integrand is below exp(-40) relative to its peak
    let mut upper = peak + 1.0;
    while log_f(upper) - log_peak > -40.0 {
        upper += 1.0;
    }
    let n = 400;
    let h = upper / n as f64;
    let mut s = 0.5 * (log_f(0.0) - log_peak).exp();
    for i in 1..n {
        s += (log_f(i as f64 * h) - log_peak).exp();
    }
    s += 0.5 * (log_f(upper) - log_peak).exp();
    s * h * log_peak.exp()
}

/// `C(h) / C(0)` for the Matérn family.
pub fn matern_correlation(distance: f64, range: f64, smoothness: f64) -> f64 {
    if distance == 0.0 {
        return 1.0;
    }
    let x = (2.0 * smoothness).sqrt() * distance / range;
    let log_scale = (1.0 - smoothness) * std::f64::consts::LN_2 - ln_gamma(smoothness);
    let k = bessel_k(smoothness, x);
    if k == 0.0 {
        return 0.0;
    }
    (log_scale + smoothness * x.ln() + k.ln()).exp()
}

/// `C(h) = sigma^2 2^(1-nu) / Gamma(nu) (sqrt(2 nu) h / rho)^nu K_nu(sqrt(2 nu) h / rho)`.
pub fn matern_covariance(distance: f64, spec: &MaternSpec) -> f64 {
    spec.variance * matern_correlation(distance, spec.range, spec.smoothness)
}

const MAX_EMBEDDING_FACTOR: usize = 8;
const NEGATIVE_EIGEN_TOL: f64 = 1e-8;

/// Circulant-embedding sampler for a fixed lattice and covariance.
///
/// Each FFT of complex white noise yields two independent fields (real and
/// imaginary parts); [`MaternGenerator::sample_pair`] returns both.
pub struct MaternGenerator {
    shape: [usize; 2],
    torus: [usize; 2],
    sqrt_eigen: Vec<f64>,
    fft_rows: Arc<dyn Fft<f64>>,
    fft_cols: Arc<dyn Fft<f64>>,
    embedding_factor: usize,
}

impl std::fmt::Debug for MaternGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MaternGenerator")
            .field("shape", &self.shape)
            .field("torus", &self.torus)
            .field("embedding_factor", &self.embedding_factor)
            .finish()
    }
}

impl MaternGenerator {
    /// Set up the sampler for a 1D or 2D midpoint lattice. The embedding
    /// factor starts at 2 and doubles up to 8 until the circulant spectrum
    /// is non-negative.
    pub fn new(grid: &WeightedGrid, spec: &MaternSpec) -> Result<Self> {
        Self::with_embedding_factor(grid, spec, 2)
    }

    pub fn with_embedding_factor(grid: &WeightedGrid, spec: &MaternSpec, factor: usize) -> Result<Self> {
        spec.validate()?;
        let lattice = match grid.lattice() {
            Some(l) if l.dim() <= 2 => l,
            _ => return invalid("Matérn sampling needs a 1D or 2D regular lattice"),
        };
        if factor < 2 {
            return invalid(format!("embedding factor must be at least 2, got {factor}"));
        }
        let shape = [lattice.resolution[0], lattice.resolution.get(1).copied().unwrap_or(1)];
        let spacing = [
            (lattice.bounds[0].1 - lattice.bounds[0].0) / shape[0] as f64,
            lattice.bounds.get(1).map_or(0.0, |b| (b.1 - b.0) / shape[1] as f64),
        ];
        let mut factor = factor;
        loop {
            let torus = [
                shape[0] * factor,
                if shape[1] == 1 { 1 } else { shape[1] * factor },
            ];
            let mut planner = FftPlanner::new();
            let fft_rows = planner.plan_fft_forward(torus[1]);
            let fft_cols = planner.plan_fft_forward(torus[0]);

            let mut buf: Vec<Complex64> = (0..torus[0] * torus[1])
                .map(|idx| {
                    let (i, j) = (idx / torus[1], idx % torus[1]);
                    let di = i.min(torus[0] - i) as f64 * spacing[0];
                    let dj = j.min(torus[1] - j) as f64 * spacing[1];
                    Complex64::new(matern_covariance(di.hypot(dj), spec), 0.0)
                })
                .collect();
            fft2(&mut buf, torus, &*fft_rows, &*fft_cols);
            let eigen: Vec<f64> = buf.iter().map(|c| c.re).collect();
            let max = eigen.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min = eigen.iter().cloned().fold(f64::INFINITY, f64::min);
            if min >= -NEGATIVE_EIGEN_TOL * max {
                let m = (torus[0] * torus[1]) as f64;
                let sqrt_eigen = eigen.iter().map(|&l| (l.max(0.0) / m).sqrt()).collect();
                return Ok(Self {
                    shape,
                    torus,
                    sqrt_eigen,
                    fft_rows,
                    fft_cols,
                    embedding_factor: factor,
                });
            }
            if factor * 2 > MAX_EMBEDDING_FACTOR {
                return Err(Error::Embedding {
                    min_eigenvalue: min,
                    factor,
                });
            }
            factor *= 2;
        }
    }

    pub fn embedding_factor(&self) -> usize {
        self.embedding_factor
    }

    /// Number of lattice points per field.
    pub fn len(&self) -> usize {
        self.shape[0] * self.shape[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Two independent zero-mean fields in the grid's point order.
    pub fn sample_pair(&self, rng: &mut impl rand::Rng) -> (Vec<f64>, Vec<f64>) {
        let mut buf: Vec<Complex64> = self
            .sqrt_eigen
            .iter()
            .map(|&s| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(s * re, s * im)
            })
            .collect();
        fft2(&mut buf, self.torus, &*self.fft_rows, &*self.fft_cols);
        let mut a = Vec::with_capacity(self.len());
        let mut b = Vec::with_capacity(self.len());
        for i in 0..self.shape[0] {
            for c in &buf[i * self.torus[1]..i * self.torus[1] + self.shape[1]] {
                a.push(c.re);
                b.push(c.im);
            }
        }
        (a, b)
    }

    /// `count` independent fields.
    pub fn sample_many(&self, count: usize, rng: &mut impl rand::Rng) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(count + 1);
        while out.len() < count {
            let (a, b) = self.sample_pair(rng);
            out.push(a);
            out.push(b);
        }
        out.truncate(count);
        out
    }
}

/// In-place unnormalized 2D DFT of a row-major `shape[0] x shape[1]` buffer.
fn fft2(buf: &mut [Complex64], shape: [usize; 2], rows: &dyn Fft<f64>, cols: &dyn Fft<f64>) {
    let [n0, n1] = shape;
    if n1 > 1 {
        rows.process(buf);
    }
    if n0 > 1 {
        let mut column = vec![Complex64::new(0.0, 0.0); n0];
        for j in 0..n1 {
            for i in 0..n0 {
                column[i] = buf[i * n1 + j];
            }
            cols.process(&mut column);
            for i in 0..n0 {
                buf[i * n1 + j] = column[i];
            }
        }
    }
}

/// One Matérn field on a regular lattice, drawn from `seed`.
pub fn matern_field(grid: &WeightedGrid, spec: &MaternSpec, seed: u64) -> Result<Vec<f64>> {
    let generator = MaternGenerator::new(grid, spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(generator.sample_pair(&mut rng).0)
}
