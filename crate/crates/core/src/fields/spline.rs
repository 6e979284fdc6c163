use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};

/// Clamped B-spline basis on `[0, 1]` with equally spaced interior knots.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineBasis {
    pub degree: usize,
    pub n_basis: usize,
    pub knots: Vec<f64>,
}

impl SplineBasis {
    /// `n_basis` clamped basis functions of the given degree. The first and
    /// last knots have multiplicity `degree + 1`; the `n_basis - degree - 1`
    /// interior knots split `[0, 1]` evenly.
    pub fn clamped_uniform(degree: usize, n_basis: usize) -> Result<Self> {
        if n_basis < degree + 1 {
            return invalid(format!(
                "{n_basis} basis functions are too few for degree {degree}"
            ));
        }
        let interior = n_basis - degree - 1;
        let intervals = (interior + 1) as f64;
        let knots = std::iter::repeat_n(0.0, degree + 1)
            .chain((1..=interior).map(|k| k as f64 / intervals))
            .chain(std::iter::repeat_n(1.0, degree + 1))
            .collect();
        Ok(Self {
            degree,
            n_basis,
            knots,
        })
    }

    /// The 40-function cubic basis of the 1D study.
    pub fn cubic40() -> Self {
        Self::clamped_uniform(3, 40).expect("valid basis")
    }

    /// Index `s` with `knots[s] <= t < knots[s + 1]`, restricted to the
    /// non-degenerate spans.
    fn span(&self, t: f64) -> usize {
        let p = self.degree;
        let n = self.n_basis;
        if t >= self.knots[n] {
            return n - 1;
        }
        let (mut lo, mut hi) = (p, n);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if t < self.knots[mid] {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }

    /// The `degree + 1` basis functions that are non-zero at `t`, starting
    /// at index `span - degree`.
    fn nonzero_basis(&self, span: usize, t: f64) -> Vec<f64> {
        let p = self.degree;
        let k = &self.knots;
        let mut n = vec![0.0; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        n[0] = 1.0;
        for j in 1..=p {
            left[j] = t - k[span + 1 - j];
            right[j] = k[span + j] - t;
            let mut saved = 0.0;
            for r in 0..j {
                let tmp = n[r] / (right[r + 1] + left[j - r]);
                n[r] = saved + right[r + 1] * tmp;
                saved = left[j - r] * tmp;
            }
            n[j] = saved;
        }
        n
    }

    /// Values of all basis functions at `t`.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut row = vec![0.0; self.n_basis];
        let span = self.span(t);
        for (offset, v) in self.nonzero_basis(span, t).into_iter().enumerate() {
            row[span - self.degree + offset] = v;
        }
        row
    }
}

/// Design matrix `B[i, j] = B_j(grid[i])` for points strictly inside `(0, 1)`.
pub fn bspline_design(basis: &SplineBasis, grid: &[f64]) -> Result<DMatrix<f64>> {
    if let Some(t) = grid.iter().find(|&&t| !(t > 0.0 && t < 1.0)) {
        return invalid(format!("spline grid point {t} is outside (0, 1)"));
    }
    let mut design = DMatrix::zeros(grid.len(), basis.n_basis);
    for (i, &t) in grid.iter().enumerate() {
        let span = basis.span(t);
        for (offset, v) in basis.nonzero_basis(span, t).into_iter().enumerate() {
            design[(i, span - basis.degree + offset)] = v;
        }
    }
    Ok(design)
}

/// `d * f(t)` where `f` has its first `h` coefficients equal to one.
pub fn step_signal(basis: &SplineBasis, h: usize, d: f64, grid: &[f64]) -> Result<Vec<f64>> {
    if h > basis.n_basis {
        return invalid(format!("h = {h} exceeds {} basis functions", basis.n_basis));
    }
    let design = bspline_design(basis, grid)?;
    Ok(design
        .row_iter()
        .map(|row| d * row.iter().take(h).sum::<f64>())
        .collect())
}

/// Exact null set of [`step_signal`]: the signal vanishes iff `d = 0`,
/// `h = 0`, or `t` lies at or beyond the right end of the support of the
/// `h`-th basis function, `knots[h + degree]`.
pub fn step_null_mask(basis: &SplineBasis, h: usize, d: f64, grid: &[f64]) -> Vec<bool> {
    if d == 0.0 || h == 0 {
        return vec![true; grid.len()];
    }
    let end = basis.knots[(h + basis.degree).min(basis.knots.len() - 1)];
    grid.iter().map(|&t| t >= end).collect()
}

/// One noise curve: the basis expansion with i.i.d. standard normal
/// coefficients drawn from `seed`.
pub fn spline_noise(basis: &SplineBasis, grid: &[f64], seed: u64) -> Result<Vec<f64>> {
    let design = bspline_design(basis, grid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(noise_curve(&design, &mut rng))
}

/// A noise curve from a precomputed design matrix and a caller-owned RNG.
pub fn noise_curve(design: &DMatrix<f64>, rng: &mut impl rand::Rng) -> Vec<f64> {
    let coefs: Vec<f64> = (0..design.ncols()).map(|_| StandardNormal.sample(rng)).collect();
    design
        .row_iter()
        .map(|row| row.iter().zip(&coefs).map(|(b, c)| b * c).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Textbook Cox-de Boor recursion, with 0/0 read as 0.
    fn cox_de_boor(k: &[f64], i: usize, p: usize, t: f64) -> f64 {
        if p == 0 {
            let last = k[k.len() - 1];
            return if (k[i] <= t && t < k[i + 1]) || (t == last && k[i] < t && k[i + 1] == last) {
                1.0
            } else {
                0.0
            };
        }
        let a = if k[i + p] > k[i] {
            (t - k[i]) / (k[i + p] - k[i]) * cox_de_boor(k, i, p - 1, t)
        } else {
            0.0
        };
        let b = if k[i + p + 1] > k[i + 1] {
            (k[i + p + 1] - t) / (k[i + p + 1] - k[i + 1]) * cox_de_boor(k, i + 1, p - 1, t)
        } else {
            0.0
        };
        a + b
    }

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect()
    }

    #[test]
    fn knot_layout() {
        let b = SplineBasis::cubic40();
        assert_eq!(b.knots.len(), 44);
        assert_eq!(&b.knots[..4], &[0.0; 4]);
        assert_eq!(&b.knots[40..], &[1.0; 4]);
        assert_relative_eq!(b.knots[4], 1.0 / 37.0);
        // n_basis = interior knots + degree + 1
        let interior = b.knots.iter().filter(|&&k| k > 0.0 && k < 1.0).count();
        assert_eq!(interior + 4, 40);
    }

    #[test]
    fn matches_recursive_definition() {
        let b = SplineBasis::cubic40();
        for &t in &[0.001, 0.013, 0.25, 0.5, 0.62, 0.98, 0.9999] {
            let fast = b.eval(t);
            for (j, v) in fast.iter().enumerate() {
                assert_relative_eq!(*v, cox_de_boor(&b.knots, j, 3, t), epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn partition_of_unity() {
        let b = SplineBasis::cubic40();
        let d = bspline_design(&b, &grid(1000)).unwrap();
        for row in d.row_iter() {
            assert!((row.sum() - 1.0).abs() < 1e-10);
            assert!(row.iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
    }

    #[test]
    fn first_basis_is_local() {
        let b = SplineBasis::cubic40();
        let g = grid(500);
        let d = bspline_design(&b, &g).unwrap();
        for (i, &t) in g.iter().enumerate() {
            if t >= b.knots[4] {
                assert_eq!(d[(i, 0)], 0.0);
            }
        }
        assert!(d[(0, 0)] > 0.8);
    }

    #[test]
    fn design_rejects_boundary() {
        let b = SplineBasis::cubic40();
        assert!(bspline_design(&b, &[0.0, 0.5]).is_err());
        assert!(bspline_design(&b, &[0.5, 1.0]).is_err());
    }

    #[test]
    fn step_signal_extremes() {
        let b = SplineBasis::cubic40();
        let g = grid(200);
        let full = step_signal(&b, 40, 3.0, &g).unwrap();
        assert!(full.iter().all(|&v| (v - 3.0).abs() < 1e-10));
        assert!(step_signal(&b, 0, 3.0, &g).unwrap().iter().all(|&v| v == 0.0));
        assert!(step_signal(&b, 20, 0.0, &g).unwrap().iter().all(|&v| v == 0.0));
        assert!(step_signal(&b, 41, 1.0, &g).is_err());
    }

    #[test]
    fn null_mask_matches_signal_support() {
        let b = SplineBasis::cubic40();
        let g = grid(1000);
        for h in [1, 10, 20, 30, 39, 40] {
            let s = step_signal(&b, h, 1.0, &g).unwrap();
            let mask = step_null_mask(&b, h, 1.0, &g);
            for ((&v, &null), &t) in s.iter().zip(&mask).zip(&g) {
                assert_eq!(v == 0.0, null, "h = {h}, t = {t}, v = {v}");
            }
        }
    }

    #[test]
    fn noise_is_seeded() {
        let b = SplineBasis::cubic40();
        let g = grid(50);
        assert_eq!(spline_noise(&b, &g, 7).unwrap(), spline_noise(&b, &g, 7).unwrap());
        assert_ne!(spline_noise(&b, &g, 7).unwrap(), spline_noise(&b, &g, 8).unwrap());
    }

    #[test]
    fn noise_moments() {
        let b = SplineBasis::cubic40();
        let g = vec![0.1, 0.37, 0.5, 0.83];
        let design = bspline_design(&b, &g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 10_000;
        let mut sum = vec![0.0; g.len()];
        let mut sq = vec![0.0; g.len()];
        for _ in 0..draws {
            for (k, v) in noise_curve(&design, &mut rng).into_iter().enumerate() {
                sum[k] += v;
                sq[k] += v * v;
            }
        }
        for k in 0..g.len() {
            let mean = sum[k] / draws as f64;
            let var = sq[k] / draws as f64 - mean * mean;
            let expected: f64 = design.row(k).iter().map(|b| b * b).sum();
            assert!(mean.abs() < 0.05, "mean {mean}");
            assert!((var / expected - 1.0).abs() < 0.05, "var {var} vs {expected}");
        }
    }
}
