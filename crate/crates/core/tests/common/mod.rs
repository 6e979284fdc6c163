#![allow(dead_code)]

use rand::Rng;

/// Exhaustive BH without sorting: the threshold is the largest observed
/// value `v` with `v <= (#{p_j <= v} / m) * alpha`.
pub fn brute_force_bh(p: &[f64], alpha: f64) -> Vec<bool> {
    let m = p.len() as f64;
    let threshold = p
        .iter()
        .copied()
        .filter(|&v| {
            let count = p.iter().filter(|&&q| q <= v).count();
            v <= (count as f64 / m) * alpha
        })
        .fold(None, |best: Option<f64>, v| Some(best.map_or(v, |b| b.max(v))));
    p.iter().map(|&v| threshold.is_some_and(|t| v <= t)).collect()
}

/// Weighted analogue: largest `v` with `v <= alpha * sum_{p_j <= v} w_j`.
pub fn brute_force_weighted_bh(p: &[f64], w: &[f64], alpha: f64) -> Vec<bool> {
    let threshold = p
        .iter()
        .copied()
        .filter(|&v| {
            let mass: f64 = p.iter().zip(w).filter(|(&q, _)| q <= v).map(|(_, &x)| x).sum();
            v <= alpha * mass
        })
        .fold(None, |best: Option<f64>, v| Some(best.map_or(v, |b| b.max(v))));
    p.iter().map(|&v| threshold.is_some_and(|t| v <= t)).collect()
}

/// Random p-vector; about a third of the vectors draw from a coarse set so
/// that ties occur.
pub fn random_pvalues(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    if rng.random_bool(1.0 / 3.0) {
        (0..m).map(|_| f64::from(rng.random_range(0..20u32)) / 200.0).collect()
    } else {
        (0..m).map(|_| rng.random::<f64>().powi(3)).collect()
    }
}

/// Random strictly positive weights summing to one.
pub fn random_weights(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Kolmogorov-Smirnov distance between a sample and Uniform(0, 1).
pub fn ks_uniform(sample: &[f64]) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let x = x.clamp(0.0, 1.0);
            (x - i as f64 / n).abs().max(((i + 1) as f64 / n - x).abs())
        })
        .fold(0.0, f64::max)
}
