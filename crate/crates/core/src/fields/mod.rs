//! Synthetic signals and noise for the simulation studies.

mod matern;
mod spikes;
mod spline;

pub use matern::{bessel_k, matern_correlation, matern_covariance, matern_field, MaternGenerator, MaternSpec};
pub use spikes::{spike_centers, spike_signal, spike_value, SPIKE_RADIUS};
pub use spline::{bspline_design, noise_curve, spline_noise, step_null_mask, step_signal, SplineBasis};
