//! Functional false discovery rate control.
//!
//! The functional Benjamini-Hochberg procedure (fBH) controls the expected
//! proportion of falsely rejected *measure* when a hypothesis is tested at
//! every point of a continuous domain. On a finite grid it reduces to a
//! weighted BH procedure whose weights are the cell measures.
//!
//! - [`fdr`]: discrete, weighted and functional BH, adjusted p-values,
//!   measure-based error metrics.
//! - [`grid`]: weighted lattices, sphere tilings and nested refinement.
//! - [`engines`]: t-tests, OLS trend tests and Freedman-Lane permutation
//!   tests with Fmax adjustment.
//! - [`fields`]: spline noise, conical spikes and Matérn random fields.
//! - [`experiments`]: the 1D and 2D simulation studies and the convergence
//!   study.
//! - [`climate`]: temperature trend tests on the sphere.
//! - [`cli`]: the `ffdr` command line.

pub mod error;
pub mod fdr;
pub mod grid;
pub mod engines;
pub mod fields;
pub mod experiments;
pub mod climate;
pub mod cli;

pub use error::{Error, Result};
