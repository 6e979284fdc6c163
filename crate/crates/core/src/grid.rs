//! Finite grids carrying a measure.
//!
//! A [`WeightedGrid`] is a finite set of points in a box of `R^d` together
//! with strictly positive weights. The weights are the measure: every
//! downstream computation (cumulated p-value function, rejected measure,
//! error rates) is a weight sum, and no density is ever re-evaluated.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// An open axis-aligned box with a number of cells per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub bounds: Vec<(f64, f64)>,
    pub resolution: Vec<usize>,
}

impl GridSpec {
    pub fn new(bounds: Vec<(f64, f64)>, resolution: Vec<usize>) -> Result<Self> {
        let spec = Self { bounds, resolution };
        spec.validate()?;
        Ok(spec)
    }

    /// The unit interval `(0, 1)` split into `n` cells.
    pub fn unit_interval(n: usize) -> Result<Self> {
        Self::new(vec![(0.0, 1.0)], vec![n])
    }

    /// The unit square `(0, 1)^2` split into `side x side` cells.
    pub fn unit_square(side: usize) -> Result<Self> {
        Self::new(vec![(0.0, 1.0); 2], vec![side, side])
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.bounds.is_empty() {
            return invalid("grid spec needs at least one axis");
        }
        if self.bounds.len() != self.resolution.len() {
            return invalid(format!(
                "grid spec has {} bounds but {} resolutions",
                self.bounds.len(),
                self.resolution.len()
            ));
        }
        for (axis, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return invalid(format!(
                    "axis {axis}: lower bound {lo} must be strictly less than upper bound {hi}"
                ));
            }
        }
        if let Some(axis) = self.resolution.iter().position(|&r| r == 0) {
            return invalid(format!("axis {axis}: resolution must be at least 1"));
        }
        Ok(())
    }

    pub fn volume(&self) -> f64 {
        self.bounds.iter().map(|(lo, hi)| hi - lo).product()
    }

    pub fn cell_volume(&self) -> f64 {
        self.bounds
            .iter()
            .zip(&self.resolution)
            .map(|((lo, hi), &n)| (hi - lo) / n as f64)
            .product()
    }

    pub fn point_count(&self) -> usize {
        self.resolution.iter().product()
    }

    /// Midpoint coordinate of cell `index` along `axis`.
    pub fn midpoint(&self, axis: usize, index: usize) -> f64 {
        let (lo, hi) = self.bounds[axis];
        let n = self.resolution[axis] as f64;
        lo + (hi - lo) * (index as f64 + 0.5) / n
    }
}

/// A finite point set with strictly positive weights realizing a measure.
///
/// Points are stored row-major: for a lattice the first axis varies slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGrid {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
    total_weight: f64,
    lattice: Option<GridSpec>,
}

impl WeightedGrid {
    /// Build a grid from explicit points and weights.
    pub fn from_points(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return invalid("grid needs at least one point");
        }
        if points.len() != weights.len() {
            return invalid(format!(
                "grid has {} points but {} weights",
                points.len(),
                weights.len()
            ));
        }
        let dim = points[0].len();
        if dim == 0 {
            return invalid("points must have at least one coordinate");
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return invalid(format!("point {i} has {} coordinates, expected {dim}", p.len()));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return invalid(format!("point {i} has a non-finite coordinate"));
            }
            coords.extend_from_slice(p);
        }
        if let Some(i) = weights.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
            return invalid(format!("weight {i} must be strictly positive, got {}", weights[i]));
        }
        let mut seen = HashSet::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            let key: Vec<u64> = p.iter().map(|c| (c + 0.0).to_bits()).collect();
            if !seen.insert(key) {
                return invalid(format!("point {i} duplicates an earlier point"));
            }
        }
        Ok(Self::assemble(dim, coords, weights, None))
    }

    fn assemble(dim: usize, coords: Vec<f64>, weights: Vec<f64>, lattice: Option<GridSpec>) -> Self {
        let total_weight = weights.iter().sum();
        Self {
            dim,
            coords,
            weights,
            total_weight,
            lattice,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// The lattice this grid was built from, if it is a midpoint lattice.
    pub fn lattice(&self) -> Option<&GridSpec> {
        self.lattice.as_ref()
    }

    /// Weights divided by the total weight, so they sum to one.
    pub fn normalized_weights(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w / self.total_weight).collect()
    }

    /// Total weight of the points where `mask` is set.
    pub fn measure_of(&self, mask: &[bool]) -> f64 {
        debug_assert_eq!(mask.len(), self.len());
        self.weights
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .fold(0.0, |acc, (w, _)| acc + w)
    }

    /// The sub-grid of points where `keep` is set, weights unchanged.
    pub fn subset(&self, keep: &[bool]) -> Result<Self> {
        if keep.len() != self.len() {
            return invalid(format!(
                "subset mask has length {}, grid has {} points",
                keep.len(),
                self.len()
            ));
        }
        let mut coords = Vec::new();
        let mut weights = Vec::new();
        for (i, _) in keep.iter().enumerate().filter(|(_, &k)| k) {
            coords.extend_from_slice(self.point(i));
            weights.push(self.weights[i]);
        }
        if weights.is_empty() {
            return invalid("subset selects no points");
        }
        Ok(Self::assemble(self.dim, coords, weights, None))
    }

    /// Write the grid as CSV with header `x1,...,xd,weight`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        self.write_csv_with(path, None)
    }

    /// Write the grid as CSV with an extra `value` column.
    pub fn write_field_csv(&self, path: &Path, values: &[f64]) -> Result<()> {
        if values.len() != self.len() {
            return invalid(format!(
                "field has {} values, grid has {} points",
                values.len(),
                self.len()
            ));
        }
        self.write_csv_with(path, Some(values))
    }

    fn write_csv_with(&self, path: &Path, values: Option<&[f64]>) -> Result<()> {
        let mut wtr = csv::Writer::from_path(path)?;
        let mut header: Vec<String> = (1..=self.dim).map(|k| format!("x{k}")).collect();
        header.push("weight".into());
        if values.is_some() {
            header.push("value".into());
        }
        wtr.write_record(&header)?;
        for (i, p) in self.points().enumerate() {
            let mut row: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            row.push(self.weights[i].to_string());
            if let Some(v) = values {
                row.push(v[i].to_string());
            }
            wtr.write_record(&row)?;
        }
        wtr.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    /// Read a grid written by [`WeightedGrid::write_csv`].
    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path)?;
        let header = rdr.headers()?.clone();
        let dim = header.len().saturating_sub(1);
        let expected: Vec<String> = (1..=dim)
            .map(|k| format!("x{k}"))
            .chain(std::iter::once("weight".to_string()))
            .collect();
        if dim == 0 || header.iter().ne(expected.iter().map(String::as_str)) {
            return Err(Error::Parse {
                path: path.into(),
                line: 1,
                message: format!("expected header {}", expected.join(",")),
            });
        }
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = row as u64 + 2;
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|_| Error::Parse {
                    path: path.into(),
                    line,
                    message: format!("not a number: {s:?}"),
                })
            };
            let vals = rec.iter().map(parse).collect::<Result<Vec<_>>>()?;
            weights.push(vals[dim]);
            points.push(vals[..dim].to_vec());
        }
        Self::from_points(points, weights)
    }
}

/// Per-point truth: `true` where the null hypothesis holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthMask {
    pub is_null: Vec<bool>,
}

impl TruthMask {
    pub fn new(is_null: Vec<bool>) -> Self {
        Self { is_null }
    }

    pub fn all_null(n: usize) -> Self {
        Self {
            is_null: vec![true; n],
        }
    }

    pub fn len(&self) -> usize {
        self.is_null.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_null.is_empty()
    }
}

/// Midpoint lattice of `spec` with each weight equal to the cell volume.
pub fn build_lattice(spec: &GridSpec) -> Result<WeightedGrid> {
    spec.validate()?;
    let dim = spec.dim();
    let n = spec.point_count();
    let mids: Vec<Vec<f64>> = (0..dim)
        .map(|axis| (0..spec.resolution[axis]).map(|i| spec.midpoint(axis, i)).collect())
        .collect();
    let mut coords = Vec::with_capacity(n * dim);
    let mut index = vec![0usize; dim];
    for _ in 0..n {
        coords.extend(index.iter().enumerate().map(|(axis, &i)| mids[axis][i]));
        for axis in (0..dim).rev() {
            index[axis] += 1;
            if index[axis] < spec.resolution[axis] {
                break;
            }
            index[axis] = 0;
        }
    }
    let weights = vec![spec.cell_volume(); n];
    Ok(WeightedGrid::assemble(dim, coords, weights, Some(spec.clone())))
}

/// Longitude/latitude tile midpoints over `(-180,180) x (-90,90)` with
/// weights proportional to `cos(latitude)`, normalized to total one.
///
/// Point `i` has longitude index `i / lat_res` and latitude index `i % lat_res`.
pub fn sphere_grid(lon_res: usize, lat_res: usize) -> Result<WeightedGrid> {
    let spec = GridSpec::new(vec![(-180.0, 180.0), (-90.0, 90.0)], vec![lon_res, lat_res])?;
    let lattice = build_lattice(&spec)?;
    let cosines: Vec<f64> = lattice.points().map(|p| p[1].to_radians().cos()).collect();
    let norm: f64 = cosines.iter().sum();
    let weights = cosines.into_iter().map(|c| c / norm).collect();
    Ok(WeightedGrid::assemble(2, lattice.coords, weights, None))
}

/// Subdivide every cell of a lattice by an odd `factor` per axis.
///
/// Odd subdivision keeps each old midpoint as the midpoint of the central
/// sub-cell, so the returned point set contains the input's.
pub fn refine(grid: &WeightedGrid, spec: &GridSpec, factor: usize) -> Result<WeightedGrid> {
    if factor < 2 {
        return invalid(format!("refinement factor must be at least 2, got {factor}"));
    }
    if factor.is_multiple_of(2) {
        return invalid(format!(
            "refinement factor must be odd so midpoints persist, got {factor}"
        ));
    }
    if grid.lattice() != Some(spec) {
        return invalid("grid was not built from the given lattice spec");
    }
    let finer = GridSpec::new(
        spec.bounds.clone(),
        spec.resolution.iter().map(|r| r * factor).collect(),
    )?;
    build_lattice(&finer)
}
