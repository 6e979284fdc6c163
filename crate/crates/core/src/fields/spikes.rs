use crate::error::{invalid, Result};
use crate::grid::WeightedGrid;

/// Base radius of each cone.
pub const SPIKE_RADIUS: f64 = 0.1;

/// Cone apexes on `{0.25, 0.5, 0.75}^2` with their signs. Signs alternate
/// in a checkerboard with `(0.25, 0.25)` positive: five up, four down.
pub fn spike_centers() -> [(f64, f64, f64); 9] {
    let pos = [0.25, 0.5, 0.75];
    std::array::from_fn(|k| {
        let (ix, iy) = (k / 3, k % 3);
        let sign = if (ix + iy) % 2 == 0 { 1.0 } else { -1.0 };
        (pos[ix], pos[iy], sign)
    })
}

/// Height of the nine-cone signal at `(x, y)`.
pub fn spike_value(x: f64, y: f64) -> f64 {
    spike_centers()
        .iter()
        .map(|&(cx, cy, sign)| {
            let r = (x - cx).hypot(y - cy);
            sign * (1.0 - r / SPIKE_RADIUS).max(0.0)
        })
        .sum()
}

/// The nine-cone signal evaluated on a grid in the unit square.
pub fn spike_signal(grid: &WeightedGrid) -> Result<Vec<f64>> {
    if grid.dim() != 2 {
        return invalid(format!("spike signal needs a 2D grid, got {}D", grid.dim()));
    }
    if let Some(p) = grid.points().find(|p| p.iter().any(|c| !(0.0..=1.0).contains(c))) {
        return invalid(format!("grid point {p:?} lies outside the unit square"));
    }
    Ok(grid.points().map(|p| spike_value(p[0], p[1])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_lattice, GridSpec};

    #[test]
    fn apex_values_and_signs() {
        assert_eq!(spike_value(0.25, 0.25), 1.0);
        assert_eq!(spike_value(0.5, 0.25), -1.0);
        assert_eq!(spike_value(0.5, 0.5), 1.0);
        assert_eq!(spike_value(0.75, 0.5), -1.0);
        assert_eq!(spike_value(0.05, 0.05), 0.0);
        let positives = spike_centers().iter().filter(|c| c.2 > 0.0).count();
        assert_eq!(positives, 5);
    }

    #[test]
    fn linear_decay() {
        assert!((spike_value(0.30, 0.25) - 0.5).abs() < 1e-12);
        assert!((spike_value(0.5, 0.32) + 0.3).abs() < 1e-12);
        assert!((spike_value(0.5, 0.57) - 0.3).abs() < 1e-12);
        assert_eq!(spike_value(0.25, 0.36), 0.0);
    }

    #[test]
    fn null_fraction_on_fine_lattice() {
        let g = build_lattice(&GridSpec::unit_square(600).unwrap()).unwrap();
        let s = spike_signal(&g).unwrap();
        assert!(s.iter().all(|v| (-1.0..=1.0).contains(v)));
        let zero: Vec<bool> = s.iter().map(|&v| v == 0.0).collect();
        let frac = g.measure_of(&zero) / g.total_weight();
        assert!((frac - 0.717).abs() < 0.001, "null fraction {frac}");
    }

    #[test]
    fn rejects_wrong_dimension() {
        let g = build_lattice(&GridSpec::unit_interval(10).unwrap()).unwrap();
        assert!(spike_signal(&g).is_err());
    }
}
