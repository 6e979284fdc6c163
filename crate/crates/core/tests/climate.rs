use ffdr::climate::{
    climate_trend_pvalues, ingest_temperature_csv, run_climate, ClimateCube, SyntheticClimate, DEFAULT_LEVELS,
};
use ffdr::grid::sphere_grid;
use std::path::Path;

fn fixture() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/synthetic_climate.csv")
}

#[test]
fn bundled_fixture_runs() {
    let cube = ingest_temperature_csv(&fixture()).unwrap();
    assert_eq!(cube.tile_count(), 648);
    assert_eq!(cube.years.len(), 25);
    let run = run_climate(&cube, &DEFAULT_LEVELS).unwrap();
    assert_eq!(run.coverage.rows.len(), 4);
    for r in &run.coverage.rows {
        assert!(r.fbh_adjusted <= r.unadjusted);
    }
    let dir = tempfile::tempdir().unwrap();
    let written = run.write(&cube, dir.path()).unwrap();
    assert!(written.iter().all(|p| p.exists()));
    let table = std::fs::read_to_string(dir.path().join("coverage_table.csv")).unwrap();
    assert_eq!(table.lines().next(), Some("level,unadjusted,fbh_adjusted"));
    let results = std::fs::read_to_string(dir.path().join("results_0.05.csv")).unwrap();
    assert!(results.starts_with("lon,lat,p,p_adjusted,rejected\n"));
    assert_eq!(results.lines().count(), 1 + run.trend.grid.len());
}

#[test]
fn full_resolution_cube_has_64800_tiles() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("full.csv");
    let generator = SyntheticClimate {
        lon_res: 360,
        lat_res: 180,
        ..SyntheticClimate::default()
    };
    generator.write_csv(&path).unwrap();
    let cube = ingest_temperature_csv(&path).unwrap();
    assert_eq!(cube.tile_count(), 64_800);
    // the ingested tiling carries the same measure as the reference sphere grid
    let reference = sphere_grid(360, 180).unwrap();
    for (a, b) in cube.grid.weights().iter().zip(reference.weights()) {
        assert!((a - b).abs() < 1e-15);
    }
    for (p, q) in cube.grid.points().zip(reference.points()) {
        assert!((p[0] - q[0]).abs() < 1e-9 && (p[1] - q[1]).abs() < 1e-9);
    }
    let trend = climate_trend_pvalues(&cube).unwrap();
    assert_eq!(trend.pvalues.len(), 64_800);
}

#[test]
fn excluded_tiles_move_coverage_by_at_most_their_share() {
    let generator = SyntheticClimate::default();
    let full = generator.cube().unwrap();
    let base = run_climate(&full, &DEFAULT_LEVELS).unwrap();

    // knock out one year in every 13th tile
    let mut temps = full.temps.clone();
    for k in (0..full.tile_count()).step_by(13) {
        temps[(k, 4)] = f64::NAN;
    }
    let tiles = full.grid.points().map(|p| (p[0], p[1])).collect();
    let holed = ClimateCube::new(tiles, full.years.clone(), temps).unwrap();
    let run = run_climate(&holed, &DEFAULT_LEVELS).unwrap();
    let e = run.metadata(&holed).excluded_area_fraction;
    assert!(e > 0.0);
    for (a, b) in base.coverage.rows.iter().zip(&run.coverage.rows) {
        // nu(R n T') / nu(T') lies in [(c - e) / (1 - e), c / (1 - e)]
        assert!((a.unadjusted - b.unadjusted).abs() <= e / (1.0 - e) + 1e-12, "{a:?} vs {b:?}");
    }
    // excluded tiles carry no p-value
    let per_tile = run.trend.per_tile();
    for (k, p) in per_tile.iter().enumerate() {
        assert_eq!(p.is_none(), k % 13 == 0);
    }
}

#[test]
fn coverage_grows_with_level() {
    let cube = SyntheticClimate {
        max_trend: 0.02,
        ..SyntheticClimate::default()
    }
    .cube()
    .unwrap();
    let levels = [0.001, 0.01, 0.05, 0.10, 0.2];
    let run = run_climate(&cube, &levels).unwrap();
    for w in run.coverage.rows.windows(2) {
        assert!(w[0].unadjusted <= w[1].unadjusted);
        assert!(w[0].fbh_adjusted <= w[1].fbh_adjusted);
    }
}
