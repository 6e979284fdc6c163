//! Per-tile temperature trend tests on the sphere with fBH adjustment.
//!
//! Input is a long CSV `lon,lat,year,temp` with tile-midpoint coordinates.
//! Each tile gets an OLS slope test for a positive trend; the p-values are
//! adjusted with the area measure `cos(latitude)`. Tiles missing any year
//! are excluded from testing and from the measure of the tested domain.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::engines::{ols_trend_test, TestSide};
use crate::error::{invalid, Error, Result};
use crate::fdr::{fbh_adjust, write_result, AdjustmentResult, PValueField};
use crate::grid::WeightedGrid;

/// Significance levels of the reference coverage table.
pub const DEFAULT_LEVELS: [f64; 4] = [0.10, 0.05, 0.01, 0.001];

/// Yearly temperatures per tile.
#[derive(Debug, Clone)]
pub struct ClimateCube {
    /// Tile midpoints as `(lon, lat)` with weights proportional to
    /// `cos(lat)`, normalized over all tiles present.
    pub grid: WeightedGrid,
    pub years: Vec<i32>,
    /// `tiles x years`; `NaN` marks a missing value.
    pub temps: DMatrix<f64>,
}

impl ClimateCube {
    pub fn new(tiles: Vec<(f64, f64)>, years: Vec<i32>, temps: DMatrix<f64>) -> Result<Self> {
        if years.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("years must be strictly increasing");
        }
        if temps.shape() != (tiles.len(), years.len()) {
            return invalid(format!(
                "temperature matrix is {:?}, expected ({}, {})",
                temps.shape(),
                tiles.len(),
                years.len()
            ));
        }
        if let Some(&(lon, lat)) = tiles
            .iter()
            .find(|(lon, lat)| !(lon.abs() < 180.0 && lat.abs() < 90.0))
        {
            return invalid(format!("tile ({lon}, {lat}) lies outside (-180,180) x (-90,90)"));
        }
        let cosines: Vec<f64> = tiles.iter().map(|t| t.1.to_radians().cos()).collect();
        let norm: f64 = cosines.iter().sum();
        let weights = cosines.into_iter().map(|c| c / norm).collect();
        let grid = WeightedGrid::from_points(tiles.iter().map(|&(a, b)| vec![a, b]).collect(), weights)?;
        Ok(Self { grid, years, temps })
    }

    pub fn tile_count(&self) -> usize {
        self.grid.len()
    }

    /// Tiles with a value for every year.
    pub fn complete_tiles(&self) -> Vec<bool> {
        self.temps
            .row_iter()
            .map(|row| row.iter().all(|v| !v.is_nan()))
            .collect()
    }
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.into(),
        line,
        message: message.into(),
    }
}

/// Read a long `lon,lat,year,temp` CSV.
///
/// `temp` may be empty, `NA` or `NaN` to mark a missing value. Rows of the
/// same tile must come in strictly increasing year order, and a
/// `(lon, lat, year)` triple may appear only once.
pub fn ingest_temperature_csv(path: &Path) -> Result<ClimateCube> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let header = rdr.headers()?.clone();
    if header.iter().ne(["lon", "lat", "year", "temp"]) {
        return Err(parse_error(path, 1, "expected header lon,lat,year,temp"));
    }

    let mut tile_index: HashMap<(u64, u64), usize> = HashMap::new();
    let mut tiles: Vec<(f64, f64)> = Vec::new();
    let mut last_year: Vec<(i32, u64)> = Vec::new();
    let mut seen: HashMap<(usize, i32), u64> = HashMap::new();
    let mut records: Vec<(usize, i32, f64)> = Vec::new();
    let mut years = BTreeSet::new();

    for (row, rec) in rdr.records().enumerate() {
        let line = row as u64 + 2;
        let rec = rec.map_err(|e| parse_error(path, line, e.to_string()))?;
        if rec.len() != 4 {
            return Err(parse_error(path, line, format!("expected 4 fields, found {}", rec.len())));
        }
        let num = |k: usize, name: &str| {
            rec[k]
                .parse::<f64>()
                .map_err(|_| parse_error(path, line, format!("{name} is not a number: {:?}", &rec[k])))
        };
        let lon = num(0, "lon")?;
        let lat = num(1, "lat")?;
        if !(lon.abs() < 180.0 && lat.abs() < 90.0) {
            return Err(parse_error(path, line, format!("tile ({lon}, {lat}) is off the globe")));
        }
        let year: i32 = rec[2]
            .parse()
            .map_err(|_| parse_error(path, line, format!("year is not an integer: {:?}", &rec[2])))?;
        let temp = match &rec[3] {
            "" | "NA" | "NaN" | "nan" => f64::NAN,
            _ => num(3, "temp")?,
        };
        if temp.is_infinite() {
            return Err(parse_error(path, line, "temp is infinite"));
        }

        let key = ((lon + 0.0).to_bits(), (lat + 0.0).to_bits());
        let tile = *tile_index.entry(key).or_insert_with(|| {
            tiles.push((lon, lat));
            last_year.push((i32::MIN, 0));
            tiles.len() - 1
        });
        if let Some(first) = seen.insert((tile, year), line) {
            return Err(parse_error(
                path,
                line,
                format!("duplicate entry for tile ({lon}, {lat}) year {year}; first seen on line {first}"),
            ));
        }
        let (prev, prev_line) = last_year[tile];
        if year < prev {
            return Err(parse_error(
                path,
                line,
                format!("year {year} for tile ({lon}, {lat}) follows year {prev} on line {prev_line}"),
            ));
        }
        last_year[tile] = (year, line);
        years.insert(year);
        records.push((tile, year, temp));
    }
    if tiles.is_empty() {
        return Err(parse_error(path, 1, "no rows"));
    }

    // order tiles by longitude, then latitude, like `sphere_grid`
    let mut order: Vec<usize> = (0..tiles.len()).collect();
    order.sort_by(|&a, &b| {
        tiles[a]
            .0
            .total_cmp(&tiles[b].0)
            .then(tiles[a].1.total_cmp(&tiles[b].1))
    });
    let mut rank = vec![0; tiles.len()];
    for (r, &t) in order.iter().enumerate() {
        rank[t] = r;
    }
    let years: Vec<i32> = years.into_iter().collect();
    let year_col: HashMap<i32, usize> = years.iter().enumerate().map(|(k, &y)| (y, k)).collect();
    let mut temps = DMatrix::from_element(tiles.len(), years.len(), f64::NAN);
    for (tile, year, temp) in records {
        temps[(rank[tile], year_col[&year])] = temp;
    }
    let sorted_tiles = order.iter().map(|&t| tiles[t]).collect();
    ClimateCube::new(sorted_tiles, years, temps)
}

/// Trend p-values over the tiles that have complete series.
#[derive(Debug, Clone)]
pub struct TrendField {
    /// Per tile of the cube: `true` if the tile was tested.
    pub tested: Vec<bool>,
    /// The tested tiles with their original weights.
    pub grid: WeightedGrid,
    pub pvalues: PValueField,
}

impl TrendField {
    /// P-value per cube tile, `None` for excluded tiles.
    pub fn per_tile(&self) -> Vec<Option<f64>> {
        let mut values = self.pvalues.values().iter();
        self.tested
            .iter()
            .map(|&t| if t { values.next().copied() } else { None })
            .collect()
    }
}

/// One-sided (positive) OLS trend test per complete tile.
pub fn climate_trend_pvalues(cube: &ClimateCube) -> Result<TrendField> {
    if cube.years.len() < 3 {
        return invalid(format!("need at least 3 years, got {}", cube.years.len()));
    }
    let tested = cube.complete_tiles();
    let rows: Vec<usize> = (0..cube.tile_count()).filter(|&i| tested[i]).collect();
    if rows.is_empty() {
        return invalid("every tile has missing years; nothing to test");
    }
    let series = cube.temps.select_rows(&rows);
    let years: Vec<f64> = cube.years.iter().map(|&y| f64::from(y)).collect();
    let pvalues = ols_trend_test(&series, &years, TestSide::Greater)?;
    let grid = cube.grid.subset(&tested)?;
    Ok(TrendField { tested, grid, pvalues })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub level: f64,
    pub unadjusted: f64,
    pub fbh_adjusted: f64,
}

/// Fraction of the tested area significant at each level, before and after
/// adjustment.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CoverageTable {
    pub rows: Vec<CoverageRow>,
}

impl CoverageTable {
    pub fn row(&self, level: f64) -> Option<&CoverageRow> {
        self.rows.iter().find(|r| r.level == level)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut wtr = csv::Writer::from_path(path)?;
        for r in &self.rows {
            wtr.serialize(r)?;
        }
        wtr.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }
}

/// Everything one climate run produces.
#[derive(Debug, Clone)]
pub struct ClimateRun {
    pub trend: TrendField,
    pub results: Vec<AdjustmentResult>,
    pub coverage: CoverageTable,
}

/// Summary of which tiles were tested, written next to the results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClimateMetadata {
    pub tiles: usize,
    pub tested_tiles: usize,
    pub excluded_tiles: usize,
    /// Share of the total area held by excluded tiles.
    pub excluded_area_fraction: f64,
    pub first_year: i32,
    pub last_year: i32,
    pub degrees_of_freedom: usize,
    pub missing_policy: String,
}

impl ClimateRun {
    pub fn metadata(&self, cube: &ClimateCube) -> ClimateMetadata {
        let excluded: Vec<bool> = self.trend.tested.iter().map(|t| !t).collect();
        ClimateMetadata {
            tiles: cube.tile_count(),
            tested_tiles: self.trend.grid.len(),
            excluded_tiles: excluded.iter().filter(|&&e| e).count(),
            excluded_area_fraction: cube.grid.measure_of(&excluded) / cube.grid.total_weight(),
            first_year: cube.years[0],
            last_year: *cube.years.last().expect("non-empty years"),
            degrees_of_freedom: cube.years.len() - 2,
            missing_policy: "tiles missing any year are excluded from testing and from the tested area"
                .into(),
        }
    }

    /// Write `results_<level>.csv` + `.json` per level, `coverage_table.csv`
    /// and `climate_metadata.json` into `dir`. Returns the written paths.
    pub fn write(&self, cube: &ClimateCube, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
        let mut written = Vec::new();
        for res in &self.results {
            let csv_path = dir.join(format!("results_{}.csv", res.alpha));
            let json_path = dir.join(format!("results_{}.json", res.alpha));
            write_result(
                &csv_path,
                &json_path,
                &self.trend.grid,
                &self.trend.pvalues,
                res,
                Some(&["lon", "lat"]),
            )?;
            written.push(csv_path);
            written.push(json_path);
        }
        let cov = dir.join("coverage_table.csv");
        self.coverage.write_csv(&cov)?;
        written.push(cov);
        let meta = dir.join("climate_metadata.json");
        let text = serde_json::to_string_pretty(&self.metadata(cube))?;
        std::fs::write(&meta, text + "\n").map_err(|e| Error::io(&meta, e))?;
        written.push(meta);
        Ok(written)
    }
}

/// Trend tests, sphere-weighted fBH at every level, and the coverage table.
pub fn run_climate(cube: &ClimateCube, levels: &[f64]) -> Result<ClimateRun> {
    if levels.is_empty() {
        return invalid("at least one significance level is required");
    }
    let trend = climate_trend_pvalues(cube)?;
    let grid = &trend.grid;
    let total = grid.total_weight();
    let mut results = Vec::with_capacity(levels.len());
    let mut rows = Vec::with_capacity(levels.len());
    for &level in levels {
        let res = fbh_adjust(&trend.pvalues, grid, level)?;
        let adjusted_mask = res.adjusted.threshold(level);
        rows.push(CoverageRow {
            level,
            unadjusted: grid.measure_of(&trend.pvalues.threshold(level)) / total,
            fbh_adjusted: grid.measure_of(&adjusted_mask) / total,
        });
        results.push(res);
    }
    Ok(ClimateRun {
        trend,
        results,
        coverage: CoverageTable { rows },
    })
}

/// Deterministic stand-in for the yearly temperature data.
///
/// Temperatures are a latitude profile plus a per-tile linear trend plus
/// Gaussian noise. The trend is `max_trend` times a smooth bump over the
/// northern mid-latitudes and the North Atlantic, zero elsewhere; with
/// `max_trend = 0` the cube is a global null.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticClimate {
    pub lon_res: usize,
    pub lat_res: usize,
    pub first_year: i32,
    pub last_year: i32,
    /// Largest slope in degrees per year.
    pub max_trend: f64,
    pub noise_sd: f64,
    /// Share of tiles that get one missing year.
    pub missing_fraction: f64,
    pub seed: u64,
}

impl Default for SyntheticClimate {
    fn default() -> Self {
        Self {
            lon_res: 36,
            lat_res: 18,
            first_year: 1983,
            last_year: 2007,
            max_trend: 0.05,
            noise_sd: 0.3,
            missing_fraction: 0.0,
            seed: 2007,
        }
    }
}

impl SyntheticClimate {
    fn trend_at(&self, lon: f64, lat: f64) -> f64 {
        let band = (-((lat - 45.0) / 20.0).powi(2)).exp();
        let atlantic = (-((lon + 40.0) / 30.0).powi(2) - ((lat - 50.0) / 15.0).powi(2)).exp();
        self.max_trend * band.max(atlantic)
    }

    /// Build the cube in memory.
    pub fn cube(&self) -> Result<ClimateCube> {
        if self.lon_res == 0 || self.lat_res == 0 || self.last_year - self.first_year < 2 {
            return invalid("synthetic climate needs tiles and at least 3 years");
        }
        if !(self.noise_sd > 0.0) || !(0.0..=1.0).contains(&self.missing_fraction) {
            return invalid("noise_sd must be positive and missing_fraction in [0, 1]");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let noise = Normal::new(0.0, self.noise_sd).expect("positive sd");
        let years: Vec<i32> = (self.first_year..=self.last_year).collect();
        let mut tiles = Vec::with_capacity(self.lon_res * self.lat_res);
        for i in 0..self.lon_res {
            for j in 0..self.lat_res {
                let lon = -180.0 + 360.0 * (i as f64 + 0.5) / self.lon_res as f64;
                let lat = -90.0 + 180.0 * (j as f64 + 0.5) / self.lat_res as f64;
                tiles.push((lon, lat));
            }
        }
        let mut temps = DMatrix::zeros(tiles.len(), years.len());
        for (k, &(lon, lat)) in tiles.iter().enumerate() {
            let base = 27.0 - 0.5 * lat.abs();
            let slope = self.trend_at(lon, lat);
            for (c, &y) in years.iter().enumerate() {
                temps[(k, c)] = base + slope * f64::from(y - self.first_year) + noise.sample(&mut rng);
            }
            if rand::Rng::random::<f64>(&mut rng) < self.missing_fraction {
                let c = rand::Rng::random_range(&mut rng, 0..years.len());
                temps[(k, c)] = f64::NAN;
            }
        }
        ClimateCube::new(tiles, years, temps)
    }

    /// Write the cube as a long CSV, missing values as `NA`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let cube = self.cube()?;
        write_cube_csv(&cube, path)
    }
}

/// Write a cube in the long `lon,lat,year,temp` format.
pub fn write_cube_csv(cube: &ClimateCube, path: &Path) -> Result<()> {
    let mut wtr = csv::Writer::from_path(path)?;
    wtr.write_record(["lon", "lat", "year", "temp"])?;
    for (k, p) in cube.grid.points().enumerate() {
        for (c, y) in cube.years.iter().enumerate() {
            let t = cube.temps[(k, c)];
            let temp = if t.is_nan() { "NA".to_string() } else { format!("{t:.4}") };
            wtr.write_record([p[0].to_string(), p[1].to_string(), y.to_string(), temp])?;
        }
    }
    wtr.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
