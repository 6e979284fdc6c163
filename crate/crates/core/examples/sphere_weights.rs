//! Area weights of a 1-degree longitude/latitude tiling.
//!
//! cargo run --example sphere_weights

use ffdr::grid::sphere_grid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = sphere_grid(360, 180)?;
    println!("{} tiles, total weight {:.12}", grid.len(), grid.total_weight());

    // latitude index j sits at -89.5 + j; longitude index 0 comes first
    let weight_at = |lat: f64| grid.weights()[(lat + 89.5) as usize];
    for lat in [0.5, 30.5, 60.5, 89.5] {
        println!(
            "lat {lat:>5}: weight {:.3e}, ratio to equator {:.6}, cos ratio {:.6}",
            weight_at(lat),
            weight_at(lat) / weight_at(0.5),
            lat.to_radians().cos() / 0.5f64.to_radians().cos()
        );
    }
    let north: Vec<bool> = grid.points().map(|p| p[1] > 60.0).collect();
    println!("share of the sphere north of 60N: {:.4}", grid.measure_of(&north));
    Ok(())
}
