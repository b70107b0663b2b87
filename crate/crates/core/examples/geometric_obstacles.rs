//! Points with allowed passing directions among polygonal obstacles:
//! a single turn-cost path, then a cover and a tour.

use std::error::Error;

use turncover::geometry::{
    approx_geo_cycle_cover, approx_geo_tour, turn_cost_shortest_path, GeoConfiguration, GeoCoverage, GeoPoint, GeometricInstance, Polygon,
};
use turncover::rational::Rational;

fn main() -> Result<(), Box<dyn Error>> {
    let p = |x: i64, y: i64| GeoPoint::new(x, y);
    let deg = |d: i64| Rational::from_integer(d);
    let points = vec![p(0, 0), p(6, 0), p(6, 5), p(0, 5), p(3, 8)];
    let angles = vec![vec![deg(0), deg(90)], vec![deg(90)], vec![deg(0)], vec![deg(45), deg(135)], vec![deg(0)]];
    let obstacles = vec![
        Polygon::new(vec![p(2, 1), p(4, 1), p(4, 3), p(2, 3)]),
        Polygon::new(vec![p(1, 6), p(2, 6), p(1, 7)]),
    ];
    let gi = GeometricInstance::new(points, angles, obstacles, GeoCoverage::Full, 1.into(), 2.into())?;
    let vg = gi.visibility();
    println!("visibility graph: {} vertices, {} edges", vg.vertices.len(), vg.edge_count());

    let a = GeoConfiguration::new(p(0, 0), 0.0);
    let b = GeoConfiguration::new(p(6, 5), 0.0);
    let path = turn_cost_shortest_path(&gi, a, b)?;
    let bends: Vec<(f64, f64)> = path.polyline.iter().map(|q| q.to_f64()).collect();
    println!("path cost {:.4} (length {:.4}, turning {:.4} rad) via {bends:?}", path.cost, path.length, path.turning);

    let cover = approx_geo_cycle_cover(&gi)?;
    println!(
        "cover: {} cycles, cost {:.4}, LP bound {:.4}, factor {:?}, within {}",
        cover.cover.cycles.len(),
        cover.report.total,
        cover.lp_bound,
        cover.guarantee,
        cover.within_guarantee()
    );
    let tour = approx_geo_tour(&gi)?;
    println!("tour:  cost {:.4}, valid {}", tour.report.total, tour.report.is_valid());
    Ok(())
}
