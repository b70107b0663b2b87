//! The pieces under the approximation: atomic strips, the metric closure,
//! the strip LP, and the minimum weight perfect matching on the dominant
//! strips.

use std::error::Error;

use turncover::approx::round_strip_solution;
use turncover::grid::{build_grid_instance, Coverage, Pixel};
use turncover::lp::{build_cover_lp, solve_cover_lp, write_lp_format};
use turncover::matching::{brute_force_matching, min_weight_perfect_matching};
use turncover::rational::format_rational;
use turncover::strips::{check_pseudo_triangle, strips_from_grid};

fn main() -> Result<(), Box<dyn Error>> {
    // L-shaped instance.
    let px = [(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)].map(|(x, y)| Pixel::new(x, y));
    let inst = build_grid_instance(px, Coverage::Full, 1.into(), 1.into())?;
    let gs = strips_from_grid(&inst)?;
    let g = &gs.graph;
    println!("{} owners, {} strips, {} endpoints", g.owner_count(), g.strip_count(), g.endpoint_count());
    println!("triangle violations after closure: {}", check_pseudo_triangle(g).len());

    let lp = solve_cover_lp(g)?;
    println!("strip LP value {} (certified {})", format_rational(&lp.value), lp.solution.certified);
    let text = write_lp_format(&build_cover_lp(g).lp);
    println!("LP export: {} lines, first: {}", text.lines().count(), text.lines().next().unwrap_or(""));

    let (cycles, m) = round_strip_solution(g, &lp)?;
    println!("matching of the dominant endpoints: {:?}, cost {}", m.pairs, m.cost);
    println!("{} strip cycles after rounding", cycles.len());

    // The matching routine on its own, checked against enumeration.
    let edges = [(0, 1, 4), (0, 2, 1), (0, 3, 3), (1, 2, 2), (1, 3, 1), (2, 3, 5)];
    let blossom = min_weight_perfect_matching(4, &edges)?;
    let brute = brute_force_matching(4, &edges)?;
    println!("K4 matching {:?} cost {} (brute force {})", blossom.pairs, blossom.cost, brute.cost);
    Ok(())
}
