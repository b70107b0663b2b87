//! Approximate minimum-turn cycle cover of a small room with a pillar,
//! compared against the strip LP bound.

use std::error::Error;

use turncover::approx::approx_cycle_cover;
use turncover::grid::{build_grid_instance, validate_cycle_cover, Coverage, Pixel};
use turncover::rational::format_rational;

fn main() -> Result<(), Box<dyn Error>> {
    // 5x4 room, pillar at (2, 1).
    let pixels = (0..5).flat_map(|x| (0..4).map(move |y| Pixel::new(x, y))).filter(|&p| p != Pixel::new(2, 1));
    let inst = build_grid_instance(pixels, Coverage::Full, 0.into(), 1.into())?;

    let r = approx_cycle_cover(&inst)?;
    let report = validate_cycle_cover(&inst, &r.cover);
    println!("pixels        {}", inst.len());
    println!("cycles        {}", r.cover.cycles.len());
    println!("turns         {}", r.cost.turns);
    println!("cost          {}", format_rational(&r.cost.total));
    println!("LP bound      {}", format_rational(&r.lp_bound));
    if let Some(ratio) = r.achieved_ratio {
        println!("cost / bound  {} (guarantee {})", format_rational(&ratio), r.guarantee);
    }
    println!("valid         {}", report.is_valid());
    for (i, c) in r.cover.cycles.iter().enumerate() {
        let steps: Vec<String> = c.steps().iter().map(|s| s.to_string()).collect();
        println!("cycle {i}: {}", steps.join(" "));
    }
    Ok(())
}
