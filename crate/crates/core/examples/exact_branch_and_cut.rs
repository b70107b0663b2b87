//! Exact cycle cover and tour of a random polyomino whose cheapest cover
//! falls apart into several cycles, so the tour needs connectivity cuts.

use std::error::Error;

use turncover::exact::{brute_force_tour, solve_exact_cycle_cover, solve_exact_tour, CutKind, ExactOptions};
use turncover::generate::{gen_instance, GenKind, GenParams};
use turncover::rational::format_rational;

fn main() -> Result<(), Box<dyn Error>> {
    let params = GenParams { pixels: 12, kappa: 1.into(), tau: 2.into(), ..GenParams::default() };
    let inst = gen_instance(GenKind::RandomPolyomino, &params, 7)?;
    let opts = ExactOptions::default();

    let cover = solve_exact_cycle_cover(&inst, &opts)?;
    println!("cover: value {} in {} cycles, {} nodes", format_rational(&cover.value), cover.cover.cycles.len(), cover.nodes);

    let tour = solve_exact_tour(&inst, &opts)?;
    println!("tour:  value {}, root bound {}, {} nodes", format_rational(&tour.value), format_rational(&tour.root_bound), tour.nodes);
    for kind in [CutKind::Simple, CutKind::Advanced, CutKind::Global, CutKind::Flow] {
        println!("  {kind:?} cuts: {}", tour.cuts.count(kind));
    }
    for line in tour.log.iter().take(10) {
        println!("  {line}");
    }
    // Every cut is valid for the optimal tour.
    let x = turncover::exact::TraversalModel::new(&inst).counts(&inst, &tour.cover);
    assert!(tour.cuts.violated_by(&x).is_empty());

    let (_, brute) = brute_force_tour(&inst)?;
    println!("brute force tour value {}", format_rational(&brute));
    assert_eq!(brute, tour.value);
    Ok(())
}
