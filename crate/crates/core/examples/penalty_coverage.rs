//! Penalty coverage: a far away pixel is skipped once its penalty is
//! cheaper than the detour, both for the approximation and the optimum.

use std::collections::BTreeMap;
use std::error::Error;

use turncover::approx::approx_tour;
use turncover::exact::{brute_force_tour, solve_exact_tour, ExactOptions};
use turncover::grid::{build_grid_instance, Coverage, Pixel};
use turncover::rational::{format_rational, Rational};

fn main() -> Result<(), Box<dyn Error>> {
    // A 2x2 block with a corridor of four pixels leading to an outlier.
    let mut px: Vec<Pixel> = (0..2).flat_map(|x| (0..2).map(move |y| Pixel::new(x, y))).collect();
    px.extend((2..7).map(|x| Pixel::new(x, 0)));
    let outlier = Pixel::new(6, 0);

    for pen in [1, 2, 4, 8] {
        let mut penalties = BTreeMap::new();
        for &p in &px[..4] {
            penalties.insert(p, Rational::from_integer(10));
        }
        penalties.insert(outlier, Rational::from_integer(pen));
        let inst = build_grid_instance(px.clone(), Coverage::Penalty(penalties), 0.into(), 1.into())?;
        let exact = solve_exact_tour(&inst, &ExactOptions::default())?;
        let approx = approx_tour(&inst)?;
        let (_, brute) = brute_force_tour(&inst)?;
        let visits = exact.cover.covered().contains(&outlier);
        println!(
            "outlier penalty {pen}: optimum {} (brute {}), visits outlier {visits}, approx {} (factor {})",
            format_rational(&exact.value),
            format_rational(&brute),
            format_rational(&approx.cost.total),
            approx.guarantee
        );
    }
    Ok(())
}
