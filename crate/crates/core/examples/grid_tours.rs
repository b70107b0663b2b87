//! One tour per coverage variant on the same office floor, with the proven
//! factor each tour is checked against.

use std::collections::{BTreeMap, BTreeSet};
use std::error::Error;

use turncover::approx::approx_tour;
use turncover::generate::{gen_instance, GenKind, GenParams};
use turncover::grid::{validate_tour, Coverage};
use turncover::rational::{format_rational, Rational};

fn main() -> Result<(), Box<dyn Error>> {
    let base = gen_instance(GenKind::Office, &GenParams { pixels: 40, ..GenParams::default() }, 11)?;
    let px = base.pixels();
    let subset: BTreeSet<_> = px.iter().copied().step_by(5).collect();
    let penalties: BTreeMap<_, _> = px.iter().enumerate().map(|(i, &p)| (p, Rational::from_integer(1 + (i % 4) as i64))).collect();

    for coverage in [Coverage::Full, Coverage::Subset(subset), Coverage::Penalty(penalties)] {
        let name = coverage.name();
        let inst = base.with_coverage(coverage)?;
        let r = approx_tour(&inst)?;
        let report = validate_tour(&inst, &r.cover);
        println!(
            "{name:8} cost {:>5}  bound {:>6}  factor {:>2}  within {}  valid {}  penalties {}",
            format_rational(&r.cost.total),
            format_rational(&r.lp_bound),
            r.guarantee,
            r.within_guarantee(),
            report.is_valid(),
            format_rational(&r.cost.penalties),
        );
    }
    Ok(())
}
