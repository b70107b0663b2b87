use super::ApproxError;
use crate::grid::{Configuration, Coverage, Cycle, CycleCover, CycleError, GridInstance};
use crate::lp::CoverLpSolution;
use crate::matching::{min_weight_perfect_matching_complete, Matching};
use crate::rational::INF;
use crate::strips::{alternating_cycles, GridStrips, StripCycle, StripGraph};

/// Rounds a fractional strip cover: keeps the dominant strip of every owner
/// and connects their endpoints by a minimum weight perfect matching.
pub fn round_strip_solution(g: &StripGraph, lp: &CoverLpSolution) -> Result<(Vec<StripCycle>, Matching), ApproxError> {
    let dominant = lp.dominant_strips(g);
    let verts: Vec<usize> = dominant.iter().flat_map(|&s| [2 * s, 2 * s + 1]).collect();
    let m = min_weight_perfect_matching_complete(verts.len(), |i, j| {
        let c = g.cost(verts[i], verts[j]);
        if c >= INF {
            INF / 4
        } else {
            c
        }
    })?;
    let pairs: Vec<(usize, usize)> = m.pairs.iter().map(|&(i, j)| (verts[i], verts[j])).collect();
    Ok((alternating_cycles(&dominant, &pairs), m))
}

/// Cheapest closed walk through the pixel of `c` that also visits another
/// pixel, starting and ending at `c`.
pub(crate) fn cheapest_loop(gs: &GridStrips, c: Configuration) -> Option<Cycle> {
    let inst = &gs.instance;
    let s = inst.state_id(c)?;
    let mut best = (INF, usize::MAX);
    for r in 0..inst.state_count() {
        if r / 4 == s / 4 {
            continue;
        }
        let cost = gs.table.cost(s, r).saturating_add(gs.table.cost(r, s));
        if cost < best.0 {
            best = (cost, r);
        }
    }
    if best.0 >= INF {
        return None;
    }
    let mut walk = gs.table.path(s, best.1);
    walk.extend_from_slice(&gs.table.path(best.1, s)[1..]);
    Some(Cycle::from_walk_unchecked(walk.into_iter().map(|x| inst.configuration(x)).collect()))
}

/// Realizes strip cycles on the grid. Cycles that collapse onto a single
/// pixel are dropped for penalty coverage (the pixel's penalty is paid
/// instead) and widened by a cheapest detour otherwise.
pub fn realize_cover(gs: &GridStrips, cycles: &[StripCycle]) -> CycleCover {
    let penalty = matches!(gs.instance.coverage(), Coverage::Penalty(_));
    let mut out = Vec::new();
    for sc in cycles {
        let Some(cy) = gs.realize(sc) else { continue };
        match cy.check() {
            Ok(()) => out.push(cy),
            Err(CycleError::SinglePixel) if !penalty => {
                if let Some(w) = cheapest_loop(gs, cy.steps()[0]) {
                    out.push(w);
                }
            }
            Err(CycleError::SinglePixel) => {}
            Err(e) => panic!("realized walk is malformed: {e}"),
        }
    }
    let mut cover = CycleCover::new(out);
    if penalty {
        drop_unprofitable(&gs.instance, &mut cover);
    }
    cover
}

/// Removes cycles that cost more than the penalties of the pixels only they
/// visit, until no such cycle is left.
pub fn drop_unprofitable(inst: &GridInstance, cover: &mut CycleCover) {
    use std::collections::HashMap;
    loop {
        let mut count: HashMap<usize, usize> = HashMap::new();
        for cy in &cover.cycles {
            for p in cy.pixels() {
                *count.entry(inst.index_of(p).unwrap()).or_default() += 1;
            }
        }
        let mut worst: Option<(i64, usize)> = None;
        for (k, cy) in cover.cycles.iter().enumerate() {
            let saved: i64 = cy
                .pixels()
                .iter()
                .map(|&p| inst.index_of(p).unwrap())
                .filter(|i| count[i] == 1)
                .map(|i| inst.penalty_units(i))
                .sum();
            let cost = cy.moves() * inst.kappa_units() + cy.turns() * inst.tau_units();
            let gain = cost - saved;
            if gain > 0 && worst.is_none_or(|(g, _)| gain > g) {
                worst = Some((gain, k));
            }
        }
        match worst {
            Some((_, k)) => {
                cover.cycles.remove(k);
            }
            None => return,
        }
    }
}
