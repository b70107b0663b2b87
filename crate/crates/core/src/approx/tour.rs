use super::merge::{exchange, find_exchange, merge_intersecting_cycles, pixel_indices, splice_link, Link, PixelDistances};
use super::pcst::{mst, pcst_gw, Dsu};
use super::{ApproxError, ApproxResult, GUARANTEE_FULL_TOUR, GUARANTEE_PENALTY_TOUR, GUARANTEE_SUBSET_TOUR};
use crate::grid::{Cycle, CycleCover, GridInstance, TransitionTable};
use crate::rational::Rational;

/// Greedy full-coverage connection: merge intersecting cycles, then keep
/// joining the pair of cycles that is cheapest to join (ties to the smallest
/// cycle ids), either by exchanging adjacent antiparallel moves or by a
/// doubled path.
pub fn connect_tour_full_grid(cover: &CycleCover, inst: &GridInstance, lp_bound: Rational) -> Result<ApproxResult, ApproxError> {
    let table = TransitionTable::new(inst);
    let tour = greedy_connect(cover, inst, &table)?;
    Ok(ApproxResult::new(inst, tour, lp_bound, GUARANTEE_FULL_TOUR))
}

pub(crate) fn greedy_connect(cover: &CycleCover, inst: &GridInstance, table: &TransitionTable) -> Result<CycleCover, ApproxError> {
    let d = PixelDistances::new(inst, table);
    let tau = inst.tau_units();
    let mut cycles = merge_intersecting_cycles(cover, inst).cycles;
    while cycles.len() > 1 {
        let pix: Vec<Vec<usize>> = cycles.iter().map(|c| pixel_indices(inst, c)).collect();
        // (added cost, x, y, exchange positions or link)
        let mut best: Option<(i64, usize, usize, Result<(usize, usize), Link>)> = None;
        for x in 0..cycles.len() {
            for y in x + 1..cycles.len() {
                let mut cand: Option<(i64, Result<(usize, usize), Link>)> = None;
                if let Some(pos) = find_exchange(&cycles[x], &cycles[y]) {
                    cand = Some((4 * tau, Ok(pos)));
                }
                if let Some(l) = d.link(&pix[x], &pix[y]) {
                    let c = 2 * l.cost + 4 * tau;
                    if cand.as_ref().is_none_or(|&(cc, _)| c < cc) {
                        cand = Some((c, Err(l)));
                    }
                }
                if let Some((c, how)) = cand {
                    if best.as_ref().is_none_or(|b| c < b.0) {
                        best = Some((c, x, y, how));
                    }
                }
            }
        }
        let Some((_, x, y, how)) = best else {
            return Err(ApproxError::Disconnected);
        };
        let b = cycles.remove(y);
        cycles[x] = match how {
            Ok((i, j)) => exchange(&cycles[x], i, &b, j),
            Err(l) => splice_link(inst, &d, &cycles[x], &b, l),
        };
        cycles = merge_intersecting_cycles(&CycleCover::new(cycles), inst).cycles;
    }
    Ok(CycleCover::new(cycles))
}

/// Subset connection: merge intersecting cycles, then double a minimum
/// spanning tree of the cycles under orientation-free transition costs.
pub fn connect_tour_mst(cover: &CycleCover, inst: &GridInstance, lp_bound: Rational) -> Result<ApproxResult, ApproxError> {
    let table = TransitionTable::new(inst);
    let tour = mst_connect(cover, inst, &table)?;
    Ok(ApproxResult::new(inst, tour, lp_bound, GUARANTEE_SUBSET_TOUR))
}

/// Complete graph on cycles weighted by their cheapest links.
fn cycle_graph(inst: &GridInstance, d: &PixelDistances, cycles: &[Cycle]) -> (Vec<(usize, usize, i64)>, Vec<Link>) {
    let pix: Vec<Vec<usize>> = cycles.iter().map(|c| pixel_indices(inst, c)).collect();
    let mut edges = Vec::new();
    let mut links = Vec::new();
    for x in 0..cycles.len() {
        for y in x + 1..cycles.len() {
            if let Some(l) = d.link(&pix[x], &pix[y]) {
                edges.push((x, y, l.cost));
                links.push(l);
            }
        }
    }
    (edges, links)
}

/// Splices the cycles along the given tree edges.
fn join_along(inst: &GridInstance, d: &PixelDistances, cycles: Vec<Cycle>, edges: &[(usize, usize, i64)], links: &[Link], tree: &[usize]) -> Vec<Cycle> {
    let mut slot: Vec<Option<Cycle>> = cycles.into_iter().map(Some).collect();
    let mut dsu = Dsu::new(slot.len());
    for &e in tree {
        let (x, y) = (dsu.find(edges[e].0), dsu.find(edges[e].1));
        let (a, b) = (slot[x].take().unwrap(), slot[y].take().unwrap());
        let merged = splice_link(inst, d, &a, &b, links[e]);
        dsu.union(x, y);
        slot[dsu.find(x)] = Some(merged);
    }
    slot.into_iter().flatten().collect()
}

pub(crate) fn mst_connect(cover: &CycleCover, inst: &GridInstance, table: &TransitionTable) -> Result<CycleCover, ApproxError> {
    let d = PixelDistances::new(inst, table);
    let cycles = merge_intersecting_cycles(cover, inst).cycles;
    if cycles.len() <= 1 {
        return Ok(CycleCover::new(cycles));
    }
    let (edges, links) = cycle_graph(inst, &d, &cycles);
    let tree = mst(cycles.len(), &edges)?;
    let joined = join_along(inst, &d, cycles, &edges, &links, &tree);
    Ok(merge_intersecting_cycles(&CycleCover::new(joined), inst))
}

/// Penalty connection: cycles become vertices whose prize is the penalty of
/// their pixels; a prize-collecting tree decides which cycles to keep and
/// how to connect them. Falls back to the empty tour when that is cheaper.
pub fn connect_tour_pcst(cover: &CycleCover, inst: &GridInstance, lp_bound: Rational) -> Result<ApproxResult, ApproxError> {
    let table = TransitionTable::new(inst);
    let tour = pcst_connect(cover, inst, &table)?;
    Ok(ApproxResult::new(inst, tour, lp_bound, GUARANTEE_PENALTY_TOUR))
}

pub(crate) fn pcst_connect(cover: &CycleCover, inst: &GridInstance, table: &TransitionTable) -> Result<CycleCover, ApproxError> {
    let d = PixelDistances::new(inst, table);
    let cycles = merge_intersecting_cycles(cover, inst).cycles;
    let candidate = if cycles.len() <= 1 {
        CycleCover::new(cycles)
    } else {
        let prizes: Vec<i64> = cycles.iter().map(|c| pixel_indices(inst, c).into_iter().map(|i| inst.penalty_units(i)).sum()).collect();
        let (edges, links) = cycle_graph(inst, &d, &cycles);
        let sol = pcst_gw(cycles.len(), &edges, &prizes);
        let kept: Vec<Cycle> = sol.vertices.iter().map(|&v| cycles[v].clone()).collect();
        let mut remap = vec![usize::MAX; cycles.len()];
        for (k, &v) in sol.vertices.iter().enumerate() {
            remap[v] = k;
        }
        let sub: Vec<(usize, usize, i64)> = edges.iter().map(|&(x, y, w)| (remap[x], remap[y], w)).collect();
        let joined = join_along(inst, &d, kept, &sub, &links, &sol.edges);
        merge_intersecting_cycles(&CycleCover::new(joined), inst)
    };
    let empty = CycleCover::default();
    let (with, without) = (tour_units(inst, &candidate), tour_units(inst, &empty));
    Ok(if without < with { empty } else { candidate })
}

/// Walk cost plus penalties of unvisited pixels, in instance units.
pub(crate) fn tour_units(inst: &GridInstance, cover: &CycleCover) -> i64 {
    let covered = cover.covered();
    let walk = cover.moves() * inst.kappa_units() + cover.turns() * inst.tau_units();
    let paid: i64 = (0..inst.len()).filter(|&i| !covered.contains(&inst.pixels()[i])).map(|i| inst.penalty_units(i)).sum();
    walk + paid
}
