//! Exhaustive solvers for tiny instances, used as oracles.
//!
//! `W(S)`, the cheapest closed walk whose pixel set is exactly `S`, comes
//! from a shortest path search over (visited set, configuration) started at
//! the smallest pixel of `S`. Covers and tours are then small set DPs.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::ExactError;
use crate::grid::{Coverage, Cycle, CycleCover, GridInstance, Heading};
use crate::rational::{from_units, Rational};

pub const BRUTE_FORCE_LIMIT: usize = 12;

const INF: i64 = i64::MAX / 4;

struct Search {
    states: usize,
    dist: Vec<i64>,
    pred: Vec<usize>,
}

impl Search {
    /// Cheapest return to the start configuration having visited `mask`.
    fn closing(&self, mask: usize, s0: usize) -> i64 {
        self.dist[mask * self.states + s0]
    }
}

/// Dijkstra from configuration state `s0` over walks that stay on pixels
/// `>= s0 / 4`. Returning to `s0` is an ordinary state, so walks may pass
/// their start several times.
fn search(inst: &GridInstance, s0: usize) -> Search {
    let n = inst.len();
    let states = 4 * n;
    let p0 = s0 / 4;
    let (k, t) = (inst.kappa_units(), inst.tau_units());
    let size = (1usize << n) * states;
    let mut dist = vec![INF; size];
    let mut pred = vec![usize::MAX; size];
    let start = (1 << p0) * states + s0;
    dist[start] = 0;
    let mut heap = BinaryHeap::from([Reverse((0i64, start))]);
    while let Some(Reverse((d, key))) = heap.pop() {
        if d > dist[key] {
            continue;
        }
        let (mask, s) = (key / states, key % states);
        let (p, h) = (s / 4, Heading::from_index(s % 4));
        let mut next = vec![(4 * p + h.clockwise().index(), mask, t), (4 * p + h.counter_clockwise().index(), mask, t)];
        if let Some(q) = inst.neighbor(p, h).filter(|&q| q >= p0) {
            next.push((4 * q + h.index(), mask | 1 << q, k));
        }
        for (s2, m2, c) in next {
            let k2 = m2 * states + s2;
            if d + c < dist[k2] {
                dist[k2] = d + c;
                pred[k2] = key;
                heap.push(Reverse((d + c, k2)));
            }
        }
    }
    Search { states, dist, pred }
}

struct Walks {
    /// Cost of `W(S)` per pixel set, `INF` when no closed walk has exactly
    /// that pixel set.
    cost: Vec<i64>,
    /// Start state of the cheapest walk.
    start: Vec<usize>,
}

fn closed_walks(inst: &GridInstance) -> Walks {
    let n = inst.len();
    let mut cost = vec![INF; 1 << n];
    let mut start = vec![0; 1 << n];
    for s0 in 0..4 * n {
        let found = search(inst, s0);
        let p0 = s0 / 4;
        // Walks start at their smallest pixel; single pixels are not cycles.
        for mask in (0..1usize << n).filter(|m| m.trailing_zeros() as usize == p0 && m.count_ones() >= 2) {
            let c = found.closing(mask, s0);
            if c < cost[mask] {
                cost[mask] = c;
                start[mask] = s0;
            }
        }
    }
    Walks { cost, start }
}

fn walk(inst: &GridInstance, walks: &Walks, mask: usize) -> Cycle {
    let s0 = walks.start[mask];
    let found = search(inst, s0);
    let mut key = found.pred[mask * found.states + s0];
    let mut states = Vec::new();
    while key != usize::MAX {
        states.push(key % found.states);
        key = found.pred[key];
    }
    states.reverse();
    Cycle::new(states.into_iter().map(|s| inst.configuration(s)).collect()).expect("search yields valid cycles")
}

fn check_size(inst: &GridInstance) -> Result<(), ExactError> {
    if inst.len() > BRUTE_FORCE_LIMIT {
        return Err(ExactError::TooLarge { pixels: inst.len(), limit: BRUTE_FORCE_LIMIT });
    }
    Ok(())
}

fn masks(inst: &GridInstance) -> (usize, Vec<i64>) {
    let n = inst.len();
    let all = (1 << n) - 1;
    let pen: Vec<i64> = (0..n).map(|p| inst.penalty_units(p)).collect();
    let required = match inst.coverage() {
        Coverage::Full => all,
        Coverage::Subset(_) => (0..n).filter(|&p| inst.is_required(p)).fold(0, |m, p| m | 1 << p),
        Coverage::Penalty(_) => (0..n).filter(|&p| pen[p] > 0).fold(0, |m, p| m | 1 << p),
    };
    (required, pen)
}

fn penalty_of(pen: &[i64], mask: usize) -> i64 {
    (0..pen.len()).filter(|&p| mask >> p & 1 == 1).map(|p| pen[p]).sum()
}

/// Optimal cycle cover by enumeration (at most [`BRUTE_FORCE_LIMIT`]
/// pixels). Returns the cover and its cost.
pub fn brute_force_cycle_cover(inst: &GridInstance) -> Result<(CycleCover, Rational), ExactError> {
    check_size(inst)?;
    let walks = closed_walks(inst);
    let (required, pen) = masks(inst);
    let full = 1usize << inst.len();
    let usable: Vec<usize> = (0..full).filter(|&s| walks.cost[s] < INF).collect();
    // best[R]: cheapest cycles covering R (they may visit more), and the
    // cycle taken for its lowest pixel.
    let mut best = vec![(INF, 0usize); full];
    best[0] = (0, 0);
    for r in 1..full {
        if r & !required != 0 {
            continue;
        }
        let low = r & r.wrapping_neg();
        for &s in usable.iter().filter(|&&s| s & low != 0) {
            let rest = best[r & !s].0;
            if rest < INF && walks.cost[s] + rest < best[r].0 {
                best[r] = (walks.cost[s] + rest, s);
            }
        }
    }
    let penalty = matches!(inst.coverage(), Coverage::Penalty(_));
    let target = if penalty {
        // Subsets of the penalty pixels that get covered.
        let mut t = 0;
        let mut u = required;
        loop {
            if best[u].0 < INF && best[u].0 + penalty_of(&pen, required & !u) < best[t].0 + penalty_of(&pen, required & !t) {
                t = u;
            }
            if u == 0 {
                break;
            }
            u = (u - 1) & required;
        }
        t
    } else {
        required
    };
    if best[target].0 >= INF {
        return Err(ExactError::Infeasible);
    }
    let mut cycles = Vec::new();
    let mut r = target;
    while r != 0 {
        let s = best[r].1;
        cycles.push(walk(inst, &walks, s));
        r &= !s;
    }
    let units = best[target].0 + if penalty { penalty_of(&pen, required & !target) } else { 0 };
    Ok((CycleCover::new(cycles), from_units(units, inst.scale())))
}

/// Optimal tour by enumeration (at most [`BRUTE_FORCE_LIMIT`] pixels).
pub fn brute_force_tour(inst: &GridInstance) -> Result<(CycleCover, Rational), ExactError> {
    check_size(inst)?;
    let (required, pen) = masks(inst);
    let penalty = matches!(inst.coverage(), Coverage::Penalty(_));
    if required == 0 {
        return Ok((CycleCover::default(), Rational::from_integer(0)));
    }
    let walks = closed_walks(inst);
    let full = 1usize << inst.len();
    let mut best: Option<(i64, usize)> = penalty.then_some((penalty_of(&pen, required), 0));
    for s in 0..full {
        if walks.cost[s] >= INF || (!penalty && s & required != required) {
            continue;
        }
        let c = walks.cost[s] + if penalty { penalty_of(&pen, required & !s) } else { 0 };
        if best.is_none_or(|(b, _)| c < b) {
            best = Some((c, s));
        }
    }
    let (units, s) = best.ok_or(ExactError::Infeasible)?;
    let cycles = if s == 0 { Vec::new() } else { vec![walk(inst, &walks, s)] };
    Ok((CycleCover::new(cycles), from_units(units, inst.scale())))
}
