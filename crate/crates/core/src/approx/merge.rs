//! Splicing cycles together: at shared pixels, by exchanging two adjacent
//! antiparallel moves, or by a doubled connecting path.

use std::collections::HashMap;

use crate::grid::{Configuration, Cycle, CycleCover, GridInstance, Heading, Pixel, TransitionTable};
use crate::rational::INF;

/// Configurations visited while turning on the spot from `a` to `b`,
/// excluding the start. U-turns go clockwise.
fn rotation(p: Pixel, a: Heading, b: Heading) -> Vec<Configuration> {
    match a.turns_to(b) {
        0 => Vec::new(),
        1 => vec![Configuration::new(p, b)],
        _ => vec![Configuration::new(p, a.clockwise()), Configuration::new(p, b)],
    }
}

/// Both cycles pass the same pixel at `a[i]` and `b[j]`: walk `a` up to `i`,
/// turn into `b`, run all of `b`, turn back and finish `a`.
pub fn splice_at(a: &Cycle, i: usize, b: &Cycle, j: usize) -> Cycle {
    let (ca, cb) = (a.steps()[i], b.steps()[j]);
    assert_eq!(ca.pixel, cb.pixel, "splice needs a shared pixel");
    let mut walk = a.steps()[..=i].to_vec();
    walk.extend(rotation(ca.pixel, ca.heading, cb.heading));
    walk.extend_from_slice(&b.rotated(j).steps()[1..]);
    walk.push(cb);
    walk.extend(rotation(cb.pixel, cb.heading, ca.heading));
    walk.extend_from_slice(&a.steps()[i + 1..]);
    Cycle::from_walk_unchecked(walk)
}

/// Attaches `b` to `a` by a path from the pixel of `a[i]` to the pixel of
/// `b[j]` that is walked once in each direction.
pub fn splice_along(a: &Cycle, i: usize, b: &Cycle, j: usize, path: &[Configuration]) -> Cycle {
    let (ca, cb) = (a.steps()[i], b.steps()[j]);
    let (first, last) = (path[0], *path.last().unwrap());
    assert_eq!(first.pixel, ca.pixel);
    assert_eq!(last.pixel, cb.pixel);
    let mut walk = a.steps()[..=i].to_vec();
    walk.extend(rotation(ca.pixel, ca.heading, first.heading));
    walk.extend_from_slice(&path[1..]);
    walk.extend(rotation(cb.pixel, last.heading, cb.heading));
    walk.extend_from_slice(&b.rotated(j).steps()[1..]);
    walk.push(cb);
    walk.extend(rotation(cb.pixel, cb.heading, last.heading.opposite()));
    walk.extend(path.iter().rev().skip(1).map(|c| c.reversed()));
    walk.extend(rotation(ca.pixel, first.heading.opposite(), ca.heading));
    walk.extend_from_slice(&a.steps()[i + 1..]);
    Cycle::from_walk_unchecked(walk)
}

/// `a` moves from `a[i]` to `a[i+1]`, `b` moves the opposite way on the
/// neighbouring lane from `b[j]` to `b[j+1]`. Replaces both moves by two
/// crossing moves, which keeps the length and adds four turns.
pub fn exchange(a: &Cycle, i: usize, b: &Cycle, j: usize) -> Cycle {
    let (n_a, n_b) = (a.len(), b.len());
    let (p, q) = (a.steps()[i], a.steps()[(i + 1) % n_a]);
    let (q2, p2) = (b.steps()[j], b.steps()[(j + 1) % n_b]);
    let side = Heading::ALL.into_iter().find(|&h| p.pixel.step(h) == Some(p2.pixel)).expect("lanes are not adjacent");
    let mut walk = a.rotated(i + 1).steps().to_vec();
    // `walk` now ends at `p`; close it through `b`.
    walk.push(Configuration::new(p.pixel, side));
    walk.push(Configuration::new(p2.pixel, side));
    walk.extend_from_slice(b.rotated(j + 1).steps());
    walk.push(Configuration::new(q2.pixel, side.opposite()));
    walk.push(Configuration::new(q.pixel, side.opposite()));
    Cycle::from_walk_unchecked(walk)
}

/// Greedily merges cycles that share a pixel, cheapest merge first, until all
/// cycles are pixel-disjoint.
pub fn merge_intersecting_cycles(cover: &CycleCover, _inst: &GridInstance) -> CycleCover {
    let mut cycles = cover.cycles.clone();
    while let Some((_, x, i, y, j)) = cheapest_intersection(&cycles) {
        let b = cycles.remove(y);
        cycles[x] = splice_at(&cycles[x], i, &b, j);
    }
    CycleCover::new(cycles)
}

/// `(added turns, cycle x, position in x, cycle y > x, position in y)`.
fn cheapest_intersection(cycles: &[Cycle]) -> Option<(i64, usize, usize, usize, usize)> {
    let mut at: HashMap<Pixel, Vec<(usize, usize)>> = HashMap::new();
    for (k, c) in cycles.iter().enumerate() {
        for (pos, s) in c.steps().iter().enumerate() {
            at.entry(s.pixel).or_default().push((k, pos));
        }
    }
    let mut best: Option<(i64, usize, usize, usize, usize)> = None;
    for occ in at.values() {
        for &(x, i) in occ {
            for &(y, j) in occ {
                if y <= x {
                    continue;
                }
                let turns = 2 * cycles[x].steps()[i].heading.turns_to(cycles[y].steps()[j].heading);
                let cand = (turns, x, i, y, j);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
    }
    best
}

/// Cheapest pixel-to-pixel transitions ignoring the end headings.
pub(crate) struct PixelDistances<'a> {
    inst: &'a GridInstance,
    table: &'a TransitionTable,
    dist: Vec<(i64, u8, u8)>,
}

/// A cheapest connection between two cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Link {
    pub cost: i64,
    pub from: usize,
    pub to: usize,
}

impl<'a> PixelDistances<'a> {
    pub fn new(inst: &'a GridInstance, table: &'a TransitionTable) -> Self {
        let n = inst.len();
        let mut dist = vec![(INF, 0, 0); n * n];
        for u in 0..n {
            for v in 0..n {
                for hu in 0..4 {
                    for hv in 0..4 {
                        let c = table.cost(4 * u + hu, 4 * v + hv);
                        if c < dist[u * n + v].0 {
                            dist[u * n + v] = (c, hu as u8, hv as u8);
                        }
                    }
                }
            }
        }
        PixelDistances { inst, table, dist }
    }

    pub fn cost(&self, u: usize, v: usize) -> i64 {
        self.dist[u * self.inst.len() + v].0
    }

    /// Cheapest link between two pixel sets, ties to the smallest pixels.
    pub fn link(&self, a: &[usize], b: &[usize]) -> Option<Link> {
        let mut best: Option<Link> = None;
        for &u in a {
            for &v in b {
                let l = Link { cost: self.cost(u, v), from: u, to: v };
                if l.cost < INF && best.is_none_or(|b| l < b) {
                    best = Some(l);
                }
            }
        }
        best
    }

    pub fn path(&self, link: Link) -> Vec<Configuration> {
        let (_, hu, hv) = self.dist[link.from * self.inst.len() + link.to];
        self.table
            .path(4 * link.from + hu as usize, 4 * link.to + hv as usize)
            .into_iter()
            .map(|s| self.inst.configuration(s))
            .collect()
    }
}

pub(crate) fn pixel_indices(inst: &GridInstance, c: &Cycle) -> Vec<usize> {
    c.pixels().into_iter().map(|p| inst.index_of(p).expect("cycle leaves the instance")).collect()
}

pub(crate) fn position_of(c: &Cycle, p: Pixel) -> usize {
    c.steps().iter().position(|s| s.pixel == p).expect("pixel not on cycle")
}

/// Joins two disjoint cycles along a link (doubling its path).
pub(crate) fn splice_link(inst: &GridInstance, d: &PixelDistances, a: &Cycle, b: &Cycle, link: Link) -> Cycle {
    let path = d.path(link);
    let i = position_of(a, inst.pixels()[link.from]);
    let j = position_of(b, inst.pixels()[link.to]);
    if path.len() == 1 || link.from == link.to {
        return splice_at(a, i, b, j);
    }
    splice_along(a, i, b, j, &path)
}

/// Finds a pair of adjacent antiparallel moves of `a` and `b`:
/// positions `(i, j)` such that [`exchange`] applies.
pub(crate) fn find_exchange(a: &Cycle, b: &Cycle) -> Option<(usize, usize)> {
    let nb = b.len();
    let mut moves_b: HashMap<(Configuration, Configuration), usize> = HashMap::new();
    for j in 0..nb {
        let (s, t) = (b.steps()[j], b.steps()[(j + 1) % nb]);
        if s.pixel != t.pixel {
            moves_b.entry((s, t)).or_insert(j);
        }
    }
    let na = a.len();
    for i in 0..na {
        let (p, q) = (a.steps()[i], a.steps()[(i + 1) % na]);
        if p.pixel == q.pixel {
            continue;
        }
        let d = p.heading;
        for side in [d.counter_clockwise(), d.clockwise()] {
            let (Some(p2), Some(q2)) = (p.pixel.step(side), q.pixel.step(side)) else { continue };
            let key = (Configuration::new(q2, d.opposite()), Configuration::new(p2, d.opposite()));
            if let Some(&j) = moves_b.get(&key) {
                return Some((i, j));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid_instance, cycle_cost, validate_cycle_cover, Coverage, Heading::*};
    use crate::rational::Rational;

    fn c(x: i32, y: i32, h: Heading) -> Configuration {
        Configuration::new(Pixel::new(x, y), h)
    }

    fn domino_h(x: i32, y: i32) -> Cycle {
        Cycle::new(vec![c(x, y, East), c(x + 1, y, East), c(x + 1, y, North), c(x + 1, y, West), c(x, y, West), c(x, y, South)])
            .unwrap()
    }

    fn domino_v(x: i32, y: i32) -> Cycle {
        Cycle::new(vec![c(x, y, North), c(x, y + 1, North), c(x, y + 1, East), c(x, y + 1, South), c(x, y, South), c(x, y, West)])
            .unwrap()
    }

    fn full(px: &[(i32, i32)]) -> GridInstance {
        build_grid_instance(px.iter().map(|&(x, y)| Pixel::new(x, y)), Coverage::Full, 0.into(), 1.into()).unwrap()
    }

    #[test]
    fn crossing_dominoes_merge_within_four_turns() {
        let inst = full(&[(0, 0), (1, 0), (0, 1)]);
        let cover = CycleCover::new(vec![domino_h(0, 0), domino_v(0, 0)]);
        let merged = merge_intersecting_cycles(&cover, &inst);
        assert_eq!(merged.cycles.len(), 1);
        merged.cycles[0].check().unwrap();
        assert!(merged.turns() <= cover.turns() + 4);
        assert!(validate_cycle_cover(&inst, &merged).is_valid());
    }

    #[test]
    fn shared_u_turn_merges_for_free() {
        // Both dominoes u-turn at (1,0).
        let inst = full(&[(0, 0), (1, 0), (2, 0)]);
        let right = Cycle::new(vec![c(1, 0, East), c(2, 0, East), c(2, 0, North), c(2, 0, West), c(1, 0, West), c(1, 0, South)]).unwrap();
        let cover = CycleCover::new(vec![domino_h(0, 0), right]);
        let merged = merge_intersecting_cycles(&cover, &inst);
        assert_eq!(merged.cycles.len(), 1);
        assert_eq!(merged.turns(), cover.turns());
        assert_eq!(merged.moves(), cover.moves());
        assert!(validate_cycle_cover(&inst, &merged).is_valid());
    }

    #[test]
    fn disjoint_cycles_stay() {
        let inst = full(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
        let cover = CycleCover::new(vec![domino_h(0, 0), domino_h(0, 1)]);
        assert_eq!(merge_intersecting_cycles(&cover, &inst), cover);
    }

    #[test]
    fn exchange_keeps_length() {
        let inst = full(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
        let (a, b) = (domino_h(0, 0), domino_h(0, 1));
        let (i, j) = find_exchange(&a, &b).unwrap();
        let m = exchange(&a, i, &b, j);
        m.check().unwrap();
        assert_eq!(m.moves(), a.moves() + b.moves());
        assert_eq!(m.turns(), a.turns() + b.turns() + 4);
        assert!(validate_cycle_cover(&inst, &CycleCover::new(vec![m])).is_valid());
    }

    #[test]
    fn doubled_path_costs_twice_plus_four_turns() {
        let px: Vec<(i32, i32)> = (0..8).map(|x| (x, 0)).collect();
        let inst = build_grid_instance(px.iter().map(|&(x, y)| Pixel::new(x, y)), Coverage::Full, 1.into(), 1.into()).unwrap();
        let table = TransitionTable::new(&inst);
        let d = PixelDistances::new(&inst, &table);
        let (a, b) = (domino_h(0, 0), domino_h(6, 0));
        let link = d.link(&pixel_indices(&inst, &a), &pixel_indices(&inst, &b)).unwrap();
        assert_eq!(link.cost, 5);
        let m = splice_link(&inst, &d, &a, &b, link);
        m.check().unwrap();
        let k = Rational::from_integer(1);
        assert_eq!(cycle_cost(&m, k, k), cycle_cost(&a, k, k) + cycle_cost(&b, k, k) + Rational::from_integer(2 * 5 + 4));
    }
}
