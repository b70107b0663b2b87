use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{Configuration, GridError, GridInstance, Heading};
use crate::rational::{from_units, Rational, INF};

const NO_PRED: u32 = u32::MAX;

/// Single-source Dijkstra over the configuration graph. Ties are broken by
/// state id and predecessors only change on strict improvement, so the
/// returned paths are deterministic.
pub(crate) fn dijkstra(inst: &GridInstance, source: usize, dist: &mut [i64], pred: &mut [u32]) {
    dist.fill(INF);
    pred.fill(NO_PRED);
    dist[source] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0i64, source)));
    let (k, t) = (inst.kappa_units(), inst.tau_units());
    while let Some(Reverse((d, s))) = heap.pop() {
        if d > dist[s] {
            continue;
        }
        let (p, h) = (s / 4, Heading::from_index(s % 4));
        let mut relax = |next: usize, w: i64, heap: &mut BinaryHeap<Reverse<(i64, usize)>>| {
            let nd = d + w;
            if nd < dist[next] {
                dist[next] = nd;
                pred[next] = s as u32;
                heap.push(Reverse((nd, next)));
            }
        };
        if let Some(q) = inst.neighbor(p, h) {
            relax(4 * q + h.index(), k, &mut heap);
        }
        relax(4 * p + h.clockwise().index(), t, &mut heap);
        relax(4 * p + h.counter_clockwise().index(), t, &mut heap);
    }
}

/// Cheapest configuration walk between two configurations, with its cost.
pub fn transition_cost(
    inst: &GridInstance,
    from: Configuration,
    to: Configuration,
) -> Result<(Rational, Vec<Configuration>), GridError> {
    let s = inst.state_id(from).ok_or(GridError::NotOnInstance(from))?;
    let g = inst.state_id(to).ok_or(GridError::NotOnInstance(to))?;
    let n = inst.state_count();
    let mut dist = vec![INF; n];
    let mut pred = vec![NO_PRED; n];
    dijkstra(inst, s, &mut dist, &mut pred);
    if dist[g] >= INF {
        return Err(GridError::Unreachable(from, to));
    }
    let states = unwind(&pred, s, g);
    Ok((
        from_units(dist[g], inst.scale()),
        states.into_iter().map(|x| inst.configuration(x)).collect(),
    ))
}

fn unwind(pred: &[u32], source: usize, target: usize) -> Vec<usize> {
    let mut out = vec![target];
    let mut cur = target;
    while cur != source {
        cur = pred[cur] as usize;
        out.push(cur);
    }
    out.reverse();
    out
}

/// All-pairs transition costs between configurations, in cost units.
#[derive(Clone, Debug)]
pub struct TransitionTable {
    states: usize,
    dist: Vec<i64>,
    pred: Vec<u32>,
}

impl TransitionTable {
    pub fn new(inst: &GridInstance) -> Self {
        use rayon::prelude::*;
        let n = inst.state_count();
        let mut dist = vec![INF; n * n];
        let mut pred = vec![NO_PRED; n * n];
        dist.par_chunks_mut(n)
            .zip(pred.par_chunks_mut(n))
            .enumerate()
            .for_each(|(s, (d, p))| dijkstra(inst, s, d, p));
        TransitionTable { states: n, dist, pred }
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    /// Cost in units from state `a` to state `b`; [`INF`] if unreachable.
    pub fn cost(&self, a: usize, b: usize) -> i64 {
        self.dist[a * self.states + b]
    }

    /// States visited from `a` to `b`, both included.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        assert!(self.cost(a, b) < INF, "unreachable states {a} -> {b}");
        unwind(&self.pred[a * self.states..(a + 1) * self.states], a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid_instance, Coverage, Pixel};

    fn domino(k: i64, t: i64) -> GridInstance {
        build_grid_instance(
            [Pixel::new(0, 0), Pixel::new(1, 0)],
            Coverage::Full,
            Rational::from_integer(k),
            Rational::from_integer(t),
        )
        .unwrap()
    }

    #[test]
    fn domino_walk_needs_u_turns() {
        let inst = domino(1, 1);
        let from = Configuration::new(Pixel::new(0, 0), Heading::West);
        let to = Configuration::new(Pixel::new(1, 0), Heading::West);
        let (cost, path) = transition_cost(&inst, from, to).unwrap();
        assert_eq!(cost, Rational::from_integer(5));
        assert_eq!(path.first(), Some(&from));
        assert_eq!(path.last(), Some(&to));
    }

    #[test]
    fn table_agrees_with_single_source() {
        let inst = domino(1, 2);
        let table = TransitionTable::new(&inst);
        for a in 0..inst.state_count() {
            for b in 0..inst.state_count() {
                let (c, path) = transition_cost(&inst, inst.configuration(a), inst.configuration(b)).unwrap();
                assert_eq!(from_units(table.cost(a, b), inst.scale()), c);
                assert_eq!(table.path(a, b).len(), path.len());
            }
        }
    }

    #[test]
    fn reversal_symmetry() {
        let inst = build_grid_instance(
            [Pixel::new(0, 0), Pixel::new(1, 0), Pixel::new(1, 1), Pixel::new(2, 1)],
            Coverage::Full,
            Rational::from_integer(1),
            Rational::from_integer(3),
        )
        .unwrap();
        let table = TransitionTable::new(&inst);
        let rev = |s: usize| s - s % 4 + (s % 4 + 2) % 4;
        for a in 0..inst.state_count() {
            for b in 0..inst.state_count() {
                assert_eq!(table.cost(a, b), table.cost(rev(b), rev(a)));
            }
        }
    }

    #[test]
    fn missing_configuration_is_an_error() {
        let inst = domino(1, 1);
        let bad = Configuration::new(Pixel::new(9, 9), Heading::North);
        let ok = Configuration::new(Pixel::new(0, 0), Heading::North);
        assert_eq!(transition_cost(&inst, bad, ok).unwrap_err(), GridError::NotOnInstance(bad));
    }
}
