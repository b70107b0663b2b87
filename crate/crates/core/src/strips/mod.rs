//! Atomic strips and the weighted graph on their endpoints.
//!
//! Strip `k` has endpoint vertices `2k` and `2k + 1`. The cost of an edge
//! `(a, b)` is the price of leaving the strip of `a` through `a` and entering
//! the strip of `b` through `b`; it is symmetric because every walk can be
//! traversed backwards at the same cost.

mod closure;
mod grid;
mod penalty;

use thiserror::Error;

use crate::rational::INF;

pub use closure::{check_pseudo_triangle, metric_close, TriangleViolation};
pub use grid::{strips_from_grid, GridStrips};
pub use penalty::{penalty_to_full, PenaltyGadget};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StripError {
    #[error("owner {0} has no strip to make a loop through another owner")]
    NoLoopWitness(usize),
    #[error("endpoints {0} and {1} cannot be connected")]
    Unreachable(usize, usize),
    #[error("strip graph has no owners")]
    Empty,
}

/// How the cheapest connection between two endpoints is realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Via {
    /// Not connected (cost is [`INF`]).
    None,
    /// A primitive connection of the underlying domain.
    Direct,
    /// A primitive connection forced through a domain specific waypoint
    /// (used for pairs of endpoints that belong to the same owner).
    Waypoint(u32),
    /// Shortcut through another strip: `a -> w1`, traverse, `w2 -> b`, where
    /// `w1 = 2 * strip` (or `2 * strip + 1` when `reversed`).
    Strip { strip: u32, reversed: bool },
}

/// A primitive piece of an expanded edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Leg {
    pub from: usize,
    pub to: usize,
    pub waypoint: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct StripGraph {
    owner_count: usize,
    strip_owner: Vec<usize>,
    owner_strips: Vec<Vec<usize>>,
    cost: Vec<i64>,
    via: Vec<Via>,
    scale: i64,
    /// Owner penalties in cost units (zero when coverage is mandatory).
    penalties: Vec<i64>,
    gadget: Option<PenaltyGadget>,
}

impl StripGraph {
    /// A graph with every connection missing.
    pub fn new(owner_count: usize, strip_owner: Vec<usize>, scale: i64) -> Self {
        let mut owner_strips = vec![Vec::new(); owner_count];
        for (s, &o) in strip_owner.iter().enumerate() {
            assert!(o < owner_count, "strip {s} has owner {o} out of range");
            owner_strips[o].push(s);
        }
        let n = 2 * strip_owner.len();
        StripGraph {
            owner_count,
            strip_owner,
            owner_strips,
            cost: vec![INF; n * n],
            via: vec![Via::None; n * n],
            scale,
            penalties: vec![0; owner_count],
            gadget: None,
        }
    }

    pub fn owner_count(&self) -> usize {
        self.owner_count
    }

    pub fn strip_count(&self) -> usize {
        self.strip_owner.len()
    }

    pub fn endpoint_count(&self) -> usize {
        2 * self.strip_owner.len()
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn strip_owner(&self, strip: usize) -> usize {
        self.strip_owner[strip]
    }

    pub fn endpoint_owner(&self, v: usize) -> usize {
        self.strip_owner[v / 2]
    }

    pub fn strips_of(&self, owner: usize) -> &[usize] {
        &self.owner_strips[owner]
    }

    pub fn mate(v: usize) -> usize {
        v ^ 1
    }

    pub fn cost(&self, a: usize, b: usize) -> i64 {
        self.cost[a * self.endpoint_count() + b]
    }

    pub fn via(&self, a: usize, b: usize) -> Via {
        self.via[a * self.endpoint_count() + b]
    }

    pub fn penalty(&self, owner: usize) -> i64 {
        self.penalties[owner]
    }

    pub fn set_penalties(&mut self, penalties: Vec<i64>) {
        assert_eq!(penalties.len(), self.owner_count);
        self.penalties = penalties;
    }

    pub fn gadget(&self) -> Option<&PenaltyGadget> {
        self.gadget.as_ref()
    }

    /// Sets the connection `a -> b` and its reverse. `reverse_via` is the
    /// realization of `b -> a`.
    pub fn set(&mut self, a: usize, b: usize, cost: i64, via: Via, reverse_via: Via) {
        let n = self.endpoint_count();
        self.cost[a * n + b] = cost;
        self.cost[b * n + a] = cost;
        self.via[a * n + b] = via;
        self.via[b * n + a] = reverse_via;
    }

    /// Sets a symmetric direct connection.
    pub fn set_direct(&mut self, a: usize, b: usize, cost: i64) {
        self.set(a, b, cost, Via::Direct, Via::Direct);
    }

    /// Unordered endpoint pairs `(a, b)` with `a <= b`, loops included.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.endpoint_count();
        (0..n).flat_map(move |a| (a..n).map(move |b| (a, b)))
    }

    /// Expands `a -> b` into primitive legs.
    pub fn expand(&self, a: usize, b: usize) -> Vec<Leg> {
        let mut out = Vec::new();
        let mut stack = vec![(a, b)];
        while let Some((x, y)) = stack.pop() {
            match self.via(x, y) {
                Via::None => panic!("expanding missing connection {x} -> {y}"),
                Via::Direct => out.push(Leg { from: x, to: y, waypoint: None }),
                Via::Waypoint(w) => out.push(Leg { from: x, to: y, waypoint: Some(w) }),
                Via::Strip { strip, reversed } => {
                    let w1 = 2 * strip as usize + reversed as usize;
                    let w2 = StripGraph::mate(w1);
                    // Pushed in reverse so that the first half pops first.
                    stack.push((w2, y));
                    stack.push((x, w1));
                }
            }
        }
        out
    }

    pub(crate) fn set_gadget(&mut self, gadget: PenaltyGadget) {
        self.gadget = Some(gadget);
    }

    /// Whether the pair is a column of the strip LP. Without a penalty gadget
    /// this is every pair; with one, auxiliary endpoints only appear through
    /// the gadget's own edges.
    pub fn is_lp_pair(&self, a: usize, b: usize) -> bool {
        match &self.gadget {
            None => self.cost(a, b) < INF,
            Some(g) => {
                if g.is_aux_endpoint(a) || g.is_aux_endpoint(b) {
                    g.is_gadget_edge(a, b)
                } else {
                    self.cost(a, b) < INF
                }
            }
        }
    }
}

/// A cycle over strips: the list of endpoints through which each strip is
/// entered. The strip is left through the mate, then the next strip entered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripCycle {
    pub entries: Vec<usize>,
}

impl StripCycle {
    /// Connections `(exit, entry)` in traversal order, including the closing one.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.entries.len();
        (0..n)
            .map(|i| (StripGraph::mate(self.entries[i]), self.entries[(i + 1) % n]))
            .collect()
    }

    pub fn cost(&self, g: &StripGraph) -> i64 {
        self.edges().iter().map(|&(a, b)| g.cost(a, b)).sum()
    }

    /// All primitive legs of the cycle in order.
    pub fn legs(&self, g: &StripGraph) -> Vec<Leg> {
        self.edges().iter().flat_map(|&(a, b)| g.expand(a, b)).collect()
    }

    pub fn strips(&self) -> Vec<usize> {
        self.entries.iter().map(|v| v / 2).collect()
    }
}

/// Splits a set of matched endpoint pairs (each endpoint of every strip in
/// `strips` appears exactly once) into alternating strip cycles.
pub fn alternating_cycles(strips: &[usize], matching: &[(usize, usize)]) -> Vec<StripCycle> {
    use std::collections::HashMap;
    let partner: HashMap<usize, usize> = matching.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
    let mut done = std::collections::HashSet::new();
    let mut sorted = strips.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    for &s in &sorted {
        if done.contains(&s) {
            continue;
        }
        let mut entries = Vec::new();
        let mut entry = 2 * s;
        loop {
            done.insert(entry / 2);
            entries.push(entry);
            let exit = StripGraph::mate(entry);
            let next = *partner.get(&exit).expect("endpoint missing from matching");
            if next / 2 == s && next == 2 * s {
                break;
            }
            assert!(!done.contains(&(next / 2)), "matching does not alternate");
            entry = next;
        }
        out.push(StripCycle { entries });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_cycles_follow_matching() {
        // strips 0,1,2; matching 1-2, 3-4, 5-0 gives one cycle
        let c = alternating_cycles(&[0, 1, 2], &[(1, 2), (3, 4), (5, 0)]);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].entries, vec![0, 2, 4]);
        // strip 0 alone and strips 1,2 together
        let c = alternating_cycles(&[0, 1, 2], &[(1, 0), (3, 5), (4, 2)]);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].entries, vec![0]);
        assert_eq!(c[1].entries, vec![2, 5]);
    }

    #[test]
    fn expansion_walks_through_strips() {
        let mut g = StripGraph::new(3, vec![0, 1, 2], 1);
        g.set_direct(0, 2, 1);
        g.set_direct(3, 4, 1);
        g.set(0, 4, 2, Via::Strip { strip: 1, reversed: false }, Via::Strip { strip: 1, reversed: true });
        let legs = g.expand(0, 4);
        assert_eq!(legs.iter().map(|l| (l.from, l.to)).collect::<Vec<_>>(), vec![(0, 2), (3, 4)]);
        let back = g.expand(4, 0);
        assert_eq!(back.iter().map(|l| (l.from, l.to)).collect::<Vec<_>>(), vec![(4, 3), (2, 0)]);
    }
}
