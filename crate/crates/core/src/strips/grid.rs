use super::{Leg, StripCycle, StripError, StripGraph, Via};
use crate::grid::{Configuration, Cycle, GridInstance, Heading, TransitionTable};
use crate::rational::INF;

const SIDES: [[Heading; 2]; 2] = [[Heading::West, Heading::East], [Heading::South, Heading::North]];

/// Strip graph of a grid instance together with everything needed to turn
/// strip cycles back into configuration walks.
#[derive(Clone, Debug)]
pub struct GridStrips {
    pub instance: GridInstance,
    pub table: TransitionTable,
    pub graph: StripGraph,
    /// Pixel index of every real owner.
    pub owner_pixel: Vec<usize>,
    real_strips: usize,
}

/// Builds the strip graph: one horizontal and one vertical strip per owner
/// pixel. The result already satisfies the pseudo-triangle inequality.
pub fn strips_from_grid(inst: &GridInstance) -> Result<GridStrips, StripError> {
    let owner_pixel = inst.strip_owners();
    if owner_pixel.is_empty() {
        return Err(StripError::Empty);
    }
    let table = TransitionTable::new(inst);
    let strip_owner: Vec<usize> = (0..2 * owner_pixel.len()).map(|s| s / 2).collect();
    let mut graph = StripGraph::new(owner_pixel.len(), strip_owner, inst.scale());
    graph.set_penalties(owner_pixel.iter().map(|&p| inst.penalty_units(p)).collect());
    let mut gs = GridStrips { instance: inst.clone(), table, graph, real_strips: 2 * owner_pixel.len(), owner_pixel };

    let n = gs.graph.endpoint_count();
    let states = inst.state_count();
    for a in 0..n {
        let out_a = gs.out_state(a).unwrap();
        for b in a..n {
            let in_b = gs.in_state(b).unwrap();
            let (oa, ob) = (gs.graph.endpoint_owner(a), gs.graph.endpoint_owner(b));
            if oa != ob {
                gs.graph.set_direct(a, b, gs.table.cost(out_a, in_b));
                continue;
            }
            // Same owner: force the walk through some other pixel, otherwise
            // a strip could be closed by turning on the spot.
            let p = gs.owner_pixel[oa];
            let mut best = (INF, usize::MAX);
            for r in 0..states {
                if r / 4 == p {
                    continue;
                }
                let (c1, c2) = (gs.table.cost(out_a, r), gs.table.cost(r, in_b));
                if c1 < INF && c2 < INF && c1 + c2 < best.0 {
                    best = (c1 + c2, r);
                }
            }
            if best.0 < INF {
                let r = best.1;
                let rev = r - r % 4 + (r % 4 + 2) % 4;
                gs.graph.set(a, b, best.0, Via::Waypoint(r as u32), Via::Waypoint(rev as u32));
            }
        }
    }
    if inst.len() == 1 {
        return Err(StripError::NoLoopWitness(0));
    }
    Ok(gs)
}

impl GridStrips {
    /// Number of strips that belong to pixels (auxiliary strips follow them).
    pub fn real_strip_count(&self) -> usize {
        self.real_strips
    }

    pub fn is_real_endpoint(&self, v: usize) -> bool {
        v / 2 < self.real_strips
    }

    /// Configuration in which the strip of `v` is left through `v`.
    pub fn out_configuration(&self, v: usize) -> Option<Configuration> {
        self.out_state(v).map(|s| self.instance.configuration(s))
    }

    pub fn out_state(&self, v: usize) -> Option<usize> {
        if !self.is_real_endpoint(v) {
            return None;
        }
        let strip = v / 2;
        let p = self.owner_pixel[strip / 2];
        Some(4 * p + SIDES[strip % 2][v % 2].index())
    }

    /// Configuration in which the strip of `v` is entered through `v`.
    pub fn in_state(&self, v: usize) -> Option<usize> {
        self.out_state(v).map(|s| s - s % 4 + (s % 4 + 2) % 4)
    }

    pub fn strip_is_horizontal(&self, strip: usize) -> bool {
        strip.is_multiple_of(2)
    }

    /// Pixel index of a real strip.
    pub fn strip_pixel(&self, strip: usize) -> Option<usize> {
        (strip < self.real_strips).then(|| self.owner_pixel[strip / 2])
    }

    /// Configuration states along a leg, or `None` for auxiliary legs.
    pub fn leg_states(&self, leg: &Leg) -> Option<Vec<usize>> {
        let a = self.out_state(leg.from)?;
        let b = self.in_state(leg.to)?;
        Some(match leg.waypoint {
            None => self.table.path(a, b),
            Some(r) => {
                let mut p = self.table.path(a, r as usize);
                p.extend_from_slice(&self.table.path(r as usize, b)[1..]);
                p
            }
        })
    }

    /// Turns a strip cycle into a closed configuration walk. Legs touching
    /// auxiliary strips are skipped and the gaps bridged by cheapest
    /// transitions. Returns `None` when no real leg remains.
    pub fn realize(&self, cycle: &StripCycle) -> Option<Cycle> {
        let mut walk: Vec<usize> = Vec::new();
        for leg in cycle.legs(&self.graph) {
            if let Some(states) = self.leg_states(&leg) {
                self.append(&mut walk, &states);
            }
        }
        // A cycle made only of auxiliary strips and the strips of one owner
        // still passes that owner's strips.
        if walk.is_empty() {
            let real: Vec<usize> = cycle.entries.iter().copied().filter(|&v| self.is_real_endpoint(v)).collect();
            if real.is_empty() {
                return None;
            }
            for v in real {
                let s = self.in_state(v).unwrap();
                self.append(&mut walk, &[s]);
            }
        }
        let first = walk[0];
        let closing = self.table.path(*walk.last().unwrap(), first);
        self.append(&mut walk, &closing);
        Some(Cycle::from_walk_unchecked(walk.into_iter().map(|s| self.instance.configuration(s)).collect()))
    }

    fn append(&self, walk: &mut Vec<usize>, states: &[usize]) {
        if states.is_empty() {
            return;
        }
        match walk.last().copied() {
            None => walk.extend_from_slice(states),
            Some(last) => {
                if last != states[0] {
                    let bridge = self.table.path(last, states[0]);
                    walk.extend_from_slice(&bridge[1..]);
                }
                walk.extend_from_slice(&states[1..]);
            }
        }
    }

    /// Replaces the graph (used after attaching a penalty gadget).
    pub fn with_graph(mut self, graph: StripGraph) -> Self {
        self.graph = graph;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid_instance, cycle_cost, Coverage, Pixel};
    use crate::rational::{from_units, Rational};
    use crate::strips::{alternating_cycles, check_pseudo_triangle, metric_close};

    fn grid(px: &[(i32, i32)], k: i64, t: i64) -> GridInstance {
        build_grid_instance(
            px.iter().map(|&(x, y)| Pixel::new(x, y)),
            Coverage::Full,
            Rational::from_integer(k),
            Rational::from_integer(t),
        )
        .unwrap()
    }

    #[test]
    fn domino_strip_costs() {
        let gs = strips_from_grid(&grid(&[(0, 0), (1, 0)], 1, 1)).unwrap();
        assert_eq!(gs.graph.strip_count(), 4);
        // Closing one horizontal strip on itself costs the domino cycle.
        assert_eq!(gs.graph.cost(1, 0), 6);
        // East end of (0,0) to west end of (1,0): a single move.
        assert_eq!(gs.graph.cost(1, 4), 1);
    }

    #[test]
    fn grid_graph_is_already_closed() {
        let inst = grid(&[(0, 0), (1, 0), (1, 1), (2, 1), (2, 0)], 1, 2);
        let gs = strips_from_grid(&inst).unwrap();
        assert!(check_pseudo_triangle(&gs.graph).is_empty());
        let mut closed = gs.graph.clone();
        metric_close(&mut closed).unwrap();
        for (a, b) in gs.graph.pairs() {
            assert_eq!(closed.cost(a, b), gs.graph.cost(a, b));
        }
    }

    #[test]
    fn realized_cost_matches_strip_cost() {
        let inst = grid(&[(0, 0), (1, 0), (0, 1), (1, 1)], 1, 1);
        let gs = strips_from_grid(&inst).unwrap();
        // Horizontal strips of (0,0) and (1,0): W/E endpoints 0,1 and 4,5 after sorting pixels.
        let owners: Vec<_> = gs.owner_pixel.iter().map(|&p| inst.pixels()[p]).collect();
        assert_eq!(owners[0], Pixel::new(0, 0));
        let cycles = alternating_cycles(&[0, 4], &[(1, 8), (9, 0)]);
        assert_eq!(cycles.len(), 1);
        let cy = gs.realize(&cycles[0]).unwrap();
        assert!(cy.check().is_ok());
        assert_eq!(
            cycle_cost(&cy, inst.kappa(), inst.tau()),
            from_units(cycles[0].cost(&gs.graph), inst.scale())
        );
    }
}
