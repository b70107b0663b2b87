use std::collections::HashSet;

use super::{metric_close, StripError, StripGraph, Via};

/// Two auxiliary owners per penalized owner. Leaving the owner's strip into
/// the gadget and coming back costs exactly the penalty; when the owner is
/// covered for real the two auxiliary strips close on each other for free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PenaltyGadget {
    real_owners: usize,
    real_strips: usize,
    /// `(owner, first aux strip, second aux strip)`.
    pub aux: Vec<(usize, usize, usize)>,
    edges: HashSet<(usize, usize)>,
}

impl PenaltyGadget {
    pub fn real_owner_count(&self) -> usize {
        self.real_owners
    }

    pub fn real_strip_count(&self) -> usize {
        self.real_strips
    }

    pub fn is_aux_endpoint(&self, v: usize) -> bool {
        v / 2 >= self.real_strips
    }

    pub fn is_aux_owner(&self, owner: usize) -> bool {
        owner >= self.real_owners
    }

    pub fn is_gadget_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }
}

/// Reduces penalty coverage to full coverage of an extended strip graph.
/// Costs are doubled (and so is the scale) so that half penalties stay
/// integral. The result is metrically closed.
pub fn penalty_to_full(g: &StripGraph) -> Result<StripGraph, StripError> {
    let penalized: Vec<usize> = (0..g.owner_count()).filter(|&o| g.penalty(o) > 0).collect();
    let real_owners = g.owner_count();
    let real_strips = g.strip_count();
    let mut strip_owner: Vec<usize> = (0..real_strips).map(|s| g.strip_owner(s)).collect();
    let mut aux = Vec::new();
    for (i, &p) in penalized.iter().enumerate() {
        let (a1, a2) = (real_owners + 2 * i, real_owners + 2 * i + 1);
        aux.push((p, strip_owner.len(), strip_owner.len() + 1));
        strip_owner.push(a1);
        strip_owner.push(a2);
    }
    let mut out = StripGraph::new(real_owners + 2 * penalized.len(), strip_owner, 2 * g.scale());
    let n0 = g.endpoint_count();
    for a in 0..n0 {
        for b in a..n0 {
            let c = g.cost(a, b);
            if g.via(a, b) != Via::None {
                out.set(a, b, 2 * c, g.via(a, b), g.via(b, a));
            }
        }
    }
    let mut edges = HashSet::new();
    let mut add = |out: &mut StripGraph, a: usize, b: usize, c: i64| {
        out.set_direct(a, b, c);
        edges.insert((a.min(b), a.max(b)));
    };
    for &(p, s_strip, t_strip) in &aux {
        let c = g.penalty(p);
        let (s, s2, t, t2) = (2 * s_strip, 2 * s_strip + 1, 2 * t_strip, 2 * t_strip + 1);
        for &ps in g.strips_of(p) {
            for e in [2 * ps, 2 * ps + 1] {
                add(&mut out, e, s, c);
                add(&mut out, t2, e, c);
            }
        }
        add(&mut out, s2, t, 0);
        add(&mut out, t2, s, 0);
    }
    let mut penalties: Vec<i64> = (0..real_owners).map(|o| 2 * g.penalty(o)).collect();
    penalties.resize(out.owner_count(), 0);
    out.set_penalties(penalties);
    metric_close(&mut out)?;
    out.set_gadget(PenaltyGadget { real_owners, real_strips, aux, edges });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strips::{alternating_cycles, check_pseudo_triangle, StripCycle};

    fn two_owner_graph() -> StripGraph {
        let mut g = StripGraph::new(2, vec![0, 1], 1);
        for (a, b) in [(0, 0), (0, 1), (1, 1), (2, 2), (2, 3), (3, 3)] {
            g.set_direct(a, b, 10);
        }
        for a in 0..2 {
            for b in 2..4 {
                g.set_direct(a, b, 3);
            }
        }
        g.set_penalties(vec![4, 0]);
        g
    }

    #[test]
    fn skipping_costs_the_penalty() {
        let g = penalty_to_full(&two_owner_graph()).unwrap();
        assert!(check_pseudo_triangle(&g).is_empty());
        assert_eq!(g.scale(), 2);
        assert_eq!(g.owner_count(), 4);
        let gadget = g.gadget().unwrap();
        let (_, s, t) = gadget.aux[0];
        // owner 0 skipped: its strip plus both aux strips close at cost 4 (8 doubled units)
        let skipped = StripCycle { entries: vec![0, 2 * s, 2 * t] };
        assert_eq!(skipped.cost(&g), 8);
        // aux strips alone close for free
        let free = alternating_cycles(&[s, t], &[(2 * s + 1, 2 * t), (2 * t + 1, 2 * s)]);
        assert_eq!(free[0].cost(&g), 0);
        assert!(g.is_lp_pair(2 * s + 1, 2 * t));
        assert!(!g.is_lp_pair(2 * s, 2));
    }
}
