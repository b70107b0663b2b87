use super::{StripError, StripGraph, Via};
use crate::rational::INF;

/// Replaces every connection by the cheapest chain of connections and strip
/// traversals. Never increases a cost and is idempotent.
pub fn metric_close(g: &mut StripGraph) -> Result<(), StripError> {
    if g.owner_count() == 0 {
        return Err(StripError::Empty);
    }
    let n = g.endpoint_count();
    for u in 0..n {
        let mu = StripGraph::mate(u);
        let via = Via::Strip { strip: (u / 2) as u32, reversed: u % 2 == 1 };
        let row_mu: Vec<i64> = g.cost[mu * n..(mu + 1) * n].to_vec();
        for v in 0..n {
            let dvu = g.cost[v * n + u];
            if dvu >= INF {
                continue;
            }
            let row = &mut g.cost[v * n..(v + 1) * n];
            let vias = &mut g.via[v * n..(v + 1) * n];
            for w in 0..n {
                let d = row_mu[w];
                if d >= INF {
                    continue;
                }
                let cand = dvu + d;
                if cand < row[w] {
                    row[w] = cand;
                    vias[w] = via;
                }
            }
        }
    }
    for v in 0..n {
        for w in v..n {
            if g.cost(v, w) >= INF {
                if v == w && g.owner_count() == 1 {
                    return Err(StripError::NoLoopWitness(g.endpoint_owner(v)));
                }
                return Err(StripError::Unreachable(v, w));
            }
            debug_assert_eq!(g.cost(v, w), g.cost(w, v), "closure lost symmetry");
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriangleViolation {
    pub from: usize,
    pub to: usize,
    /// Endpoint through which the cheaper detour enters its strip.
    pub through: usize,
    pub direct: i64,
    pub detour: i64,
}

/// All triples where going through a strip would be strictly cheaper than the
/// stored connection. Empty for a closed graph.
pub fn check_pseudo_triangle(g: &StripGraph) -> Vec<TriangleViolation> {
    let n = g.endpoint_count();
    let mut out = Vec::new();
    for v in 0..n {
        for u in 0..n {
            let dvu = g.cost(v, u);
            if dvu >= INF {
                continue;
            }
            let mu = StripGraph::mate(u);
            for w in 0..n {
                let d = g.cost(mu, w);
                if d >= INF {
                    continue;
                }
                if dvu + d < g.cost(v, w) {
                    out.push(TriangleViolation { from: v, to: w, through: u, direct: g.cost(v, w), detour: dvu + d });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_graph(owners: usize, costs: &[i64]) -> StripGraph {
        let strip_owner: Vec<usize> = (0..2 * owners).map(|s| s / 2).collect();
        let mut g = StripGraph::new(owners, strip_owner, 1);
        let mut it = costs.iter().cycle();
        let pairs: Vec<_> = g.pairs().collect();
        for (a, b) in pairs {
            if g.endpoint_owner(a) != g.endpoint_owner(b) {
                g.set_direct(a, b, *it.next().unwrap());
            }
        }
        g
    }

    proptest! {
        #[test]
        fn closure_is_closed_monotone_idempotent(owners in 2usize..5, costs in proptest::collection::vec(0i64..50, 1..60)) {
            let g0 = random_graph(owners, &costs);
            let mut g1 = g0.clone();
            metric_close(&mut g1).unwrap();
            prop_assert!(check_pseudo_triangle(&g1).is_empty());
            for (a, b) in g0.pairs() {
                prop_assert!(g1.cost(a, b) <= g0.cost(a, b));
                prop_assert_eq!(g1.cost(a, b), g1.cost(b, a));
                let legs = g1.expand(a, b);
                let sum: i64 = legs.iter().map(|l| g0.cost(l.from, l.to)).sum();
                prop_assert_eq!(sum, g1.cost(a, b));
            }
            let mut g2 = g1.clone();
            metric_close(&mut g2).unwrap();
            for (a, b) in g1.pairs() {
                prop_assert_eq!(g1.cost(a, b), g2.cost(a, b));
            }
        }
    }

    #[test]
    fn single_owner_without_loops_fails() {
        let mut g = StripGraph::new(1, vec![0, 0], 1);
        assert_eq!(metric_close(&mut g), Err(StripError::NoLoopWitness(0)));
    }

    #[test]
    fn detects_violation() {
        let mut g = random_graph(3, &[1]);
        g.set_direct(0, 4, 100);
        assert!(!check_pseudo_triangle(&g).is_empty());
        metric_close(&mut g).unwrap();
        assert!(check_pseudo_triangle(&g).is_empty());
        assert!(g.cost(0, 4) <= 2);
    }
}
