//! Spanning trees and prize-collecting Steiner trees on small weighted graphs
//! given as `(u, v, weight)` edge lists.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::ApproxError;

/// Kruskal. Returns edge indices; ties go to the smaller edge index.
pub fn mst(n: usize, edges: &[(usize, usize, i64)]) -> Result<Vec<usize>, ApproxError> {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_key(|&e| (edges[e].2, e));
    let mut dsu = Dsu::new(n);
    let mut tree = Vec::new();
    for e in order {
        let (u, v, _) = edges[e];
        if dsu.union(u, v) {
            tree.push(e);
        }
    }
    if n > 0 && tree.len() + 1 != n {
        return Err(ApproxError::Disconnected);
    }
    tree.sort_unstable();
    Ok(tree)
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the sets; the smaller root survives. False if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo;
        true
    }
}

/// A prize-collecting tree: the spanned vertices, the tree edges (indices)
/// and tree weight plus the prizes of all unspanned vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcstSolution {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub objective: i64,
}

pub fn pcst_objective(edges: &[(usize, usize, i64)], prizes: &[i64], vertices: &[usize], tree: &[usize]) -> i64 {
    let weight: i64 = tree.iter().map(|&e| edges[e].2).sum();
    let lost: i64 = (0..prizes.len()).filter(|v| !vertices.contains(v)).map(|v| prizes[v]).sum();
    weight + lost
}

fn big(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Primal-dual growth with pruning, rooted at every vertex in turn; the
/// cheapest pruned tree wins (ties to the smaller root).
pub fn pcst_gw(n: usize, edges: &[(usize, usize, i64)], prizes: &[i64]) -> PcstSolution {
    assert_eq!(prizes.len(), n);
    assert!(prizes.iter().all(|&p| p >= 0), "prizes must be nonnegative");
    let mut best: Option<PcstSolution> = None;
    for root in 0..n {
        let (vertices, tree) = gw_rooted(n, edges, prizes, root);
        let objective = pcst_objective(edges, prizes, &vertices, &tree);
        if best.as_ref().is_none_or(|b| objective < b.objective) {
            best = Some(PcstSolution { vertices, edges: tree, objective });
        }
    }
    best.unwrap_or(PcstSolution { vertices: Vec::new(), edges: Vec::new(), objective: 0 })
}

fn gw_rooted(n: usize, edges: &[(usize, usize, i64)], prizes: &[i64], root: usize) -> (Vec<usize>, Vec<usize>) {
    let mut comp: Vec<usize> = (0..n).collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut active: Vec<bool> = (0..n).map(|v| v != root).collect();
    let mut grown: Vec<BigRational> = vec![BigRational::zero(); n];
    let mut prize: Vec<BigRational> = prizes.iter().map(|&p| big(p)).collect();
    let mut load: Vec<BigRational> = vec![BigRational::zero(); n];
    let mut forest: Vec<usize> = Vec::new();
    let mut dead: Vec<Vec<usize>> = Vec::new();

    loop {
        // Next event: an edge becoming tight (kind 0) or a component running
        // out of prize (kind 1).
        let mut next: Option<(BigRational, u8, usize)> = None;
        let offer = |t: BigRational, kind: u8, id: usize, next: &mut Option<(BigRational, u8, usize)>| {
            let better = match next {
                None => true,
                Some((bt, bk, bid)) => t < *bt || (t == *bt && (kind, id) < (*bk, *bid)),
            };
            if better {
                *next = Some((t, kind, id));
            }
        };
        for (e, &(u, v, w)) in edges.iter().enumerate() {
            let (cu, cv) = (comp[u], comp[v]);
            if cu == cv {
                continue;
            }
            let k = active[cu] as i64 + active[cv] as i64;
            if k == 0 {
                continue;
            }
            let t = (big(w) - &load[u] - &load[v]) / big(k);
            offer(t, 0, e, &mut next);
        }
        for c in 0..n {
            if active[c] && comp[c] == c {
                offer(&prize[c] - &grown[c], 1, c, &mut next);
            }
        }
        let Some((t, kind, id)) = next else { break };
        let t = if t.is_negative() { BigRational::zero() } else { t };
        for c in 0..n {
            if active[c] && comp[c] == c {
                grown[c] += &t;
                for &v in &members[c] {
                    load[v] += &t;
                }
            }
        }
        if kind == 1 {
            active[id] = false;
            dead.push(members[id].clone());
            continue;
        }
        let (u, v, _) = edges[id];
        let (cu, cv) = (comp[u], comp[v]);
        let (keep, gone) = (cu.min(cv), cu.max(cv));
        let moved = std::mem::take(&mut members[gone]);
        for &x in &moved {
            comp[x] = keep;
        }
        members[keep].extend(moved);
        let g = std::mem::take(&mut grown[gone]);
        grown[keep] += g;
        let p = std::mem::take(&mut prize[gone]);
        prize[keep] += p;
        active[gone] = false;
        active[keep] = comp[root] != keep;
        forest.push(id);
    }

    // The tree is the forest component of the root.
    let mut kept = vec![false; n];
    kept[root] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for &e in &forest {
            let (u, v, _) = edges[e];
            if kept[u] != kept[v] {
                kept[u] = true;
                kept[v] = true;
                changed = true;
            }
        }
    }
    let mut tree: Vec<usize> = forest.iter().copied().filter(|&e| kept[edges[e].0]).collect();

    // Prune dead sets hanging off the tree by a single edge.
    let mut changed = true;
    while changed {
        changed = false;
        for set in dead.iter().rev() {
            if set.contains(&root) || !set.iter().any(|&v| kept[v]) {
                continue;
            }
            let inside = |x: usize| set.contains(&x);
            let crossing = tree.iter().filter(|&&e| inside(edges[e].0) != inside(edges[e].1)).count();
            if crossing == 1 {
                for &v in set {
                    kept[v] = false;
                }
                tree.retain(|&e| kept[edges[e].0] && kept[edges[e].1]);
                changed = true;
            }
        }
    }
    let vertices = (0..n).filter(|&v| kept[v]).collect();
    tree.sort_unstable();
    (vertices, tree)
}

/// Exhaustive optimum over all nonempty vertex sets (spanned by a minimum
/// spanning tree of the induced subgraph). Exponential; `n <= 16`.
pub fn brute_force_pcst(n: usize, edges: &[(usize, usize, i64)], prizes: &[i64]) -> PcstSolution {
    assert!(n <= 16, "brute force is limited to 16 vertices");
    let mut best: Option<PcstSolution> = None;
    for mask in 1u32..(1 << n) {
        let vertices: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let mut index = vec![usize::MAX; n];
        for (k, &v) in vertices.iter().enumerate() {
            index[v] = k;
        }
        let sub_ids: Vec<usize> = (0..edges.len()).filter(|&e| mask >> edges[e].0 & 1 == 1 && mask >> edges[e].1 & 1 == 1).collect();
        let sub: Vec<(usize, usize, i64)> = sub_ids.iter().map(|&e| (index[edges[e].0], index[edges[e].1], edges[e].2)).collect();
        let Ok(t) = mst(vertices.len(), &sub) else { continue };
        let tree: Vec<usize> = t.into_iter().map(|k| sub_ids[k]).collect();
        let objective = pcst_objective(edges, prizes, &vertices, &tree);
        if best.as_ref().is_none_or(|b| objective < b.objective) {
            best = Some(PcstSolution { vertices, edges: tree, objective });
        }
    }
    best.unwrap_or(PcstSolution { vertices: Vec::new(), edges: Vec::new(), objective: 0 })
}
