//! Minimum weight perfect matching.

mod blossom;
mod brute;

use thiserror::Error;

pub use blossom::max_weight_matching;
pub use brute::brute_force_matching;

/// Up to this many vertices the result is canonicalized to the
/// lexicographically smallest optimal matching.
pub const LEX_CANONICAL_LIMIT: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("perfect matching needs an even number of vertices, got {0}")]
    OddVertexCount(usize),
    #[error("graph has no perfect matching")]
    NoPerfectMatching,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    /// Matched pairs `(a, b)` with `a < b`, sorted.
    pub pairs: Vec<(usize, usize)>,
    pub cost: i64,
}

/// Minimum weight perfect matching of the graph on `n` vertices with the given
/// undirected edges. Parallel edges keep their cheapest copy.
pub fn min_weight_perfect_matching(n: usize, edges: &[(usize, usize, i64)]) -> Result<Matching, MatchingError> {
    if n % 2 == 1 {
        return Err(MatchingError::OddVertexCount(n));
    }
    if n == 0 {
        return Ok(Matching { pairs: Vec::new(), cost: 0 });
    }
    let m = solve(n, edges)?;
    if n <= LEX_CANONICAL_LIMIT {
        return Ok(canonicalize(n, edges, m));
    }
    Ok(m)
}

/// Complete graph with weights from a symmetric function.
pub fn min_weight_perfect_matching_complete(
    n: usize,
    weight: impl Fn(usize, usize) -> i64,
) -> Result<Matching, MatchingError> {
    let edges: Vec<(usize, usize, i64)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| (i, j, weight(i, j))).collect();
    min_weight_perfect_matching(n, &edges)
}

fn solve(n: usize, edges: &[(usize, usize, i64)]) -> Result<Matching, MatchingError> {
    let max_w = edges.iter().map(|e| e.2).max().unwrap_or(0);
    let flipped: Vec<(usize, usize, i64)> = edges.iter().map(|&(i, j, w)| (i, j, max_w + 1 - w)).collect();
    let mate = max_weight_matching(n, &flipped, true);
    let mut pairs = Vec::with_capacity(n / 2);
    for (v, m) in mate.iter().enumerate() {
        match m {
            None => return Err(MatchingError::NoPerfectMatching),
            Some(u) if v < *u => pairs.push((v, *u)),
            _ => {}
        }
    }
    let mut weights = std::collections::HashMap::with_capacity(edges.len());
    for &(i, j, w) in edges {
        let e = weights.entry((i.min(j), i.max(j))).or_insert(w);
        *e = (*e).min(w);
    }
    let cost = pairs.iter().map(|p| weights[p]).sum();
    Ok(Matching { pairs, cost })
}

fn edge_weight(edges: &[(usize, usize, i64)], a: usize, b: usize) -> Option<i64> {
    edges
        .iter()
        .filter(|&&(i, j, _)| (i == a && j == b) || (i == b && j == a))
        .map(|e| e.2)
        .min()
}

/// Fixes pairs greedily, smallest free vertex first, keeping only choices that
/// preserve the optimum.
fn canonicalize(n: usize, edges: &[(usize, usize, i64)], optimum: Matching) -> Matching {
    let mut fixed: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; n];
    let mut fixed_cost = 0;
    while let Some(v) = (0..n).find(|&v| !used[v]) {
        let mut chosen = None;
        for u in v + 1..n {
            if used[u] {
                continue;
            }
            let Some(w) = edge_weight(edges, v, u) else { continue };
            used[v] = true;
            used[u] = true;
            let rest = rest_optimum(n, edges, &used);
            if rest.map(|c| fixed_cost + w + c) == Some(optimum.cost) {
                chosen = Some((u, w));
                break;
            }
            used[v] = false;
            used[u] = false;
        }
        let (u, w) = chosen.expect("optimum lost during canonicalization");
        fixed.push((v, u));
        fixed_cost += w;
    }
    Matching { pairs: fixed, cost: fixed_cost }
}

fn rest_optimum(n: usize, edges: &[(usize, usize, i64)], used: &[bool]) -> Option<i64> {
    let idx: Vec<usize> = (0..n).filter(|&v| !used[v]).collect();
    if idx.is_empty() {
        return Some(0);
    }
    let mut map = vec![usize::MAX; n];
    for (k, &v) in idx.iter().enumerate() {
        map[v] = k;
    }
    let sub: Vec<(usize, usize, i64)> = edges
        .iter()
        .filter(|&&(i, j, _)| !used[i] && !used[j])
        .map(|&(i, j, w)| (map[i], map[j], w))
        .collect();
    solve(idx.len(), &sub).ok().map(|m| m.cost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        let m = min_weight_perfect_matching(4, &[(0, 1, 5), (2, 3, 5), (0, 2, 1), (1, 3, 1), (0, 3, 3), (1, 2, 3)]).unwrap();
        assert_eq!(m.cost, 2);
        assert_eq!(m.pairs, vec![(0, 2), (1, 3)]);
        assert_eq!(min_weight_perfect_matching(3, &[(0, 1, 1)]).unwrap_err(), MatchingError::OddVertexCount(3));
        assert_eq!(
            min_weight_perfect_matching(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]).unwrap_err(),
            MatchingError::NoPerfectMatching
        );
    }

    #[test]
    fn ties_resolve_lexicographically() {
        let m = min_weight_perfect_matching_complete(4, |_, _| 7).unwrap();
        assert_eq!(m.pairs, vec![(0, 1), (2, 3)]);
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(half in 1usize..6, ws in proptest::collection::vec(0i64..20, 66), density in 0u8..3) {
            let n = 2 * half;
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    let w = ws[k % ws.len()];
                    k += 1;
                    if density == 0 || (w % 3) != 0 || j == i + 1 {
                        edges.push((i, j, w));
                    }
                }
            }
            let fast = min_weight_perfect_matching(n, &edges);
            let slow = brute_force_matching(n, &edges);
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn large_random_is_perfect(half in 10usize..30, seed in 0u64..1000) {
            let n = 2 * half;
            let w = |i: usize, j: usize| ((i * 31 + j * 17) as u64 * (seed + 7) % 101) as i64;
            let m = min_weight_perfect_matching_complete(n, |i, j| w(i.min(j), i.max(j))).unwrap();
            prop_assert_eq!(m.pairs.len(), half);
            let mut seen = vec![false; n];
            for &(a, b) in &m.pairs {
                prop_assert!(!seen[a] && !seen[b]);
                seen[a] = true;
                seen[b] = true;
            }
        }
    }
}
