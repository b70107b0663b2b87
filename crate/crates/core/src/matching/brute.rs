use super::{Matching, MatchingError};

/// Exhaustive minimum weight perfect matching for small graphs. Among optimal
/// matchings the lexicographically smallest sorted pair list is returned.
pub fn brute_force_matching(n: usize, edges: &[(usize, usize, i64)]) -> Result<Matching, MatchingError> {
    if n % 2 == 1 {
        return Err(MatchingError::OddVertexCount(n));
    }
    assert!(n <= 16, "brute force matching is limited to 16 vertices");
    let mut w = vec![None; n * n];
    for &(i, j, c) in edges {
        for (a, b) in [(i, j), (j, i)] {
            let slot: &mut Option<i64> = &mut w[a * n + b];
            *slot = Some(slot.map_or(c, |old| old.min(c)));
        }
    }
    let mut best: Option<(i64, Vec<(usize, usize)>)> = None;
    let mut current = Vec::new();
    recurse(n, &w, 0u32, 0, &mut current, &mut best);
    best.map(|(cost, pairs)| Matching { pairs, cost }).ok_or(MatchingError::NoPerfectMatching)
}

fn recurse(
    n: usize,
    w: &[Option<i64>],
    used: u32,
    cost: i64,
    current: &mut Vec<(usize, usize)>,
    best: &mut Option<(i64, Vec<(usize, usize)>)>,
) {
    let Some(v) = (0..n).find(|&v| used & (1 << v) == 0) else {
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            *best = Some((cost, current.clone()));
        }
        return;
    };
    for u in v + 1..n {
        if used & (1 << u) != 0 {
            continue;
        }
        if let Some(c) = w[v * n + u] {
            current.push((v, u));
            recurse(n, w, used | (1 << v) | (1 << u), cost + c, current, best);
            current.pop();
        }
    }
}
