//! LP-based branch and bound with a separation hook, shared by the cover and
//! tour solvers.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::Instant;

use super::{ExactError, ExactOptions};
use crate::lp::{ratio_ceil, solve_with_columns, Constraint, LinearProgram, LpError, LpSolution};

/// What a separator says about an integral LP point.
pub(crate) enum Integral<S> {
    /// Feasible with the given cost in LP units.
    Feasible(i64, S),
    /// Infeasible; these cuts remove it.
    Cuts(Vec<Constraint>),
}

pub(crate) trait Separator {
    type Solution;
    fn integral(&mut self, x: &[i64]) -> Integral<Self::Solution>;
    /// Optional cuts for a fractional point.
    fn fractional(&mut self, _x: &[f64]) -> Vec<Constraint> {
        Vec::new()
    }
}

#[derive(Clone, Debug)]
struct Node {
    id: usize,
    depth: usize,
    bound: i128,
    /// `(variable, lower, upper)` overrides.
    fixings: Vec<(usize, Option<i64>, Option<i64>)>,
    basis: Vec<usize>,
}

pub(crate) struct Outcome<S> {
    pub best: Option<(i64, S)>,
    pub root_bound: Option<i128>,
    pub nodes: usize,
    pub log: Vec<String>,
}

const EPS: f64 = 1e-6;
const MAX_CUT_ROUNDS: usize = 50;

/// Minimizes `lp` over integers in the variables with a `priority`
/// (`Some(class)`: lower classes are branched on first). Cuts returned by
/// `sep` are global and persist across nodes.
pub(crate) fn branch_and_bound<P: Separator>(
    mut lp: LinearProgram,
    priority: &[Option<u8>],
    initial_columns: &[usize],
    sep: &mut P,
    incumbent: Option<(i64, P::Solution)>,
    opts: &ExactOptions,
) -> Result<Outcome<P::Solution>, ExactError> {
    let start = Instant::now();
    let base_rows = lp.row_count();
    let mut best = incumbent;
    let mut root_bound = None;
    let mut log = Vec::new();
    let mut heap: BinaryHeap<(Reverse<i128>, usize, Reverse<usize>)> = BinaryHeap::new();
    let mut store: Vec<Option<Node>> = vec![Some(Node { id: 0, depth: 0, bound: i128::MIN, fixings: Vec::new(), basis: Vec::new() })];
    heap.push((Reverse(i128::MIN), 0, Reverse(0)));
    let mut nodes = 0;

    while let Some((_, _, Reverse(id))) = heap.pop() {
        let node = store[id].take().unwrap();
        if best.as_ref().is_some_and(|b| node.bound >= b.0 as i128) {
            continue;
        }
        if opts.time_limit.is_some_and(|t| start.elapsed() > t) {
            return Err(ExactError::TimeLimit);
        }
        if opts.node_limit.is_some_and(|l| nodes >= l) {
            return Err(ExactError::NodeLimit);
        }
        nodes += 1;
        let mut local = lp.clone();
        for &(j, lo, hi) in &node.fixings {
            local.lower[j] = lo;
            local.upper[j] = hi;
        }
        let mut basis = node.basis.clone();
        let mut rounds = 0;
        let outcome = loop {
            let sol = match solve_node(&local, initial_columns, &basis) {
                Ok(s) => s,
                Err(LpError::Infeasible) => break "infeasible".to_string(),
                Err(e) => return Err(e.into()),
            };
            let bound = ratio_ceil(&sol.bound);
            if node.id == 0 && rounds == 0 {
                root_bound = Some(bound);
            }
            basis = sol.basis.clone();
            if best.as_ref().is_some_and(|b| bound >= b.0 as i128) {
                break format!("pruned {bound}");
            }
            let fractional = most_fractional(&sol.x, priority);
            let mut cuts = match fractional {
                None => {
                    let x: Vec<i64> = sol.x.iter().map(|v| v.round() as i64).collect();
                    match sep.integral(&x) {
                        Integral::Feasible(cost, s) => {
                            if best.as_ref().is_none_or(|b| cost < b.0) {
                                best = Some((cost, s));
                            }
                            break format!("integral {cost}");
                        }
                        Integral::Cuts(c) => c,
                    }
                }
                Some(_) if rounds < MAX_CUT_ROUNDS => sep.fractional(&sol.x),
                Some(_) => Vec::new(),
            };
            if let Some(j) = fractional.filter(|_| cuts.is_empty()) {
                let v = sol.x[j];
                let (down, up) = (v.floor() as i64, v.ceil() as i64);
                for (lo, hi) in [(local.lower[j], Some(down)), (Some(up), local.upper[j])] {
                    let mut fixings = node.fixings.clone();
                    fixings.retain(|f| f.0 != j);
                    fixings.push((j, lo, hi));
                    let child = Node { id: store.len(), depth: node.depth + 1, bound, fixings, basis: basis.clone() };
                    heap.push((Reverse(bound), child.depth, Reverse(child.id)));
                    store.push(Some(child));
                }
                break format!("branch x{j}={v:.3} bound {bound}");
            }
            if cuts.is_empty() {
                return Err(ExactError::Stalled);
            }
            rounds += 1;
            for c in cuts.drain(..) {
                let row = lp.row_count();
                lp.rows.push(c.clone());
                local.rows.push(c);
                basis.push(lp.var_count() + row);
            }
        };
        log.push(format!(
            "node {} depth {} {} incumbent {} cuts {}",
            node.id,
            node.depth,
            outcome,
            best.as_ref().map_or("-".to_string(), |b| b.0.to_string()),
            lp.row_count() - base_rows
        ));
    }
    Ok(Outcome { best, root_bound, nodes, log })
}

fn solve_node(lp: &LinearProgram, initial: &[usize], basis: &[usize]) -> Result<LpSolution, LpError> {
    let warm = (!basis.is_empty()).then_some(basis);
    solve_with_columns(lp, initial, warm)
}

fn most_fractional(x: &[f64], priority: &[Option<u8>]) -> Option<usize> {
    let mut best: Option<(u8, f64, usize)> = None;
    for (j, p) in priority.iter().enumerate() {
        let Some(class) = *p else { continue };
        let f = (x[j] - x[j].floor()).min(x[j].ceil() - x[j]);
        if f <= EPS {
            continue;
        }
        let better = match best {
            None => true,
            Some((c, bf, _)) => class < c || (class == c && f > bf + 1e-12),
        };
        if better {
            best = Some((class, f, j));
        }
    }
    best.map(|b| b.2)
}
