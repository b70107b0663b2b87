//! Subtour elimination for the traversal formulation.
//!
//! Every cut says: some traversal not used by the current point has to be
//! used, or one of the named pixels is skipped. Valid tours satisfy them
//! because a single closed walk that visits pixels inside and outside a
//! component has to leave that component's current traversals somewhere.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use super::traversal::{components, Component, TraversalModel};
use crate::grid::{Coverage, GridInstance, Heading};
use crate::lp::{Constraint, Sense};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutKind {
    /// Traversals entering a group of components from outside.
    Simple,
    /// Traversals that would change how a component passes its pixels.
    Advanced,
    /// Fallback over all pixels when no component has a private witness.
    Global,
    /// Entering cut found by max flow on a fractional point.
    Flow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub kind: CutKind,
    pub row: Constraint,
}

impl Cut {
    fn new(kind: CutKind, vars: impl IntoIterator<Item = usize>) -> Cut {
        let vars: BTreeSet<usize> = vars.into_iter().collect();
        let name = format!("{kind:?}").to_lowercase();
        Cut { kind, row: Constraint { coeffs: vars.into_iter().map(|v| (v, 1)).collect(), sense: Sense::Ge, rhs: 1, name } }
    }

    pub fn lhs(&self, x: &[i64]) -> i64 {
        self.row.coeffs.iter().map(|&(v, c)| c * x[v]).sum()
    }

    pub fn is_violated_by(&self, x: &[i64]) -> bool {
        self.lhs(x) < self.row.rhs
    }
}

#[derive(Clone, Debug, Default)]
pub struct CutPool {
    pub cuts: Vec<Cut>,
}

impl CutPool {
    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn count(&self, kind: CutKind) -> usize {
        self.cuts.iter().filter(|c| c.kind == kind).count()
    }

    /// Indices of cuts that `x` violates.
    pub fn violated_by(&self, x: &[i64]) -> Vec<usize> {
        (0..self.cuts.len()).filter(|&i| self.cuts[i].is_violated_by(x)).collect()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeparationError {
    #[error("the point is a single closed walk")]
    NoViolation,
    #[error("no component has a pixel that only it covers")]
    NoWitness,
}

/// Active row pixel outside `set` that is most expensive to skip.
fn outside_witness(inst: &GridInstance, model: &TraversalModel, x: &[i64], set: &BTreeSet<usize>) -> Option<usize> {
    (0..inst.len())
        .filter(|p| !set.contains(p) && model.is_active(*p, x))
        .min_by_key(|&p| (std::cmp::Reverse(inst.penalty_units(p)), p))
}

fn skips(model: &TraversalModel, pixels: &[usize]) -> Vec<usize> {
    pixels.iter().filter_map(|&p| model.skip[p]).collect()
}

/// Variables entering `set` from outside.
fn entering(inst: &GridInstance, model: &TraversalModel, set: &BTreeSet<usize>) -> Vec<usize> {
    set.iter()
        .flat_map(|&p| model.at_pixel[p].iter().copied())
        .filter(|&v| !set.contains(&model.traversals[v].from_pixel(inst)))
        .collect()
}

/// Components of an infeasible integral point, or `NoViolation` when it is
/// already a single walk.
fn split(inst: &GridInstance, model: &TraversalModel, x: &[i64]) -> Result<Vec<Component>, SeparationError> {
    let comps = components(inst, model, x);
    let active_outside = |c: &Component| (0..inst.len()).any(|p| model.is_active(p, x) && !c.pixels.contains(&p));
    if comps.len() <= 1 && comps.iter().all(|c| !active_outside(c)) {
        return Err(SeparationError::NoViolation);
    }
    Ok(comps)
}

/// One cut per group of components that share pixels, provided some active
/// row pixel lies outside the group.
pub fn separate_simple_cut(inst: &GridInstance, model: &TraversalModel, x: &[i64]) -> Result<Vec<Cut>, SeparationError> {
    let comps = split(inst, model, x)?;
    let mut groups: Vec<BTreeSet<usize>> = Vec::new();
    for c in comps {
        let mut set = c.pixels;
        groups.retain(|g| {
            if g.is_disjoint(&set) {
                true
            } else {
                set.extend(g.iter().copied());
                false
            }
        });
        groups.push(set);
    }
    let mut cuts = Vec::new();
    for set in &groups {
        let Some(b) = outside_witness(inst, model, x, set) else { continue };
        // A group without active pixels may be avoided altogether.
        let a = set.iter().copied().filter(|&p| model.is_active(p, x)).min_by_key(|&p| (std::cmp::Reverse(inst.penalty_units(p)), p));
        let Some(a) = a else { continue };
        let mut vars = entering(inst, model, set);
        vars.extend(skips(model, &[a, b]));
        cuts.push(Cut::new(CutKind::Simple, vars));
    }
    if cuts.is_empty() {
        return Err(SeparationError::NoViolation);
    }
    Ok(cuts)
}

/// Pixels whose instance neighbours include no opposite pair: every pass
/// through them turns.
fn is_corner(inst: &GridInstance, p: usize) -> bool {
    let has = |h: Heading| inst.neighbor(p, h).is_some();
    !(has(Heading::North) && has(Heading::South)) && !(has(Heading::East) && has(Heading::West))
}

fn is_boundary(inst: &GridInstance, p: usize) -> bool {
    Heading::ALL.iter().any(|&h| inst.neighbor(p, h).is_none())
}

/// Used traversals at each pixel, over all components.
fn used_at<'a>(model: &'a TraversalModel, x: &'a [i64], p: usize) -> impl Iterator<Item = usize> + 'a {
    model.at_pixel[p].iter().copied().filter(move |&v| x[v] > 0)
}

/// Per component with a witness (an active row pixel covered by it alone)
/// and an active row pixel elsewhere: unused traversals at the witness,
/// turning traversals where everything currently goes straight, and unused
/// traversals at its remaining pixels.
pub fn separate_advanced_cut(inst: &GridInstance, model: &TraversalModel, x: &[i64]) -> Result<Vec<Cut>, SeparationError> {
    let comps = split(inst, model, x)?;
    let mut cover_count = vec![0usize; inst.len()];
    for c in &comps {
        for &p in &c.pixels {
            cover_count[p] += 1;
        }
    }
    let all_straight = |p: usize| used_at(model, x, p).all(|v| model.traversals[v].is_straight());
    let mut cuts = Vec::new();
    for c in &comps {
        let witness = c
            .pixels
            .iter()
            .copied()
            .filter(|&p| model.is_active(p, x) && cover_count[p] == 1)
            .min_by_key(|&p| (!is_corner(inst, p), !is_boundary(inst, p), p));
        let (Some(pf), Some(other)) = (witness, outside_witness(inst, model, x, &c.pixels)) else { continue };
        let mut vars: Vec<usize> = model.at_pixel[pf].iter().copied().filter(|&v| x[v] == 0).collect();
        for &p in c.pixels.iter().filter(|&&p| p != pf) {
            if all_straight(p) {
                vars.extend(model.at_pixel[p].iter().copied().filter(|&v| !model.traversals[v].is_straight()));
            } else {
                vars.extend(model.at_pixel[p].iter().copied().filter(|&v| x[v] == 0));
            }
        }
        vars.extend(skips(model, &[pf, other]));
        cuts.push(Cut::new(CutKind::Advanced, vars));
    }
    if cuts.is_empty() {
        return Err(SeparationError::NoWitness);
    }
    Ok(cuts)
}

/// Fallback when no component has a witness. Fails with `NoWitness` when a
/// single component already covers every active row pixel, since such a
/// point is resolved by keeping that component alone.
pub fn separate_global_cut(inst: &GridInstance, model: &TraversalModel, x: &[i64]) -> Result<Cut, SeparationError> {
    let comps = split(inst, model, x)?;
    let mut outside = Vec::new();
    for c in &comps {
        match outside_witness(inst, model, x, &c.pixels) {
            Some(q) => outside.push(q),
            None => return Err(SeparationError::NoWitness),
        }
    }
    let mut vars = Vec::new();
    for p in 0..inst.len() {
        let used: Vec<usize> = used_at(model, x, p).collect();
        let at = model.at_pixel[p].iter().copied();
        if used.is_empty() {
            vars.extend(at);
        } else if used.iter().all(|&v| model.traversals[v].is_straight()) {
            vars.extend(at.filter(|&v| !model.traversals[v].is_straight()));
        } else {
            vars.extend(at.filter(|&v| x[v] == 0));
        }
    }
    vars.extend(skips(model, &outside));
    Ok(Cut::new(CutKind::Global, vars))
}

const FLOW_EPS: f64 = 1e-6;
const MAX_FLOW_CUTS: usize = 32;

/// Entering cuts violated by a fractional point, found with max flow
/// between row pixels (capacity of a move: its total use).
pub(crate) fn separate_flow_cuts(inst: &GridInstance, model: &TraversalModel, x: &[f64]) -> Vec<Cut> {
    let n = inst.len();
    // cap[p][h]: flow over the move leaving p with heading h.
    let mut cap = vec![[0.0f64; 4]; n];
    for (v, t) in model.traversals.iter().enumerate() {
        if x[v] > FLOW_EPS {
            cap[t.from_pixel(inst)][t.enter.index()] += x[v];
        }
    }
    let z = |p: usize| model.skip[p].map_or(0.0, |v| x[v]);
    let rows: Vec<usize> = (0..n).filter(|&p| model.has_row[p]).collect();
    let sinks: Vec<usize> = match inst.coverage() {
        Coverage::Penalty(_) => {
            let mut r = rows.clone();
            r.sort_by(|&a, &b| z(a).total_cmp(&z(b)).then(a.cmp(&b)));
            r.into_iter().take(2).collect()
        }
        _ => rows.first().copied().into_iter().collect(),
    };
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut cuts = Vec::new();
    for &s in &sinks {
        for &t in &rows {
            if t == s || z(s) + z(t) >= 1.0 - FLOW_EPS {
                continue;
            }
            let (flow, reach) = max_flow(inst, &cap, t, s);
            if flow + z(s) + z(t) >= 1.0 - FLOW_EPS {
                continue;
            }
            let set: BTreeSet<usize> = (0..n).filter(|&p| !reach[p]).collect();
            let mut vars = entering(inst, model, &set);
            vars.extend(skips(model, &[s, t]));
            let cut = Cut::new(CutKind::Flow, vars);
            let key: Vec<usize> = cut.row.coeffs.iter().map(|c| c.0).collect();
            if seen.insert(key) {
                cuts.push(cut);
                if cuts.len() >= MAX_FLOW_CUTS {
                    return cuts;
                }
            }
        }
    }
    cuts
}

/// Edmonds-Karp from `source` to `sink` on the move graph. Returns the flow
/// value and the pixels reachable from `source` in the final residual graph.
fn max_flow(inst: &GridInstance, cap: &[[f64; 4]], source: usize, sink: usize) -> (f64, Vec<bool>) {
    let n = inst.len();
    let mut flow = vec![[0.0f64; 4]; n];
    let residual = |flow: &[[f64; 4]], p: usize, h: Heading| -> f64 {
        let q = inst.neighbor(p, h).unwrap();
        cap[p][h.index()] - flow[p][h.index()] + flow[q][h.opposite().index()]
    };
    let mut total = 0.0;
    loop {
        let mut pred: Vec<Option<(usize, Heading)>> = vec![None; n];
        let mut reach = vec![false; n];
        reach[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(p) = queue.pop_front() {
            for h in Heading::ALL {
                let Some(q) = inst.neighbor(p, h) else { continue };
                if !reach[q] && residual(&flow, p, h) > FLOW_EPS {
                    reach[q] = true;
                    pred[q] = Some((p, h));
                    queue.push_back(q);
                }
            }
        }
        if !reach[sink] {
            return (total, reach);
        }
        let mut push = f64::INFINITY;
        let mut q = sink;
        while let Some((p, h)) = pred[q] {
            push = push.min(residual(&flow, p, h));
            q = p;
        }
        let mut q = sink;
        while let Some((p, h)) = pred[q] {
            // Cancel reverse flow first.
            let back = &mut flow[q][h.opposite().index()];
            let cancel = back.min(push);
            *back -= cancel;
            flow[p][h.index()] += push - cancel;
            q = p;
        }
        total += push;
    }
}
