//! Tour formulation on pixel traversals: a variable per pixel and pair of
//! (entering, leaving) headings, flow conservation on every directed move
//! and a covering row per pixel that must (or should) be visited.

use std::collections::{BTreeSet, HashMap};

use crate::grid::{Configuration, Coverage, Cycle, CycleCover, GridInstance, Heading, Pixel};
use crate::lp::{LinearProgram, Sense};

/// Passing `pixel`: arriving while moving `enter`, departing moving `leave`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Traversal {
    pub pixel: usize,
    pub enter: Heading,
    pub leave: Heading,
}

impl Traversal {
    pub fn is_straight(&self) -> bool {
        self.enter == self.leave
    }

    pub fn turns(&self) -> i64 {
        self.enter.turns_to(self.leave)
    }

    /// Pixel the traversal comes from.
    pub fn from_pixel(&self, inst: &GridInstance) -> usize {
        inst.neighbor(self.pixel, self.enter.opposite()).expect("traversal enters from off the instance")
    }
}

#[derive(Clone, Debug)]
pub struct TraversalModel {
    pub lp: LinearProgram,
    /// Traversal of every `x` variable; `x` variables come first.
    pub traversals: Vec<Traversal>,
    /// `x` variables per pixel.
    pub at_pixel: Vec<Vec<usize>>,
    /// Skip variable per pixel (penalty coverage).
    pub skip: Vec<Option<usize>>,
    /// Whether the pixel has a covering row.
    pub has_row: Vec<bool>,
    index: HashMap<Traversal, usize>,
}

impl TraversalModel {
    pub fn new(inst: &GridInstance) -> Self {
        let mut lp = LinearProgram::default();
        let mut traversals = Vec::new();
        let mut at_pixel = vec![Vec::new(); inst.len()];
        let mut index = HashMap::new();
        let (k, t) = (inst.kappa_units(), inst.tau_units());
        for p in 0..inst.len() {
            for enter in Heading::ALL {
                if inst.neighbor(p, enter.opposite()).is_none() {
                    continue;
                }
                for leave in Heading::ALL {
                    if inst.neighbor(p, leave).is_none() {
                        continue;
                    }
                    let tr = Traversal { pixel: p, enter, leave };
                    let v = lp.add_var(format!("x{p}{}{}", enter.letter(), leave.letter()), k + t * tr.turns(), Some(0), None);
                    traversals.push(tr);
                    at_pixel[p].push(v);
                    index.insert(tr, v);
                }
            }
        }
        for p in 0..inst.len() {
            for h in Heading::ALL {
                let Some(q) = inst.neighbor(p, h) else { continue };
                let mut coeffs: Vec<(usize, i64)> = Vec::new();
                for &v in &at_pixel[p] {
                    if traversals[v].leave == h {
                        coeffs.push((v, 1));
                    }
                }
                for &v in &at_pixel[q] {
                    if traversals[v].enter == h {
                        coeffs.push((v, -1));
                    }
                }
                lp.add_row(format!("flow{p}{}", h.letter()), coeffs, Sense::Eq, 0);
            }
        }
        let mut skip = vec![None; inst.len()];
        let mut has_row = vec![false; inst.len()];
        for p in 0..inst.len() {
            let required = match inst.coverage() {
                Coverage::Full => true,
                Coverage::Subset(_) => inst.is_required(p),
                Coverage::Penalty(_) => inst.penalty_units(p) > 0,
            };
            if !required {
                continue;
            }
            has_row[p] = true;
            let mut coeffs: Vec<(usize, i64)> = at_pixel[p].iter().map(|&v| (v, 1)).collect();
            if matches!(inst.coverage(), Coverage::Penalty(_)) {
                let z = lp.add_var(format!("z{p}"), inst.penalty_units(p), Some(0), Some(1));
                skip[p] = Some(z);
                coeffs.push((z, 1));
            }
            lp.add_row(format!("cover{p}"), coeffs, Sense::Ge, 1);
        }
        TraversalModel { lp, traversals, at_pixel, skip, has_row, index }
    }

    pub fn var(&self, t: Traversal) -> Option<usize> {
        self.index.get(&t).copied()
    }

    pub fn x_count(&self) -> usize {
        self.traversals.len()
    }

    pub fn cost_units(&self, x: &[i64]) -> i64 {
        self.lp.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// A row pixel that the point `x` does not skip.
    pub fn is_active(&self, p: usize, x: &[i64]) -> bool {
        self.has_row[p] && self.skip[p].is_none_or(|z| x[z] == 0)
    }

    /// Variable values of a cover: traversal counts plus skips of unvisited
    /// row pixels.
    pub fn counts(&self, inst: &GridInstance, cover: &CycleCover) -> Vec<i64> {
        let mut x = vec![0; self.lp.var_count()];
        for cy in &cover.cycles {
            let steps = cy.steps();
            let n = steps.len();
            // Headings of the moves, in order, with the pixel each one reaches.
            let moves: Vec<(Heading, Pixel)> = (0..n)
                .filter(|&i| steps[i].pixel != steps[(i + 1) % n].pixel)
                .map(|i| (steps[i].heading, steps[(i + 1) % n].pixel))
                .collect();
            for m in 0..moves.len() {
                let (enter, p) = moves[m];
                let leave = moves[(m + 1) % moves.len()].0;
                let pixel = inst.index_of(p).expect("cover leaves the instance");
                let v = self.var(Traversal { pixel, enter, leave }).expect("cover uses a missing traversal");
                x[v] += 1;
            }
        }
        let covered = cover.covered();
        for p in 0..inst.len() {
            if let Some(z) = self.skip[p] {
                if !covered.contains(&inst.pixels()[p]) {
                    x[z] = 1;
                }
            }
        }
        x
    }

    /// Closed walks of an integral point, one per component (see
    /// [`components`]).
    pub fn to_cover(&self, inst: &GridInstance, x: &[i64]) -> CycleCover {
        let cycles = components(inst, self, x).iter().map(|c| self.euler_walk(inst, x, &c.vars)).collect();
        CycleCover::new(cycles)
    }

    /// Hierholzer on the move graph: nodes are directed moves, every
    /// traversal is an arc from the move that enters its pixel to the move
    /// that leaves it.
    fn euler_walk(&self, inst: &GridInstance, x: &[i64], vars: &[usize]) -> Cycle {
        let node = |p: usize, h: Heading| 4 * p + h.index();
        let mut out: HashMap<usize, Vec<usize>> = HashMap::new();
        for &v in vars {
            let t = self.traversals[v];
            let from = node(t.from_pixel(inst), t.enter);
            for _ in 0..x[v] {
                out.entry(from).or_default().push(v);
            }
        }
        for arcs in out.values_mut() {
            arcs.sort_unstable_by(|a, b| b.cmp(a));
        }
        let start = *out.keys().min().unwrap();
        let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
        let mut circuit: Vec<usize> = Vec::new();
        while let Some(&(u, arc)) = stack.last() {
            match out.get_mut(&u).and_then(|a| a.pop()) {
                Some(v) => {
                    let t = self.traversals[v];
                    stack.push((node(t.pixel, t.leave), Some(v)));
                }
                None => {
                    stack.pop();
                    if let Some(v) = arc {
                        circuit.push(v);
                    }
                }
            }
        }
        circuit.reverse();
        let mut walk = Vec::new();
        for v in circuit {
            let t = self.traversals[v];
            let p = inst.pixels()[t.pixel];
            walk.push(Configuration::new(p, t.enter));
            match t.turns() {
                0 => {}
                1 => walk.push(Configuration::new(p, t.leave)),
                _ => {
                    walk.push(Configuration::new(p, t.enter.clockwise()));
                    walk.push(Configuration::new(p, t.leave));
                }
            }
        }
        Cycle::from_walk_unchecked(walk)
    }
}

/// A connected piece of an integral point: its traversal variables and the
/// pixels they pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vars: Vec<usize>,
    pub pixels: BTreeSet<usize>,
}

/// Splits the used traversals into pieces that can each be walked as one
/// closed walk. Two traversals belong together when one leaves by the move
/// the other arrives by; arrivals over the same move can be paired freely.
pub fn components(inst: &GridInstance, model: &TraversalModel, x: &[i64]) -> Vec<Component> {
    let used: Vec<usize> = (0..model.x_count()).filter(|&v| x[v] > 0).collect();
    let node = |p: usize, h: Heading| 4 * p + h.index();
    let mut parent: HashMap<usize, usize> = HashMap::new();
    fn find(parent: &mut HashMap<usize, usize>, a: usize) -> usize {
        let p = *parent.entry(a).or_insert(a);
        if p == a {
            return a;
        }
        let r = find(parent, p);
        parent.insert(a, r);
        r
    }
    for &v in &used {
        let t = model.traversals[v];
        let (a, b) = (find(&mut parent, node(t.from_pixel(inst), t.enter)), find(&mut parent, node(t.pixel, t.leave)));
        if a != b {
            parent.insert(a.max(b), a.min(b));
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, Component> = std::collections::BTreeMap::new();
    for &v in &used {
        let t = model.traversals[v];
        let r = find(&mut parent, node(t.pixel, t.leave));
        let c = by_root.entry(r).or_insert_with(|| Component { vars: Vec::new(), pixels: BTreeSet::new() });
        c.vars.push(v);
        c.pixels.insert(t.pixel);
    }
    let mut comps: Vec<Component> = by_root.into_values().collect();
    comps.sort_by_key(|c| *c.pixels.iter().next().unwrap());
    comps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid_instance, validate_cycle_cover, Heading::*};

    fn domino(k: i64) -> GridInstance {
        build_grid_instance([Pixel::new(0, 0), Pixel::new(1, 0)], Coverage::Full, k.into(), 1.into()).unwrap()
    }

    #[test]
    fn domino_model() {
        let inst = domino(1);
        let m = TraversalModel::new(&inst);
        // One u-turn per pixel.
        assert_eq!(m.x_count(), 2);
        assert_eq!(m.lp.objective[..2], [3, 3]);
        let x = vec![1, 1];
        let cover = m.to_cover(&inst, &x);
        assert_eq!(cover.cycles.len(), 1);
        let report = validate_cycle_cover(&inst, &cover);
        assert!(report.is_valid());
        assert_eq!(report.cost.total, 6.into());
        assert_eq!(m.counts(&inst, &cover), x);
    }

    #[test]
    fn counts_round_trip_on_block() {
        let px: Vec<Pixel> = (0..3).flat_map(|x| (0..2).map(move |y| Pixel::new(x, y))).collect();
        let inst = build_grid_instance(px, Coverage::Full, 0.into(), 1.into()).unwrap();
        let m = TraversalModel::new(&inst);
        let c = |x: i32, y: i32, h: Heading| Configuration::new(Pixel::new(x, y), h);
        let cycle = Cycle::new(vec![
            c(0, 0, East),
            c(1, 0, East),
            c(2, 0, East),
            c(2, 0, North),
            c(2, 1, North),
            c(2, 1, West),
            c(1, 1, West),
            c(0, 1, West),
            c(0, 1, South),
            c(0, 0, South),
        ])
        .unwrap();
        let x = m.counts(&inst, &CycleCover::new(vec![cycle]));
        assert_eq!(m.cost_units(&x), 4);
        assert_eq!(components(&inst, &m, &x).len(), 1);
        let back = m.to_cover(&inst, &x);
        assert_eq!(m.counts(&inst, &back), x);
        assert_eq!(validate_cycle_cover(&inst, &back).cost.total, 4.into());
    }
}
