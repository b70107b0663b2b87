//! The fractional strip cover: choose strips per owner (`y`) and connect
//! endpoints (`x`, loops counting twice) so that every endpoint of a chosen
//! strip is connected exactly as often as its strip is chosen.

use std::collections::HashMap;

use num_rational::Ratio;

use super::{solve_with_columns, LinearProgram, LpError, LpSolution, Sense};
use crate::rational::Rational;
use crate::strips::StripGraph;

#[derive(Clone, Debug)]
pub struct CoverLp {
    pub lp: LinearProgram,
    /// Variable of every strip's `y`.
    pub y_var: Vec<usize>,
    /// Endpoint pair `(a, b)`, `a <= b`, of every `x` variable, indexed by
    /// `variable - x_offset`.
    pub x_pairs: Vec<(usize, usize)>,
    pub x_offset: usize,
    pub x_index: HashMap<(usize, usize), usize>,
    /// Crash basis: one `y` per owner row and every loop for endpoint rows.
    pub crash_basis: Vec<usize>,
}

impl CoverLp {
    pub fn x_var(&self, a: usize, b: usize) -> Option<usize> {
        self.x_index.get(&(a.min(b), a.max(b))).copied()
    }
}

pub fn build_cover_lp(g: &StripGraph) -> CoverLp {
    let mut lp = LinearProgram::default();
    let y_var: Vec<usize> = (0..g.strip_count()).map(|s| lp.add_var(format!("y{s}"), 0, Some(0), Some(1))).collect();
    let x_offset = lp.var_count();
    let mut x_pairs = Vec::new();
    let mut x_index = HashMap::new();
    let mut incident: Vec<Vec<(usize, i64)>> = vec![Vec::new(); g.endpoint_count()];
    for (a, b) in g.pairs() {
        if !g.is_lp_pair(a, b) {
            continue;
        }
        let v = lp.add_var(format!("x{a}_{b}"), g.cost(a, b), Some(0), Some(1));
        x_index.insert((a, b), v);
        x_pairs.push((a, b));
        if a == b {
            incident[a].push((v, 2));
        } else {
            incident[a].push((v, 1));
            incident[b].push((v, 1));
        }
    }
    let mut crash_basis = Vec::new();
    for o in 0..g.owner_count() {
        let coeffs = g.strips_of(o).iter().map(|&s| (y_var[s], 1)).collect();
        lp.add_row(format!("own{o}"), coeffs, Sense::Eq, 1);
        crash_basis.push(y_var[g.strips_of(o)[0]]);
    }
    for (v, inc) in incident.into_iter().enumerate() {
        let mut coeffs = inc;
        coeffs.push((y_var[v / 2], -1));
        lp.add_row(format!("end{v}"), coeffs, Sense::Eq, 0);
        match x_index.get(&(v, v)) {
            Some(&x) => crash_basis.push(x),
            None => crash_basis.push(usize::MAX),
        }
    }
    let crash_basis = crash_basis.into_iter().filter(|&b| b != usize::MAX).collect();
    CoverLp { lp, y_var, x_pairs, x_offset, x_index, crash_basis }
}

#[derive(Clone, Debug)]
pub struct CoverLpSolution {
    pub solution: LpSolution,
    pub y: Vec<f64>,
    /// Nonzero `x` values by endpoint pair.
    pub x: Vec<((usize, usize), f64)>,
    /// Exact bound in cost units of the graph.
    pub bound_units: Ratio<i128>,
    /// Exact bound as a cost.
    pub value: Rational,
}

impl CoverLpSolution {
    /// Strip with the largest `y` per owner, ties to the smallest strip id.
    pub fn dominant_strips(&self, g: &StripGraph) -> Vec<usize> {
        (0..g.owner_count())
            .map(|o| {
                let mut best = g.strips_of(o)[0];
                for &s in g.strips_of(o) {
                    if self.y[s] > self.y[best] + 1e-9 {
                        best = s;
                    }
                }
                best
            })
            .collect()
    }
}

pub(crate) fn units_to_rational(units: &Ratio<i128>, scale: i64) -> Rational {
    let r = units / Ratio::from_integer(scale as i128);
    Rational::new(
        i64::try_from(*r.numer()).expect("bound does not fit"),
        i64::try_from(*r.denom()).expect("bound does not fit"),
    )
}

/// Wraps a solution of `cover.lp` (or an extension of it with extra rows).
pub fn wrap_cover_solution(cover: &CoverLp, g: &StripGraph, solution: LpSolution) -> CoverLpSolution {
    let y = cover.y_var.iter().map(|&v| solution.x[v]).collect();
    let x = cover
        .x_pairs
        .iter()
        .enumerate()
        .filter_map(|(k, &p)| {
            let v = solution.x[cover.x_offset + k];
            (v > 1e-9).then_some((p, v))
        })
        .collect();
    CoverLpSolution {
        y,
        x,
        bound_units: solution.bound,
        value: units_to_rational(&solution.bound, g.scale()),
        solution,
    }
}

/// Columns to start column generation from: every `y`, every loop and the
/// cheapest few connections of each endpoint.
pub(crate) fn initial_columns(cover: &CoverLp, g: &StripGraph) -> Vec<usize> {
    const NEAREST: usize = 6;
    let mut cols: Vec<usize> = cover.y_var.clone();
    cols.extend(cover.crash_basis.iter().copied());
    for v in 0..g.endpoint_count() {
        let mut near: Vec<(i64, usize)> = (0..g.endpoint_count())
            .filter_map(|w| cover.x_var(v, w).map(|x| (g.cost(v, w), x)))
            .collect();
        near.sort_unstable();
        cols.extend(near.iter().take(NEAREST).map(|&(_, x)| x));
    }
    cols.sort_unstable();
    cols.dedup();
    cols
}

pub fn solve_cover_lp(g: &StripGraph) -> Result<CoverLpSolution, LpError> {
    let cover = build_cover_lp(g);
    let initial = initial_columns(&cover, g);
    let solution = solve_with_columns(&cover.lp, &initial, Some(&cover.crash_basis))?;
    Ok(wrap_cover_solution(&cover, g, solution))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid_instance, Coverage, Pixel};
    use crate::lp::solve_exact;
    use crate::strips::strips_from_grid;

    #[test]
    fn domino_lp_shape() {
        let inst = build_grid_instance([Pixel::new(0, 0), Pixel::new(1, 0)], Coverage::Full, 1.into(), 1.into()).unwrap();
        let gs = strips_from_grid(&inst).unwrap();
        let cover = build_cover_lp(&gs.graph);
        assert_eq!(cover.y_var.len(), 4);
        assert_eq!(cover.x_pairs.len(), 36);
        assert_eq!(cover.lp.row_count(), 10);
        assert_eq!(cover.crash_basis.len(), 10);
        let fast = solve_cover_lp(&gs.graph).unwrap();
        let exact = solve_exact(&cover.lp).unwrap();
        assert_eq!(fast.bound_units, exact.bound);
        assert!(fast.value <= Rational::from_integer(6));
    }
}
