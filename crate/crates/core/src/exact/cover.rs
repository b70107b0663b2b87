use super::bnb::{branch_and_bound, Integral, Separator};
use super::{CutPool, ExactError, ExactOptions, ExactResult};
use super::traversal::TraversalModel;
use crate::approx::approx_cycle_cover;
use crate::grid::{validate_cycle_cover, Coverage, CycleCover, GridInstance};
use crate::lp::{build_cover_lp, CoverLp};
use crate::rational::{from_units, to_units, Rational};
use crate::strips::{alternating_cycles, strips_from_grid, GridStrips};

struct CoverSeparator<'a> {
    gs: &'a GridStrips,
    cover: &'a CoverLp,
}

impl Separator for CoverSeparator<'_> {
    type Solution = CycleCover;

    fn integral(&mut self, x: &[i64]) -> Integral<CycleCover> {
        let g = &self.gs.graph;
        let strips: Vec<usize> = (0..g.strip_count()).filter(|&s| x[self.cover.y_var[s]] > 0).collect();
        let pairs: Vec<(usize, usize)> =
            self.cover.x_pairs.iter().enumerate().filter(|&(k, _)| x[self.cover.x_offset + k] > 0).map(|(_, &p)| p).collect();
        let cost: i64 = pairs.iter().map(|&(a, b)| g.cost(a, b)).sum::<i64>()
            + (0..g.owner_count()).filter(|&o| g.strips_of(o).iter().all(|&s| x[self.cover.y_var[s]] == 0)).map(|o| g.penalty(o)).sum::<i64>();
        let cycles = alternating_cycles(&strips, &pairs).iter().filter_map(|c| self.gs.realize(c)).collect();
        Integral::Feasible(cost, CycleCover::new(cycles))
    }
}

/// Every integral traversal point is a cycle cover, so no separation.
struct Anything<'a> {
    inst: &'a GridInstance,
    model: &'a TraversalModel,
}

impl Separator for Anything<'_> {
    type Solution = CycleCover;

    fn integral(&mut self, x: &[i64]) -> Integral<CycleCover> {
        Integral::Feasible(self.model.cost_units(x), self.model.to_cover(self.inst, x))
    }
}

/// Optimal cycle cover by branch and bound on the pixel traversal IP (the
/// tour IP without connectivity cuts).
pub fn solve_exact_cycle_cover(inst: &GridInstance, opts: &ExactOptions) -> Result<ExactResult, ExactError> {
    if inst.len() > opts.max_pixels {
        return Err(ExactError::SizeLimitExceeded { pixels: inst.len(), limit: opts.max_pixels });
    }
    if inst.strip_owners().is_empty() {
        return Ok(empty_result(inst));
    }
    let model = TraversalModel::new(inst);
    let lp = model.lp.clone();
    let priority = vec![Some(0u8); lp.var_count()];
    let initial: Vec<usize> = (0..lp.var_count()).collect();
    let incumbent = approx_cycle_cover(inst).ok().map(|r| (to_units(&r.cost.total, inst.scale()), r.cover));
    let out = branch_and_bound(lp, &priority, &initial, &mut Anything { inst, model: &model }, incumbent, opts)?;
    finish(inst, out)
}

/// Optimal cycle cover by branch and bound on the strip formulation, most
/// fractional strip choice first, then connections. Penalty owners get a
/// skip variable in their owner row instead of a gadget. Agrees with
/// [`solve_exact_cycle_cover`] but its relaxation is much weaker, so it is
/// only practical on very small instances.
pub fn solve_strip_cycle_cover(inst: &GridInstance, opts: &ExactOptions) -> Result<ExactResult, ExactError> {
    if inst.len() > opts.max_pixels {
        return Err(ExactError::SizeLimitExceeded { pixels: inst.len(), limit: opts.max_pixels });
    }
    if inst.strip_owners().is_empty() {
        return Ok(empty_result(inst));
    }
    let gs = strips_from_grid(inst)?;
    let g = &gs.graph;
    let cover = build_cover_lp(g);
    let mut lp = cover.lp.clone();
    let mut priority: Vec<Option<u8>> = (0..lp.var_count()).map(|j| Some(if j < cover.x_offset { 0 } else { 1 })).collect();
    if matches!(inst.coverage(), Coverage::Penalty(_)) {
        for o in 0..g.owner_count() {
            let z = lp.add_var(format!("z{o}"), g.penalty(o), Some(0), Some(1));
            lp.rows[o].coeffs.push((z, 1));
            priority.push(Some(0));
        }
    }
    let mut initial: Vec<usize> = crate::lp::initial_columns(&cover, g);
    initial.extend(cover.x_offset + cover.x_pairs.len()..lp.var_count());

    let incumbent = approx_cycle_cover(inst).ok().map(|r| (to_units(&r.cost.total, inst.scale()), r.cover));
    let mut sep = CoverSeparator { gs: &gs, cover: &cover };
    let out = branch_and_bound(lp, &priority, &initial, &mut sep, incumbent, opts)?;
    finish(inst, out)
}

fn finish(inst: &GridInstance, out: super::bnb::Outcome<CycleCover>) -> Result<ExactResult, ExactError> {
    let (units, cover) = out.best.ok_or(ExactError::Infeasible)?;
    let report = validate_cycle_cover(inst, &cover);
    debug_assert!(report.is_valid(), "{:?}", report.problems());
    debug_assert_eq!(report.cost.total, from_units(units, inst.scale()));
    Ok(ExactResult {
        cost: report.cost.clone(),
        value: report.cost.total,
        root_bound: out.root_bound.map_or(Rational::from_integer(0), |b| Rational::new(b as i64, inst.scale())),
        cover,
        nodes: out.nodes,
        cuts: CutPool::default(),
        log: out.log,
    })
}

pub(crate) fn empty_result(inst: &GridInstance) -> ExactResult {
    let cover = CycleCover::default();
    let cost = validate_cycle_cover(inst, &cover).cost;
    ExactResult {
        value: cost.total,
        root_bound: cost.total,
        cost,
        cover,
        nodes: 0,
        cuts: CutPool::default(),
        log: Vec::new(),
    }
}
