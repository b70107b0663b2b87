use super::bnb::{branch_and_bound, Integral, Separator};
use super::cover::empty_result;
use super::cuts::{separate_advanced_cut, separate_flow_cuts, separate_global_cut, separate_simple_cut, Cut, CutPool};
use super::traversal::{components, TraversalModel};
use super::{ExactError, ExactOptions, ExactResult};
use crate::approx::approx_tour;
use crate::grid::{validate_tour, CycleCover, GridInstance};
use crate::lp::Constraint;
use crate::rational::{from_units, to_units, Rational};

struct TourSeparator<'a> {
    inst: &'a GridInstance,
    model: &'a TraversalModel,
    pool: CutPool,
}

impl TourSeparator<'_> {
    fn emit(&mut self, cuts: Vec<Cut>) -> Vec<Constraint> {
        let rows = cuts.iter().map(|c| c.row.clone()).collect();
        self.pool.cuts.extend(cuts);
        rows
    }

    /// `x` restricted to one component plus skips for everything it misses.
    fn restrict(&self, x: &[i64], vars: &[usize]) -> Vec<i64> {
        let m = self.model;
        let mut y = vec![0; x.len()];
        for &v in vars {
            y[v] = x[v];
        }
        let visited: std::collections::BTreeSet<usize> = vars.iter().map(|&v| m.traversals[v].pixel).collect();
        for p in 0..self.inst.len() {
            if let Some(z) = m.skip[p] {
                y[z] = i64::from(!visited.contains(&p));
            }
        }
        y
    }
}

impl Separator for TourSeparator<'_> {
    type Solution = CycleCover;

    fn integral(&mut self, x: &[i64]) -> Integral<CycleCover> {
        let (inst, m) = (self.inst, self.model);
        let comps = components(inst, m, x);
        if comps.len() <= 1 {
            return Integral::Feasible(m.cost_units(x), m.to_cover(inst, x));
        }
        // A component that covers every active pixel alone is a tour at most
        // as expensive as the whole point.
        let alone = comps
            .iter()
            .filter(|c| (0..inst.len()).all(|p| !m.is_active(p, x) || c.pixels.contains(&p)))
            .map(|c| self.restrict(x, &c.vars))
            .min_by_key(|y| m.cost_units(y));
        if let Some(y) = alone {
            return Integral::Feasible(m.cost_units(&y), m.to_cover(inst, &y));
        }
        let cuts = separate_simple_cut(inst, m, x)
            .or_else(|_| separate_advanced_cut(inst, m, x))
            .or_else(|_| separate_global_cut(inst, m, x).map(|c| vec![c]));
        match cuts {
            Ok(c) => Integral::Cuts(self.emit(c)),
            // Unreachable: some component would cover every active pixel.
            Err(_) => Integral::Cuts(Vec::new()),
        }
    }

    fn fractional(&mut self, x: &[f64]) -> Vec<Constraint> {
        let cuts = separate_flow_cuts(self.inst, self.model, x);
        self.emit(cuts)
    }
}

/// Optimal tour by branch and cut on pixel traversals.
pub fn solve_exact_tour(inst: &GridInstance, opts: &ExactOptions) -> Result<ExactResult, ExactError> {
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
    let incumbent = approx_tour(inst).ok().map(|r| (to_units(&r.cost.total, inst.scale()), r.cover));
    let mut sep = TourSeparator { inst, model: &model, pool: CutPool::default() };
    let out = branch_and_bound(lp, &priority, &initial, &mut sep, incumbent, opts)?;
    let (units, cover) = out.best.ok_or(ExactError::Infeasible)?;
    let report = validate_tour(inst, &cover);
    debug_assert!(report.is_valid(), "{:?}", report.problems());
    debug_assert_eq!(report.cost.total, from_units(units, inst.scale()));
    Ok(ExactResult {
        cost: report.cost.clone(),
        value: report.cost.total,
        root_bound: out.root_bound.map_or(Rational::from_integer(0), |b| Rational::new(b as i64, inst.scale())),
        cover,
        nodes: out.nodes,
        cuts: sep.pool,
        log: out.log,
    })
}
