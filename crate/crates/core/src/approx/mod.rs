//! LP rounding: dominant strips, a perfect matching of their endpoints and
//! the realized cycles, plus the schemes that join cycles into one tour.

mod extract;
mod merge;
mod pcst;
mod tour;

use thiserror::Error;

use crate::grid::{validate_cycle_cover, validate_tour, CostBreakdown, Coverage, CycleCover, GridError, GridInstance, ValidationReport};
use crate::lp::{solve_cover_lp, CoverLpSolution, LpError};
use crate::matching::{Matching, MatchingError};
use crate::rational::Rational;
use crate::strips::{penalty_to_full, strips_from_grid, GridStrips, StripCycle, StripError};

pub use extract::{drop_unprofitable, realize_cover, round_strip_solution};
pub use merge::{exchange, merge_intersecting_cycles, splice_along, splice_at};
pub use pcst::{brute_force_pcst, mst, pcst_gw, pcst_objective, PcstSolution};
pub use tour::{connect_tour_full_grid, connect_tour_mst, connect_tour_pcst};

/// Strips per pixel on a grid.
pub const OMEGA: i64 = 2;
pub const GUARANTEE_COVER: i64 = 2 * OMEGA;
pub const GUARANTEE_FULL_TOUR: i64 = 6;
pub const GUARANTEE_SUBSET_TOUR: i64 = 4 * OMEGA + 2;
pub const GUARANTEE_PENALTY_TOUR: i64 = 4 * OMEGA + 4;

#[derive(Debug, Error)]
pub enum ApproxError {
    #[error(transparent)]
    Strip(#[from] StripError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("the cycles cannot be connected")]
    Disconnected,
}

#[derive(Clone, Debug)]
pub struct ApproxResult {
    pub cover: CycleCover,
    pub cost: CostBreakdown,
    pub lp_bound: Rational,
    /// `cost / lp_bound`, absent when the bound is zero.
    pub achieved_ratio: Option<Rational>,
    pub guarantee: Rational,
}

impl ApproxResult {
    pub(crate) fn new(inst: &GridInstance, cover: CycleCover, lp_bound: Rational, guarantee: i64) -> Self {
        let cost = validate_cycle_cover(inst, &cover).cost;
        let achieved_ratio = (lp_bound > Rational::from_integer(0)).then(|| cost.total / lp_bound);
        ApproxResult { cover, cost, lp_bound, achieved_ratio, guarantee: Rational::from_integer(guarantee) }
    }

    pub fn within_guarantee(&self) -> bool {
        self.achieved_ratio.is_none_or(|r| r <= self.guarantee)
    }

    pub fn validate(&self, inst: &GridInstance) -> ValidationReport {
        if self.cover.cycles.len() <= 1 {
            validate_tour(inst, &self.cover)
        } else {
            validate_cycle_cover(inst, &self.cover)
        }
    }
}

/// Intermediate results of the rounding pipeline.
#[derive(Clone, Debug)]
pub struct Rounding {
    pub strips: GridStrips,
    pub lp: CoverLpSolution,
    pub dominant: Vec<usize>,
    pub matching: Matching,
    pub strip_cycles: Vec<StripCycle>,
    pub cover: CycleCover,
}

/// Runs strips, LP, dominant strips, matching and extraction. Returns `None`
/// when nothing needs covering (then the empty cover is optimal).
pub fn round_cover_lp(inst: &GridInstance) -> Result<Option<Rounding>, ApproxError> {
    if inst.strip_owners().is_empty() {
        return Ok(None);
    }
    let mut strips = strips_from_grid(inst)?;
    if matches!(inst.coverage(), Coverage::Penalty(_)) {
        let full = penalty_to_full(&strips.graph)?;
        strips = strips.with_graph(full);
    }
    let lp = solve_cover_lp(&strips.graph)?;
    let dominant = lp.dominant_strips(&strips.graph);
    let (strip_cycles, matching) = round_strip_solution(&strips.graph, &lp)?;
    let cover = realize_cover(&strips, &strip_cycles);
    Ok(Some(Rounding { strips, lp, dominant, matching, strip_cycles, cover }))
}

pub fn approx_cycle_cover(inst: &GridInstance) -> Result<ApproxResult, ApproxError> {
    Ok(match round_cover_lp(inst)? {
        Some(r) => ApproxResult::new(inst, r.cover, r.lp.value, GUARANTEE_COVER),
        None => ApproxResult::new(inst, CycleCover::default(), Rational::from_integer(0), GUARANTEE_COVER),
    })
}

/// Rounds the LP and connects the cycles with the scheme of the coverage
/// variant: greedy merging (full), a doubled spanning tree (subset) or a
/// doubled prize-collecting tree (penalty).
pub fn approx_tour(inst: &GridInstance) -> Result<ApproxResult, ApproxError> {
    let Some(r) = round_cover_lp(inst)? else {
        return Ok(ApproxResult::new(inst, CycleCover::default(), Rational::from_integer(0), guarantee_tour(inst)));
    };
    let table = &r.strips.table;
    let tour = match inst.coverage() {
        Coverage::Full => tour::greedy_connect(&r.cover, inst, table)?,
        Coverage::Subset(_) => tour::mst_connect(&r.cover, inst, table)?,
        Coverage::Penalty(_) => tour::pcst_connect(&r.cover, inst, table)?,
    };
    Ok(ApproxResult::new(inst, tour, r.lp.value, guarantee_tour(inst)))
}

pub fn guarantee_tour(inst: &GridInstance) -> i64 {
    match inst.coverage() {
        Coverage::Full => GUARANTEE_FULL_TOUR,
        Coverage::Subset(_) => GUARANTEE_SUBSET_TOUR,
        Coverage::Penalty(_) => GUARANTEE_PENALTY_TOUR,
    }
}
