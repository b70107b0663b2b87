//! Exact solvers: branch and bound on pixel traversals for cycle covers,
//! branch and cut on the same model for tours, the strip formulation as a
//! second cover IP, and exhaustive oracles for tiny instances.

mod bnb;
mod brute;
mod cover;
mod cuts;
mod tour;
mod traversal;

use std::time::Duration;

use thiserror::Error;

use crate::grid::{CostBreakdown, CycleCover};
use crate::lp::LpError;
use crate::rational::Rational;
use crate::strips::StripError;

pub use brute::{brute_force_cycle_cover, brute_force_tour, BRUTE_FORCE_LIMIT};
pub use cover::{solve_exact_cycle_cover, solve_strip_cycle_cover};
pub use cuts::{separate_advanced_cut, separate_global_cut, separate_simple_cut, Cut, CutKind, CutPool, SeparationError};
pub use tour::solve_exact_tour;
pub use traversal::{components, Traversal, TraversalModel};

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("instance has {pixels} pixels, the exact solver is limited to {limit}")]
    SizeLimitExceeded { pixels: usize, limit: usize },
    #[error("instance has {pixels} pixels, brute force is limited to {limit}")]
    TooLarge { pixels: usize, limit: usize },
    #[error("time limit reached")]
    TimeLimit,
    #[error("node limit reached")]
    NodeLimit,
    #[error("no feasible solution exists")]
    Infeasible,
    #[error("separation produced no cut for an infeasible integral point")]
    Stalled,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Strip(#[from] StripError),
}

#[derive(Clone, Debug)]
pub struct ExactOptions {
    pub max_pixels: usize,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<usize>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { max_pixels: 60, time_limit: None, node_limit: None }
    }
}

#[derive(Clone, Debug)]
pub struct ExactResult {
    pub cover: CycleCover,
    pub cost: CostBreakdown,
    /// Optimal value.
    pub value: Rational,
    /// LP bound at the root (before any cuts).
    pub root_bound: Rational,
    pub nodes: usize,
    /// Every cut added while solving (tours only).
    pub cuts: CutPool,
    /// One line per branch-and-bound node.
    pub log: Vec<String>,
}

#[cfg(test)]
mod tests;
