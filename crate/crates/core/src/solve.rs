//! Runs the approximation and exact solvers on an instance and collects what
//! the command line and the benchmark report.

use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::approx::{approx_cycle_cover, approx_tour, ApproxError, ApproxResult};
use crate::exact::{solve_exact_cycle_cover, solve_exact_tour, ExactError, ExactOptions, ExactResult};
use crate::grid::{validate_cycle_cover, validate_tour, CycleCover, GridInstance, ValidationReport};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Approx,
    Exact,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Goal {
    Cover,
    Tour,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown value `{0}`")]
pub struct UnknownValue(pub String);

impl FromStr for Mode {
    type Err = UnknownValue;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "approx" => Ok(Mode::Approx),
            "exact" => Ok(Mode::Exact),
            "both" => Ok(Mode::Both),
            _ => Err(UnknownValue(s.to_string())),
        }
    }
}

impl FromStr for Goal {
    type Err = UnknownValue;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cover" => Ok(Goal::Cover),
            "tour" => Ok(Goal::Tour),
            _ => Err(UnknownValue(s.to_string())),
        }
    }
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Approx => "approx",
            Mode::Exact => "exact",
            Mode::Both => "both",
        }
    }
}

impl Goal {
    pub fn name(self) -> &'static str {
        match self {
            Goal::Cover => "cover",
            Goal::Tour => "tour",
        }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl SolveError {
    /// Size, time or node limits (as opposed to genuine failures).
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            SolveError::Exact(ExactError::SizeLimitExceeded { .. } | ExactError::TooLarge { .. } | ExactError::TimeLimit | ExactError::NodeLimit)
        )
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub goal: Goal,
    pub approx: Option<ApproxResult>,
    pub exact: Option<ExactResult>,
    pub approx_time: Duration,
    pub exact_time: Duration,
}

impl Outcome {
    /// The solution to report: the exact one when available.
    pub fn best(&self) -> &CycleCover {
        match (&self.exact, &self.approx) {
            (Some(e), _) => &e.cover,
            (None, Some(a)) => &a.cover,
            (None, None) => unreachable!("at least one solver ran"),
        }
    }

    pub fn solver(&self) -> &'static str {
        if self.exact.is_some() {
            "exact"
        } else {
            "approx"
        }
    }

    pub fn value(&self) -> Rational {
        match (&self.exact, &self.approx) {
            (Some(e), _) => e.value,
            (None, Some(a)) => a.cost.total,
            (None, None) => unreachable!("at least one solver ran"),
        }
    }

    /// Lower bound: the strip LP bound of the approximation, or the root
    /// bound of the exact solver.
    pub fn lower_bound(&self) -> Option<Rational> {
        self.approx.as_ref().map(|a| a.lp_bound).or_else(|| self.exact.as_ref().map(|e| e.root_bound))
    }

    /// Approximate over exact cost, when both ran and the optimum is positive.
    pub fn ratio(&self) -> Option<Rational> {
        let (a, e) = (self.approx.as_ref()?, self.exact.as_ref()?);
        (e.value > Rational::from_integer(0)).then(|| a.cost.total / e.value)
    }

    /// `approx <= guarantee * exact` when both ran.
    pub fn within_guarantee(&self) -> bool {
        match (&self.approx, &self.exact) {
            (Some(a), Some(e)) => a.cost.total <= a.guarantee * e.value,
            (Some(a), None) => a.within_guarantee(),
            _ => true,
        }
    }

    /// Validation of the reported solution.
    pub fn validate(&self, inst: &GridInstance) -> ValidationReport {
        validate_goal(inst, self.goal, self.best())
    }
}

pub fn validate_goal(inst: &GridInstance, goal: Goal, cover: &CycleCover) -> ValidationReport {
    match goal {
        Goal::Cover => validate_cycle_cover(inst, cover),
        Goal::Tour => validate_tour(inst, cover),
    }
}

pub fn solve(inst: &GridInstance, mode: Mode, goal: Goal, opts: &ExactOptions) -> Result<Outcome, SolveError> {
    let mut out = Outcome { goal, approx: None, exact: None, approx_time: Duration::ZERO, exact_time: Duration::ZERO };
    if mode != Mode::Exact {
        let t = Instant::now();
        out.approx = Some(match goal {
            Goal::Cover => approx_cycle_cover(inst)?,
            Goal::Tour => approx_tour(inst)?,
        });
        out.approx_time = t.elapsed();
    }
    if mode != Mode::Approx {
        let t = Instant::now();
        out.exact = Some(match goal {
            Goal::Cover => solve_exact_cycle_cover(inst, opts)?,
            Goal::Tour => solve_exact_tour(inst, opts)?,
        });
        out.exact_time = t.elapsed();
    }
    Ok(out)
}
