use std::collections::BTreeSet;

use thiserror::Error;

use super::{Configuration, Pixel};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("a cycle needs at least one configuration")]
    Empty,
    #[error("a cycle must visit at least two distinct pixels")]
    SinglePixel,
    #[error("step {index} from {from} to {to} is neither a move nor a simple turn")]
    InvalidStep {
        index: usize,
        from: Configuration,
        to: Configuration,
    },
}

/// What a single step between consecutive configurations does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Step {
    Stay,
    Move,
    Turn,
    Invalid,
}

pub(crate) fn classify(a: Configuration, b: Configuration) -> Step {
    if a == b {
        Step::Stay
    } else if a.pixel == b.pixel {
        if a.heading.turns_to(b.heading) == 1 {
            Step::Turn
        } else {
            Step::Invalid
        }
    } else if a.heading == b.heading && a.pixel.step(a.heading) == Some(b.pixel) {
        Step::Move
    } else {
        Step::Invalid
    }
}

/// A closed configuration walk. The last configuration connects back to the
/// first one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    steps: Vec<Configuration>,
}

impl Cycle {
    /// Builds a cycle, checking every step (including the closing one).
    pub fn new(steps: Vec<Configuration>) -> Result<Cycle, CycleError> {
        let c = Cycle::from_walk_unchecked(steps);
        c.check()?;
        Ok(c)
    }

    /// Drops repeated configurations (also across the wrap) without checking
    /// anything else. Used for hand-built or foreign walks that still need to
    /// be validated.
    pub fn from_walk_unchecked(walk: Vec<Configuration>) -> Cycle {
        let mut steps: Vec<Configuration> = Vec::with_capacity(walk.len());
        for c in walk {
            if steps.last() != Some(&c) {
                steps.push(c);
            }
        }
        while steps.len() > 1 && steps.first() == steps.last() {
            steps.pop();
        }
        Cycle { steps }
    }

    pub fn check(&self) -> Result<(), CycleError> {
        if self.steps.is_empty() {
            return Err(CycleError::Empty);
        }
        let n = self.steps.len();
        for i in 0..n {
            let (a, b) = (self.steps[i], self.steps[(i + 1) % n]);
            if n > 1 && classify(a, b) == Step::Invalid {
                return Err(CycleError::InvalidStep { index: i, from: a, to: b });
            }
        }
        if self.pixels().len() < 2 {
            return Err(CycleError::SinglePixel);
        }
        Ok(())
    }

    pub fn steps(&self) -> &[Configuration] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Consecutive pairs including the closing one.
    pub fn pairs(&self) -> impl Iterator<Item = (Configuration, Configuration)> + '_ {
        let n = self.steps.len();
        (0..n).map(move |i| (self.steps[i], self.steps[(i + 1) % n]))
    }

    pub fn pixels(&self) -> BTreeSet<Pixel> {
        self.steps.iter().map(|c| c.pixel).collect()
    }

    pub fn moves(&self) -> i64 {
        self.pairs().filter(|&(a, b)| classify(a, b) == Step::Move).count() as i64
    }

    /// Number of simple turns.
    pub fn turns(&self) -> i64 {
        self.pairs().filter(|&(a, b)| classify(a, b) == Step::Turn).count() as i64
    }

    /// Rotates the step list so that it starts at position `i`.
    pub fn rotated(&self, i: usize) -> Cycle {
        let mut steps = self.steps.clone();
        let n = steps.len().max(1);
        steps.rotate_left(i % n);
        Cycle { steps }
    }

    /// The same closed walk traversed backwards.
    pub fn reversed(&self) -> Cycle {
        let steps = self.steps.iter().rev().map(|c| c.reversed()).collect();
        Cycle { steps }
    }
}

/// `length * kappa + turns * tau`.
pub fn cycle_cost(cycle: &Cycle, kappa: Rational, tau: Rational) -> Rational {
    kappa * Rational::from_integer(cycle.moves()) + tau * Rational::from_integer(cycle.turns())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CycleCover {
    pub cycles: Vec<Cycle>,
}

impl CycleCover {
    pub fn new(cycles: Vec<Cycle>) -> Self {
        CycleCover { cycles }
    }

    pub fn is_tour(&self) -> bool {
        self.cycles.len() <= 1
    }

    pub fn covered(&self) -> BTreeSet<Pixel> {
        self.cycles.iter().flat_map(|c| c.steps().iter().map(|s| s.pixel)).collect()
    }

    pub fn moves(&self) -> i64 {
        self.cycles.iter().map(Cycle::moves).sum()
    }

    pub fn turns(&self) -> i64 {
        self.cycles.iter().map(Cycle::turns).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostBreakdown {
    pub turns: i64,
    pub length: i64,
    pub turn_cost: Rational,
    pub length_cost: Rational,
    pub penalties: Rational,
    pub total: Rational,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Heading::*;

    fn c(x: i32, y: i32, h: crate::grid::Heading) -> Configuration {
        Configuration::new(Pixel::new(x, y), h)
    }

    pub(crate) fn domino_cycle() -> Cycle {
        Cycle::new(vec![
            c(0, 0, East),
            c(1, 0, East),
            c(1, 0, North),
            c(1, 0, West),
            c(0, 0, West),
            c(0, 0, South),
        ])
        .unwrap()
    }

    #[test]
    fn domino_costs() {
        let cy = domino_cycle();
        assert_eq!(cy.moves(), 2);
        assert_eq!(cy.turns(), 4);
        assert_eq!(cycle_cost(&cy, 1.into(), 1.into()), Rational::from_integer(6));
        assert_eq!(cycle_cost(&cy, 0.into(), 1.into()), Rational::from_integer(4));
    }

    #[test]
    fn square_perimeter() {
        let cy = Cycle::new(vec![
            c(0, 0, East),
            c(1, 0, East),
            c(1, 0, North),
            c(1, 1, North),
            c(1, 1, West),
            c(0, 1, West),
            c(0, 1, South),
            c(0, 0, South),
        ])
        .unwrap();
        assert_eq!(cycle_cost(&cy, 1.into(), 1.into()), Rational::from_integer(8));
    }

    #[test]
    fn single_pixel_rejected() {
        let err = Cycle::new(vec![c(0, 0, North), c(0, 0, East), c(0, 0, South), c(0, 0, West)]).unwrap_err();
        assert_eq!(err, CycleError::SinglePixel);
    }

    #[test]
    fn jumps_rejected() {
        let err = Cycle::new(vec![c(0, 0, East), c(2, 0, East)]).unwrap_err();
        assert!(matches!(err, CycleError::InvalidStep { .. }));
    }

    #[test]
    fn reversal_keeps_cost() {
        let cy = domino_cycle();
        let rev = cy.reversed();
        assert!(rev.check().is_ok());
        assert_eq!(rev.moves(), cy.moves());
        assert_eq!(rev.turns(), cy.turns());
    }
}
