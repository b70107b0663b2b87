use std::collections::BTreeSet;

use super::cycle::{classify, Step};
use super::{Configuration, CostBreakdown, Coverage, CycleCover, CycleError, GridInstance, Heading, Pixel};
use crate::rational::{from_units, Rational};

/// A maximal horizontal or vertical run of pixels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullStrip {
    pub horizontal: bool,
    pub pixels: Vec<Pixel>,
}

/// Full strips, horizontal ones first, each ordered west to east or south to
/// north.
pub fn full_strips(inst: &GridInstance) -> Vec<FullStrip> {
    let (strips, _) = strip_membership(inst);
    strips
}

/// Returns the strips and, per pixel index, the ids of its horizontal and
/// vertical strip.
pub(crate) fn strip_membership(inst: &GridInstance) -> (Vec<FullStrip>, Vec<[usize; 2]>) {
    let n = inst.len();
    let mut member = vec![[usize::MAX; 2]; n];
    let mut strips = Vec::new();
    for (slot, horizontal, back, fwd) in [
        (0usize, true, Heading::West, Heading::East),
        (1, false, Heading::South, Heading::North),
    ] {
        for start in 0..n {
            if inst.neighbor(start, back).is_some() {
                continue;
            }
            let id = strips.len();
            let mut pixels = Vec::new();
            let mut cur = Some(start);
            while let Some(i) = cur {
                member[i][slot] = id;
                pixels.push(inst.pixels()[i]);
                cur = inst.neighbor(i, fwd);
            }
            strips.push(FullStrip { horizontal, pixels });
        }
    }
    (strips, member)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityViolation {
    pub strip: FullStrip,
    pub turns: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// Pixels that must be visited but are not.
    pub uncovered: Vec<Pixel>,
    /// Configurations whose pixel is not part of the instance.
    pub off_instance: Vec<(usize, Configuration)>,
    pub malformed: Vec<(usize, CycleError)>,
    pub parity: Vec<ParityViolation>,
    /// Set when a tour was requested but the cover has several cycles.
    pub not_a_tour: bool,
    pub cost: CostBreakdown,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.uncovered.is_empty()
            && self.off_instance.is_empty()
            && self.malformed.is_empty()
            && self.parity.is_empty()
            && !self.not_a_tour
    }

    /// Human readable problems, one per line.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in &self.uncovered {
            out.push(format!("pixel {p} is not covered"));
        }
        for (i, c) in &self.off_instance {
            out.push(format!("cycle {i}: configuration {c} is off the instance"));
        }
        for (i, e) in &self.malformed {
            out.push(format!("cycle {i}: {e}"));
        }
        for v in &self.parity {
            let kind = if v.strip.horizontal { "horizontal" } else { "vertical" };
            out.push(format!("{kind} strip starting at {} has {} turns", v.strip.pixels[0], v.turns));
        }
        if self.not_a_tour {
            out.push("solution has more than one cycle".to_string());
        }
        out
    }
}

/// Checks coverage, step validity, turn parity per full strip and recomputes
/// the cost of `cover`.
pub fn validate_cycle_cover(inst: &GridInstance, cover: &CycleCover) -> ValidationReport {
    let (strips, member) = strip_membership(inst);
    let mut strip_turns = vec![0i64; strips.len()];
    let mut off_instance = Vec::new();
    let mut malformed = Vec::new();

    for (ci, cycle) in cover.cycles.iter().enumerate() {
        for s in cycle.steps() {
            if !inst.contains(s.pixel) {
                off_instance.push((ci, *s));
            }
        }
        if let Err(e) = cycle.check() {
            malformed.push((ci, e));
        }
        // Heading changes are charged to the pixel where they end up, which
        // is exact for well-formed walks and still informative otherwise.
        for (a, b) in cycle.pairs() {
            let turns = a.heading.turns_to(b.heading);
            if turns == 0 {
                continue;
            }
            if let Some(i) = inst.index_of(b.pixel) {
                for sid in member[i] {
                    strip_turns[sid] += turns;
                }
            }
        }
    }

    let parity = strips
        .iter()
        .zip(&strip_turns)
        .filter(|(_, &t)| t % 2 != 0)
        .map(|(s, &t)| ParityViolation { strip: s.clone(), turns: t })
        .collect();

    let visited: BTreeSet<Pixel> = cover.covered();
    let uncovered: Vec<Pixel> = match inst.coverage() {
        Coverage::Full => inst.pixels().iter().copied().filter(|p| !visited.contains(p)).collect(),
        Coverage::Subset(s) => s.iter().copied().filter(|p| !visited.contains(p)).collect(),
        Coverage::Penalty(_) => Vec::new(),
    };
    let penalty_units: i64 = (0..inst.len())
        .filter(|&i| !visited.contains(&inst.pixels()[i]))
        .map(|i| inst.penalty_units(i))
        .sum();

    let mut length = 0;
    let mut turns = 0;
    for cycle in &cover.cycles {
        for (a, b) in cycle.pairs() {
            match classify(a, b) {
                Step::Move => length += 1,
                Step::Turn => turns += 1,
                _ => {}
            }
        }
    }
    let turn_cost = inst.tau() * Rational::from_integer(turns);
    let length_cost = inst.kappa() * Rational::from_integer(length);
    let penalties = from_units(penalty_units, inst.scale());
    ValidationReport {
        uncovered,
        off_instance,
        malformed,
        parity,
        not_a_tour: false,
        cost: CostBreakdown {
            turns,
            length,
            turn_cost,
            length_cost,
            penalties,
            total: turn_cost + length_cost + penalties,
        },
    }
}

/// Like [`validate_cycle_cover`] but also requires a single cycle.
pub fn validate_tour(inst: &GridInstance, cover: &CycleCover) -> ValidationReport {
    let mut r = validate_cycle_cover(inst, cover);
    r.not_a_tour = cover.cycles.len() > 1;
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid_instance, Cycle, Heading::*};

    fn c(x: i32, y: i32, h: Heading) -> Configuration {
        Configuration::new(Pixel::new(x, y), h)
    }

    fn square() -> GridInstance {
        let px = [(0, 0), (1, 0), (0, 1), (1, 1)].map(|(x, y)| Pixel::new(x, y));
        build_grid_instance(px, Coverage::Full, 1.into(), 1.into()).unwrap()
    }

    #[test]
    fn perimeter_is_valid() {
        let inst = square();
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
        let r = validate_cycle_cover(&inst, &CycleCover::new(vec![cy]));
        assert!(r.is_valid(), "{:?}", r.problems());
        assert_eq!(r.cost.total, Rational::from_integer(8));
        assert_eq!(full_strips(&inst).len(), 4);
    }

    #[test]
    fn three_turns_on_a_strip_is_flagged() {
        let inst = square();
        let cy = Cycle::from_walk_unchecked(vec![
            c(0, 0, East),
            c(1, 0, East),
            c(1, 0, North),
            c(1, 1, North),
            c(1, 1, West),
        ]);
        let r = validate_cycle_cover(&inst, &CycleCover::new(vec![cy]));
        assert!(!r.parity.is_empty());
        assert!(!r.malformed.is_empty());
        assert!(r.parity.iter().any(|v| v.turns == 3));
    }

    #[test]
    fn uncovered_pixels_reported() {
        let inst = square();
        let r = validate_cycle_cover(&inst, &CycleCover::default());
        assert_eq!(r.uncovered.len(), 4);
        assert!(!r.is_valid());
    }
}
