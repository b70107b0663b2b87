//! Grid graphs: pixels, headings, instances and the configuration space.

mod cycle;
mod transition;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::rational::{common_scale, is_nonnegative, to_units, Rational};

pub use cycle::{cycle_cost, CostBreakdown, Cycle, CycleCover, CycleError};
pub use transition::{transition_cost, TransitionTable};
pub use validate::{full_strips, validate_cycle_cover, validate_tour, FullStrip, ParityViolation, ValidationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pixel {
    pub x: i32,
    pub y: i32,
}

impl Pixel {
    pub const fn new(x: i32, y: i32) -> Self {
        Pixel { x, y }
    }

    pub fn step(self, heading: Heading) -> Option<Pixel> {
        let (dx, dy) = heading.delta();
        Some(Pixel::new(self.x.checked_add(dx)?, self.y.checked_add(dy)?))
    }

    pub fn manhattan(self, other: Pixel) -> i64 {
        (self.x as i64 - other.x as i64).abs() + (self.y as i64 - other.y as i64).abs()
    }
}

impl fmt::Display for Pixel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Compass heading. `y` grows to the north.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Heading {
    North,
    East,
    South,
    West,
}

impl Heading {
    pub const ALL: [Heading; 4] = [Heading::North, Heading::East, Heading::South, Heading::West];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Heading {
        Heading::ALL[i % 4]
    }

    pub fn opposite(self) -> Heading {
        Heading::from_index(self.index() + 2)
    }

    pub fn clockwise(self) -> Heading {
        Heading::from_index(self.index() + 1)
    }

    pub fn counter_clockwise(self) -> Heading {
        Heading::from_index(self.index() + 3)
    }

    pub fn delta(self) -> (i32, i32) {
        match self {
            Heading::North => (0, 1),
            Heading::East => (1, 0),
            Heading::South => (0, -1),
            Heading::West => (-1, 0),
        }
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, Heading::East | Heading::West)
    }

    /// Number of simple (90°) turns needed to rotate from `self` to `other`.
    pub fn turns_to(self, other: Heading) -> i64 {
        let d = (other.index() + 4 - self.index()) % 4;
        if d == 3 {
            1
        } else {
            d as i64
        }
    }

    pub fn letter(self) -> char {
        match self {
            Heading::North => 'N',
            Heading::East => 'E',
            Heading::South => 'S',
            Heading::West => 'W',
        }
    }

    pub fn from_letter(c: char) -> Option<Heading> {
        match c.to_ascii_uppercase() {
            'N' => Some(Heading::North),
            'E' => Some(Heading::East),
            'S' => Some(Heading::South),
            'W' => Some(Heading::West),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub pixel: Pixel,
    pub heading: Heading,
}

impl Configuration {
    pub const fn new(pixel: Pixel, heading: Heading) -> Self {
        Configuration { pixel, heading }
    }

    pub fn reversed(self) -> Self {
        Configuration::new(self.pixel, self.heading.opposite())
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.pixel, self.heading.letter())
    }
}

/// Which pixels must be visited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coverage {
    Full,
    Subset(BTreeSet<Pixel>),
    /// Pixels without an entry carry penalty zero.
    Penalty(BTreeMap<Pixel, Rational>),
}

impl Coverage {
    pub fn name(&self) -> &'static str {
        match self {
            Coverage::Full => "full",
            Coverage::Subset(_) => "subset",
            Coverage::Penalty(_) => "penalty",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("instance has no pixels")]
    EmptyInstance,
    #[error("pixel {0} listed twice")]
    DuplicatePixel(Pixel),
    #[error("instance is not 4-connected ({} components)", .0.len())]
    Disconnected(Vec<Vec<Pixel>>),
    #[error("subset pixel {0} is not part of the instance")]
    SubsetNotContained(Pixel),
    #[error("penalty pixel {0} is not part of the instance")]
    PenaltyNotContained(Pixel),
    #[error("negative penalty at {0}")]
    NegativePenalty(Pixel),
    #[error("kappa and tau must be nonnegative")]
    NegativeWeight,
    #[error("configuration {0} is not on the instance")]
    NotOnInstance(Configuration),
    #[error("no configuration walk from {0} to {1}")]
    Unreachable(Configuration, Configuration),
}

/// A validated grid instance. Pixels are kept sorted, so pixel indices and the
/// derived state ids `4 * pixel + heading` follow lexicographic order.
#[derive(Clone, Debug)]
pub struct GridInstance {
    pixels: Vec<Pixel>,
    index: HashMap<Pixel, usize>,
    neighbors: Vec<[Option<u32>; 4]>,
    coverage: Coverage,
    kappa: Rational,
    tau: Rational,
    scale: i64,
    kappa_units: i64,
    tau_units: i64,
    penalty_units: Vec<i64>,
    required: Vec<bool>,
}

pub fn build_grid_instance(
    pixels: impl IntoIterator<Item = Pixel>,
    coverage: Coverage,
    kappa: Rational,
    tau: Rational,
) -> Result<GridInstance, GridError> {
    let mut sorted: Vec<Pixel> = pixels.into_iter().collect();
    if sorted.is_empty() {
        return Err(GridError::EmptyInstance);
    }
    sorted.sort();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(GridError::DuplicatePixel(w[0]));
        }
    }
    if !is_nonnegative(&kappa) || !is_nonnegative(&tau) {
        return Err(GridError::NegativeWeight);
    }
    let index: HashMap<Pixel, usize> = sorted.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    match &coverage {
        Coverage::Full => {}
        Coverage::Subset(s) => {
            if let Some(p) = s.iter().find(|p| !index.contains_key(p)) {
                return Err(GridError::SubsetNotContained(*p));
            }
        }
        Coverage::Penalty(m) => {
            for (p, c) in m {
                if !index.contains_key(p) {
                    return Err(GridError::PenaltyNotContained(*p));
                }
                if !is_nonnegative(c) {
                    return Err(GridError::NegativePenalty(*p));
                }
            }
        }
    }
    let neighbors: Vec<[Option<u32>; 4]> = sorted
        .iter()
        .map(|p| {
            let mut n = [None; 4];
            for h in Heading::ALL {
                n[h.index()] = p.step(h).and_then(|q| index.get(&q)).map(|&i| i as u32);
            }
            n
        })
        .collect();

    let components = components(&neighbors);
    if components.len() > 1 {
        let listed = components
            .into_iter()
            .map(|c| c.into_iter().map(|i| sorted[i]).collect())
            .collect();
        return Err(GridError::Disconnected(listed));
    }

    let mut all_values = vec![kappa, tau];
    if let Coverage::Penalty(m) = &coverage {
        all_values.extend(m.values().copied());
    }
    let scale = common_scale(all_values.iter());
    let penalty_units = sorted
        .iter()
        .map(|p| match &coverage {
            Coverage::Penalty(m) => m.get(p).map(|c| to_units(c, scale)).unwrap_or(0),
            _ => 0,
        })
        .collect();
    let required = sorted
        .iter()
        .map(|p| match &coverage {
            Coverage::Full => true,
            Coverage::Subset(s) => s.contains(p),
            Coverage::Penalty(_) => false,
        })
        .collect();

    Ok(GridInstance {
        kappa_units: to_units(&kappa, scale),
        tau_units: to_units(&tau, scale),
        pixels: sorted,
        index,
        neighbors,
        coverage,
        kappa,
        tau,
        scale,
        penalty_units,
        required,
    })
}

fn components(neighbors: &[[Option<u32>; 4]]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; neighbors.len()];
    let mut out = Vec::new();
    for start in 0..neighbors.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for n in neighbors[v].iter().flatten() {
                let n = *n as usize;
                if !seen[n] {
                    seen[n] = true;
                    comp.push(n);
                    queue.push_back(n);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

impl GridInstance {
    pub fn pixels(&self) -> &[Pixel] {
        &self.pixels
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn coverage(&self) -> &Coverage {
        &self.coverage
    }

    pub fn kappa(&self) -> Rational {
        self.kappa
    }

    pub fn tau(&self) -> Rational {
        self.tau
    }

    /// Denominator of the integer cost units used internally.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn kappa_units(&self) -> i64 {
        self.kappa_units
    }

    pub fn tau_units(&self) -> i64 {
        self.tau_units
    }

    pub fn index_of(&self, p: Pixel) -> Option<usize> {
        self.index.get(&p).copied()
    }

    pub fn contains(&self, p: Pixel) -> bool {
        self.index.contains_key(&p)
    }

    pub fn neighbor(&self, pixel_index: usize, heading: Heading) -> Option<usize> {
        self.neighbors[pixel_index][heading.index()].map(|i| i as usize)
    }

    /// Number of 4-adjacent pixel pairs.
    pub fn adjacency_count(&self) -> usize {
        self.neighbors
            .iter()
            .map(|n| n[Heading::East.index()].is_some() as usize + n[Heading::North.index()].is_some() as usize)
            .sum()
    }

    pub fn is_required(&self, pixel_index: usize) -> bool {
        self.required[pixel_index]
    }

    pub fn penalty_units(&self, pixel_index: usize) -> i64 {
        self.penalty_units[pixel_index]
    }

    pub fn penalty(&self, p: Pixel) -> Rational {
        match &self.coverage {
            Coverage::Penalty(m) => m.get(&p).copied().unwrap_or_else(|| Rational::from_integer(0)),
            _ => Rational::from_integer(0),
        }
    }

    /// Pixels that own atomic strips: every pixel for full coverage, the
    /// subset for subset coverage and pixels with a positive penalty for
    /// penalty coverage.
    pub fn strip_owners(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| match &self.coverage {
                Coverage::Full => true,
                Coverage::Subset(_) => self.required[i],
                Coverage::Penalty(_) => self.penalty_units[i] > 0,
            })
            .collect()
    }

    pub fn state_id(&self, c: Configuration) -> Option<usize> {
        self.index_of(c.pixel).map(|i| 4 * i + c.heading.index())
    }

    pub fn state_count(&self) -> usize {
        4 * self.pixels.len()
    }

    pub fn configuration(&self, state: usize) -> Configuration {
        Configuration::new(self.pixels[state / 4], Heading::from_index(state % 4))
    }

    /// Same instance with different weights.
    pub fn with_weights(&self, kappa: Rational, tau: Rational) -> Result<GridInstance, GridError> {
        build_grid_instance(self.pixels.iter().copied(), self.coverage.clone(), kappa, tau)
    }

    pub fn with_coverage(&self, coverage: Coverage) -> Result<GridInstance, GridError> {
        build_grid_instance(self.pixels.iter().copied(), coverage, self.kappa, self.tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn domino_builds() {
        let inst = build_grid_instance([Pixel::new(0, 0), Pixel::new(1, 0)], Coverage::Full, r(1), r(1)).unwrap();
        assert_eq!(inst.len(), 2);
        assert_eq!(inst.adjacency_count(), 1);
    }

    #[test]
    fn gap_is_disconnected() {
        let err = build_grid_instance([Pixel::new(0, 0), Pixel::new(2, 0)], Coverage::Full, r(1), r(1)).unwrap_err();
        match err {
            GridError::Disconnected(c) => assert_eq!(c.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn subset_must_be_contained() {
        let s = BTreeSet::from([Pixel::new(5, 5)]);
        let err = build_grid_instance([Pixel::new(0, 0), Pixel::new(1, 0)], Coverage::Subset(s), r(1), r(1)).unwrap_err();
        assert_eq!(err, GridError::SubsetNotContained(Pixel::new(5, 5)));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            build_grid_instance(Vec::<Pixel>::new(), Coverage::Full, r(1), r(1)).unwrap_err(),
            GridError::EmptyInstance
        );
        assert_eq!(
            build_grid_instance([Pixel::new(0, 0), Pixel::new(0, 0)], Coverage::Full, r(1), r(1)).unwrap_err(),
            GridError::DuplicatePixel(Pixel::new(0, 0))
        );
        let pen = BTreeMap::from([(Pixel::new(0, 0), r(-1))]);
        assert_eq!(
            build_grid_instance([Pixel::new(0, 0), Pixel::new(1, 0)], Coverage::Penalty(pen), r(1), r(1)).unwrap_err(),
            GridError::NegativePenalty(Pixel::new(0, 0))
        );
    }

    #[test]
    fn heading_algebra() {
        for h in Heading::ALL {
            assert_eq!(h.opposite().opposite(), h);
            assert_eq!(h.clockwise().counter_clockwise(), h);
            assert_eq!(h.turns_to(h), 0);
            assert_eq!(h.turns_to(h.opposite()), 2);
            assert_eq!(h.turns_to(h.clockwise()), 1);
            assert_eq!(h.turns_to(h.counter_clockwise()), 1);
        }
    }

    #[test]
    fn units_follow_denominators() {
        let pen = BTreeMap::from([(Pixel::new(0, 0), Rational::new(1, 4))]);
        let inst = build_grid_instance(
            [Pixel::new(0, 0), Pixel::new(1, 0)],
            Coverage::Penalty(pen),
            Rational::new(1, 2),
            r(1),
        )
        .unwrap();
        assert_eq!(inst.scale(), 4);
        assert_eq!(inst.kappa_units(), 2);
        assert_eq!(inst.tau_units(), 4);
        assert_eq!(inst.penalty_units(0), 1);
        assert_eq!(inst.strip_owners(), vec![0]);
    }
}
