//! Geometric instances: points with a few allowed orientations among
//! polygonal obstacles. Turning is charged per radian of deviation, length
//! per unit of Euclidean distance.
//!
//! Visibility uses exact rational predicates. Angles and lengths are only
//! evaluated in floating point when costs are computed.

mod path;
mod strips;
mod visibility;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::approx::ApproxError;
use crate::lp::LpError;
use crate::rational::Rational;
use crate::strips::StripError;

pub use path::{euclidean_shortest_path, turn_cost_shortest_path, GeoPath};
pub(crate) use path::measure;
pub use strips::{approx_geo_cycle_cover, approx_geo_tour, geo_strip_costs, validate_geo_cover, GeoApproxResult, GeoCover, GeoCycle, GeoReport, GeoStrips, GEO_SCALE};
pub use visibility::{visibility_graph, VisibilityGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeoPoint {
    pub x: Rational,
    pub y: Rational,
}

impl GeoPoint {
    pub fn new(x: impl Into<Rational>, y: impl Into<Rational>) -> Self {
        GeoPoint { x: x.into(), y: y.into() }
    }

    pub fn to_f64(self) -> (f64, f64) {
        (ratio_f64(self.x), ratio_f64(self.y))
    }

    pub fn distance(self, other: GeoPoint) -> f64 {
        let ((ax, ay), (bx, by)) = (self.to_f64(), other.to_f64());
        (bx - ax).hypot(by - ay)
    }

    /// Direction of the ray towards `other`, in `[0, 2π)`.
    pub fn direction_to(self, other: GeoPoint) -> f64 {
        let ((ax, ay), (bx, by)) = (self.to_f64(), other.to_f64());
        normalize_angle((by - ay).atan2(bx - ax))
    }
}

fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Angle in `[0, 2π)`.
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r >= 2.0 * PI {
        0.0
    } else {
        r
    }
}

/// Absolute turn from heading `a` to heading `b`, in `[0, π]`.
pub fn deviation(a: f64, b: f64) -> f64 {
    let d = (b - a).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// A simple polygon given by its vertices in order (either orientation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub vertices: Vec<GeoPoint>,
}

impl Polygon {
    pub fn new(vertices: Vec<GeoPoint>) -> Self {
        Polygon { vertices }
    }

    pub fn edges(&self) -> impl Iterator<Item = (GeoPoint, GeoPoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        if n < 3 || self.vertices.iter().collect::<BTreeSet<_>>().len() != n {
            return false;
        }
        let area: BigRational = self.edges().map(|(a, b)| q(a.x) * q(b.y) - q(b.x) * q(a.y)).sum();
        if area.is_zero() {
            return false;
        }
        let edges: Vec<_> = self.edges().collect();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                if j == i + 1 || (i == 0 && j == n - 1) {
                    // Adjacent edges share one vertex and must not fold back.
                    let (shared, p, r) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                    if orient(p, shared, r) == Ordering::Equal && (on_segment(r, p, shared) || on_segment(p, shared, r)) {
                        return false;
                    }
                } else if segments_touch(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    /// Strictly inside (the boundary does not count).
    pub fn contains_strictly(&self, p: GeoPoint) -> bool {
        if self.edges().any(|(a, b)| on_segment(p, a, b)) {
            return false;
        }
        let (px, py) = (q(p.x), q(p.y));
        let mut inside = false;
        for (a, b) in self.edges() {
            let (ay, by) = (q(a.y), q(b.y));
            if (ay > py) != (by > py) {
                let (ax, bx) = (q(a.x), q(b.x));
                let x = &ax + (&py - &ay) * (&bx - &ax) / (&by - &ay);
                if px < x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

fn q(r: Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Sign of the cross product `(b - a) × (c - a)`.
pub(crate) fn orient(a: GeoPoint, b: GeoPoint, c: GeoPoint) -> Ordering {
    let cross = (q(b.x) - q(a.x)) * (q(c.y) - q(a.y)) - (q(b.y) - q(a.y)) * (q(c.x) - q(a.x));
    if cross.is_positive() {
        Ordering::Greater
    } else if cross.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

/// `p` on the closed segment `ab`.
pub(crate) fn on_segment(p: GeoPoint, a: GeoPoint, b: GeoPoint) -> bool {
    orient(a, b, p) == Ordering::Equal && p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// The open segments cross at a single interior point of both.
pub(crate) fn proper_cross(a: GeoPoint, b: GeoPoint, c: GeoPoint, d: GeoPoint) -> bool {
    let opposite = |x: Ordering, y: Ordering| x != Ordering::Equal && y != Ordering::Equal && x != y;
    opposite(orient(a, b, c), orient(a, b, d)) && opposite(orient(c, d, a), orient(c, d, b))
}

/// The closed segments share at least one point.
pub(crate) fn segments_touch(a: GeoPoint, b: GeoPoint, c: GeoPoint, d: GeoPoint) -> bool {
    proper_cross(a, b, c, d) || on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

/// Which points must be visited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeoCoverage {
    Full,
    /// Indices of the points that must be visited.
    Subset(BTreeSet<usize>),
    /// Penalty per point index for not visiting it (missing means zero).
    Penalty(BTreeMap<usize, Rational>),
}

#[derive(Debug, Error)]
pub enum GeoError {
    #[error("obstacle {0} is not a simple polygon with positive area")]
    DegeneratePolygon(usize),
    #[error("point {0} lies inside an obstacle")]
    PointInsideObstacle(usize),
    #[error("point {0} appears twice")]
    DuplicatePoint(usize),
    #[error("point {0} needs between 1 and {max} distinct orientations in [0, 180) degrees", max = MAX_ORIENTATIONS)]
    BadOrientations(usize),
    #[error("coverage refers to point {0}, which does not exist")]
    UnknownPoint(usize),
    #[error("kappa, tau and penalties must be nonnegative")]
    NegativeWeight,
    #[error("a geometric cover needs at least two points")]
    TooFewPoints,
    #[error("{0:?} is not a vertex of the visibility graph")]
    NotAVertex(GeoPoint),
    #[error("no path between the configurations")]
    Unreachable,
    #[error(transparent)]
    Strip(#[from] StripError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
}

/// Upper bound on orientations per point.
pub const MAX_ORIENTATIONS: usize = 4;

/// A point with a heading in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeoConfiguration {
    pub position: GeoPoint,
    pub direction: f64,
}

impl GeoConfiguration {
    pub fn new(position: GeoPoint, direction: f64) -> Self {
        GeoConfiguration { position, direction: normalize_angle(direction) }
    }

    pub fn reversed(self) -> Self {
        GeoConfiguration::new(self.position, self.direction + PI)
    }
}

#[derive(Clone, Debug)]
pub struct GeometricInstance {
    points: Vec<GeoPoint>,
    /// Allowed orientations per point, in degrees within `[0, 180)`.
    angles: Vec<Vec<Rational>>,
    obstacles: Vec<Polygon>,
    coverage: GeoCoverage,
    kappa: Rational,
    tau: Rational,
    graph: VisibilityGraph,
}

impl GeometricInstance {
    /// Checks the geometry and builds the visibility graph. `tau` is the
    /// cost per radian of turning.
    pub fn new(
        points: Vec<GeoPoint>,
        angles: Vec<Vec<Rational>>,
        obstacles: Vec<Polygon>,
        coverage: GeoCoverage,
        kappa: Rational,
        tau: Rational,
    ) -> Result<Self, GeoError> {
        let zero = Rational::from_integer(0);
        if kappa < zero || tau < zero {
            return Err(GeoError::NegativeWeight);
        }
        let mut seen = BTreeSet::new();
        for (i, p) in points.iter().enumerate() {
            if !seen.insert(*p) {
                return Err(GeoError::DuplicatePoint(i));
            }
        }
        assert_eq!(angles.len(), points.len(), "one orientation list per point");
        for (i, a) in angles.iter().enumerate() {
            let distinct: BTreeSet<_> = a.iter().collect();
            let in_range = a.iter().all(|&d| d >= zero && d < Rational::from_integer(180));
            if a.is_empty() || a.len() > MAX_ORIENTATIONS || distinct.len() != a.len() || !in_range {
                return Err(GeoError::BadOrientations(i));
            }
        }
        match &coverage {
            GeoCoverage::Full => {}
            GeoCoverage::Subset(s) => {
                if let Some(&i) = s.iter().find(|&&i| i >= points.len()) {
                    return Err(GeoError::UnknownPoint(i));
                }
            }
            GeoCoverage::Penalty(m) => {
                if let Some((&i, _)) = m.iter().find(|&(&i, _)| i >= points.len()) {
                    return Err(GeoError::UnknownPoint(i));
                }
                if m.values().any(|&c| c < zero) {
                    return Err(GeoError::NegativeWeight);
                }
            }
        }
        let graph = visibility_graph(&points, &obstacles)?;
        Ok(GeometricInstance { points, angles, obstacles, coverage, kappa, tau, graph })
    }

    pub fn points(&self) -> &[GeoPoint] {
        &self.points
    }

    pub fn angles_degrees(&self, point: usize) -> &[Rational] {
        &self.angles[point]
    }

    /// Allowed orientations of a point in radians.
    pub fn orientations(&self, point: usize) -> Vec<f64> {
        self.angles[point].iter().map(|&d| ratio_f64(d) * PI / 180.0).collect()
    }

    pub fn obstacles(&self) -> &[Polygon] {
        &self.obstacles
    }

    pub fn coverage(&self) -> &GeoCoverage {
        &self.coverage
    }

    pub fn kappa(&self) -> Rational {
        self.kappa
    }

    pub fn tau(&self) -> Rational {
        self.tau
    }

    pub fn kappa_f64(&self) -> f64 {
        ratio_f64(self.kappa)
    }

    pub fn tau_f64(&self) -> f64 {
        ratio_f64(self.tau)
    }

    pub fn visibility(&self) -> &VisibilityGraph {
        &self.graph
    }

    /// Largest number of orientations of any point.
    pub fn omega(&self) -> usize {
        self.angles.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn penalty(&self, point: usize) -> Rational {
        match &self.coverage {
            GeoCoverage::Penalty(m) => m.get(&point).copied().unwrap_or_else(|| Rational::from_integer(0)),
            _ => Rational::from_integer(0),
        }
    }

    pub fn penalty_f64(&self, point: usize) -> f64 {
        ratio_f64(self.penalty(point))
    }

    /// Points that get strips: all, the subset, or those with a positive
    /// penalty.
    pub fn owners(&self) -> Vec<usize> {
        match &self.coverage {
            GeoCoverage::Full => (0..self.points.len()).collect(),
            GeoCoverage::Subset(s) => s.iter().copied().collect(),
            GeoCoverage::Penalty(m) => m.iter().filter(|(_, &c)| c > Rational::from_integer(0)).map(|(&i, _)| i).collect(),
        }
    }

    /// Points that a cover must visit.
    pub fn required(&self) -> Vec<usize> {
        match &self.coverage {
            GeoCoverage::Penalty(_) => Vec::new(),
            _ => self.owners(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> GeoPoint {
        GeoPoint::new(x, y)
    }

    fn square(x: i64, y: i64, s: i64) -> Polygon {
        Polygon::new(vec![p(x, y), p(x + s, y), p(x + s, y + s), p(x, y + s)])
    }

    #[test]
    fn predicates() {
        assert_eq!(orient(p(0, 0), p(1, 0), p(0, 1)), Ordering::Greater);
        assert!(proper_cross(p(0, 0), p(2, 2), p(0, 2), p(2, 0)));
        assert!(!proper_cross(p(0, 0), p(2, 0), p(1, 0), p(1, 5)));
        assert!(on_segment(p(1, 0), p(0, 0), p(2, 0)));
    }

    #[test]
    fn polygon_checks() {
        assert!(square(0, 0, 2).is_simple());
        let bowtie = Polygon::new(vec![p(0, 0), p(2, 2), p(2, 0), p(0, 2)]);
        assert!(!bowtie.is_simple());
        let flat = Polygon::new(vec![p(0, 0), p(1, 0), p(2, 0)]);
        assert!(!flat.is_simple());
        assert!(square(0, 0, 2).contains_strictly(p(1, 1)));
        assert!(!square(0, 0, 2).contains_strictly(p(2, 1)));
        assert!(!square(0, 0, 2).contains_strictly(p(3, 1)));
    }

    #[test]
    fn instance_validation() {
        let deg = |d: i64| vec![Rational::from_integer(d)];
        let one = Rational::from_integer(1);
        let bad = GeometricInstance::new(vec![p(1, 1)], vec![deg(0)], vec![square(0, 0, 2)], GeoCoverage::Full, one, one);
        assert!(matches!(bad, Err(GeoError::PointInsideObstacle(0))));
        let bad = GeometricInstance::new(vec![p(5, 5)], vec![deg(180)], vec![], GeoCoverage::Full, one, one);
        assert!(matches!(bad, Err(GeoError::BadOrientations(0))));
        let ok = GeometricInstance::new(vec![p(5, 5), p(2, 1)], vec![deg(0), deg(90)], vec![square(0, 0, 2)], GeoCoverage::Full, one, one);
        assert!(ok.is_ok());
    }

    #[test]
    fn deviations() {
        assert!((deviation(0.0, PI / 2.0) - PI / 2.0).abs() < 1e-12);
        assert!((deviation(0.1, 2.0 * PI - 0.1) - 0.2).abs() < 1e-12);
        assert!((deviation(0.0, PI) - PI).abs() < 1e-12);
    }
}
