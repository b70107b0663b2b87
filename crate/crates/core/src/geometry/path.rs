use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::{deviation, GeoConfiguration, GeoError, GeoPoint, GeometricInstance, VisibilityGraph};

/// A polyline between two configurations and its cost.
#[derive(Clone, Debug, PartialEq)]
pub struct GeoPath {
    pub cost: f64,
    pub length: f64,
    /// Total absolute turning in radians, both terminals included.
    pub turning: f64,
    pub polyline: Vec<GeoPoint>,
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64, usize);

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Label-setting search on the split-vertex graph: a state is a vertex
/// together with the vertex it was reached from (or the start marker), so
/// the current heading is known and every bend can be charged.
pub(crate) struct TurnSearch {
    n: usize,
    start_dir: f64,
    dist: Vec<f64>,
    pred: Vec<usize>,
}

impl TurnSearch {
    pub(crate) fn run(vg: &VisibilityGraph, kappa: f64, tau: f64, start: usize, start_dir: f64) -> TurnSearch {
        let n = vg.vertices.len();
        let size = n * (n + 1);
        let mut s = TurnSearch { n, start_dir, dist: vec![f64::INFINITY; size], pred: vec![usize::MAX; size] };
        let origin = start * (n + 1) + n;
        s.dist[origin] = 0.0;
        let mut heap = BinaryHeap::from([Reverse(Key(0.0, origin))]);
        while let Some(Reverse(Key(d, state))) = heap.pop() {
            if d > s.dist[state] {
                continue;
            }
            let v = state / (n + 1);
            let h = s.heading(vg, state);
            for &(w, len) in &vg.adjacency[v] {
                let turn = deviation(h, vg.vertices[v].direction_to(vg.vertices[w]));
                let next = w * (n + 1) + v;
                let c = d + kappa * len + tau * turn;
                if c < s.dist[next] {
                    s.dist[next] = c;
                    s.pred[next] = state;
                    heap.push(Reverse(Key(c, next)));
                }
            }
        }
        s
    }

    fn heading(&self, vg: &VisibilityGraph, state: usize) -> f64 {
        let (v, from) = (state / (self.n + 1), state % (self.n + 1));
        if from == self.n {
            self.start_dir
        } else {
            vg.vertices[from].direction_to(vg.vertices[v])
        }
    }

    /// Cheapest arrival at `target` (after at least one edge) followed by
    /// turning to `dir`.
    pub(crate) fn arrival(&self, vg: &VisibilityGraph, tau: f64, target: usize, dir: f64) -> Option<(f64, usize)> {
        let mut best: Option<(f64, usize)> = None;
        for &(u, _) in &vg.adjacency[target] {
            let state = target * (self.n + 1) + u;
            if self.dist[state].is_finite() {
                let c = self.dist[state] + tau * deviation(self.heading(vg, state), dir);
                if best.is_none_or(|b| c < b.0) {
                    best = Some((c, state));
                }
            }
        }
        best
    }

    pub(crate) fn polyline(&self, vg: &VisibilityGraph, mut state: usize) -> Vec<GeoPoint> {
        let mut out = Vec::new();
        while state != usize::MAX {
            out.push(vg.vertices[state / (self.n + 1)]);
            state = self.pred[state];
        }
        out.reverse();
        out
    }
}

/// Length and total turning of a polyline traversed from heading
/// `start_dir` and finished by turning to `end_dir`.
pub(crate) fn measure(polyline: &[GeoPoint], start_dir: f64, end_dir: f64) -> (f64, f64) {
    let mut length = 0.0;
    let mut turning = 0.0;
    let mut h = start_dir;
    for w in polyline.windows(2) {
        let d = w[0].direction_to(w[1]);
        turning += deviation(h, d);
        length += w[0].distance(w[1]);
        h = d;
    }
    (length, turning + deviation(h, end_dir))
}

/// Cheapest polyline over visibility edges from configuration `a` to
/// configuration `b`: `kappa` per unit length plus `tau` per radian turned,
/// counting the turn out of `a`'s heading and the final turn into `b`'s.
/// The path moves at least once, so `a == b` asks for a closed excursion.
pub fn turn_cost_shortest_path(gi: &GeometricInstance, a: GeoConfiguration, b: GeoConfiguration) -> Result<GeoPath, GeoError> {
    let vg = gi.visibility();
    let s = vg.vertex_of(a.position).ok_or(GeoError::NotAVertex(a.position))?;
    let t = vg.vertex_of(b.position).ok_or(GeoError::NotAVertex(b.position))?;
    let (kappa, tau) = (gi.kappa_f64(), gi.tau_f64());
    let search = TurnSearch::run(vg, kappa, tau, s, a.direction);
    let (cost, state) = search.arrival(vg, tau, t, b.direction).ok_or(GeoError::Unreachable)?;
    let polyline = search.polyline(vg, state);
    let (length, turning) = measure(&polyline, a.direction, b.direction);
    Ok(GeoPath { cost, length, turning, polyline })
}

/// Plain Euclidean shortest path length between two vertices.
pub fn euclidean_shortest_path(vg: &VisibilityGraph, a: usize, b: usize) -> Option<f64> {
    let mut dist = vec![f64::INFINITY; vg.vertices.len()];
    dist[a] = 0.0;
    let mut heap = BinaryHeap::from([Reverse(Key(0.0, a))]);
    while let Some(Reverse(Key(d, v))) = heap.pop() {
        if v == b {
            return Some(d);
        }
        if d > dist[v] {
            continue;
        }
        for &(w, len) in &vg.adjacency[v] {
            if d + len < dist[w] {
                dist[w] = d + len;
                heap.push(Reverse(Key(d + len, w)));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::geometry::{GeoCoverage, Polygon};
    use crate::rational::Rational;

    fn p(x: i64, y: i64) -> GeoPoint {
        GeoPoint::new(x, y)
    }

    fn instance(points: Vec<GeoPoint>, obstacles: Vec<Polygon>, k: i64, t: i64) -> GeometricInstance {
        let angles = vec![vec![Rational::from_integer(0)]; points.len()];
        GeometricInstance::new(points, angles, obstacles, GeoCoverage::Full, k.into(), t.into()).unwrap()
    }

    #[test]
    fn straight_hop() {
        let gi = instance(vec![p(0, 0), p(3, 0)], vec![], 1, 1);
        let r = turn_cost_shortest_path(&gi, GeoConfiguration::new(p(0, 0), 0.0), GeoConfiguration::new(p(3, 0), 0.0)).unwrap();
        assert!((r.cost - 3.0).abs() < 1e-12);
        assert_eq!(r.turning, 0.0);
    }

    #[test]
    fn vertical_hop_turns_twice() {
        let gi = instance(vec![p(0, 0), p(0, 1)], vec![], 1, 1);
        let r = turn_cost_shortest_path(&gi, GeoConfiguration::new(p(0, 0), 0.0), GeoConfiguration::new(p(0, 1), 0.0)).unwrap();
        assert!((r.cost - (1.0 + PI)).abs() < 1e-9);
        assert_eq!(r.polyline, vec![p(0, 0), p(0, 1)]);
    }

    #[test]
    fn excursion_needs_another_vertex() {
        let gi = instance(vec![p(0, 0), p(2, 0)], vec![], 1, 1);
        let a = GeoConfiguration::new(p(0, 0), 0.0);
        let r = turn_cost_shortest_path(&gi, a, a).unwrap();
        // Out, u-turn, back, u-turn.
        assert!((r.cost - (4.0 + 2.0 * PI)).abs() < 1e-9);
        assert_eq!(r.polyline.len(), 3);
    }

    #[test]
    fn bends_at_obstacle_corners() {
        let square = Polygon::new(vec![p(1, -1), p(3, -1), p(3, 1), p(1, 1)]);
        let gi = instance(vec![p(0, 0), p(4, 0)], vec![square], 1, 1);
        let r = turn_cost_shortest_path(&gi, GeoConfiguration::new(p(0, 0), 0.0), GeoConfiguration::new(p(4, 0), 0.0)).unwrap();
        let vg = gi.visibility();
        for q in &r.polyline[1..r.polyline.len() - 1] {
            assert!(vg.is_obstacle_vertex(vg.vertex_of(*q).unwrap()));
        }
        let direct = 2.0 * 2f64.sqrt() + 2.0;
        let turn = 4.0 * PI / 4.0;
        assert!((r.cost - (direct + turn)).abs() < 1e-9, "{}", r.cost);
    }
}
