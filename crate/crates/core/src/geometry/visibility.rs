use std::collections::BTreeSet;

use num_rational::BigRational;

use super::{on_segment, proper_cross, q, GeoError, GeoPoint, Polygon};

/// Instance points first (same indices), then usable obstacle vertices.
/// Edges join mutually visible vertices and carry Euclidean lengths.
#[derive(Clone, Debug)]
pub struct VisibilityGraph {
    pub vertices: Vec<GeoPoint>,
    pub point_count: usize,
    /// Sorted neighbour lists with edge lengths.
    pub adjacency: Vec<Vec<(usize, f64)>>,
}

impl VisibilityGraph {
    pub fn vertex_of(&self, p: GeoPoint) -> Option<usize> {
        self.vertices.iter().position(|&v| v == p)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search_by(|e| e.0.cmp(&b)).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_obstacle_vertex(&self, v: usize) -> bool {
        v >= self.point_count
    }
}

/// Whether the open segment `ab` avoids the interior of `poly`. Touching
/// the boundary, or running along it, is allowed.
pub fn segment_visible(a: GeoPoint, b: GeoPoint, poly: &Polygon) -> bool {
    if poly.edges().any(|(c, d)| proper_cross(a, b, c, d)) {
        return false;
    }
    // Cut the segment where it meets polygon vertices; each piece in between
    // is entirely inside or entirely outside.
    let (ax, ay) = (q(a.x), q(a.y));
    let (dx, dy) = (q(b.x) - &ax, q(b.y) - &ay);
    let len2 = &dx * &dx + &dy * &dy;
    let mut cuts: BTreeSet<BigRational> = BTreeSet::new();
    cuts.insert(BigRational::from_integer(0.into()));
    cuts.insert(BigRational::from_integer(1.into()));
    for &v in &poly.vertices {
        if on_segment(v, a, b) {
            cuts.insert(((q(v.x) - &ax) * &dx + (q(v.y) - &ay) * &dy) / &len2);
        }
    }
    let cuts: Vec<BigRational> = cuts.into_iter().collect();
    let two = BigRational::from_integer(2.into());
    cuts.windows(2).all(|w| {
        let t = (&w[0] + &w[1]) / &two;
        !strictly_inside_big(poly, &(&ax + &t * &dx), &(&ay + &t * &dy))
    })
}

fn strictly_inside_big(poly: &Polygon, px: &BigRational, py: &BigRational) -> bool {
    let mut inside = false;
    for (a, b) in poly.edges() {
        let (ax, ay, bx, by) = (q(a.x), q(a.y), q(b.x), q(b.y));
        // On the boundary?
        let cross = (&bx - &ax) * (py - &ay) - (&by - &ay) * (px - &ax);
        let within = *px >= ax.clone().min(bx.clone()) && *px <= ax.clone().max(bx.clone()) && *py >= ay.clone().min(by.clone()) && *py <= ay.clone().max(by.clone());
        if num_traits::Zero::is_zero(&cross) && within {
            return false;
        }
        if (ay > *py) != (by > *py) {
            let x = &ax + (py - &ay) * (&bx - &ax) / (&by - &ay);
            if *px < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Naive construction: every pair of vertices against every obstacle edge.
pub fn visibility_graph(points: &[GeoPoint], obstacles: &[Polygon]) -> Result<VisibilityGraph, GeoError> {
    for (i, poly) in obstacles.iter().enumerate() {
        if !poly.is_simple() {
            return Err(GeoError::DegeneratePolygon(i));
        }
    }
    for (i, &p) in points.iter().enumerate() {
        if obstacles.iter().any(|o| o.contains_strictly(p)) {
            return Err(GeoError::PointInsideObstacle(i));
        }
    }
    let mut vertices = points.to_vec();
    let mut seen: BTreeSet<GeoPoint> = points.iter().copied().collect();
    for poly in obstacles {
        for &v in &poly.vertices {
            // Corners buried in another obstacle are never useful.
            if !obstacles.iter().any(|o| o.contains_strictly(v)) && seen.insert(v) {
                vertices.push(v);
            }
        }
    }
    let n = vertices.len();
    let mut adjacency = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (vertices[i], vertices[j]);
            if obstacles.iter().all(|o| segment_visible(a, b, o)) {
                let d = a.distance(b);
                adjacency[i].push((j, d));
                adjacency[j].push((i, d));
            }
        }
    }
    Ok(VisibilityGraph { vertices, point_count: points.len(), adjacency })
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
    fn two_points_no_obstacles() {
        let g = visibility_graph(&[p(0, 0), p(3, 4)], &[]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.adjacency[0], vec![(1, 5.0)]);
    }

    #[test]
    fn square_blocks_direct_edge() {
        let g = visibility_graph(&[p(0, 1), p(4, 1)], &[square(1, 0, 2)]).unwrap();
        assert!(!g.has_edge(0, 1));
        assert_eq!(g.vertices.len(), 6);
        // Both points see the near corners.
        assert!(g.has_edge(0, g.vertex_of(p(1, 0)).unwrap()));
        assert!(g.has_edge(1, g.vertex_of(p(3, 2)).unwrap()));
        // Diagonal through the square is blocked, its sides are not.
        let (c00, c22, c20) = (g.vertex_of(p(1, 0)).unwrap(), g.vertex_of(p(3, 2)).unwrap(), g.vertex_of(p(3, 0)).unwrap());
        assert!(!g.has_edge(c00, c22));
        assert!(g.has_edge(c00, c20));
    }

    #[test]
    fn grazing_counts_as_visible() {
        // Runs along the top edge of the square.
        let g = visibility_graph(&[p(0, 2), p(5, 2)], &[square(1, 0, 2)]).unwrap();
        assert!(g.has_edge(0, 1));
        // Touches a corner only.
        let g = visibility_graph(&[p(0, 4), p(4, 0)], &[square(0, 0, 2)]).unwrap();
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn visibility_is_symmetric_through_vertices() {
        let tri = Polygon::new(vec![p(2, 0), p(4, 2), p(2, 4)]);
        for (a, b) in [(p(0, 2), p(6, 2)), (p(2, -1), p(2, 5)), (p(0, 0), p(4, 2))] {
            assert_eq!(segment_visible(a, b, &tri), segment_visible(b, a, &tri));
        }
        // Through the vertex (4,2) and the interior.
        assert!(!segment_visible(p(0, 2), p(6, 2), &tri));
        // Along the edge (2,0)-(2,4).
        assert!(segment_visible(p(2, -1), p(2, 5), &tri));
    }
}
