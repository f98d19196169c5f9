//! Planar straight-line graphs with angular adjacency and face extraction.
//!
//! Faces are traced with the face-on-the-left rule: from a directed edge
//! `u -> v`, continue along the departure at `v` that is the first neighbor
//! clockwise from the reversed arrival direction. Bounded faces come out as
//! cycles of positive signed area; the outer boundary of each connected
//! component comes out as a cycle of negative signed area.

use std::collections::HashMap;

use crate::config::Tolerance;

use super::{pt, segment_intersection, Point2, Segment};

/// One traced face cycle.
#[derive(Debug, Clone)]
pub struct PlanarFace {
    /// Vertex ids along the cycle. A pinched face may repeat ids.
    pub cycle: Vec<usize>,
    /// Signed area of the cycle walk (positive = bounded face).
    pub area: f64,
}

impl PlanarFace {
    pub fn is_bounded(&self) -> bool {
        self.area > 0.0
    }
}

/// An indexed planar graph. Vertices snap to the tolerance grid on insert.
#[derive(Debug, Clone)]
pub struct PlanarGraph {
    pub tol: Tolerance,
    pub points: Vec<Point2>,
    keys: HashMap<(i64, i64), usize>,
    /// Undirected edges as vertex id pairs with `a < b`.
    pub edges: Vec<(usize, usize)>,
    edge_ids: HashMap<(usize, usize), usize>,
    /// Per vertex: incident edge ids.
    pub incidence: Vec<Vec<usize>>,
}

impl PlanarGraph {
    pub fn new(tol: Tolerance) -> PlanarGraph {
        PlanarGraph {
            tol,
            points: Vec::new(),
            keys: HashMap::new(),
            edges: Vec::new(),
            edge_ids: HashMap::new(),
            incidence: Vec::new(),
        }
    }

    /// Builds a graph over pre-indexed vertices with no snapping.
    pub fn from_indexed(points: &[Point2], edges: &[(usize, usize)]) -> PlanarGraph {
        let tol = Tolerance::for_points(points.iter());
        let mut g = PlanarGraph {
            tol,
            points: points.to_vec(),
            keys: HashMap::new(),
            edges: Vec::new(),
            edge_ids: HashMap::new(),
            incidence: vec![Vec::new(); points.len()],
        };
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_point(&mut self, p: Point2) -> usize {
        let key = self.tol.key(p);
        if let Some(&id) = self.keys.get(&key) {
            return id;
        }
        let id = self.points.len();
        self.points.push(pt(self.tol.snap(p.x), self.tol.snap(p.y)));
        self.keys.insert(key, id);
        self.incidence.push(Vec::new());
        id
    }

    pub fn lookup_point(&self, p: Point2) -> Option<usize> {
        self.keys.get(&self.tol.key(p)).copied()
    }

    /// Adds an undirected edge, deduplicating; self-loops are dropped.
    pub fn add_edge(&mut self, a: usize, b: usize) -> Option<usize> {
        if a == b {
            return None;
        }
        let key = (a.min(b), a.max(b));
        if let Some(&id) = self.edge_ids.get(&key) {
            return Some(id);
        }
        let id = self.edges.len();
        self.edges.push(key);
        self.edge_ids.insert(key, id);
        self.incidence[a].push(id);
        self.incidence[b].push(id);
        Some(id)
    }

    pub fn add_segment(&mut self, a: Point2, b: Point2) -> Option<usize> {
        let ia = self.add_point(a);
        let ib = self.add_point(b);
        self.add_edge(ia, ib)
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_ids.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn other_end(&self, edge: usize, v: usize) -> usize {
        let (a, b) = self.edges[edge];
        if v == a {
            b
        } else {
            a
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// Overlay construction: inserts segments, splitting them at pairwise
    /// proper intersections and at endpoints of other segments lying in their
    /// interior. Collinear overlaps resolve through shared sub-edges.
    pub fn from_segments_split(segments: &[Segment], tol: Tolerance) -> PlanarGraph {
        let mut g = PlanarGraph::new(tol);
        // Gather every cut point per segment.
        let mut cuts: Vec<Vec<Point2>> = vec![Vec::new(); segments.len()];
        for (i, s) in segments.iter().enumerate() {
            cuts[i].push(s.a);
            cuts[i].push(s.b);
        }
        for i in 0..segments.len() {
            for j in (i + 1)..segments.len() {
                let (si, sj) = (&segments[i], &segments[j]);
                if let Some(p) = segment_intersection(si.a, si.b, sj.a, sj.b, 0.0) {
                    cuts[i].push(p);
                    cuts[j].push(p);
                }
                // Endpoints resting on the other segment's interior.
                for e in [sj.a, sj.b] {
                    if super::point_segment_distance(e, si.a, si.b) <= tol.eps {
                        cuts[i].push(e);
                    }
                }
                for e in [si.a, si.b] {
                    if super::point_segment_distance(e, sj.a, sj.b) <= tol.eps {
                        cuts[j].push(e);
                    }
                }
            }
        }
        for (i, s) in segments.iter().enumerate() {
            let dir = s.b.sub(s.a);
            let mut params: Vec<(f64, Point2)> = cuts[i]
                .iter()
                .map(|&p| (p.sub(s.a).dot(dir), p))
                .collect();
            params.sort_by(|x, y| x.0.total_cmp(&y.0));
            let ids: Vec<usize> = params.iter().map(|&(_, p)| g.add_point(p)).collect();
            for w in ids.windows(2) {
                g.add_edge(w[0], w[1]);
            }
        }
        g
    }

    /// Angularly sorted incident edges around `v` (by departure angle, CCW).
    fn sorted_departures(&self, v: usize) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = self.incidence[v]
            .iter()
            .map(|&e| {
                let w = self.other_end(e, v);
                (self.points[w].sub(self.points[v]).angle(), e)
            })
            .collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    /// Given arrival at `v` via `edge`, the next directed departure for a
    /// face-on-left walk: the first departure clockwise from the reversed
    /// arrival direction.
    fn next_departure(&self, v: usize, edge: usize) -> usize {
        let deps = self.sorted_departures(v);
        debug_assert!(!deps.is_empty());
        let u = self.other_end(edge, v);
        let back = self.points[u].sub(self.points[v]).angle();
        // Largest angle strictly below `back`, wrapping around.
        let mut best: Option<(f64, usize)> = None;
        for &(ang, e) in &deps {
            if ang < back - 1e-15 {
                best = Some((ang, e));
            }
        }
        match best {
            Some((_, e)) => e,
            // Wrap: take the overall largest (could be the arrival edge
            // itself, which walks back along a dangling edge).
            None => deps.last().map(|&(_, e)| e).unwrap(),
        }
    }

    /// Traces every face cycle. Each directed edge side belongs to exactly
    /// one face.
    pub fn faces(&self) -> Vec<PlanarFace> {
        let mut visited = vec![false; self.edges.len() * 2];
        let mut out = Vec::new();
        for start_edge in 0..self.edges.len() {
            for dir in 0..2 {
                let h0 = start_edge * 2 + dir;
                if visited[h0] {
                    continue;
                }
                let mut cycle = Vec::new();
                let mut h = h0;
                loop {
                    visited[h] = true;
                    let e = h / 2;
                    let (a, b) = self.edges[e];
                    let (tail, head) = if h % 2 == 0 { (a, b) } else { (b, a) };
                    cycle.push(tail);
                    let ne = self.next_departure(head, e);
                    let nw = self.other_end(ne, head);
                    let nh = ne * 2 + if self.edges[ne].0 == head && nw == self.edges[ne].1 { 0 } else { 1 };
                    h = nh;
                    if h == h0 {
                        break;
                    }
                    if cycle.len() > 2 * self.edges.len() + 4 {
                        // Walk failed to close; should not happen on a valid
                        // planar embedding.
                        break;
                    }
                }
                let ring: Vec<Point2> = cycle.iter().map(|&v| self.points[v]).collect();
                let area = super::ring_signed_area(&ring);
                out.push(PlanarFace { cycle, area });
            }
        }
        out
    }

    /// A point strictly inside a bounded face cycle.
    pub fn face_interior_point(&self, face: &PlanarFace) -> Option<Point2> {
        let ring: Vec<Point2> = face.cycle.iter().map(|&v| self.points[v]).collect();
        interior_point_of_cycle(&ring)
    }
}

/// A representative interior point of a positively oriented closed walk.
pub fn interior_point_of_cycle(ring: &[Point2]) -> Option<Point2> {
    let n = ring.len();
    if n < 3 {
        return None;
    }
    // Corner at the lexicographically smallest vertex is convex for a CCW walk.
    let mut vi = 0;
    for i in 1..n {
        let (p, q) = (ring[i], ring[vi]);
        if (p.x, p.y) < (q.x, q.y) {
            vi = i;
        }
    }
    let a = ring[(vi + n - 1) % n];
    let v = ring[vi];
    let b = ring[(vi + 1) % n];
    if super::orient2d(a, v, b).abs() < 1e-30 {
        // Degenerate corner (spike); fall back to scanning other corners.
        for off in 1..n {
            let i = (vi + off) % n;
            let a = ring[(i + n - 1) % n];
            let v = ring[i];
            let b = ring[(i + 1) % n];
            if super::orient2d(a, v, b) > 1e-30 {
                if let Some(p) = corner_interior_point(ring, a, v, b) {
                    return Some(p);
                }
            }
        }
        return None;
    }
    corner_interior_point(ring, a, v, b)
}

fn corner_interior_point(ring: &[Point2], a: Point2, v: Point2, b: Point2) -> Option<Point2> {
    // Farthest ring vertex strictly inside triangle (a, v, b), if any.
    let mut best: Option<(f64, Point2)> = None;
    for &q in ring {
        if q == a || q == v || q == b {
            continue;
        }
        let inside = super::orient2d(a, v, q) > 0.0
            && super::orient2d(v, b, q) > 0.0
            && super::orient2d(b, a, q) > 0.0;
        if inside {
            let d = super::point_segment_distance(q, a, b);
            if best.map_or(true, |(bd, _)| d > bd) {
                best = Some((d, q));
            }
        }
    }
    match best {
        Some((_, q)) => Some(v.lerp(q, 0.5)),
        None => {
            let mid = a.lerp(b, 0.5);
            Some(v.lerp(mid, 0.5))
        }
    }
}

/// Even-odd containment of a point in a set of rings.
pub fn even_odd_inside(rings: &[Vec<Point2>], p: Point2) -> bool {
    let mut inside = false;
    for ring in rings {
        let n = ring.len();
        let mut j = n - 1;
        for i in 0..n {
            let (pi, pj) = (ring[i], ring[j]);
            if (pi.y > p.y) != (pj.y > p.y) {
                let x_cross = pi.x + (p.y - pi.y) / (pj.y - pi.y) * (pj.x - pi.x);
                if p.x < x_cross {
                    inside = !inside;
                }
            }
            j = i;
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::pt;

    #[test]
    fn unit_square_faces() {
        let pts = [pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)];
        let edges = [(0, 1), (1, 2), (2, 3), (3, 0)];
        let g = PlanarGraph::from_indexed(&pts, &edges);
        let faces = g.faces();
        assert_eq!(faces.len(), 2);
        let bounded: Vec<_> = faces.iter().filter(|f| f.is_bounded()).collect();
        assert_eq!(bounded.len(), 1);
        assert!((bounded[0].area - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_squares_share_edge() {
        // 6 vertices, 7 edges, faces: 2 bounded + 1 outer.
        let pts = [
            pt(0.0, 0.0),
            pt(1.0, 0.0),
            pt(2.0, 0.0),
            pt(2.0, 1.0),
            pt(1.0, 1.0),
            pt(0.0, 1.0),
        ];
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (1, 4)];
        let g = PlanarGraph::from_indexed(&pts, &edges);
        let faces = g.faces();
        assert_eq!(faces.iter().filter(|f| f.is_bounded()).count(), 2);
        assert_eq!(faces.iter().filter(|f| !f.is_bounded()).count(), 1);
    }

    #[test]
    fn split_overlay_crossing() {
        let segs = [
            Segment::new(pt(0.0, 0.0), pt(2.0, 2.0)),
            Segment::new(pt(0.0, 2.0), pt(2.0, 0.0)),
        ];
        let g = PlanarGraph::from_segments_split(&segs, Tolerance::new(1e-9));
        assert_eq!(g.points.len(), 5);
        assert_eq!(g.edges.len(), 4);
    }

    #[test]
    fn split_overlay_t_junction() {
        let segs = [
            Segment::new(pt(0.0, 0.0), pt(2.0, 0.0)),
            Segment::new(pt(1.0, 0.0), pt(1.0, 1.0)),
        ];
        let g = PlanarGraph::from_segments_split(&segs, Tolerance::new(1e-9));
        assert_eq!(g.points.len(), 4);
        assert_eq!(g.edges.len(), 3);
    }

    #[test]
    fn interior_point_nonconvex() {
        let ring = vec![
            pt(0.0, 0.0),
            pt(4.0, 0.0),
            pt(4.0, 4.0),
            pt(2.0, 1.0), // deep notch
            pt(0.0, 4.0),
        ];
        let p = interior_point_of_cycle(&ring).unwrap();
        let tol = Tolerance::new(1e-9);
        assert!(Polygon::new(ring).contains(p, &tol));
    }

    use crate::geometry::Polygon;

    #[test]
    fn pinched_face_walk_closes() {
        // Bowtie: two triangles sharing vertex 2.
        let pts = [
            pt(0.0, 0.0),
            pt(2.0, 0.0),
            pt(2.0, 1.0),
            pt(2.0, 2.0),
            pt(4.0, 2.0),
        ];
        let edges = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)];
        let g = PlanarGraph::from_indexed(&pts, &edges);
        let faces = g.faces();
        let bounded = faces.iter().filter(|f| f.is_bounded()).count();
        assert_eq!(bounded, 2);
        // The outer face walks through the pinch vertex twice.
        let outer = faces.iter().find(|f| !f.is_bounded()).unwrap();
        assert_eq!(outer.cycle.iter().filter(|&&v| v == 2).count(), 2);
    }
}
