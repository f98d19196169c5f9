//! Robust-enough 2D primitives for the planning kernel.
//!
//! Convention used everywhere: +x right, +y up, angles counterclockwise.
//! A counterclockwise ring has positive signed area; "clockwise" in the
//! tool-path sense therefore means negative signed area.

mod arrangement;
mod boolean;
mod offset;

pub use arrangement::{PlanarFace, PlanarGraph};
pub use boolean::{minkowski_inset, minkowski_outset_rings, region_union};
pub use offset::{first_skeleton_event, mitered_offset, OffsetPiece, OffsetResult};

use serde::{Deserialize, Serialize};

use crate::config::Tolerance;
use crate::{Error, Result};

/// A point in the plane, in millimeters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

/// Shorthand constructor.
pub fn pt(x: f64, y: f64) -> Point2 {
    Point2 { x, y }
}

impl Point2 {
    pub fn sub(self, o: Point2) -> Vec2 {
        Vec2 { x: self.x - o.x, y: self.y - o.y }
    }

    pub fn add(self, v: Vec2) -> Point2 {
        Point2 { x: self.x + v.x, y: self.y + v.y }
    }

    pub fn dist(self, o: Point2) -> f64 {
        self.sub(o).norm()
    }

    pub fn dist_sq(self, o: Point2) -> f64 {
        let d = self.sub(o);
        d.x * d.x + d.y * d.y
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        Point2 { x: self.x + (o.x - self.x) * t, y: self.y + (o.y - self.y) * t }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// A displacement vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub fn new(x: f64, y: f64) -> Vec2 {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn scale(self, s: f64) -> Vec2 {
        Vec2 { x: self.x * s, y: self.y * s }
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        if n == 0.0 {
            Vec2 { x: 0.0, y: 0.0 }
        } else {
            self.scale(1.0 / n)
        }
    }

    /// Rotation by +90 degrees (left normal of a direction).
    pub fn left_normal(self) -> Vec2 {
        Vec2 { x: -self.y, y: self.x }
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

/// Orientation of a ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Cw,
    Ccw,
}

/// A simple closed polygon given by its vertex ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    pub ring: Vec<Point2>,
}

impl Polygon {
    pub fn new(ring: Vec<Point2>) -> Polygon {
        Polygon { ring }
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }

    /// Edge `(ring[i], ring[i+1])`, wrapping at the end.
    pub fn edge(&self, i: usize) -> (Point2, Point2) {
        (self.ring[i], self.ring[(i + 1) % self.ring.len()])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        (0..self.ring.len()).map(move |i| self.edge(i))
    }

    pub fn orientation(&self) -> Orientation {
        if signed_area(self).unwrap_or(0.0) >= 0.0 {
            Orientation::Ccw
        } else {
            Orientation::Cw
        }
    }

    pub fn reversed(&self) -> Polygon {
        let mut ring = self.ring.clone();
        ring.reverse();
        Polygon { ring }
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        bbox(&self.ring)
    }

    /// Strict containment test by ray casting; points on the boundary count
    /// as inside within `tol`.
    pub fn contains(&self, p: Point2, tol: &Tolerance) -> bool {
        let n = self.ring.len();
        if n < 3 {
            return false;
        }
        for i in 0..n {
            let (a, b) = self.edge(i);
            if point_segment_distance(p, a, b) <= tol.eps {
                return true;
            }
        }
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (pi, pj) = (self.ring[i], self.ring[j]);
            if (pi.y > p.y) != (pj.y > p.y) {
                let x_cross = pi.x + (p.y - pi.y) / (pj.y - pi.y) * (pj.x - pi.x);
                if p.x < x_cross {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }
}

/// A polygon with holes. By the printing convention the outer ring is stored
/// clockwise and holes counterclockwise, so the region interior always lies
/// to the right of every directed ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub outer: Polygon,
    pub holes: Vec<Polygon>,
}

impl Region {
    pub fn new(outer: Polygon, holes: Vec<Polygon>) -> Region {
        Region { outer, holes }
    }

    /// Normalizes ring orientations to the storage convention.
    pub fn normalized(mut self) -> Region {
        if self.outer.orientation() == Orientation::Ccw {
            self.outer = self.outer.reversed();
        }
        for h in &mut self.holes {
            if h.orientation() == Orientation::Cw {
                *h = h.reversed();
            }
        }
        self
    }

    pub fn contains(&self, p: Point2, tol: &Tolerance) -> bool {
        if !self.outer.contains(p, tol) {
            return false;
        }
        for h in &self.holes {
            // Boundary of a hole still belongs to the region.
            if h.contains(p, tol) {
                let on_boundary =
                    h.edges().any(|(a, b)| point_segment_distance(p, a, b) <= tol.eps);
                if !on_boundary {
                    return false;
                }
            }
        }
        true
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        self.outer.bbox()
    }

    /// All boundary rings: the outer ring first, then holes.
    pub fn rings(&self) -> impl Iterator<Item = &Polygon> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    /// Distance from `p` to the region boundary.
    pub fn boundary_distance(&self, p: Point2) -> f64 {
        let mut best = f64::INFINITY;
        for ring in self.rings() {
            for (a, b) in ring.edges() {
                best = best.min(point_segment_distance(p, a, b));
            }
        }
        best
    }
}

/// A line segment between two points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub fn new(a: Point2, b: Point2) -> Segment {
        Segment { a, b }
    }

    pub fn len(&self) -> f64 {
        self.a.dist(self.b)
    }
}

pub fn bbox(pts: &[Point2]) -> (Point2, Point2) {
    let mut lo = pt(f64::INFINITY, f64::INFINITY);
    let mut hi = pt(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

pub fn bbox_diagonal(pts: &[Point2]) -> f64 {
    let (lo, hi) = bbox(pts);
    if lo.x > hi.x {
        return 0.0;
    }
    hi.sub(lo).norm()
}

/// Twice the signed area of the triangle `a, b, c`. Positive when `c` lies
/// to the left of `a -> b`.
pub fn orient2d(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Signed area of a simple polygon in mm^2: positive for counterclockwise
/// rings, negative for clockwise ones.
pub fn signed_area(polygon: &Polygon) -> Result<f64> {
    let ring = &polygon.ring;
    if distinct_count(ring) < 3 {
        return Err(Error::DegenerateGeometry(format!(
            "signed_area needs at least 3 distinct vertices, got {}",
            ring.len()
        )));
    }
    Ok(ring_signed_area(ring))
}

/// Shoelace formula without degeneracy checks.
pub fn ring_signed_area(ring: &[Point2]) -> f64 {
    let n = ring.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    acc / 2.0
}

fn distinct_count(ring: &[Point2]) -> usize {
    let mut count = 0;
    'outer: for (i, p) in ring.iter().enumerate() {
        for q in &ring[..i] {
            if p == q {
                continue 'outer;
            }
        }
        count += 1;
    }
    count
}

/// Distance from `p` to the segment `a b`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b.sub(a);
    let len_sq = ab.dot(ab);
    if len_sq == 0.0 {
        return p.dist(a);
    }
    let t = (p.sub(a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.dist(a.add(ab.scale(t)))
}

/// Minimum distance between two segments.
pub fn segment_distance(a1: Point2, a2: Point2, b1: Point2, b2: Point2) -> f64 {
    if segment_intersection(a1, a2, b1, b2, 0.0).is_some() {
        return 0.0;
    }
    point_segment_distance(a1, b1, b2)
        .min(point_segment_distance(a2, b1, b2))
        .min(point_segment_distance(b1, a1, a2))
        .min(point_segment_distance(b2, a1, a2))
}

/// Proper intersection point of segments `a1 a2` and `b1 b2`, if any.
/// Endpoint contacts within `tol_endpoints` of a shared endpoint are ignored;
/// collinear overlaps return `None`.
pub fn segment_intersection(
    a1: Point2,
    a2: Point2,
    b1: Point2,
    b2: Point2,
    tol_endpoints: f64,
) -> Option<Point2> {
    let r = a2.sub(a1);
    let s = b2.sub(b1);
    let denom = r.cross(s);
    if denom == 0.0 {
        return None;
    }
    let qp = b1.sub(a1);
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    if !(0.0..=1.0).contains(&t) || !(0.0..=1.0).contains(&u) {
        return None;
    }
    let p = a1.add(r.scale(t));
    if tol_endpoints > 0.0 {
        for e in [a1, a2, b1, b2] {
            if p.dist(e) <= tol_endpoints {
                return None;
            }
        }
    }
    Some(p)
}

/// Every interior crossing between two segments that do not share an
/// endpoint. Shared-endpoint contacts are excluded; the tolerance is the
/// global epsilon of the input point set.
pub fn proper_crossings(segments: &[Segment]) -> Vec<Point2> {
    let pts: Vec<Point2> = segments.iter().flat_map(|s| [s.a, s.b]).collect();
    let tol = Tolerance::for_points(pts.iter());
    proper_crossings_with_tol(segments, &tol)
}

pub fn proper_crossings_with_tol(segments: &[Segment], tol: &Tolerance) -> Vec<Point2> {
    let n = segments.len();
    // Sort by min-x so inner scans stop once x-intervals stop overlapping.
    let mut order: Vec<usize> = (0..n).collect();
    let min_x = |s: &Segment| s.a.x.min(s.b.x);
    let max_x = |s: &Segment| s.a.x.max(s.b.x);
    order.sort_by(|&i, &j| min_x(&segments[i]).total_cmp(&min_x(&segments[j])));

    let mut out = Vec::new();
    for (rank, &i) in order.iter().enumerate() {
        let si = &segments[i];
        let (ilo, ihi) = (si.a.y.min(si.b.y), si.a.y.max(si.b.y));
        for &j in &order[rank + 1..] {
            let sj = &segments[j];
            if min_x(sj) > max_x(si) + tol.eps {
                break;
            }
            if sj.a.y.min(sj.b.y) > ihi + tol.eps || sj.a.y.max(sj.b.y) < ilo - tol.eps {
                continue;
            }
            let shares_endpoint = [si.a, si.b]
                .iter()
                .any(|p| [sj.a, sj.b].iter().any(|q| p.dist(*q) <= tol.eps));
            if shares_endpoint {
                continue;
            }
            if let Some(p) = segment_intersection(si.a, si.b, sj.a, sj.b, tol.eps) {
                out.push(p);
            }
        }
    }
    out.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    out
}

/// Counterclockwise convex hull of a point set (Andrew's monotone chain).
pub fn convex_hull(points: &[Point2]) -> Result<Polygon> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    pts.dedup_by(|a, b| a == b);
    if pts.len() < 3 {
        return Err(Error::DegenerateGeometry("convex hull needs at least 3 distinct points".into()));
    }

    let build = |iter: &mut dyn Iterator<Item = Point2>| {
        let mut chain: Vec<Point2> = Vec::new();
        for p in iter {
            while chain.len() >= 2
                && orient2d(chain[chain.len() - 2], chain[chain.len() - 1], p) <= 0.0
            {
                chain.pop();
            }
            chain.push(p);
        }
        chain.pop();
        chain
    };
    let lower = build(&mut pts.iter().copied());
    let upper = build(&mut pts.iter().rev().copied());

    let mut hull = lower;
    hull.extend(upper);
    if hull.len() < 3 {
        return Err(Error::DegenerateGeometry("all points are collinear".into()));
    }
    Ok(Polygon::new(hull))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_square_ccw() -> Polygon {
        Polygon::new(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)])
    }

    #[test]
    fn signed_area_unit_square() {
        assert_eq!(signed_area(&unit_square_ccw()).unwrap(), 1.0);
    }

    #[test]
    fn signed_area_reversed_square() {
        assert_eq!(signed_area(&unit_square_ccw().reversed()).unwrap(), -1.0);
    }

    #[test]
    fn signed_area_triangle() {
        let tri = Polygon::new(vec![pt(0.0, 0.0), pt(4.0, 0.0), pt(0.0, 3.0)]);
        assert_eq!(signed_area(&tri).unwrap(), 6.0);
    }

    #[test]
    fn signed_area_degenerate() {
        let bad = Polygon::new(vec![pt(0.0, 0.0), pt(1.0, 1.0), pt(0.0, 0.0)]);
        assert!(matches!(signed_area(&bad), Err(crate::Error::DegenerateGeometry(_))));
    }

    #[test]
    fn crossings_x_pattern() {
        let segs = vec![
            Segment::new(pt(0.0, 0.0), pt(1.0, 1.0)),
            Segment::new(pt(0.0, 1.0), pt(1.0, 0.0)),
        ];
        let xs = proper_crossings(&segs);
        assert_eq!(xs.len(), 1);
        assert!(xs[0].dist(pt(0.5, 0.5)) < 1e-12);
    }

    #[test]
    fn crossings_simple_polygon_empty() {
        let poly = Polygon::new(vec![pt(0.0, 0.0), pt(2.0, 0.0), pt(2.0, 1.0), pt(1.0, 0.5), pt(0.0, 1.0)]);
        let segs: Vec<Segment> = poly.edges().map(|(a, b)| Segment::new(a, b)).collect();
        assert!(proper_crossings(&segs).is_empty());
    }

    #[test]
    fn hull_square_with_center() {
        let mut pts_in = unit_square_ccw().ring;
        pts_in.push(pt(0.5, 0.5));
        let hull = convex_hull(&pts_in).unwrap();
        assert_eq!(hull.len(), 4);
        assert_eq!(hull.orientation(), Orientation::Ccw);
    }

    #[test]
    fn hull_triangle() {
        let tri = vec![pt(0.0, 0.0), pt(2.0, 0.0), pt(1.0, 2.0)];
        let hull = convex_hull(&tri).unwrap();
        assert_eq!(hull.len(), 3);
    }

    #[test]
    fn hull_collinear_fails() {
        let pts_in = vec![pt(0.0, 0.0), pt(1.0, 1.0), pt(2.0, 2.0), pt(3.0, 3.0)];
        assert!(convex_hull(&pts_in).is_err());
    }

    #[test]
    fn hull_random_disk_against_halfplane_oracle() {
        // Deterministic pseudo-random points in a disk; oracle: a hull is
        // correct iff every input point lies inside (pairwise half-plane
        // check) and every hull vertex is an input point.
        let mut pts_in = Vec::new();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        while pts_in.len() < 100 {
            let x = rng() * 2.0 - 1.0;
            let y = rng() * 2.0 - 1.0;
            if x * x + y * y <= 1.0 {
                pts_in.push(pt(x, y));
            }
        }
        let hull = convex_hull(&pts_in).unwrap();
        for v in &hull.ring {
            assert!(pts_in.iter().any(|p| p == v), "hull vertex not an input point");
        }
        for p in &pts_in {
            for i in 0..hull.len() {
                let (a, b) = hull.edge(i);
                assert!(orient2d(a, b, *p) >= -1e-12, "input point outside hull edge");
            }
        }
    }

    #[test]
    fn region_containment_with_hole() {
        let outer = Polygon::new(vec![pt(0.0, 0.0), pt(0.0, 4.0), pt(4.0, 4.0), pt(4.0, 0.0)]); // CW
        let hole = Polygon::new(vec![pt(1.0, 1.0), pt(3.0, 1.0), pt(3.0, 3.0), pt(1.0, 3.0)]); // CCW
        let region = Region::new(outer, vec![hole]);
        let tol = Tolerance::new(1e-9);
        assert!(region.contains(pt(0.5, 0.5), &tol));
        assert!(!region.contains(pt(2.0, 2.0), &tol));
        assert!(region.contains(pt(1.0, 2.0), &tol)); // on hole boundary
    }

    proptest! {
        #[test]
        fn area_sign_flips_under_reversal(xs in proptest::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..12)) {
            let ring: Vec<Point2> = xs.into_iter().map(|(x, y)| pt(x, y)).collect();
            let poly = Polygon::new(ring);
            if let Ok(a) = signed_area(&poly) {
                let b = signed_area(&poly.reversed()).unwrap();
                prop_assert!((a + b).abs() <= 1e-9 * a.abs().max(1.0));
            }
        }

        #[test]
        fn crossings_symmetric_under_permutation(seed in 0u64..500) {
            let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
            let mut rng = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64
            };
            let mut segs = Vec::new();
            for _ in 0..12 {
                segs.push(Segment::new(pt(rng() * 10.0, rng() * 10.0), pt(rng() * 10.0, rng() * 10.0)));
            }
            let mut a = proper_crossings(&segs);
            segs.reverse();
            let mut b = proper_crossings(&segs);
            let key = |p: &Point2| (p.x.to_bits(), p.y.to_bits());
            a.sort_by_key(key);
            b.sort_by_key(key);
            prop_assert_eq!(a.len(), b.len());
            for (p, q) in a.iter().zip(b.iter()) {
                prop_assert!(p.dist(*q) < 1e-9);
            }
        }
    }
}
