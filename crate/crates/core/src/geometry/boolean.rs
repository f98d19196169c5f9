//! Region-level set operations built on the offset wavefront and the planar
//! overlay: inward Minkowski insets of regions with holes, and unions of
//! region sets.
//!
//! The inset uses mitered per-ring offsets combined by a boolean difference.
//! A mitered inset is conservative with respect to the exact disk erosion:
//! every point of the result keeps distance at least `r` from the region
//! boundary (miters cut deeper than circular arcs at reflex corners, and the
//! dilations subtracted around holes are supersets of the exact ones).

use crate::config::Tolerance;
use crate::{Error, Result};

use super::arrangement::{even_odd_inside, PlanarGraph};
use super::offset::mitered_offset;
use super::{Orientation, Point2, Polygon, Region, Segment};

/// Inward Minkowski inset of a region by radius `r`. The result may be
/// empty (region vanished) or split into several components, each returned
/// as its own region with holes.
pub fn minkowski_inset(region: &Region, r: f64) -> Result<Vec<Region>> {
    if !(r >= 0.0) {
        return Err(Error::DegenerateGeometry(format!("inset radius {r} must be >= 0")));
    }
    let region = region.clone().normalized();
    if r == 0.0 {
        return Ok(vec![region]);
    }

    // Outer ring: counterclockwise so the wavefront moves inward.
    let outer_ccw = match region.outer.orientation() {
        Orientation::Ccw => region.outer.clone(),
        Orientation::Cw => region.outer.reversed(),
    };
    let outer_res = mitered_offset(&outer_ccw, r)?;
    if outer_res.pieces.is_empty() {
        return Ok(Vec::new());
    }
    let outer_rings: Vec<Vec<Point2>> =
        outer_res.pieces.iter().map(|p| p.ring.clone()).collect();

    // Each hole is dilated outward: clockwise ring so the left of the ring
    // direction is the region side.
    let mut hole_dilations: Vec<Vec<Vec<Point2>>> = Vec::new();
    for hole in &region.holes {
        let hole_cw = match hole.orientation() {
            Orientation::Cw => hole.clone(),
            Orientation::Ccw => hole.reversed(),
        };
        let res = mitered_offset(&hole_cw, r)?;
        hole_dilations.push(res.pieces.iter().map(|p| p.ring.clone()).collect());
    }

    let mut all_rings: Vec<Vec<Point2>> = outer_rings.clone();
    for d in &hole_dilations {
        all_rings.extend(d.iter().cloned());
    }
    let covered = |p: Point2| {
        even_odd_inside(&outer_rings, p)
            && hole_dilations.iter().all(|d| !even_odd_inside(d, p))
    };
    Ok(assemble_covered_regions(&all_rings, &covered))
}

/// Outward mitered dilation rings of a polygon (used by support-perimeter
/// rendering and tests).
pub fn minkowski_outset_rings(polygon: &Polygon, r: f64) -> Result<Vec<Vec<Point2>>> {
    let cw = match polygon.orientation() {
        Orientation::Cw => polygon.clone(),
        Orientation::Ccw => polygon.reversed(),
    };
    let res = mitered_offset(&cw, r)?;
    Ok(res.pieces.iter().map(|p| p.ring.clone()).collect())
}

/// Union of a set of regions, returned as disjoint regions with holes.
pub fn region_union(regions: &[Region]) -> Result<Vec<Region>> {
    if regions.is_empty() {
        return Ok(Vec::new());
    }
    let normalized: Vec<Region> = regions.iter().map(|r| r.clone().normalized()).collect();
    let mut all_rings: Vec<Vec<Point2>> = Vec::new();
    let mut per_region_rings: Vec<Vec<Vec<Point2>>> = Vec::new();
    for region in &normalized {
        let rings: Vec<Vec<Point2>> =
            region.rings().map(|p| p.ring.clone()).collect();
        all_rings.extend(rings.iter().cloned());
        per_region_rings.push(rings);
    }
    let covered = |p: Point2| per_region_rings.iter().any(|rings| even_odd_inside(rings, p));
    Ok(assemble_covered_regions(&all_rings, &covered))
}

/// Overlays the rings, classifies faces by the coverage predicate, and
/// assembles boundary loops into regions with holes.
fn assemble_covered_regions(rings: &[Vec<Point2>], covered: &dyn Fn(Point2) -> bool) -> Vec<Region> {
    let pts: Vec<Point2> = rings.iter().flatten().copied().collect();
    if pts.is_empty() {
        return Vec::new();
    }
    let tol = Tolerance::for_points(pts.iter());
    let mut segs = Vec::new();
    for ring in rings {
        let n = ring.len();
        for i in 0..n {
            let (a, b) = (ring[i], ring[(i + 1) % n]);
            if a.dist(b) > tol.eps {
                segs.push(Segment::new(a, b));
            }
        }
    }
    let g = PlanarGraph::from_segments_split(&segs, tol);
    let faces = g.faces();

    // Face id on each side of every edge.
    let mut side_face = vec![usize::MAX; g.edges.len() * 2];
    for (fi, face) in faces.iter().enumerate() {
        let n = face.cycle.len();
        for i in 0..n {
            let (a, b) = (face.cycle[i], face.cycle[(i + 1) % n]);
            if let Some(e) = g.edge_id(a, b) {
                let dir = if g.edges[e].0 == a { 0 } else { 1 };
                side_face[e * 2 + dir] = fi;
            }
        }
    }
    let mut face_covered = vec![false; faces.len()];
    for (fi, face) in faces.iter().enumerate() {
        if face.is_bounded() && face.area.abs() > tol.eps * tol.eps {
            if let Some(p) = g.face_interior_point(face) {
                face_covered[fi] = covered(p);
            }
        }
    }

    // Boundary edges separate covered from uncovered faces.
    let mut boundary_edges = Vec::new();
    for e in 0..g.edges.len() {
        let (fa, fb) = (side_face[e * 2], side_face[e * 2 + 1]);
        let ca = fa != usize::MAX && face_covered[fa];
        let cb = fb != usize::MAX && face_covered[fb];
        if ca != cb {
            boundary_edges.push(g.edges[e]);
        }
    }
    if boundary_edges.is_empty() {
        return Vec::new();
    }

    // Walk the boundary subgraph; positive cycles with covered interiors are
    // outer rings, positive cycles with uncovered interiors are holes.
    let sub = PlanarGraph::from_indexed(&g.points, &boundary_edges);
    let mut outers: Vec<(Polygon, f64)> = Vec::new();
    let mut holes: Vec<Polygon> = Vec::new();
    for face in sub.faces() {
        if !face.is_bounded() || face.area.abs() <= tol.eps * tol.eps {
            continue;
        }
        let ring: Vec<Point2> = face.cycle.iter().map(|&v| sub.points[v]).collect();
        let rep = match sub.face_interior_point(&face) {
            Some(p) => p,
            None => continue,
        };
        if covered(rep) {
            outers.push((Polygon::new(ring), face.area));
        } else {
            holes.push(Polygon::new(ring));
        }
    }

    // Assign each hole to the smallest outer ring containing it.
    let mut out: Vec<Region> = outers
        .iter()
        .map(|(p, _)| Region::new(p.clone(), Vec::new()))
        .collect();
    for hole in holes {
        let rep = hole.ring[0];
        let mut best: Option<(usize, f64)> = None;
        for (i, (outer, area)) in outers.iter().enumerate() {
            if outer.contains(rep, &tol) && best.map_or(true, |(_, ba)| *area < ba) {
                best = Some((i, *area));
            }
        }
        if let Some((i, _)) = best {
            out[i].holes.push(hole);
        }
    }
    out.into_iter().map(|r| r.normalized()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{pt, ring_signed_area};

    fn square_region(side: f64) -> Region {
        Region::new(
            Polygon::new(vec![pt(0.0, 0.0), pt(side, 0.0), pt(side, side), pt(0.0, side)]),
            Vec::new(),
        )
    }

    #[test]
    fn square_inset() {
        let pieces = minkowski_inset(&square_region(10.0), 1.0).unwrap();
        assert_eq!(pieces.len(), 1);
        let r = &pieces[0];
        let (lo, hi) = r.bbox();
        assert!(lo.dist(pt(1.0, 1.0)) < 1e-6);
        assert!(hi.dist(pt(9.0, 9.0)) < 1e-6);
        assert!(r.holes.is_empty());
    }

    #[test]
    fn zero_inset_identity() {
        let region = square_region(5.0);
        let pieces = minkowski_inset(&region, 0.0).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].outer.len(), 4);
    }

    #[test]
    fn annulus_inset_keeps_hole() {
        let outer = Polygon::new(vec![pt(0.0, 0.0), pt(10.0, 0.0), pt(10.0, 10.0), pt(0.0, 10.0)]);
        let hole = Polygon::new(vec![pt(4.0, 4.0), pt(6.0, 4.0), pt(6.0, 6.0), pt(4.0, 6.0)]);
        let region = Region::new(outer, vec![hole]);
        let pieces = minkowski_inset(&region, 0.5).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].holes.len(), 1);
        // Hole grew by 0.5 on each side.
        let h = &pieces[0].holes[0];
        let (lo, hi) = h.bbox();
        assert!(lo.dist(pt(3.5, 3.5)) < 1e-6);
        assert!(hi.dist(pt(6.5, 6.5)) < 1e-6);
    }

    #[test]
    fn annulus_inset_merges_to_empty() {
        // Outer 10x10, hole 4x4 centered: the band is 3 wide; r = 2 makes
        // the grown hole overlap the shrunk outer everywhere.
        let outer = Polygon::new(vec![pt(0.0, 0.0), pt(10.0, 0.0), pt(10.0, 10.0), pt(0.0, 10.0)]);
        let hole = Polygon::new(vec![pt(3.0, 3.0), pt(7.0, 3.0), pt(7.0, 7.0), pt(3.0, 7.0)]);
        let region = Region::new(outer, vec![hole]);
        let pieces = minkowski_inset(&region, 2.0).unwrap();
        assert!(pieces.is_empty(), "got {} pieces", pieces.len());

        // Distance-field oracle: no sample point of the original region is
        // at distance >= 2 from the boundary, confirming emptiness is right.
        let region = Region::new(
            Polygon::new(vec![pt(0.0, 0.0), pt(10.0, 0.0), pt(10.0, 10.0), pt(0.0, 10.0)]),
            vec![Polygon::new(vec![pt(3.0, 3.0), pt(7.0, 3.0), pt(7.0, 7.0), pt(3.0, 7.0)])],
        )
        .normalized();
        let tol = Tolerance::new(1e-9);
        for ix in 0..=50 {
            for iy in 0..=50 {
                let p = pt(ix as f64 * 0.2, iy as f64 * 0.2);
                if region.contains(p, &tol) {
                    assert!(region.boundary_distance(p) < 2.0);
                }
            }
        }
    }

    #[test]
    fn inset_is_subset_of_region() {
        // Point-sampling check of inset(region, r) within region, at distance >= r.
        let outer = Polygon::new(vec![
            pt(0.0, 0.0),
            pt(12.0, 0.0),
            pt(12.0, 6.0),
            pt(7.0, 6.0),
            pt(7.0, 3.0),
            pt(5.0, 3.0),
            pt(5.0, 6.0),
            pt(0.0, 6.0),
        ]);
        let region = Region::new(outer, Vec::new());
        let r = 1.0;
        let pieces = minkowski_inset(&region, r).unwrap();
        assert!(!pieces.is_empty());
        let tol = Tolerance::new(1e-9);
        let norm_region = region.clone().normalized();
        for ix in 0..=60 {
            for iy in 0..=30 {
                let p = pt(ix as f64 * 0.2, iy as f64 * 0.2);
                if pieces.iter().any(|piece| piece.contains(p, &tol)) {
                    assert!(norm_region.contains(p, &tol), "{p:?} outside region");
                    assert!(
                        norm_region.boundary_distance(p) >= r - 1e-6,
                        "{p:?} too close to boundary"
                    );
                }
            }
        }
    }

    #[test]
    fn union_of_overlapping_squares() {
        let a = square_region(4.0);
        let b = Region::new(
            Polygon::new(vec![pt(2.0, 0.0), pt(6.0, 0.0), pt(6.0, 4.0), pt(2.0, 4.0)]),
            Vec::new(),
        );
        let u = region_union(&[a, b]).unwrap();
        assert_eq!(u.len(), 1);
        let area = ring_signed_area(&u[0].outer.ring).abs();
        assert!((area - 24.0).abs() < 1e-6, "area {area}");
    }

    #[test]
    fn union_of_disjoint_squares() {
        let a = square_region(2.0);
        let b = Region::new(
            Polygon::new(vec![pt(5.0, 0.0), pt(7.0, 0.0), pt(7.0, 2.0), pt(5.0, 2.0)]),
            Vec::new(),
        );
        let u = region_union(&[a, b]).unwrap();
        assert_eq!(u.len(), 2);
    }

    #[test]
    fn union_of_identical_squares() {
        let a = square_region(3.0);
        let b = square_region(3.0);
        let u = region_union(&[a, b]).unwrap();
        assert_eq!(u.len(), 1);
        let area = ring_signed_area(&u[0].outer.ring).abs();
        assert!((area - 9.0).abs() < 1e-6);
    }
}
