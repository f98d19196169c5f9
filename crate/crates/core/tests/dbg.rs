#[test]
fn dbg_annulus() {
    use eulerfill::geometry::*;
    let outer = Polygon::new(vec![pt(0.0, 0.0), pt(10.0, 0.0), pt(10.0, 10.0), pt(0.0, 10.0)]);
    let hole = Polygon::new(vec![pt(4.0, 4.0), pt(6.0, 4.0), pt(6.0, 6.0), pt(4.0, 6.0)]);
    let region = Region::new(outer, vec![hole]);
    let pieces = minkowski_inset(&region, 0.5).unwrap();
    eprintln!("pieces: {}", pieces.len());
    for p in &pieces {
        eprintln!("outer: {:?}", p.outer.ring);
        for h in &p.holes { eprintln!("hole: {:?}", h.ring); }
    }
}
