//! Mitered polygon offsets driven by a straight-skeleton wavefront.
//!
//! Every boundary edge sweeps parallel to itself, to the left of the ring
//! direction, at unit speed. A counterclockwise ring therefore shrinks inward
//! and a clockwise ring grows outward. Two kinds of events can occur before
//! the target distance is reached:
//!
//! * edge events — an edge shrinks to a point; the offset polygon loses an
//!   edge (a combinatorial change), and runs of lost edges merge into a
//!   single vertex;
//! * split events — a reflex vertex runs into an opposite edge; the polygon
//!   splits into two pieces (a topological change).
//!
//! Exactly anti-parallel fronts that collide head-on (axis-aligned slabs
//! pinching shut) produce vertices with no valid bisector motion. Such
//! vertices are marked doomed; the loops they close up on are annihilated in
//! place, which reproduces the limit of the perturbed geometry.
//!
//! The result records all events so callers can reason about what happened
//! to each input edge and vertex.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::config::Tolerance;
use crate::{Error, Result};

use super::{Point2, Polygon, Vec2};

/// Angular tolerance for treating adjacent edges as collinear.
const COLLINEAR_EPS: f64 = 1e-9;

/// One connected piece of the offset boundary.
#[derive(Debug, Clone)]
pub struct OffsetPiece {
    /// Vertex positions at the offset distance, in the input ring's cyclic order.
    pub ring: Vec<Point2>,
    /// Wavefront vertex ids, parallel to `ring`.
    pub vertex_ids: Vec<u32>,
    /// For ring edge `i` (from `ring[i]` to `ring[i+1]`): the input edge whose
    /// offset line carries it.
    pub source_edges: Vec<usize>,
}

impl OffsetPiece {
    /// A piece is a proper polygon when it has at least three vertices and
    /// encloses a nonzero area.
    pub fn is_proper(&self, tol: &Tolerance) -> bool {
        self.ring.len() >= 3 && super::ring_signed_area(&self.ring).abs() > tol.eps
    }
}

/// A maximal run of adjacent input edges whose offset copies collapsed into
/// one vertex.
#[derive(Debug, Clone)]
pub struct CollapsedRun {
    /// Input edge indices in the run (cyclically adjacent).
    pub source_edges: Vec<usize>,
    /// Wavefront id of the merged vertex.
    pub vertex_id: u32,
    /// Its position at the offset distance (when still alive).
    pub position: Option<Point2>,
}

/// A reflex vertex hitting an opposite edge.
#[derive(Debug, Clone)]
pub struct SplitRecord {
    /// Input vertex the reflex wavefront vertex descends from, when it is a
    /// direct copy rather than a product of earlier merges.
    pub source_vertex: Option<usize>,
    /// Input edge that was hit.
    pub split_edge: usize,
    pub at: Point2,
    pub time: f64,
    /// Wavefront ids of the two vertices born at the split point.
    pub daughters: [u32; 2],
}

/// Where an input edge ended up in the offset.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeImage {
    /// Surviving sub-edges as `(piece, ring edge index)`, ordered along the
    /// input edge direction. Usually a single entry; more after splits.
    Alive(Vec<(usize, usize)>),
    /// Collapsed into a merged vertex, given as `(piece, ring vertex index)`.
    Collapsed(usize, usize),
    /// Lost together with a vanished piece.
    Gone,
}

/// Result of a mitered offset.
#[derive(Debug, Clone)]
pub struct OffsetResult {
    pub pieces: Vec<OffsetPiece>,
    pub combinatorial_changed: bool,
    pub topological_changed: bool,
    pub collapsed_edge_runs: Vec<CollapsedRun>,
    pub split_vertices: Vec<SplitRecord>,
    /// Earliest skeleton event observed, also when past the offset distance.
    pub first_event: Option<f64>,
    /// Offset distance the result was computed at.
    pub distance: f64,
    edge_images: Vec<EdgeImage>,
    /// Resolves a wavefront vertex id to `(piece, ring index)` at the offset distance.
    id_index: HashMap<u32, (usize, usize)>,
    /// Maps merged-away wavefront ids to their surviving representative.
    merged_into: HashMap<u32, u32>,
}

impl OffsetResult {
    pub fn edge_image(&self, edge: usize) -> &EdgeImage {
        &self.edge_images[edge]
    }

    /// Follows merges to the live representative of a wavefront id.
    pub fn resolve_id(&self, mut id: u32) -> u32 {
        while let Some(&next) = self.merged_into.get(&id) {
            id = next;
        }
        id
    }

    pub fn locate_id(&self, id: u32) -> Option<(usize, usize)> {
        self.id_index.get(&self.resolve_id(id)).copied()
    }

    pub fn position_of(&self, id: u32) -> Option<Point2> {
        self.locate_id(id).map(|(p, i)| self.pieces[p].ring[i])
    }

    /// The offset vertex standing in for endpoint `v_end` (0 = tail, 1 = head)
    /// of input edge `edge`, as `(piece, ring index)`. `None` when the edge
    /// image vanished with its piece.
    pub fn edge_endpoint_image(&self, edge: usize, v_end: usize) -> Option<(usize, usize)> {
        match &self.edge_images[edge] {
            EdgeImage::Alive(subs) => {
                let &(piece, eidx) = if v_end == 0 { subs.first() } else { subs.last() }?;
                let ring_len = self.pieces[piece].ring.len();
                let vidx = if v_end == 0 { eidx } else { (eidx + 1) % ring_len };
                Some((piece, vidx))
            }
            EdgeImage::Collapsed(piece, vidx) => Some((*piece, *vidx)),
            EdgeImage::Gone => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct InputEdge {
    origin: Point2,
    dir: Vec2,
    normal: Vec2,
}

#[derive(Debug, Clone, Copy)]
enum Motion {
    Normal { vel: Vec2, reflex: bool },
    /// Incident fronts are anti-parallel; the vertex has no bisector and its
    /// loop annihilates at the creation time.
    Doomed,
}

#[derive(Debug, Clone)]
struct WfVertex {
    birth_time: f64,
    birth_pos: Point2,
    vel: Vec2,
    prev: u32,
    next: u32,
    /// Input edge indices of the incoming / outgoing wavefront edges.
    in_edge: usize,
    out_edge: usize,
    alive: bool,
    doomed: bool,
    version: u32,
    loop_id: u32,
    reflex: bool,
    /// Input vertex this wavefront vertex copies, when untouched by events.
    source_vertex: Option<usize>,
    /// Input edges collapsed into this vertex.
    collapsed: Vec<usize>,
}

impl WfVertex {
    fn pos(&self, t: f64) -> Point2 {
        self.birth_pos.add(self.vel.scale(t - self.birth_time))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum EventKind {
    /// Collapse of the edge leaving vertex `a`.
    Edge,
    /// Reflex vertex `a` hitting the moving line of input edge `line`.
    Split,
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    seq: u64,
    kind: EventKind,
    a: u32,
    a_version: u32,
    line: usize,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.seq == other.seq
    }
}
impl Eq for Event {}
impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Event {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.time.total_cmp(&other.time).then(self.seq.cmp(&other.seq))
    }
}

struct Wavefront {
    verts: Vec<WfVertex>,
    edges: Vec<InputEdge>,
    queue: BinaryHeap<Reverse<Event>>,
    seq: u64,
    tol: Tolerance,
    next_loop_id: u32,
    dead_edges: Vec<usize>,
}

impl Wavefront {
    fn vertex(&self, id: u32) -> &WfVertex {
        &self.verts[id as usize]
    }

    fn vertex_mut(&mut self, id: u32) -> &mut WfVertex {
        &mut self.verts[id as usize]
    }

    fn new(ring: &[Point2], tol: Tolerance) -> Result<Wavefront> {
        let n = ring.len();
        let mut edges = Vec::with_capacity(n);
        for i in 0..n {
            let a = ring[i];
            let b = ring[(i + 1) % n];
            let d = b.sub(a);
            if d.norm() <= tol.eps {
                return Err(Error::DegenerateGeometry(format!(
                    "zero-length edge {i} in offset input"
                )));
            }
            let dir = d.normalized();
            edges.push(InputEdge { origin: a, dir, normal: dir.left_normal() });
        }
        let mut wf = Wavefront {
            verts: Vec::with_capacity(2 * n),
            edges,
            queue: BinaryHeap::new(),
            seq: 0,
            tol,
            next_loop_id: 1,
            dead_edges: Vec::new(),
        };
        for i in 0..n {
            let in_edge = (i + n - 1) % n;
            let (vel, reflex) = match wf.vertex_motion(in_edge, i) {
                Motion::Normal { vel, reflex } => (vel, reflex),
                Motion::Doomed => {
                    return Err(Error::DegenerateGeometry(
                        "zero-angle spike in offset input".into(),
                    ))
                }
            };
            wf.verts.push(WfVertex {
                birth_time: 0.0,
                birth_pos: ring[i],
                vel,
                prev: ((i + n - 1) % n) as u32,
                next: ((i + 1) % n) as u32,
                in_edge,
                out_edge: i,
                alive: true,
                doomed: false,
                version: 0,
                loop_id: 0,
                reflex,
                source_vertex: Some(i),
                collapsed: Vec::new(),
            });
        }
        for i in 0..n as u32 {
            wf.schedule_edge_event(i, 0.0);
        }
        for i in 0..n as u32 {
            if wf.vertex(i).reflex {
                wf.schedule_split_events(i, 0.0);
            }
        }
        Ok(wf)
    }

    /// Motion of a vertex joining two input edge lines.
    fn vertex_motion(&self, in_edge: usize, out_edge: usize) -> Motion {
        let na = self.edges[in_edge].normal;
        let nb = self.edges[out_edge].normal;
        let det = na.cross(nb);
        if det.abs() < COLLINEAR_EPS {
            if na.dot(nb) < 0.0 {
                return Motion::Doomed;
            }
            // Collinear edges: the vertex rides along at front speed.
            return Motion::Normal { vel: na, reflex: false };
        }
        // Solve w . na = 1, w . nb = 1.
        let wx = (nb.y - na.y) / det;
        let wy = (na.x - nb.x) / det;
        let da = self.edges[in_edge].dir;
        let db = self.edges[out_edge].dir;
        Motion::Normal { vel: Vec2::new(wx, wy), reflex: da.cross(db) < -COLLINEAR_EPS }
    }

    fn schedule_edge_event(&mut self, u: u32, now: f64) {
        let v = self.vertex(u).next;
        if v == u || !self.vertex(u).alive {
            return;
        }
        if self.vertex(u).doomed || self.vertex(v).doomed {
            return; // resolved by annihilation, not by motion
        }
        let edge = self.vertex(u).out_edge;
        let d = self.edges[edge].dir;
        let vu = self.vertex(u);
        let vv = self.vertex(v);
        // Signed length along the edge direction is linear in time.
        let l0 = vv.birth_pos.sub(vu.birth_pos).dot(d) - vv.birth_time * vv.vel.dot(d)
            + vu.birth_time * vu.vel.dot(d);
        let dl = vv.vel.dot(d) - vu.vel.dot(d);
        if dl >= -1e-15 {
            return; // not shrinking
        }
        let t = -l0 / dl;
        if t < now - self.tol.eps {
            return;
        }
        self.seq += 1;
        self.queue.push(Reverse(Event {
            time: t.max(now),
            seq: self.seq,
            kind: EventKind::Edge,
            a: u,
            a_version: self.vertex(u).version,
            line: edge,
        }));
    }

    /// Time when moving vertex `v` reaches the moving offset line of input
    /// edge `line`.
    fn line_hit_time(&self, v: u32, line: usize) -> Option<f64> {
        let vv = self.vertex(v);
        let e = &self.edges[line];
        let wn = vv.vel.dot(e.normal);
        let denom = 1.0 - wn;
        if denom <= 1e-12 {
            return None;
        }
        let t = (vv.birth_pos.sub(e.origin).dot(e.normal) - vv.birth_time * wn) / denom;
        if t.is_finite() {
            Some(t)
        } else {
            None
        }
    }

    fn schedule_split_events(&mut self, v: u32, now: f64) {
        let (in_edge, out_edge, version) = {
            let vv = self.vertex(v);
            (vv.in_edge, vv.out_edge, vv.version)
        };
        // One candidate per distinct input line carried by the current loop.
        let mut lines = Vec::new();
        let mut cur = self.vertex(v).next;
        while cur != v {
            let e = self.vertex(cur).out_edge;
            if e != in_edge && e != out_edge && !lines.contains(&e) {
                lines.push(e);
            }
            cur = self.vertex(cur).next;
        }
        for line in lines {
            if let Some(t) = self.line_hit_time(v, line) {
                if t >= now - self.tol.eps {
                    self.seq += 1;
                    self.queue.push(Reverse(Event {
                        time: t.max(now),
                        seq: self.seq,
                        kind: EventKind::Split,
                        a: v,
                        a_version: version,
                        line,
                    }));
                }
            }
        }
    }

    fn relabel_loop(&mut self, start: u32) {
        let id = self.next_loop_id;
        self.next_loop_id += 1;
        let mut cur = start;
        loop {
            self.vertex_mut(cur).loop_id = id;
            cur = self.vertex(cur).next;
            if cur == start {
                break;
            }
        }
    }

    fn loop_vertices(&self, start: u32) -> Vec<u32> {
        let mut ids = vec![start];
        let mut cur = self.vertex(start).next;
        while cur != start {
            ids.push(cur);
            cur = self.vertex(cur).next;
        }
        ids
    }

    fn kill_loop(&mut self, start: u32) {
        for id in self.loop_vertices(start) {
            let collected: Vec<usize> = {
                let v = self.vertex(id);
                let mut e = v.collapsed.clone();
                e.push(v.out_edge);
                e
            };
            self.dead_edges.extend(collected);
            let v = self.vertex_mut(id);
            v.alive = false;
            v.version += 1;
        }
        self.dead_edges.sort_unstable();
        self.dead_edges.dedup();
    }

    /// Annihilates the loop of `start` when every member is doomed.
    fn cleanup_doomed(&mut self, start: u32) {
        if !self.vertex(start).alive {
            return;
        }
        let ids = self.loop_vertices(start);
        if ids.iter().all(|&id| self.vertex(id).doomed) {
            self.kill_loop(start);
        }
    }
}

/// Outcome of a full wavefront simulation.
struct Simulation {
    wf: Wavefront,
    first_event: Option<f64>,
    splits: Vec<SplitRecord>,
    merged_into: HashMap<u32, u32>,
}

fn simulate(ring: &[Point2], distance: f64, tol: Tolerance) -> Result<Simulation> {
    let mut wf = Wavefront::new(ring, tol)?;
    let mut first_event = None;
    let mut splits = Vec::new();
    let mut merged_into: HashMap<u32, u32> = HashMap::new();
    let mut guard = 0usize;
    let guard_max = 64 * (ring.len() + 4) * (ring.len() + 4);

    while let Some(Reverse(ev)) = wf.queue.pop() {
        if ev.time > distance {
            if event_still_valid(&wf, &ev) {
                first_event.get_or_insert(ev.time);
                break;
            }
            continue;
        }
        guard += 1;
        if guard > guard_max {
            return Err(Error::InternalInvariantViolation(
                "offset wavefront failed to converge".into(),
            ));
        }
        if !event_still_valid(&wf, &ev) {
            continue;
        }
        let changed = match ev.kind {
            EventKind::Edge => apply_edge_event(&mut wf, &ev, &mut merged_into),
            EventKind::Split => apply_split_event(&mut wf, &ev, &mut splits, &mut merged_into),
        };
        if changed {
            first_event.get_or_insert(ev.time);
        }
    }
    Ok(Simulation { wf, first_event, splits, merged_into })
}

fn event_still_valid(wf: &Wavefront, ev: &Event) -> bool {
    let a = ev.a as usize;
    if a >= wf.verts.len() {
        return false;
    }
    let va = &wf.verts[a];
    va.alive && va.version == ev.a_version
}

/// Returns true when the event actually changed the wavefront.
fn apply_edge_event(wf: &mut Wavefront, ev: &Event, merged_into: &mut HashMap<u32, u32>) -> bool {
    let u = ev.a;
    let v = wf.vertex(u).next;
    if v == u {
        return false;
    }
    let t = ev.time;
    let p_u = wf.vertex(u).pos(t);
    let p_v = wf.vertex(v).pos(t);
    let meet = p_u.lerp(p_v, 0.5);
    let collapsed_edge = wf.vertex(u).out_edge;

    // Two-vertex loop: both edges vanish and the loop dies at a point.
    if wf.vertex(v).next == u {
        wf.kill_loop(u);
        return true;
    }

    let prev = wf.vertex(u).prev;
    let next = wf.vertex(v).next;
    let in_edge = wf.vertex(u).in_edge;
    let out_edge = wf.vertex(v).out_edge;
    let motion = wf.vertex_motion(in_edge, out_edge);
    let (vel, reflex, doomed) = match motion {
        Motion::Normal { vel, reflex } => (vel, reflex, false),
        Motion::Doomed => (Vec2::new(0.0, 0.0), false, true),
    };

    let mut collapsed = wf.vertex(u).collapsed.clone();
    collapsed.extend(wf.vertex(v).collapsed.iter().copied());
    collapsed.push(collapsed_edge);
    collapsed.sort_unstable();
    collapsed.dedup();

    let loop_id = wf.vertex(u).loop_id;
    let id = wf.verts.len() as u32;
    wf.verts.push(WfVertex {
        birth_time: t,
        birth_pos: meet,
        vel,
        prev,
        next,
        in_edge,
        out_edge,
        alive: true,
        doomed,
        version: 0,
        loop_id,
        reflex,
        source_vertex: None,
        collapsed,
    });
    for dead in [u, v] {
        let w = wf.vertex_mut(dead);
        w.alive = false;
        w.version += 1;
        merged_into.insert(dead, id);
    }
    wf.vertex_mut(prev).next = id;
    wf.vertex_mut(prev).version += 1;
    wf.vertex_mut(next).prev = id;

    wf.schedule_edge_event(prev, t);
    wf.schedule_edge_event(id, t);
    if reflex {
        wf.schedule_split_events(id, t);
    }
    wf.cleanup_doomed(id);
    true
}

fn apply_split_event(
    wf: &mut Wavefront,
    ev: &Event,
    splits: &mut Vec<SplitRecord>,
    merged_into: &mut HashMap<u32, u32>,
) -> bool {
    let v = ev.a;
    if !wf.vertex(v).reflex {
        return false;
    }
    let t = ev.time;
    let hit = wf.vertex(v).pos(t);
    let line = ev.line;
    let dir = wf.edges[line].dir;
    let span_tol = wf.tol.eps * 8.0;

    // Find the wavefront edge on this input line, in the same loop, whose
    // current span contains the hit point.
    let mut bearer = None;
    let mut cur = wf.vertex(v).next;
    while cur != v {
        let c = wf.vertex(cur);
        if c.out_edge == line && c.next != v {
            let a_pos = c.pos(t);
            let b_pos = wf.vertex(c.next).pos(t);
            let s = hit.sub(a_pos).dot(dir);
            let len = b_pos.sub(a_pos).dot(dir);
            if s >= -span_tol && s <= len + span_tol {
                bearer = Some(cur);
                break;
            }
        }
        cur = wf.vertex(cur).next;
    }
    let Some(a) = bearer else { return false };
    let b = wf.vertex(a).next;
    if a == v || b == v {
        return false;
    }

    let prev_v = wf.vertex(v).prev;
    let next_v = wf.vertex(v).next;
    let v_in = wf.vertex(v).in_edge;
    let v_out = wf.vertex(v).out_edge;
    let v_source = wf.vertex(v).source_vertex;
    let v_collapsed = wf.vertex(v).collapsed.clone();

    // Daughter 1 joins the incoming side of `v` with the hit line; daughter 2
    // joins the hit line with the outgoing side.
    let m1 = wf.vertex_motion(v_in, line);
    let m2 = wf.vertex_motion(line, v_out);
    let unpack = |m: Motion| match m {
        Motion::Normal { vel, reflex } => (vel, reflex, false),
        Motion::Doomed => (Vec2::new(0.0, 0.0), false, true),
    };
    let (vel1, reflex1, doomed1) = unpack(m1);
    let (vel2, reflex2, doomed2) = unpack(m2);

    let id1 = wf.verts.len() as u32;
    let id2 = id1 + 1;
    wf.verts.push(WfVertex {
        birth_time: t,
        birth_pos: hit,
        vel: vel1,
        prev: prev_v,
        next: b,
        in_edge: v_in,
        out_edge: line,
        alive: true,
        doomed: doomed1,
        version: 0,
        loop_id: 0,
        reflex: reflex1,
        source_vertex: None,
        collapsed: v_collapsed,
    });
    wf.verts.push(WfVertex {
        birth_time: t,
        birth_pos: hit,
        vel: vel2,
        prev: a,
        next: next_v,
        in_edge: line,
        out_edge: v_out,
        alive: true,
        doomed: doomed2,
        version: 0,
        loop_id: 0,
        reflex: reflex2,
        source_vertex: None,
        collapsed: Vec::new(),
    });

    {
        let w = wf.vertex_mut(v);
        w.alive = false;
        w.version += 1;
    }
    merged_into.insert(v, id1);
    wf.vertex_mut(prev_v).next = id1;
    wf.vertex_mut(prev_v).version += 1;
    wf.vertex_mut(b).prev = id1;
    wf.vertex_mut(a).next = id2;
    wf.vertex_mut(a).version += 1;
    wf.vertex_mut(next_v).prev = id2;

    wf.relabel_loop(id1);
    wf.relabel_loop(id2);

    wf.schedule_edge_event(prev_v, t);
    wf.schedule_edge_event(id1, t);
    wf.schedule_edge_event(a, t);
    wf.schedule_edge_event(id2, t);
    // Loop membership changed; refresh split candidates for reflex vertices
    // of both loops.
    for start in [id1, id2] {
        if !wf.vertex(start).alive {
            continue;
        }
        for id in wf.loop_vertices(start) {
            if wf.vertex(id).reflex {
                wf.schedule_split_events(id, t);
            }
        }
    }

    splits.push(SplitRecord {
        source_vertex: v_source,
        split_edge: line,
        at: hit,
        time: t,
        daughters: [id1, id2],
    });

    wf.cleanup_doomed(id1);
    if wf.vertex(id2).alive {
        wf.cleanup_doomed(id2);
    }
    true
}

/// Earliest straight-skeleton event of a ring under leftward propagation,
/// or `None` when the wavefront never meets itself (possible for growing
/// fronts).
pub fn first_skeleton_event(ring: &[Point2]) -> Result<Option<f64>> {
    let tol = Tolerance::for_points(ring.iter());
    let sim = simulate(ring, f64::INFINITY, tol)?;
    Ok(sim.first_event)
}

/// Mitered offset of `polygon` by distance `d`, to the left of the ring
/// direction (inward for a counterclockwise ring).
pub fn mitered_offset(polygon: &Polygon, d: f64) -> Result<OffsetResult> {
    let ring = &polygon.ring;
    if ring.len() < 3 {
        return Err(Error::DegenerateGeometry("offset input needs at least 3 vertices".into()));
    }
    if !(d >= 0.0) || !d.is_finite() {
        return Err(Error::DegenerateGeometry(format!(
            "offset distance {d} must be finite and >= 0"
        )));
    }
    let tol = Tolerance::for_points(ring.iter());
    let mut sim = simulate(ring, d, tol)?;

    // Doomed vertices that survive to the output mark an unresolved
    // annihilation; their loops are geometrically degenerate by then.
    let doomed_alive: Vec<u32> = (0..sim.wf.verts.len() as u32)
        .filter(|&i| sim.wf.vertex(i).alive && sim.wf.vertex(i).doomed)
        .collect();
    for id in doomed_alive {
        if sim.wf.vertex(id).alive {
            sim.wf.kill_loop(id);
        }
    }
    let wf = &sim.wf;

    // Collect surviving loops in deterministic order (by smallest vertex id).
    let mut seen = vec![false; wf.verts.len()];
    let mut pieces: Vec<OffsetPiece> = Vec::new();
    let mut id_index: HashMap<u32, (usize, usize)> = HashMap::new();
    for start in 0..wf.verts.len() as u32 {
        if !wf.vertex(start).alive || seen[start as usize] {
            continue;
        }
        let mut ring_pts = Vec::new();
        let mut ids = Vec::new();
        let mut srcs = Vec::new();
        let mut cur = start;
        loop {
            seen[cur as usize] = true;
            let v = wf.vertex(cur);
            ring_pts.push(v.pos(d));
            ids.push(cur);
            srcs.push(v.out_edge);
            cur = v.next;
            if cur == start {
                break;
            }
        }
        let piece_idx = pieces.len();
        for (i, &id) in ids.iter().enumerate() {
            id_index.insert(id, (piece_idx, i));
        }
        pieces.push(OffsetPiece { ring: ring_pts, vertex_ids: ids, source_edges: srcs });
    }

    // Per input edge: surviving sub-edges, a collapse vertex, or gone.
    let n = ring.len();
    let mut edge_images: Vec<EdgeImage> = Vec::with_capacity(n);
    let resolve = |mut id: u32| {
        while let Some(&nx) = sim.merged_into.get(&id) {
            id = nx;
        }
        id
    };
    for e in 0..n {
        let mut subs: Vec<(usize, usize)> = Vec::new();
        for (pi, piece) in pieces.iter().enumerate() {
            for (ei, &src) in piece.source_edges.iter().enumerate() {
                if src == e {
                    subs.push((pi, ei));
                }
            }
        }
        if !subs.is_empty() {
            let dir = wf.edges[e].dir;
            subs.sort_by(|&(pa, ea), &(pb, eb)| {
                let sa = pieces[pa].ring[ea].sub(ring[0]).dot(dir);
                let sb = pieces[pb].ring[eb].sub(ring[0]).dot(dir);
                sa.total_cmp(&sb)
            });
            edge_images.push(EdgeImage::Alive(subs));
            continue;
        }
        // Collapsed: find the live vertex whose collapsed set contains e.
        let holder = wf
            .verts
            .iter()
            .enumerate()
            .filter(|(_, v)| v.alive)
            .find(|(_, v)| v.collapsed.contains(&e))
            .map(|(i, _)| i as u32);
        match holder {
            Some(id) => match id_index.get(&resolve(id)) {
                Some(&(p, i)) => edge_images.push(EdgeImage::Collapsed(p, i)),
                None => edge_images.push(EdgeImage::Gone),
            },
            None => edge_images.push(EdgeImage::Gone),
        }
    }

    // Collapse runs from live vertices with nonempty collapsed sets.
    let mut collapsed_edge_runs = Vec::new();
    for (i, v) in wf.verts.iter().enumerate() {
        if v.alive && !v.collapsed.is_empty() {
            let position = id_index.get(&(i as u32)).map(|&(p, j)| pieces[p].ring[j]);
            collapsed_edge_runs.push(CollapsedRun {
                source_edges: v.collapsed.clone(),
                vertex_id: i as u32,
                position,
            });
        }
    }
    collapsed_edge_runs.sort_by_key(|r| r.source_edges.clone());

    let combinatorial_changed = !collapsed_edge_runs.is_empty() || !wf.dead_edges.is_empty();
    let topological_changed = pieces.len() != 1;

    Ok(OffsetResult {
        pieces,
        combinatorial_changed,
        topological_changed,
        collapsed_edge_runs,
        split_vertices: sim.splits,
        first_event: sim.first_event,
        distance: d,
        edge_images,
        id_index,
        merged_into: sim.merged_into,
    })
}
