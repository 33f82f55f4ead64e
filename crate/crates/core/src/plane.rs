//! Exact piecewise-linear geometry of immersed curves in the plane.
//!
//! Coordinates are arbitrary-precision rationals and every predicate is
//! exact; non-generic input (tangencies, endpoint touches, collinear
//! overlaps, triple points) is rejected with an error, never perturbed.
//! Provided here: Whitney turning numbers, transverse self- and pairwise
//! intersections with signs, full planar arrangements with signed face
//! areas and per-curve winding depths, and embedded-bigon enumeration
//! between two curves.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaneError {
    /// Zero-length edges, spikes, too few vertices.
    Degenerate(String),
    /// Tangency, endpoint touch, collinear overlap, or triple point.
    /// Carries a human-readable locus; inputs are never perturbed.
    NonGeneric(String),
    /// Operation needs a closed (or open) curve and got the other kind.
    WrongKind(String),
}

impl fmt::Display for PlaneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneError::Degenerate(m) => write!(f, "degenerate curve: {}", m),
            PlaneError::NonGeneric(m) => write!(f, "non-generic position: {}", m),
            PlaneError::WrongKind(m) => write!(f, "wrong curve kind: {}", m),
        }
    }
}

impl std::error::Error for PlaneError {}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pt {
    pub x: Q,
    pub y: Q,
}

impl Pt {
    pub fn new(x: Q, y: Q) -> Pt {
        Pt { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Pt {
        Pt::new(q(x), q(y))
    }

    fn sub(&self, other: &Pt) -> (Q, Q) {
        (&self.x - &other.x, &self.y - &other.y)
    }
}

fn cross(a: &(Q, Q), b: &(Q, Q)) -> Q {
    &(&a.0 * &b.1) - &(&a.1 * &b.0)
}

fn dot(a: &(Q, Q), b: &(Q, Q)) -> Q {
    &(&a.0 * &b.0) + &(&a.1 * &b.1)
}

/// A piecewise-linear curve: closed (cyclic vertex list) or open.
/// Construction normalizes away repeated vertices and straight-through
/// interior vertices, and rejects exact reversals (spikes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyline {
    pts: Vec<Pt>,
    closed: bool,
}

impl Polyline {
    pub fn closed(pts: Vec<Pt>) -> Result<Polyline, PlaneError> {
        Polyline::build(pts, true)
    }

    pub fn open(pts: Vec<Pt>) -> Result<Polyline, PlaneError> {
        Polyline::build(pts, false)
    }

    fn build(mut pts: Vec<Pt>, closed: bool) -> Result<Polyline, PlaneError> {
        // drop exact consecutive duplicates (cyclically for closed curves)
        pts.dedup();
        if closed {
            while pts.len() > 1 && pts.first() == pts.last() {
                pts.pop();
            }
        }
        if pts.len() < 2 || (closed && pts.len() < 3) {
            return Err(PlaneError::Degenerate(format!(
                "{} distinct vertices is too few",
                pts.len()
            )));
        }
        // drop straight-through vertices; reject spikes
        loop {
            let n = pts.len();
            let mut drop_idx: Option<usize> = None;
            let idx_range: Vec<usize> = if closed {
                (0..n).collect()
            } else {
                (1..n.saturating_sub(1)).collect()
            };
            for i in idx_range {
                let prev = &pts[(i + n - 1) % n];
                let here = &pts[i];
                let next = &pts[(i + 1) % n];
                let d1 = here.sub(prev);
                let d2 = next.sub(here);
                if cross(&d1, &d2).is_zero() {
                    if dot(&d1, &d2).is_positive() {
                        drop_idx = Some(i);
                        break;
                    }
                    return Err(PlaneError::Degenerate(format!(
                        "spike (exact reversal) at vertex ({}, {})",
                        here.x, here.y
                    )));
                }
            }
            match drop_idx {
                Some(i) => {
                    pts.remove(i);
                    if pts.len() < 2 || (closed && pts.len() < 3) {
                        return Err(PlaneError::Degenerate(
                            "curve collapses under normalization".to_string(),
                        ));
                    }
                }
                None => break,
            }
        }
        Ok(Polyline { pts, closed })
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn points(&self) -> &[Pt] {
        &self.pts
    }

    pub fn n_edges(&self) -> usize {
        if self.closed {
            self.pts.len()
        } else {
            self.pts.len() - 1
        }
    }

    /// Edge i as (start, end).
    pub fn edge(&self, i: usize) -> (&Pt, &Pt) {
        let n = self.pts.len();
        (&self.pts[i], &self.pts[(i + 1) % n])
    }

    fn direction(&self, i: usize) -> (Q, Q) {
        let (a, b) = self.edge(i);
        b.sub(a)
    }

    /// Orientation reversal. Closed curves keep their basepoint (first
    /// vertex) so that visit order genuinely swaps at every self-crossing.
    pub fn reversed(&self) -> Polyline {
        let mut pts = self.pts.clone();
        if self.closed {
            pts[1..].reverse();
        } else {
            pts.reverse();
        }
        Polyline {
            pts,
            closed: self.closed,
        }
    }

    /// Signed area integral ∮ x dy of the (possibly self-crossing) curve:
    /// equals Σ area·winding over the arrangement faces.
    pub fn shoelace(&self) -> Q {
        let n = self.pts.len();
        let upper = if self.closed { n } else { n - 1 };
        let mut acc = Q::zero();
        for i in 0..upper {
            let a = &self.pts[i];
            let b = &self.pts[(i + 1) % n];
            acc += &(&a.x * &b.y) - &(&a.y * &b.x);
        }
        acc / q(2)
    }

    /// Apply an exact affine map (rational rotation/scaling + translation).
    pub fn transformed(&self, m: &[[Q; 2]; 2], shift: &Pt) -> Polyline {
        let pts = self
            .pts
            .iter()
            .map(|p| {
                Pt::new(
                    &(&m[0][0] * &p.x) + &(&m[0][1] * &p.y) + &shift.x,
                    &(&m[1][0] * &p.x) + &(&m[1][1] * &p.y) + &shift.y,
                )
            })
            .collect();
        Polyline {
            pts,
            closed: self.closed,
        }
    }
}

/// Whitney turning number of a closed curve: the winding of its direction
/// vector, computed as an exact signed count of passes through a reference
/// direction chosen unparallel to every edge.
pub fn turning_number(curve: &Polyline) -> Result<i64, PlaneError> {
    if !curve.is_closed() {
        return Err(PlaneError::WrongKind(
            "turning number needs a closed curve".to_string(),
        ));
    }
    let n = curve.n_edges();
    let dirs: Vec<(Q, Q)> = (0..n).map(|i| curve.direction(i)).collect();
    // pick u = (1, k) missing all edge slopes
    let mut u = (q(1), q(0));
    'outer: for k in 0i64.. {
        for cand in [(q(1), q(k)), (q(1), q(-k))] {
            if dirs.iter().all(|d| !cross(&cand, d).is_zero()) {
                u = cand;
                break 'outer;
            }
        }
    }
    let mut total = 0i64;
    for i in 0..n {
        let d1 = &dirs[i];
        let d2 = &dirs[(i + 1) % n];
        let s = cross(d1, d2);
        // normalization guarantees s != 0
        if s.is_positive() {
            if cross(d1, &u).is_positive() && cross(&u, d2).is_positive() {
                total += 1;
            }
        } else if cross(d1, &u).is_negative() && cross(&u, d2).is_negative() {
            total -= 1;
        }
    }
    Ok(total)
}

/// Position of a crossing along one curve: edge index plus exact parameter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArcPos {
    pub curve: usize,
    pub edge: usize,
    pub t: Q,
}

/// A transverse double point between two branches. `first` is the branch
/// encountered earlier (lower curve index, then earlier position); the sign
/// is the orientation sign of (first direction, second direction).
#[derive(Debug, Clone)]
pub struct Crossing {
    pub point: Pt,
    pub first: ArcPos,
    pub second: ArcPos,
    pub sign: i8,
}

enum SegHit {
    None,
    Proper { t: Q, u: Q, point: Pt },
    Touch(String),
}

fn seg_intersect(p1: &Pt, p2: &Pt, q1: &Pt, q2: &Pt) -> SegHit {
    let d1 = p2.sub(p1);
    let d2 = q2.sub(q1);
    let denom = cross(&d1, &d2);
    let w = q1.sub(p1);
    if denom.is_zero() {
        if !cross(&w, &d1).is_zero() {
            return SegHit::None; // parallel, distinct lines
        }
        // collinear: compare parameter intervals along d1
        let len2 = dot(&d1, &d1);
        let t0 = dot(&w, &d1) / &len2;
        let t1 = &t0 + &(dot(&d2, &d1) / &len2);
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        if hi < Q::zero() || lo > Q::one() {
            return SegHit::None;
        }
        return SegHit::Touch(format!(
            "collinear overlap near ({}, {})",
            q1.x, q1.y
        ));
    }
    let t = &cross(&w, &d2) / &denom;
    let u = &cross(&w, &d1) / &denom;
    if t < Q::zero() || t > Q::one() || u < Q::zero() || u > Q::one() {
        return SegHit::None;
    }
    let strict = |v: &Q| v > &Q::zero() && v < &Q::one();
    if strict(&t) && strict(&u) {
        let point = Pt::new(&p1.x + &(&t * &d1.0), &p1.y + &(&t * &d1.1));
        return SegHit::Proper { t, u, point };
    }
    SegHit::Touch(format!(
        "endpoint touch near ({}, {})",
        &p1.x + &(&t * &d1.0),
        &p1.y + &(&t * &d1.1)
    ))
}

/// Conservative integer bounding box of one edge: floors below, ceilings
/// above, saturating on overflow so a degenerate box never rules a pair
/// out. Two edges whose boxes are strictly disjoint cannot meet, so the
/// exact predicate only runs on the survivors.
fn edge_box(p: &Pt, q: &Pt) -> (i64, i64, i64, i64) {
    use num_traits::ToPrimitive;
    let lo = |a: &Q, b: &Q| {
        let m = if a <= b { a } else { b };
        m.floor().to_integer().to_i64().unwrap_or(i64::MIN)
    };
    let hi = |a: &Q, b: &Q| {
        let m = if a >= b { a } else { b };
        m.ceil().to_integer().to_i64().unwrap_or(i64::MAX)
    };
    (lo(&p.x, &q.x), hi(&p.x, &q.x), lo(&p.y, &q.y), hi(&p.y, &q.y))
}

fn boxes_disjoint(a: &(i64, i64, i64, i64), b: &(i64, i64, i64, i64)) -> bool {
    a.1 < b.0 || b.1 < a.0 || a.3 < b.2 || b.3 < a.2
}

fn adjacent_edges(curve: &Polyline, i: usize, j: usize) -> bool {
    let n = curve.n_edges();
    if i == j {
        return true;
    }
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    if b == a + 1 {
        return true;
    }
    curve.is_closed() && a == 0 && b == n - 1
}

/// All transverse crossings among the listed curves (self-crossings and
/// pairwise ones), with a global triple-point check. Errors on any
/// non-generic contact.
pub fn all_crossings(curves: &[&Polyline]) -> Result<Vec<Crossing>, PlaneError> {
    let boxes: Vec<Vec<(i64, i64, i64, i64)>> = curves
        .iter()
        .map(|c| {
            (0..c.n_edges())
                .map(|e| {
                    let (p, q) = c.edge(e);
                    edge_box(p, q)
                })
                .collect()
        })
        .collect();
    let mut out: Vec<Crossing> = Vec::new();
    for (ci, c1) in curves.iter().enumerate() {
        for (cj, c2) in curves.iter().enumerate().skip(ci) {
            for e1 in 0..c1.n_edges() {
                let e2_start = if ci == cj { e1 } else { 0 };
                for e2 in e2_start..c2.n_edges() {
                    if ci == cj && adjacent_edges(c1, e1, e2) {
                        continue;
                    }
                    if boxes_disjoint(&boxes[ci][e1], &boxes[cj][e2]) {
                        continue;
                    }
                    let (p1, p2) = c1.edge(e1);
                    let (q1, q2) = c2.edge(e2);
                    match seg_intersect(p1, p2, q1, q2) {
                        SegHit::None => {}
                        SegHit::Touch(msg) => {
                            return Err(PlaneError::NonGeneric(format!(
                                "curves {} and {}, edges {} and {}: {}",
                                ci, cj, e1, e2, msg
                            )))
                        }
                        SegHit::Proper { t, u, point } => {
                            let a = ArcPos {
                                curve: ci,
                                edge: e1,
                                t,
                            };
                            let b = ArcPos {
                                curve: cj,
                                edge: e2,
                                t: u,
                            };
                            let (first, second) = if (a.curve, a.edge, a.t.clone())
                                <= (b.curve, b.edge, b.t.clone())
                            {
                                (a, b)
                            } else {
                                (b, a)
                            };
                            let df = curves[first.curve].direction(first.edge);
                            let ds = curves[second.curve].direction(second.edge);
                            let s = cross(&df, &ds);
                            let sign = if s.is_positive() { 1 } else { -1 };
                            out.push(Crossing {
                                point,
                                first,
                                second,
                                sign,
                            });
                        }
                    }
                }
            }
        }
    }
    // triple points: all crossing points must be pairwise distinct
    let mut seen: BTreeMap<Pt, usize> = BTreeMap::new();
    for c in &out {
        if let Some(_) = seen.insert(c.point.clone(), 1) {
            return Err(PlaneError::NonGeneric(format!(
                "triple point at ({}, {})",
                c.point.x, c.point.y
            )));
        }
    }
    // crossing points must also avoid original vertices (vertex-on-edge was
    // caught as a touch; equal points here would mean a vertex crossing)
    for (ci, c) in curves.iter().enumerate() {
        for p in c.points() {
            if seen.contains_key(p) {
                return Err(PlaneError::NonGeneric(format!(
                    "crossing through vertex of curve {} at ({}, {})",
                    ci, p.x, p.y
                )));
            }
        }
    }
    out.sort_by(|a, b| {
        (&a.first, &a.second)
            .cmp(&(&b.first, &b.second))
    });
    Ok(out)
}

/// Self-intersections of one curve; the count is the h used by the crossing
/// formulas downstream.
pub fn self_intersections(curve: &Polyline) -> Result<Vec<Crossing>, PlaneError> {
    all_crossings(&[curve])
}

/// Crossings between two curves only (their self-crossings are checked for
/// genericity but not returned).
pub fn curve_intersections(a: &Polyline, b: &Polyline) -> Result<Vec<Crossing>, PlaneError> {
    let all = all_crossings(&[a, b])?;
    Ok(all
        .into_iter()
        .filter(|c| c.first.curve != c.second.curve)
        .collect())
}

/// Exact winding number of a polygon (given as vertex cycle) around a point
/// not on its boundary.
pub fn winding_number(poly: &[Pt], p: &Pt) -> i64 {
    let n = poly.len();
    let mut wn = 0i64;
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        let d = b.sub(a);
        let w = p.sub(a);
        let side = cross(&d, &w);
        if a.y <= p.y && p.y < b.y && side.is_positive() {
            wn += 1;
        } else if b.y <= p.y && p.y < a.y && side.is_negative() {
            wn -= 1;
        }
    }
    wn
}

/// One face of an arrangement: exact area and winding depth per input curve.
/// Face 0 is always the unbounded face (area reported as 0).
#[derive(Debug, Clone)]
pub struct Face {
    pub id: usize,
    pub bounded: bool,
    pub area: Q,
    pub winding: Vec<i64>,
}

#[derive(Debug, Clone)]
struct HalfEdge {
    from: usize,
    to: usize,
    /// input curve this half-edge runs along
    curve: usize,
    /// true when it points along the curve's own orientation
    forward: bool,
    /// position interval along the curve, for arc queries
    span: (ArcPos, ArcPos),
}

/// Planar subdivision induced by a family of curves, with face areas,
/// winding depths, and the crossing list. Also answers embedded-bigon
/// queries between two of its curves.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub faces: Vec<Face>,
    pub crossings: Vec<Crossing>,
    n_curves: usize,
    nodes: Vec<Pt>,
    half: Vec<HalfEdge>,
    cycle_of: Vec<usize>,
    face_of_cycle: Vec<usize>,
    closed_flags: Vec<bool>,
    shoelaces: Vec<Q>,
}

fn twin(h: usize) -> usize {
    h ^ 1
}

/// Compare directions counterclockwise starting just above the positive
/// x-axis. Total order on nonzero directions up to positive scaling.
fn dir_order(a: &(Q, Q), b: &(Q, Q)) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let half = |d: &(Q, Q)| -> u8 {
        if d.1.is_positive() || (d.1.is_zero() && d.0.is_positive()) {
            0
        } else {
            1
        }
    };
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    let c = cross(a, b);
    if c.is_positive() {
        Ordering::Less
    } else if c.is_negative() {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

pub fn arrangement(curves: &[&Polyline]) -> Result<Arrangement, PlaneError> {
    let crossings = all_crossings(curves)?;
    // split points per (curve, edge): parameter t plus node identity
    let mut node_ids: BTreeMap<Pt, usize> = BTreeMap::new();
    let mut nodes: Vec<Pt> = Vec::new();
    let intern = |p: &Pt, nodes: &mut Vec<Pt>, node_ids: &mut BTreeMap<Pt, usize>| -> usize {
        if let Some(&id) = node_ids.get(p) {
            return id;
        }
        let id = nodes.len();
        nodes.push(p.clone());
        node_ids.insert(p.clone(), id);
        id
    };
    let mut splits: BTreeMap<(usize, usize), Vec<(Q, usize)>> = BTreeMap::new();
    for c in &crossings {
        let node = intern(&c.point, &mut nodes, &mut node_ids);
        for pos in [&c.first, &c.second] {
            splits
                .entry((pos.curve, pos.edge))
                .or_default()
                .push((pos.t.clone(), node));
        }
    }
    // half-edges: 2h and 2h+1 are twins; even ones run forward along curves
    let mut half: Vec<HalfEdge> = Vec::new();
    for (ci, curve) in curves.iter().enumerate() {
        for e in 0..curve.n_edges() {
            let (a, b) = curve.edge(e);
            let na = intern(a, &mut nodes, &mut node_ids);
            let nb = intern(b, &mut nodes, &mut node_ids);
            let mut cuts: Vec<(Q, usize)> = vec![(Q::zero(), na)];
            if let Some(list) = splits.get(&(ci, e)) {
                let mut list = list.clone();
                list.sort_by(|x, y| x.0.cmp(&y.0));
                cuts.extend(list);
            }
            cuts.push((Q::one(), nb));
            for w in cuts.windows(2) {
                let (t0, n0) = (&w[0].0, w[0].1);
                let (t1, n1) = (&w[1].0, w[1].1);
                let span = (
                    ArcPos {
                        curve: ci,
                        edge: e,
                        t: t0.clone(),
                    },
                    ArcPos {
                        curve: ci,
                        edge: e,
                        t: t1.clone(),
                    },
                );
                half.push(HalfEdge {
                    from: n0,
                    to: n1,
                    curve: ci,
                    forward: true,
                    span: span.clone(),
                });
                half.push(HalfEdge {
                    from: n1,
                    to: n0,
                    curve: ci,
                    forward: false,
                    span,
                });
            }
        }
    }
    // rotation order at each node
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (h, he) in half.iter().enumerate() {
        outgoing[he.from].push(h);
    }
    for (v, list) in outgoing.iter_mut().enumerate() {
        let origin = nodes[v].clone();
        list.sort_by(|&h1, &h2| {
            let d1 = nodes[half[h1].to].sub(&origin);
            let d2 = nodes[half[h2].to].sub(&origin);
            dir_order(&d1, &d2)
        });
    }
    // next(h): predecessor of twin(h) in the rotation at its head
    let mut next = vec![usize::MAX; half.len()];
    for h in 0..half.len() {
        let v = half[h].to;
        let list = &outgoing[v];
        let pos = list
            .iter()
            .position(|&x| x == twin(h))
            .expect("twin present in rotation");
        let prev = list[(pos + list.len() - 1) % list.len()];
        next[h] = prev;
    }
    // trace boundary cycles
    let mut cycle_of = vec![usize::MAX; half.len()];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for h0 in 0..half.len() {
        if cycle_of[h0] != usize::MAX {
            continue;
        }
        let cid = cycles.len();
        let mut cyc = Vec::new();
        let mut h = h0;
        loop {
            cycle_of[h] = cid;
            cyc.push(h);
            h = next[h];
            if h == h0 {
                break;
            }
        }
        cycles.push(cyc);
    }
    // signed area of each cycle
    let cycle_area: Vec<Q> = cycles
        .iter()
        .map(|cyc| {
            let mut acc = Q::zero();
            for &h in cyc {
                let a = &nodes[half[h].from];
                let b = &nodes[half[h].to];
                acc += &(&a.x * &b.y) - &(&a.y * &b.x);
            }
            acc / q(2)
        })
        .collect();
    // positive cycles carry faces; negative cycles are outer contours that
    // punch holes into the innermost positive cycle containing them
    let mut face_of_cycle = vec![usize::MAX; cycles.len()];
    let mut faces: Vec<Face> = vec![Face {
        id: 0,
        bounded: false,
        area: Q::zero(),
        winding: vec![0; curves.len()],
    }];
    let mut cycle_polys: Vec<Vec<Pt>> = Vec::new();
    for cyc in &cycles {
        cycle_polys.push(cyc.iter().map(|&h| nodes[half[h].from].clone()).collect());
    }
    // connected components of the union, to keep a contour from testing
    // against its own component's cycles
    let mut comp = vec![usize::MAX; nodes.len()];
    {
        let mut cid = 0;
        for start in 0..nodes.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = cid;
            while let Some(v) = stack.pop() {
                for &h in &outgoing[v] {
                    let w = half[h].to;
                    if comp[w] == usize::MAX {
                        comp[w] = cid;
                        stack.push(w);
                    }
                }
            }
            cid += 1;
        }
    }
    let cycle_comp: Vec<usize> = cycles.iter().map(|cyc| comp[half[cyc[0]].from]).collect();
    for (cid, area) in cycle_area.iter().enumerate() {
        if area.is_positive() {
            let fid = faces.len();
            face_of_cycle[cid] = fid;
            faces.push(Face {
                id: fid,
                bounded: true,
                area: area.clone(),
                winding: vec![0; curves.len()],
            });
        }
    }
    for (cid, area) in cycle_area.iter().enumerate() {
        if area.is_positive() {
            continue;
        }
        // representative node of this contour
        let rep = &nodes[half[cycles[cid][0]].from];
        let mut best: Option<(Q, usize)> = None;
        for (pid, parea) in cycle_area.iter().enumerate() {
            if !parea.is_positive() || cycle_comp[pid] == cycle_comp[cid] {
                continue;
            }
            if winding_number(&cycle_polys[pid], rep) != 0 {
                match &best {
                    Some((a, _)) if parea >= a => {}
                    _ => best = Some((parea.clone(), pid)),
                }
            }
        }
        match best {
            Some((_, pid)) => {
                let fid = face_of_cycle[pid];
                face_of_cycle[cid] = fid;
                let hole = cycle_area[cid].clone();
                faces[fid].area += hole; // negative: subtracts the hole
            }
            None => {
                face_of_cycle[cid] = 0; // unbounded face
            }
        }
    }
    // winding depths by breadth-first search from the unbounded face; only
    // closed curves separate the plane, open arcs contribute no depth
    let closed_flags: Vec<bool> = curves.iter().map(|c| c.is_closed()).collect();
    let nf = faces.len();
    let mut assigned = vec![false; nf];
    assigned[0] = true;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(0usize);
    while let Some(f) = queue.pop_front() {
        for h in 0..half.len() {
            let fl = face_of_cycle[cycle_of[h]];
            let fr = face_of_cycle[cycle_of[twin(h)]];
            if fr != f && fl != f {
                continue;
            }
            // crossing h from its right face to its left face adds +1 to the
            // winding of h's curve when h is forward, −1 otherwise
            let delta: i64 = if !closed_flags[half[h].curve] {
                0
            } else if half[h].forward {
                1
            } else {
                -1
            };
            let (known, other, step) = if fr == f { (fr, fl, delta) } else { (fl, fr, -delta) };
            let _ = known;
            if !assigned[other] {
                let mut w = faces[f].winding.clone();
                w[half[h].curve] += step;
                faces[other].winding = w;
                assigned[other] = true;
                queue.push_back(other);
            } else {
                // consistency: redundant constraints must agree
                let mut w = faces[f].winding.clone();
                w[half[h].curve] += step;
                assert_eq!(
                    w, faces[other].winding,
                    "inconsistent winding assignment; arrangement bug"
                );
            }
        }
    }
    assert!(assigned.iter().all(|&a| a), "disconnected face graph");
    let shoelaces = curves.iter().map(|c| c.shoelace()).collect();
    Ok(Arrangement {
        faces,
        crossings,
        n_curves: curves.len(),
        nodes,
        half,
        cycle_of,
        face_of_cycle,
        closed_flags,
        shoelaces,
    })
}

/// Same subdivision, restricted to the signature used by reports.
pub fn face_areas(loops: &[&Polyline]) -> Result<Arrangement, PlaneError> {
    arrangement(loops)
}

/// One candidate bigon between two curves: the pair of boundary arcs with a
/// verdict. Rejections carry the reason so certificates can list them.
#[derive(Debug, Clone)]
pub struct BigonCandidate {
    /// travel direction along the first curve from x to y: +1 with the
    /// curve's orientation, −1 against it
    pub arc1_dir: i8,
    /// travel direction along the second curve from y back to x
    pub arc2_dir: i8,
    pub verdict: BigonVerdict,
}

#[derive(Debug, Clone)]
pub enum BigonVerdict {
    Embedded(Bigon),
    /// boundary fails to be a simple closed curve (the listed crossing
    /// breaks it)
    NotSimple(String),
    /// corner angle at an endpoint opens beyond a half-plane
    ReflexCorner(String),
}

#[derive(Debug, Clone)]
pub struct Bigon {
    /// +1 when the boundary (arc1 then reversed arc2) runs counterclockwise
    pub orientation: i8,
    pub boundary: Vec<Pt>,
    pub area: Q,
    /// bounded faces of the arrangement covered by the bigon
    pub faces: Vec<usize>,
}

impl Arrangement {
    pub fn n_curves(&self) -> usize {
        self.n_curves
    }

    /// Green's identity: Σ area·winding per curve equals its shoelace
    /// integral. True by construction; exposed for the test suite.
    pub fn green_identity_holds(&self) -> bool {
        for k in 0..self.n_curves {
            if !self.closed_flags[k] {
                continue;
            }
            let mut acc = Q::zero();
            for f in &self.faces {
                if f.bounded {
                    acc += &f.area * q(f.winding[k]);
                }
            }
            if acc != self.shoelaces[k] {
                return false;
            }
        }
        true
    }

    pub fn crossings_between(&self, ci: usize, cj: usize) -> Vec<&Crossing> {
        self.crossings
            .iter()
            .filter(|c| {
                (c.first.curve == ci && c.second.curve == cj)
                    || (c.first.curve == cj && c.second.curve == ci)
            })
            .collect()
    }

    fn pos_of<'a>(&self, c: &'a Crossing, curve: usize) -> &'a ArcPos {
        if c.first.curve == curve {
            &c.first
        } else {
            &c.second
        }
    }

    /// Half-edges of `curve` forming the arc from position `a` to position
    /// `b`, traveling in direction `dir` (+1 with the curve's orientation).
    /// Returns directed half-edge ids in traversal order.
    fn arc_halfedges(&self, curve: usize, a: &ArcPos, b: &ArcPos, dir: i8) -> Vec<usize> {
        // this curve's forward half-edges in curve order
        let mut segs: Vec<(usize, (ArcPos, ArcPos))> = self
            .half
            .iter()
            .enumerate()
            .filter(|(h, he)| he.curve == curve && he.forward && h % 2 == 0)
            .map(|(h, he)| (h, he.span.clone()))
            .collect();
        segs.sort_by(|x, y| (x.1 .0.edge, x.1 .0.t.clone()).cmp(&(y.1 .0.edge, y.1 .0.t.clone())));
        let key = |p: &ArcPos| (p.edge, p.t.clone());
        let n = segs.len();
        let mut out = Vec::new();
        if dir > 0 {
            let mut i = segs
                .iter()
                .position(|(_, span)| key(&span.0) == key(a))
                .expect("forward arc start");
            loop {
                let (h, span) = &segs[i];
                out.push(*h);
                if key(&span.1) == key(b) {
                    break;
                }
                i = (i + 1) % n;
                assert!(out.len() <= n, "arc failed to close");
            }
        } else {
            let mut i = segs
                .iter()
                .position(|(_, span)| key(&span.1) == key(a))
                .expect("backward arc start");
            loop {
                let (h, span) = &segs[i];
                out.push(twin(*h));
                if key(&span.0) == key(b) {
                    break;
                }
                i = (i + n - 1) % n;
                assert!(out.len() <= n, "arc failed to close");
            }
        }
        out
    }

    /// Travel directions along `curve` that connect position `from` to
    /// position `to`: both on a closed curve, exactly one on an open one.
    fn connecting_dirs(&self, curve: usize, from: &ArcPos, to: &ArcPos) -> Vec<i8> {
        if self.closed_flags[curve] {
            vec![1, -1]
        } else {
            let key = |p: &ArcPos| (p.edge, p.t.clone());
            if key(from) <= key(to) {
                vec![1]
            } else {
                vec![-1]
            }
        }
    }

    /// All bigon candidates between crossings x and y of curves ci and cj:
    /// up to four on closed curves, fewer when a curve is open.
    pub fn bigon_candidates(
        &self,
        ci: usize,
        cj: usize,
        x: &Crossing,
        y: &Crossing,
    ) -> Vec<BigonCandidate> {
        let xa = self.pos_of(x, ci).clone();
        let ya = self.pos_of(y, ci).clone();
        let xb = self.pos_of(x, cj).clone();
        let yb = self.pos_of(y, cj).clone();
        let mut out = Vec::new();
        for &d1 in &self.connecting_dirs(ci, &xa, &ya) {
            for &d2 in &self.connecting_dirs(cj, &yb, &xb) {
                out.push(self.try_bigon(ci, cj, (&xa, &ya), (&yb, &xb), d1, d2));
            }
        }
        out
    }

    fn try_bigon(
        &self,
        ci: usize,
        cj: usize,
        arc1: (&ArcPos, &ArcPos),
        arc2: (&ArcPos, &ArcPos),
        d1: i8,
        d2: i8,
    ) -> BigonCandidate {
        let reject = |verdict| BigonCandidate {
            arc1_dir: d1,
            arc2_dir: d2,
            verdict,
        };
        // simplicity against the global crossing list: no crossing may meet
        // the chosen boundary arcs in two interior branches
        let a1 = (arc1.0.clone(), arc1.1.clone(), d1);
        let a2 = (arc2.0.clone(), arc2.1.clone(), d2);
        for c in &self.crossings {
            let on1 = self.interior_to_arc(&c.first, ci, &a1) as u8
                + self.interior_to_arc(&c.second, ci, &a1) as u8;
            let on2 = self.interior_to_arc(&c.first, cj, &a2) as u8
                + self.interior_to_arc(&c.second, cj, &a2) as u8;
            if on1 + on2 >= 2 {
                return reject(BigonVerdict::NotSimple(format!(
                    "crossing at ({}, {}) meets the boundary twice",
                    c.point.x, c.point.y
                )));
            }
        }
        // boundary cycle: arc1 from x to y, then arc2 from y back to x
        let h1 = self.arc_halfedges(ci, arc1.0, arc1.1, d1);
        let h1_len = h1.len();
        let h2 = self.arc_halfedges(cj, arc2.0, arc2.1, d2);
        let mut boundary_h = h1;
        boundary_h.extend(h2);
        let boundary: Vec<Pt> = boundary_h
            .iter()
            .map(|&h| self.nodes[self.half[h].from].clone())
            .collect();
        // orientation via shoelace
        let mut area2 = Q::zero();
        let n = boundary.len();
        for i in 0..n {
            let a = &boundary[i];
            let b = &boundary[(i + 1) % n];
            area2 += &(&a.x * &b.y) - &(&a.y * &b.x);
        }
        if area2.is_zero() {
            return reject(BigonVerdict::NotSimple(
                "boundary encloses zero area".to_string(),
            ));
        }
        let orient: i8 = if area2.is_positive() { 1 } else { -1 };
        // convex corners at the two endpoints (indices 0 and h1_len)
        for &idx in &[0usize, h1_len] {
            let p = &boundary[idx];
            let prev = &boundary[(idx + n - 1) % n];
            let nxt = &boundary[(idx + 1) % n];
            let din = p.sub(prev);
            let dout = nxt.sub(p);
            let c = cross(&din, &dout);
            let ok = (orient == 1 && c.is_positive()) || (orient == -1 && c.is_negative());
            if !ok {
                return reject(BigonVerdict::ReflexCorner(format!(
                    "corner at ({}, {}) is reflex",
                    p.x, p.y
                )));
            }
        }
        // covered faces: winding of the boundary cycle, found by crossing
        // deltas from the unbounded face
        let in_c: std::collections::BTreeSet<usize> = boundary_h.iter().cloned().collect();
        let nf = self.faces.len();
        let mut wind = vec![i64::MIN; nf];
        wind[0] = 0;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(0usize);
        while queue.pop_front().is_some() {
            for h in 0..self.half.len() {
                let fl = self.face_of_cycle[self.cycle_of[h]];
                let fr = self.face_of_cycle[self.cycle_of[twin(h)]];
                if fl == fr {
                    continue;
                }
                let mut delta = 0i64;
                if in_c.contains(&h) {
                    delta += 1;
                }
                if in_c.contains(&twin(h)) {
                    delta -= 1;
                }
                for (from, to, d) in [(fr, fl, delta), (fl, fr, -delta)] {
                    if wind[from] != i64::MIN && wind[to] == i64::MIN {
                        wind[to] = wind[from] + d;
                        queue.push_back(to);
                    }
                }
            }
        }
        let mut faces = Vec::new();
        let mut area = Q::zero();
        for f in &self.faces {
            let w = wind[f.id];
            if f.bounded && w != 0 {
                if w != orient as i64 {
                    return reject(BigonVerdict::NotSimple(format!(
                        "face {} covered with winding {}",
                        f.id, w
                    )));
                }
                faces.push(f.id);
                area += &f.area;
            }
        }
        let total_abs = if orient == 1 {
            area2 / q(2)
        } else {
            -area2 / q(2)
        };
        assert_eq!(area, total_abs, "face areas disagree with boundary shoelace");
        BigonCandidate {
            arc1_dir: d1,
            arc2_dir: d2,
            verdict: BigonVerdict::Embedded(Bigon {
                orientation: orient,
                boundary,
                area: total_abs,
                faces,
            }),
        }
    }

    /// Is the crossing branch strictly inside the directed arc (endpoints
    /// excluded)?
    fn interior_to_arc(&self, pos: &ArcPos, curve: usize, arc: &(ArcPos, ArcPos, i8)) -> bool {
        if pos.curve != curve {
            return false;
        }
        let key = |p: &ArcPos| (p.edge, p.t.clone());
        let (a, b, dir) = arc;
        let (ka, kb, kp) = (key(a), key(b), key(pos));
        if kp == ka || kp == kb {
            return false;
        }
        if self.closed_flags[curve] {
            // the traveled point set is the cyclic interval in direction dir
            let (lo, hi) = if *dir > 0 {
                (ka, kb)
            } else {
                (kb, ka)
            };
            if lo < hi {
                lo < kp && kp < hi
            } else {
                kp > lo || kp < hi
            }
        } else {
            let (lo, hi) = if ka < kb { (ka, kb) } else { (kb, ka) };
            lo < kp && kp < hi
        }
    }
}

/// Convenience wrapper: embedded bigons between two curves at a crossing
/// pair, building the arrangement internally.
pub fn embedded_bigons(
    c1: &Polyline,
    c2: &Polyline,
    x_index: usize,
    y_index: usize,
) -> Result<Vec<Bigon>, PlaneError> {
    let arr = arrangement(&[c1, c2])?;
    let between = arr.crossings_between(0, 1);
    let x = between
        .get(x_index)
        .ok_or_else(|| PlaneError::WrongKind(format!("no crossing {}", x_index)))?;
    let y = between
        .get(y_index)
        .ok_or_else(|| PlaneError::WrongKind(format!("no crossing {}", y_index)))?;
    let cands = arr.bigon_candidates(0, 1, x, y);
    Ok(cands
        .into_iter()
        .filter_map(|c| match c.verdict {
            BigonVerdict::Embedded(b) => Some(b),
            _ => None,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_of(coords: &[(i64, i64)]) -> Polyline {
        Polyline::closed(coords.iter().map(|&(x, y)| Pt::ints(x, y)).collect()).unwrap()
    }

    fn open_of(coords: &[(i64, i64)]) -> Polyline {
        Polyline::open(coords.iter().map(|&(x, y)| Pt::ints(x, y)).collect()).unwrap()
    }

    #[test]
    fn turning_numbers() {
        let quad = loop_of(&[(0, 0), (4, 0), (4, 4), (0, 4)]);
        assert_eq!(turning_number(&quad).unwrap(), 1);
        assert_eq!(turning_number(&quad.reversed()).unwrap(), -1);
        let bowtie = loop_of(&[(0, 0), (4, 0), (0, 3), (4, 3)]);
        assert_eq!(turning_number(&bowtie).unwrap(), 0);
        let double: Vec<(i64, i64)> = vec![
            (0, 0),
            (4, 0),
            (4, 4),
            (0, 4),
            (0, 0),
            (4, 0),
            (4, 4),
            (0, 4),
        ];
        let double = loop_of(&double);
        assert_eq!(turning_number(&double).unwrap(), 2);
    }

    #[test]
    fn turning_invariance() {
        // vertex insertion on an edge changes nothing
        let refined = loop_of(&[(0, 0), (2, 0), (4, 0), (4, 4), (0, 4)]);
        assert_eq!(turning_number(&refined).unwrap(), 1);
        // a spike (exact doubling back) is rejected at construction
        assert!(Polyline::closed(
            [(0, 0), (4, 0), (2, 0), (2, 4)]
                .iter()
                .map(|&(x, y)| Pt::ints(x, y))
                .collect()
        )
        .is_err());
        // exact rational rotation by the 3-4-5 angle
        let rot = [[qr(3, 5), qr(-4, 5)], [qr(4, 5), qr(3, 5)]];
        let quad = loop_of(&[(0, 0), (4, 0), (4, 4), (0, 4)]);
        let moved = quad.transformed(&rot, &Pt::ints(7, -2));
        assert_eq!(turning_number(&moved).unwrap(), 1);
    }

    #[test]
    fn self_crossings() {
        let quad = loop_of(&[(0, 0), (4, 0), (4, 4), (0, 4)]);
        assert!(self_intersections(&quad).unwrap().is_empty());
        let bowtie = loop_of(&[(0, 0), (4, 0), (0, 3), (4, 3)]);
        let cs = self_intersections(&bowtie).unwrap();
        assert_eq!(cs.len(), 1);
        // reversing preserves count, negates sign
        let rev = bowtie.reversed();
        let cs_r = self_intersections(&rev).unwrap();
        assert_eq!(cs_r.len(), 1);
        assert_eq!(cs[0].sign, -cs_r[0].sign);
        // doubly traversed square overlaps itself
        let double = loop_of(&[
            (0, 0),
            (4, 0),
            (4, 4),
            (0, 4),
            (0, 0),
            (4, 0),
            (4, 4),
            (0, 4),
        ]);
        assert!(matches!(
            self_intersections(&double),
            Err(PlaneError::NonGeneric(_))
        ));
    }

    #[test]
    fn non_generic_rejection() {
        // vertex of one square on the edge of another
        let a = loop_of(&[(0, 0), (4, 0), (4, 4), (0, 4)]);
        let b = loop_of(&[(4, 2), (8, 2), (8, 6)]);
        assert!(matches!(
            curve_intersections(&a, &b),
            Err(PlaneError::NonGeneric(_))
        ));
        // triple point: three lines through one point
        let c1 = open_of(&[(-2, 0), (2, 0)]);
        let c2 = open_of(&[(0, -2), (0, 2)]);
        let c3 = open_of(&[(-2, -2), (2, 2)]);
        assert!(matches!(
            all_crossings(&[&c1, &c2, &c3]),
            Err(PlaneError::NonGeneric(_))
        ));
    }

    #[test]
    fn arrangement_single_convex_loop() {
        let quad = loop_of(&[(0, 0), (4, 0), (4, 4), (0, 4)]);
        let arr = arrangement(&[&quad]).unwrap();
        let bounded: Vec<&Face> = arr.faces.iter().filter(|f| f.bounded).collect();
        assert_eq!(bounded.len(), 1);
        assert_eq!(bounded[0].area, q(16));
        assert_eq!(bounded[0].winding, vec![1]);
        assert!(arr.green_identity_holds());
    }

    #[test]
    fn arrangement_bowtie() {
        let bowtie = loop_of(&[(0, 0), (4, 0), (0, 3), (4, 3)]);
        let arr = arrangement(&[&bowtie]).unwrap();
        let bounded: Vec<&Face> = arr.faces.iter().filter(|f| f.bounded).collect();
        assert_eq!(bounded.len(), 2);
        let winds: Vec<i64> = bounded.iter().map(|f| f.winding[0]).collect();
        assert_eq!(winds.iter().map(|w| w.abs()).sum::<i64>(), 2);
        assert!(winds.contains(&1) && winds.contains(&-1));
        assert!(arr.green_identity_holds());
    }

    #[test]
    fn arrangement_nested() {
        let outer = loop_of(&[(0, 0), (4, 0), (4, 4), (0, 4)]);
        let inner = loop_of(&[(1, 1), (3, 1), (3, 3), (1, 3)]);
        let arr = arrangement(&[&outer, &inner]).unwrap();
        let bounded: Vec<&Face> = arr.faces.iter().filter(|f| f.bounded).collect();
        assert_eq!(bounded.len(), 2);
        let annulus = bounded.iter().find(|f| f.area == q(12)).unwrap();
        assert_eq!(annulus.winding, vec![1, 0]);
        let core = bounded.iter().find(|f| f.area == q(4)).unwrap();
        assert_eq!(core.winding, vec![1, 1]);
        assert!(arr.green_identity_holds());
    }

    #[test]
    fn lens_bigon_between_open_arcs() {
        let a = open_of(&[(0, 0), (3, 3), (6, 0)]);
        let b = open_of(&[(0, 2), (3, -1), (6, 2)]);
        let bigons = embedded_bigons(&a, &b, 0, 1).unwrap();
        assert_eq!(bigons.len(), 1);
        assert_eq!(bigons[0].area, q(8));
        // disjoint arcs: no crossings at all
        let c = open_of(&[(0, 10), (6, 10)]);
        let arr = arrangement(&[&a, &c]).unwrap();
        assert!(arr.crossings_between(0, 1).is_empty());
    }

    #[test]
    fn green_identity_on_spiralish_loop() {
        // a loop with one self-crossing and mixed winding
        let l = loop_of(&[(0, 0), (6, 0), (6, 4), (2, 4), (2, -2), (-2, -2), (-2, 2), (0, 2)]);
        let arr = arrangement(&[&l]).unwrap();
        assert!(arr.green_identity_holds());
    }
}
