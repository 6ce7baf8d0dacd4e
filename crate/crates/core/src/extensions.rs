//! Extensions of polygon sides at reflex vertices and their classification
//! relative to a start point.

use serde::{Deserialize, Serialize};

use crate::coord::Coord;
use crate::geom::{on_segment, segment_hit, Axis, Dir, GeomError, Point, RectPolygon, SegHit};
use crate::visibility::simplify_cycle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Unclassified,
    NotNecessary,
    Necessary,
    Dominated,
    Essential,
}

impl Classification {
    pub fn is_necessary(self) -> bool {
        matches!(self, Classification::Necessary | Classification::Dominated | Classification::Essential)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Extension {
    /// Index of the inducing edge.
    pub source_side: usize,
    pub reflex_index: usize,
    pub reflex_vertex: Point,
    /// Far end: first boundary contact of the prolonged side.
    pub far_end: Point,
    /// Direction from the reflex vertex towards the far end.
    pub dir: Dir,
    pub classification: Classification,
}

impl Extension {
    pub fn segment(&self) -> (&Point, &Point) {
        (&self.reflex_vertex, &self.far_end)
    }

    pub fn orientation(&self) -> Axis {
        if self.dir.is_horizontal() {
            Axis::Horizontal
        } else {
            Axis::Vertical
        }
    }

    pub fn length(&self) -> Coord {
        self.reflex_vertex.l1(&self.far_end)
    }

    /// Closed-segment membership.
    pub fn touches(&self, p: &Point) -> bool {
        on_segment(p, &self.reflex_vertex, &self.far_end)
    }

    /// Membership in the open segment.
    pub fn open_contains(&self, p: &Point) -> bool {
        self.touches(p) && *p != self.reflex_vertex && *p != self.far_end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtensionError {
    #[error("start {0:?} lies on the extension")]
    StartOnExtension(Point),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// First boundary contact of the open ray from `p` along `d`, ignoring
/// edges through `p`.
fn first_contact(poly: &RectPolygon, p: &Point, d: Dir) -> Point {
    let mut best: Option<Coord> = None;
    for e in poly.edges() {
        if e.contains(p) {
            continue;
        }
        // distance along d to the closest point of e on the ray, if any
        let t = match d {
            Dir::East | Dir::West => {
                let (ylo, yhi) = sorted(&e.start.y, &e.end.y);
                if p.y < *ylo || p.y > *yhi {
                    continue;
                }
                let (xlo, xhi) = sorted(&e.start.x, &e.end.x);
                if d == Dir::East {
                    if *xhi <= p.x {
                        continue;
                    }
                    if *xlo > p.x {
                        xlo - &p.x
                    } else {
                        continue;
                    }
                } else {
                    if *xlo >= p.x {
                        continue;
                    }
                    if *xhi < p.x {
                        &p.x - xhi
                    } else {
                        continue;
                    }
                }
            }
            Dir::North | Dir::South => {
                let (xlo, xhi) = sorted(&e.start.x, &e.end.x);
                if p.x < *xlo || p.x > *xhi {
                    continue;
                }
                let (ylo, yhi) = sorted(&e.start.y, &e.end.y);
                if d == Dir::North {
                    if *yhi <= p.y {
                        continue;
                    }
                    if *ylo > p.y {
                        ylo - &p.y
                    } else {
                        continue;
                    }
                } else {
                    if *ylo >= p.y {
                        continue;
                    }
                    if *yhi < p.y {
                        &p.y - yhi
                    } else {
                        continue;
                    }
                }
            }
        };
        if best.as_ref().is_none_or(|b| t < *b) {
            best = Some(t);
        }
    }
    d.step(p, &best.expect("ray from a reflex vertex meets the boundary"))
}

fn sorted<'a>(a: &'a Coord, b: &'a Coord) -> (&'a Coord, &'a Coord) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// One extension per (reflex vertex, incident side), unclassified.
pub fn compute_extensions(poly: &RectPolygon) -> Vec<Extension> {
    let n = poly.len();
    let mut out = Vec::new();
    for &i in poly.reflex_vertices() {
        let v = poly.vertex(i);
        let incoming = poly.edge((i + n - 1) % n);
        let outgoing = poly.edge(i);
        // the incoming side continues forward, the outgoing side backward
        for (side, d) in [(outgoing.index, outgoing.dir.opposite()), (incoming.index, incoming.dir)] {
            out.push(Extension {
                source_side: side,
                reflex_index: i,
                reflex_vertex: v.clone(),
                far_end: first_contact(poly, v, d),
                dir: d,
                classification: Classification::Unclassified,
            });
        }
    }
    out
}

/// Splits `poly` along the chord `p q`, both on the boundary, interior in the
/// interior. Returns the piece reached by walking ccw from `p` to `q` first.
pub fn split_by_chord(poly: &RectPolygon, p: &Point, q: &Point) -> Result<(RectPolygon, RectPolygon), GeomError> {
    let n = poly.len();
    // ring with p and q inserted, remembering their positions
    let mut ring: Vec<Point> = Vec::with_capacity(n + 2);
    let mut ip = None;
    let mut iq = None;
    for i in 0..n {
        let e = poly.edge(i);
        let v = e.start.clone();
        if v == *p {
            ip = Some(ring.len());
        }
        if v == *q {
            iq = Some(ring.len());
        }
        ring.push(v);
        let mut inner: Vec<&Point> = Vec::new();
        for x in [p, q] {
            if e.contains(x) && *x != e.start && *x != e.end {
                inner.push(x);
            }
        }
        inner.sort_by_key(|x| x.l1(&e.start));
        for x in inner {
            if x == p {
                ip = Some(ring.len());
            } else {
                iq = Some(ring.len());
            }
            ring.push(x.clone());
        }
    }
    let (ip, iq) = match (ip, iq) {
        (Some(a), Some(b)) if a != b => (a, b),
        _ => return Err(GeomError::SegmentOutside(p.clone(), q.clone())),
    };
    let m = ring.len();
    let walk = |from: usize, to: usize| {
        let mut out = Vec::new();
        let mut k = from;
        loop {
            out.push(ring[k].clone());
            if k == to {
                break;
            }
            k = (k + 1) % m;
        }
        out
    };
    let mut a = walk(ip, iq);
    let mut b = walk(iq, ip);
    simplify_cycle(&mut a);
    simplify_cycle(&mut b);
    Ok((crate::geom::validate_polygon(a)?, crate::geom::validate_polygon(b)?))
}

/// The two pieces of `poly` cut by `ext`: (piece holding the inducing side, other piece).
fn pieces(poly: &RectPolygon, ext: &Extension) -> Result<(RectPolygon, RectPolygon), GeomError> {
    let (a, b) = split_by_chord(poly, &ext.reflex_vertex, &ext.far_end)?;
    let side = poly.edge(ext.source_side);
    let mid = side.start.midpoint(&side.end);
    let holds = |r: &RectPolygon| r.edges().iter().any(|e| e.contains(&mid));
    if holds(&a) {
        Ok((a, b))
    } else {
        debug_assert!(holds(&b));
        Ok((b, a))
    }
}

fn start_on(ext: &Extension, start: &Point) -> bool {
    ext.touches(start)
}

/// Subpolygon beyond `ext` as seen from `start`.
pub fn foreign_polygon(poly: &RectPolygon, ext: &Extension, start: &Point) -> Result<RectPolygon, ExtensionError> {
    if start_on(ext, start) {
        return Err(ExtensionError::StartOnExtension(start.clone()));
    }
    let (a, b) = split_by_chord(poly, &ext.reflex_vertex, &ext.far_end)?;
    Ok(if a.contains(start) { b } else { a })
}

/// Whether every point of `inner` lies in the closed polygon `outer`.
fn polygon_within(inner: &RectPolygon, outer: &RectPolygon) -> bool {
    if inner.area() > outer.area() {
        return false;
    }
    inner.edges().iter().all(|e| outer.contains(&e.start) && outer.contains(&e.start.midpoint(&e.end)))
}

/// Extensions with necessity, domination and essentiality relative to `start`.
///
/// An extension is necessary when the start lies in the piece across the
/// inducing side's line (off the extension itself): the side faces away from
/// every point there.
pub fn classify_extensions(poly: &RectPolygon, start: &Point) -> Vec<Extension> {
    let mut exts = compute_extensions(poly);
    let mut foreign: Vec<Option<RectPolygon>> = Vec::with_capacity(exts.len());
    for ext in exts.iter_mut() {
        let (inner, outer) = pieces(poly, ext).expect("extension is a chord");
        let necessary = !start_on(ext, start) && outer.contains(start) && !sees_along(poly, ext, start);
        ext.classification = if necessary { Classification::Necessary } else { Classification::NotNecessary };
        foreign.push(if necessary { Some(inner) } else { None });
    }
    let nec: Vec<usize> = (0..exts.len()).filter(|&i| foreign[i].is_some()).collect();
    let mut dominated = vec![false; exts.len()];
    for &i in &nec {
        for &j in &nec {
            if i == j {
                continue;
            }
            let (fi, fj) = (foreign[i].as_ref().unwrap(), foreign[j].as_ref().unwrap());
            // j dominates i: FP[i] holds FP[j] and j itself, strictly
            let seg_in = fi.contains(&exts[j].reflex_vertex) && fi.contains(&exts[j].far_end);
            if seg_in && polygon_within(fj, fi) && !polygon_within(fi, fj) {
                dominated[i] = true;
                break;
            }
        }
    }
    for &i in &nec {
        exts[i].classification = if dominated[i] { Classification::Dominated } else { Classification::Essential };
    }
    exts
}

/// A start on the line of `ext` that sees straight through it sees the side too.
fn sees_along(poly: &RectPolygon, ext: &Extension, start: &Point) -> bool {
    let collinear = if ext.dir.is_horizontal() { start.y == ext.reflex_vertex.y } else { start.x == ext.reflex_vertex.x };
    collinear && poly.segment_inside(start, &ext.far_end)
}

/// Boundary reference point of a start: itself on the boundary, else the
/// boundary point straight below.
pub fn boundary_anchor(poly: &RectPolygon, start: &Point) -> Point {
    if poly.boundary_position_of(start).is_some() {
        start.clone()
    } else {
        poly.first_hit_below(start).expect("interior point has boundary below")
    }
}

/// Clockwise arc length from `anchor` to the boundary point `p`.
pub fn clockwise_offset(poly: &RectPolygon, anchor: &Point, p: &Point) -> Coord {
    let per = poly.perimeter();
    let a = poly.boundary_position_of(anchor).expect("anchor on boundary");
    let b = poly.boundary_position_of(p).expect("point on boundary");
    let mut d = a - b;
    if d.is_negative() {
        d = d + per;
    }
    d
}

/// Order key of an extension: clockwise position of its reflex vertex; at a
/// shared vertex the side met first when walking clockwise comes first.
pub fn order_key(poly: &RectPolygon, anchor: &Point, ext: &Extension) -> (Coord, u8, usize) {
    let off = clockwise_offset(poly, anchor, &ext.reflex_vertex);
    // walking clockwise reaches a vertex along its outgoing edge first
    let second = if ext.source_side == ext.reflex_index { 0 } else { 1 };
    (off, second, ext.source_side)
}

/// Essential extensions in clockwise boundary order from the start.
pub fn essential_order(poly: &RectPolygon, start: &Point) -> Vec<Extension> {
    let anchor = boundary_anchor(poly, start);
    let mut ess: Vec<Extension> =
        classify_extensions(poly, start).into_iter().filter(|e| e.classification == Classification::Essential).collect();
    ess.sort_by_cached_key(|e| order_key(poly, &anchor, e));
    ess
}

/// The polygon with every region beyond an essential extension cut away.
pub fn prune_nonessential(poly: &RectPolygon, start: &Point) -> RectPolygon {
    let mut cur = poly.clone();
    for ext in essential_order(poly, start) {
        for (p, q) in chord_pieces(&cur, &ext) {
            if let Ok((a, b)) = split_by_chord(&cur, &p, &q) {
                cur = if a.contains(start) && !b.locate(start).inside_strict() { a } else { b };
            }
        }
    }
    cur
}

/// Maximal sub-segments of `ext` that are chords of `poly`.
fn chord_pieces(poly: &RectPolygon, ext: &Extension) -> Vec<(Point, Point)> {
    let (u, v) = (&ext.reflex_vertex, &ext.far_end);
    let mut ts: Vec<Coord> = vec![Coord::zero(), Coord::one()];
    for e in poly.edges() {
        match segment_hit(u, v, &e.start, &e.end) {
            SegHit::None => {}
            SegHit::Point { t, .. } => ts.push(t),
            SegHit::Overlap(a, b) => {
                ts.push(a);
                ts.push(b);
            }
        }
    }
    ts.sort();
    ts.dedup();
    let at = |t: &Coord| crate::geom::lerp(u, v, t);
    let mut out: Vec<(Point, Point)> = Vec::new();
    let mut open: Option<Point> = None;
    for w in ts.windows(2) {
        let mid = at(&(&w[0] + &w[1]).half());
        let interior = poly.locate(&mid).inside_strict();
        match (&open, interior) {
            (None, true) => open = Some(at(&w[0])),
            (Some(s), false) => {
                out.push((s.clone(), at(&w[0])));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(s) = open {
        out.push((s, v.clone()));
    }
    out.retain(|(p, q)| poly.boundary_position_of(p).is_some() && poly.boundary_position_of(q).is_some());
    out
}

/// Whether two closed axis-parallel segments share a point.
pub fn segments_meet(a: (&Point, &Point), b: (&Point, &Point)) -> bool {
    !matches!(segment_hit(a.0, a.1, b.0, b.1), SegHit::None)
}

/// Arc length along `path` at which it first touches each extension.
pub fn first_visits(path: &[Point], exts: &[Extension]) -> Vec<Option<Coord>> {
    exts.iter()
        .map(|e| {
            let (p, q) = e.segment();
            if path.len() == 1 {
                return e.touches(&path[0]).then(Coord::zero);
            }
            let mut walked = Coord::zero();
            for w in path.windows(2) {
                match segment_hit(&w[0], &w[1], p, q) {
                    SegHit::None => {}
                    SegHit::Point { t, .. } | SegHit::Overlap(t, _) => return Some(&walked + &(w[0].l1(&w[1]) * t)),
                }
                walked = walked + w[0].l1(&w[1]);
            }
            None
        })
        .collect()
}

/// Positions in `order` whose first visit comes strictly before that of an
/// earlier extension, or never happens. A chord already listed from its other
/// end is skipped: both reflex ends induce the same segment.
pub fn order_violations(path: &[Point], order: &[Extension]) -> Vec<usize> {
    let visits = first_visits(path, order);
    let mut out = Vec::new();
    let mut latest = Coord::zero();
    for (i, v) in visits.into_iter().enumerate() {
        let (p, q) = order[i].segment();
        if order[..i].iter().any(|e| (e.reflex_vertex == *q && e.far_end == *p) || (e.reflex_vertex == *p && e.far_end == *q)) {
            continue;
        }
        match v {
            Some(t) if t >= latest => latest = t,
            _ => out.push(i),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::tests::{lshape, square};
    use crate::visibility::weak_visibility;

    fn p(x: &str, y: &str) -> Point {
        Point::parse(x, y).unwrap()
    }

    #[test]
    fn lshape_extensions() {
        let l = lshape();
        assert!(compute_extensions(&square()).is_empty());
        let exts = compute_extensions(&l);
        assert_eq!(exts.len(), 2);
        let segs: Vec<(Point, Point)> =
            exts.iter().map(|e| (e.reflex_vertex.clone(), e.far_end.clone())).collect();
        assert!(segs.contains(&(Point::ints(1, 1), Point::ints(0, 1))));
        assert!(segs.contains(&(Point::ints(1, 1), Point::ints(1, 0))));
        for e in &exts {
            let side = l.edge(e.source_side);
            assert!(side.contains(&e.reflex_vertex));
            assert!(l.segment_inside(&e.reflex_vertex, &e.far_end));
        }
    }

    #[test]
    fn staircase_has_two_per_reflex() {
        let (st, _) = crate::corpus::generate(&crate::corpus::InstanceSpec::new(crate::corpus::Generator::Staircase {
            steps: 3,
        }))
        .map(|i| (i.polygon, i.start))
        .unwrap();
        assert_eq!(compute_extensions(&st).len(), 2 * st.reflex_vertices().len());
    }

    #[test]
    fn foreign_polygons_of_lshape() {
        let l = lshape();
        let exts = compute_extensions(&l);
        let vert = exts.iter().find(|e| e.far_end == Point::ints(1, 0)).unwrap();
        let fp = foreign_polygon(&l, vert, &p("0.25", "0.25")).unwrap();
        assert_eq!(fp.vertices(), RectPolygon::from_ints(&[(1, 0), (2, 0), (2, 1), (1, 1)]).unwrap().vertices());
        let other = foreign_polygon(&l, vert, &p("1.75", "0.5")).unwrap();
        assert_eq!(other.area(), l.area() - Coord::one());
        assert!(matches!(foreign_polygon(&l, vert, &p("1", "0.5")), Err(ExtensionError::StartOnExtension(_))));
    }

    #[test]
    fn north_arm_start_needs_the_horizontal_extension() {
        let l = lshape();
        let start = p("0.25", "1.75");
        let cls = classify_extensions(&l, &start);
        let horiz = cls.iter().find(|e| e.far_end == Point::ints(0, 1)).unwrap();
        let vert = cls.iter().find(|e| e.far_end == Point::ints(1, 0)).unwrap();
        assert_eq!(horiz.classification, Classification::Essential);
        assert_eq!(vert.classification, Classification::NotNecessary);
        // the inducing side of the necessary one is invisible from the start's piece
        let near = foreign_polygon(&l, vert, &start).map(|_| ()).ok();
        assert!(near.is_some());
        let side = l.edge(horiz.source_side);
        assert!(!l.segment_inside(&start, &side.start.midpoint(&side.end)));
        // only the reflex endpoint is in sight, which weak visibility counts
        assert!(weak_visibility(&l, horiz.source_side).contains(&start));
    }

    #[test]
    fn necessity_matches_weak_visibility_on_grid() {
        // a side that no point of the start's piece sees weakly forces a visit
        for seed in 0..12 {
            let poly = crate::corpus::random_rectilinear(14, seed).unwrap();
            let start = crate::corpus::random_boundary_point(&poly, seed);
            for ext in classify_extensions(&poly, &start) {
                if ext.touches(&start) {
                    continue;
                }
                let fp = foreign_polygon(&poly, &ext, &start).unwrap();
                let side = poly.edge(ext.source_side);
                let mid = side.start.midpoint(&side.end);
                let side_in_fp = fp.edges().iter().any(|e| e.contains(&mid));
                let in_sight = poly.segment_inside(&start, &mid);
                assert_eq!(ext.classification.is_necessary(), side_in_fp && !in_sight, "seed {seed} {:?}", ext);
                if ext.classification.is_necessary() {
                    // no point of the side's relative interior is visible from the start
                    assert!(!in_sight);
                }
            }
        }
    }

    #[test]
    fn nested_niche_dominates_outer() {
        // corridor with a niche whose floor holds a smaller niche
        let poly = RectPolygon::from_ints(&[
            (0, 0),
            (10, 0),
            (10, 2),
            (7, 2),
            (7, 5),
            (6, 5),
            (6, 7),
            (5, 7),
            (5, 5),
            (4, 5),
            (4, 2),
            (0, 2),
        ])
        .unwrap();
        let start = Point::ints(0, 1);
        let cls = classify_extensions(&poly, &start);
        let outer = cls.iter().find(|e| e.reflex_vertex == Point::ints(4, 2) && e.dir == Dir::South).unwrap();
        let inner = cls.iter().find(|e| e.reflex_vertex == Point::ints(5, 5) && e.dir == Dir::South).unwrap();
        assert_eq!(inner.far_end, Point::ints(5, 0));
        assert!(outer.classification.is_necessary());
        assert_eq!(inner.classification, Classification::Essential);
        assert_eq!(outer.classification, Classification::Dominated);
    }

    #[test]
    fn comb_essentials_in_clockwise_order() {
        let inst = crate::corpus::generate(&crate::corpus::InstanceSpec::new(crate::corpus::Generator::Comb {
            teeth: 3,
        }))
        .unwrap();
        let ord = essential_order(&inst.polygon, &inst.start);
        assert_eq!(ord.len(), 3, "{:?}", ord);
        // start at the west end: clockwise walking meets the westmost tooth first
        let xs: Vec<Coord> = ord.iter().map(|e| e.reflex_vertex.x.clone()).collect();
        assert!(xs.windows(2).all(|w| w[0] < w[1]), "{:?}", xs);
    }

    #[test]
    fn pruning() {
        assert_eq!(prune_nonessential(&square(), &p("0.5", "0.5")), square());
        let l = lshape();
        let pr = prune_nonessential(&l, &p("0.25", "1.75"));
        assert_eq!(pr.vertices(), RectPolygon::from_ints(&[(0, 1), (1, 1), (1, 2), (0, 2)]).unwrap().vertices());
        // a start in the kernel of a star-shaped polygon keeps that kernel
        let pr2 = prune_nonessential(&l, &p("0.5", "0.5"));
        assert!(pr2.contains(&p("0.5", "0.5")));
    }
}
