//! Visibility polygons, edge visibility, kernels.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::coord::Coord;
use crate::geom::{
    cross_vec, dot_vec, l1_distance, on_segment, segment_hit, validate_polygon, Dir, GeomError, Location, Point,
    Polygon, RectPolygon, SegHit,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionEdgeKind {
    /// Part of the polygon boundary.
    Boundary,
    /// Chord through the interior along a sight ray.
    Window,
}

/// Set of points visible from a viewpoint.
///
/// The outline may be weakly simple: a sight ray passing exactly between two
/// reflex vertices contributes a zero-width spike.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisibilityRegion {
    pub polygon: Polygon,
    /// `kinds[i]` classifies the outline edge from vertex `i` to `i + 1`.
    pub kinds: Vec<RegionEdgeKind>,
    pub viewpoint: Option<Point>,
}

impl VisibilityRegion {
    pub fn contains(&self, q: &Point) -> bool {
        self.polygon.locate(q).inside()
    }

    pub fn area(&self) -> Coord {
        self.polygon.area()
    }

    pub fn edge(&self, i: usize) -> (&Point, &Point, RegionEdgeKind) {
        let (a, b) = self.polygon.edge(i);
        (a, b, self.kinds[i])
    }

    pub fn len(&self) -> usize {
        self.polygon.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polygon.is_empty()
    }

    /// Outline edges lying on the polygon boundary.
    pub fn boundary_pieces(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        (0..self.len()).filter(|&i| self.kinds[i] == RegionEdgeKind::Boundary).map(move |i| self.polygon.edge(i))
    }
}

fn half(d: &Point) -> u8 {
    if d.y.is_positive() || (d.y.is_zero() && d.x.is_positive()) {
        0
    } else {
        1
    }
}

/// Counterclockwise angular order of direction vectors starting at +x.
pub(crate) fn angle_cmp(a: &Point, b: &Point) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&cross_vec(a, b).signum()))
}

/// Angle order measured counterclockwise from `base`.
fn angle_cmp_from(base: &Point, a: &Point, b: &Point) -> Ordering {
    let rot = |d: &Point| Point::new(dot_vec(base, d), cross_vec(base, d));
    angle_cmp(&rot(a), &rot(b))
}

/// A direction strictly inside the ccw wedge from `a` to `b`.
fn wedge_mid(a: &Point, b: &Point) -> Point {
    let c = cross_vec(a, b);
    if c.is_positive() {
        a.add(b)
    } else if c.is_zero() {
        Point::new(-&a.y, a.x.clone())
    } else {
        Point::new(-(&a.x + &b.x), -(&a.y + &b.y))
    }
}

/// Point where the ray `p + t d` meets the supporting line of `u v`.
fn ray_line_point(p: &Point, d: &Point, u: &Point, v: &Point) -> Option<Point> {
    let s = v.sub(u);
    let den = cross_vec(d, &s);
    if den.is_zero() {
        return None;
    }
    let t = cross_vec(&u.sub(p), &s) / &den;
    Some(p.add(&d.scale(&t)))
}

/// Nearest polygon edge crossed by the open ray from `p` along `d`, ignoring
/// edges through `p`. Returns the edge index.
fn nearest_edge(poly: &RectPolygon, p: &Point, d: &Point) -> Option<usize> {
    let mut best: Option<(Coord, usize)> = None;
    for e in poly.edges() {
        if e.contains(p) {
            continue;
        }
        let s = e.end.sub(&e.start);
        let den = cross_vec(d, &s);
        if den.is_zero() {
            continue;
        }
        let up = e.start.sub(p);
        let t = cross_vec(&up, &s) / &den;
        let w = cross_vec(&up, d) / &den;
        if !t.is_positive() || w.is_negative() || w > Coord::one() {
            continue;
        }
        if best.as_ref().is_none_or(|(bt, _)| t < *bt) {
            best = Some((t, e.index));
        }
    }
    best.map(|(_, i)| i)
}

/// Farthest point `p + t d` such that the segment from `p` stays in the polygon.
pub(crate) fn ray_extent(poly: &RectPolygon, p: &Point, d: &Point) -> Point {
    let (lo, hi) = poly.as_polygon().bbox();
    let span = l1_distance(&lo, &hi) + l1_distance(&lo, p) + Coord::one();
    let norm = d.x.abs() + d.y.abs();
    let far = p.add(&d.scale(&(&span / &norm)));
    let mut ts = vec![Coord::zero(), Coord::one()];
    for e in poly.edges() {
        match segment_hit(p, &far, &e.start, &e.end) {
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
    for w in ts.windows(2) {
        let mid = (&w[0] + &w[1]).half();
        if !poly.contains(&crate::geom::lerp(p, &far, &mid)) {
            return crate::geom::lerp(p, &far, &w[0]);
        }
    }
    far
}

/// Interior cone at a boundary point as (start, end) directions, ccw.
fn interior_cone(poly: &RectPolygon, p: &Point) -> (Point, Point) {
    if let Some(i) = poly.vertex_index(p) {
        let out = poly.edge(i).dir;
        let inc = poly.edge(i + poly.len() - 1).dir;
        (out.vec(), inc.opposite().vec())
    } else {
        let e = &poly.edges()[poly.edges_at(p)[0]];
        (e.dir.vec(), e.dir.opposite().vec())
    }
}

pub fn visibility_polygon(poly: &RectPolygon, p: &Point) -> Result<VisibilityRegion, GeomError> {
    let loc = poly.locate(p);
    if loc == Location::Exterior {
        return Err(GeomError::PointOutside(p.clone()));
    }
    let mut dirs: Vec<Point> = poly.vertices().iter().filter(|v| *v != p).map(|v| v.sub(p)).collect();
    dirs.sort_by(angle_cmp);
    dirs.dedup_by(|a, b| angle_cmp(a, b) == Ordering::Equal);
    let m = dirs.len();
    let cone = (loc == Location::Boundary).then(|| interior_cone(poly, p));
    // wedge k spans dirs[k] .. dirs[k+1]
    let mut wedge: Vec<Option<usize>> = vec![None; m];
    for k in 0..m {
        let a = &dirs[k];
        let b = &dirs[(k + 1) % m];
        let mid = wedge_mid(a, b);
        if let Some((cs, ce)) = &cone {
            let inside = angle_cmp_from(cs, &mid, ce) == Ordering::Less && !mid_on(cs, &mid);
            if !inside {
                continue;
            }
        }
        wedge[k] = nearest_edge(poly, p, &mid);
    }
    let hit = |k: usize, d: &Point| -> Point {
        let e = poly.edge(wedge[k].unwrap());
        ray_line_point(p, d, &e.start, &e.end).expect("wedge edge is not parallel to its bounding rays")
    };
    let dist = |q: &Point| l1_distance(p, q);
    let mut seq: Vec<Point> = Vec::new();
    match &cone {
        None => {
            for k in 0..m {
                let next = (k + 1) % m;
                let theta = &dirs[next];
                seq.push(hit(k, &dirs[k]));
                let end = hit(k, theta);
                let start_next = hit(next, theta);
                let r = ray_extent(poly, p, theta);
                let far = dist(&r) > dist(&end).max(dist(&start_next));
                seq.push(end);
                if far {
                    seq.push(r);
                }
            }
        }
        Some((cs, _)) => {
            let first = dirs.iter().position(|d| angle_cmp(d, cs) == Ordering::Equal).expect("cone start is a vertex direction");
            seq.push(p.clone());
            let r0 = ray_extent(poly, p, &dirs[first]);
            let s0 = hit(first, &dirs[first]);
            if dist(&r0) > dist(&s0) {
                seq.push(r0);
            }
            let mut k = first;
            loop {
                let next = (k + 1) % m;
                let theta = &dirs[next];
                seq.push(hit(k, &dirs[k]));
                let end = hit(k, theta);
                let r = ray_extent(poly, p, theta);
                if wedge[next].is_some() {
                    let start_next = hit(next, theta);
                    let far = dist(&r) > dist(&end).max(dist(&start_next));
                    seq.push(end);
                    if far {
                        seq.push(r);
                    }
                    k = next;
                } else {
                    let far = dist(&r) > dist(&end);
                    seq.push(end);
                    if far {
                        seq.push(r);
                    }
                    break;
                }
            }
        }
    }
    Ok(finish_region(poly, seq, Some(p.clone())))
}

fn mid_on(base: &Point, d: &Point) -> bool {
    cross_vec(base, d).is_zero() && dot_vec(base, d).is_positive()
}

/// Splits outline segments at polygon vertices, labels them and removes
/// redundant vertices.
fn finish_region(poly: &RectPolygon, seq: Vec<Point>, viewpoint: Option<Point>) -> VisibilityRegion {
    let mut pts: Vec<Point> = Vec::new();
    let n = seq.len();
    for i in 0..n {
        let a = &seq[i];
        let b = &seq[(i + 1) % n];
        pts.push(a.clone());
        if a == b {
            continue;
        }
        let mut inner: Vec<(Coord, Point)> = poly
            .vertices()
            .iter()
            .filter(|v| *v != a && *v != b && on_segment(v, a, b))
            .map(|v| (l1_distance(a, v), v.clone()))
            .collect();
        inner.sort();
        pts.extend(inner.into_iter().map(|(_, v)| v));
    }
    pts.dedup();
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    let kind_of = |a: &Point, b: &Point| {
        if poly.edges().iter().any(|e| e.contains(a) && e.contains(b)) {
            RegionEdgeKind::Boundary
        } else {
            RegionEdgeKind::Window
        }
    };
    let mut kinds: Vec<RegionEdgeKind> = (0..pts.len()).map(|i| kind_of(&pts[i], &pts[(i + 1) % pts.len()])).collect();
    // drop straight-through vertices between edges of the same kind
    let mut changed = true;
    while changed && pts.len() > 3 {
        changed = false;
        let k = pts.len();
        for i in 0..k {
            let prev = (i + k - 1) % k;
            let a = &pts[prev];
            let b = &pts[i];
            let c = &pts[(i + 1) % k];
            let u = b.sub(a);
            let v = c.sub(b);
            if cross_vec(&u, &v).is_zero() && dot_vec(&u, &v).is_positive() && kinds[prev] == kinds[i] {
                pts.remove(i);
                kinds.remove(i);
                changed = true;
                break;
            }
        }
    }
    VisibilityRegion { polygon: Polygon::new(pts), kinds, viewpoint }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeVisibilityKind {
    /// Sees at least one point of the edge.
    Weak,
    /// Sees every point of the edge.
    Full,
}

/// Edge visibility region with an exact membership predicate.
#[derive(Debug, Clone)]
pub struct EdgeVisibilityRegion<'a> {
    pub poly: &'a RectPolygon,
    pub edge: usize,
    pub kind: EdgeVisibilityKind,
}

impl EdgeVisibilityRegion<'_> {
    pub fn contains(&self, q: &Point) -> bool {
        match self.kind {
            EdgeVisibilityKind::Weak => sees_some_of_edge(self.poly, q, self.edge),
            EdgeVisibilityKind::Full => sees_all_of_edge(self.poly, q, self.edge),
        }
    }
}

pub fn weak_visibility(poly: &RectPolygon, edge: usize) -> EdgeVisibilityRegion<'_> {
    EdgeVisibilityRegion { poly, edge: edge % poly.len(), kind: EdgeVisibilityKind::Weak }
}

pub fn full_edge_visibility(poly: &RectPolygon, edge: usize) -> EdgeVisibilityRegion<'_> {
    EdgeVisibilityRegion { poly, edge: edge % poly.len(), kind: EdgeVisibilityKind::Full }
}

pub fn edge_fully_visible_from(p: &Point, edge: usize, poly: &RectPolygon) -> Result<bool, GeomError> {
    if !poly.contains(p) {
        return Err(GeomError::PointOutside(p.clone()));
    }
    Ok(sees_all_of_edge(poly, p, edge))
}

fn sees_all_of_edge(poly: &RectPolygon, q: &Point, edge: usize) -> bool {
    let e = poly.edge(edge);
    if !poly.contains(q) || e.inner_offset(q).is_negative() {
        return false;
    }
    poly.segment_inside(q, &e.start) && poly.segment_inside(q, &e.end)
}

fn sees_some_of_edge(poly: &RectPolygon, q: &Point, edge: usize) -> bool {
    let e = poly.edge(edge);
    if !poly.contains(q) {
        return false;
    }
    let off = e.inner_offset(q);
    if off.is_negative() {
        // only the endpoints can be seen from behind the edge's line
        return poly.segment_inside(q, &e.start) || poly.segment_inside(q, &e.end);
    }
    if off.is_zero() {
        if e.contains(q) {
            return true;
        }
        let near = if l1_distance(q, &e.start) <= l1_distance(q, &e.end) { &e.start } else { &e.end };
        return poly.segment_inside(q, near);
    }
    let (mut a, mut b) = (e.start.sub(q), e.end.sub(q));
    if cross_vec(&a, &b).is_negative() {
        std::mem::swap(&mut a, &mut b);
    }
    let tri = Polygon::new(vec![q.clone(), q.add(&a), q.add(&b)]);
    let mut dirs: Vec<Point> = vec![a.clone(), b.clone()];
    for v in poly.vertices() {
        if v != q && tri.locate(v).inside() {
            dirs.push(v.sub(q));
        }
    }
    dirs.sort_by(|x, y| 0.cmp(&cross_vec(x, y).signum()));
    dirs.dedup_by(|x, y| cross_vec(x, y).is_zero());
    let on_edge = |d: &Point| ray_line_point(q, d, &e.start, &e.end).expect("direction within the edge's span");
    for d in &dirs {
        if poly.segment_inside(q, &on_edge(d)) {
            return true;
        }
    }
    for w in dirs.windows(2) {
        let mid = w[0].add(&w[1]);
        if poly.segment_inside(q, &on_edge(&mid)) {
            return true;
        }
    }
    false
}

/// Axis-aligned rectangle `[lo.x, hi.x] x [lo.y, hi.y]`, possibly degenerate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub lo: Point,
    pub hi: Point,
}

impl Rect {
    pub fn contains(&self, p: &Point) -> bool {
        self.lo.x <= p.x && p.x <= self.hi.x && self.lo.y <= p.y && p.y <= self.hi.y
    }

    pub fn intersect(&self, o: &Rect) -> Option<Rect> {
        let lo = Point::new(self.lo.x.clone().max(o.lo.x.clone()), self.lo.y.clone().max(o.lo.y.clone()));
        let hi = Point::new(self.hi.x.clone().min(o.hi.x.clone()), self.hi.y.clone().min(o.hi.y.clone()));
        (lo.x <= hi.x && lo.y <= hi.y).then_some(Rect { lo, hi })
    }

    /// Closest point of the rectangle to `p` (also L1-closest).
    pub fn clamp(&self, p: &Point) -> Point {
        let cl = |v: &Coord, lo: &Coord, hi: &Coord| {
            if v < lo {
                lo.clone()
            } else if v > hi {
                hi.clone()
            } else {
                v.clone()
            }
        };
        Point::new(cl(&p.x, &self.lo.x, &self.hi.x), cl(&p.y, &self.lo.y, &self.hi.y))
    }

    pub fn area(&self) -> Coord {
        (&self.hi.x - &self.lo.x) * (&self.hi.y - &self.lo.y)
    }
}

/// Kernel of a rectilinear polygon: always an axis-aligned rectangle or empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelRegion {
    pub rect: Option<Rect>,
    pub is_star_shaped: bool,
}

impl KernelRegion {
    pub fn contains(&self, p: &Point) -> bool {
        self.rect.as_ref().is_some_and(|r| r.contains(p))
    }
}

pub fn kernel(poly: &RectPolygon) -> KernelRegion {
    let pick = |inward: Dir| poly.edges().iter().filter(move |e| e.inward == inward);
    let xl = pick(Dir::East).map(|e| e.start.x.clone()).max().unwrap();
    let xr = pick(Dir::West).map(|e| e.start.x.clone()).min().unwrap();
    let yb = pick(Dir::North).map(|e| e.start.y.clone()).max().unwrap();
    let yt = pick(Dir::South).map(|e| e.start.y.clone()).min().unwrap();
    if xl <= xr && yb <= yt {
        KernelRegion { rect: Some(Rect { lo: Point::new(xl, yb), hi: Point::new(xr, yt) }), is_star_shaped: true }
    } else {
        KernelRegion { rect: None, is_star_shaped: false }
    }
}

/// Monotone w.r.t. the y-axis: every horizontal line meets the polygon in one interval.
pub fn is_y_monotone(poly: &RectPolygon) -> bool {
    !poly.edges().iter().any(|e| e.dir.is_horizontal() && poly.is_reflex(e.index) && poly.is_reflex(e.index + 1))
}

pub fn is_x_monotone(poly: &RectPolygon) -> bool {
    !poly.edges().iter().any(|e| !e.dir.is_horizontal() && poly.is_reflex(e.index) && poly.is_reflex(e.index + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopBottomKernels {
    /// Height of the highest bottom edge T.
    pub y_t: Coord,
    /// Height of the lowest top edge B.
    pub y_b: Coord,
    pub top: KernelRegion,
    pub bottom: KernelRegion,
    /// Bottom boundary of the top kernel.
    pub k_t: Option<(Point, Point)>,
    /// Top boundary of the bottom kernel.
    pub k_b: Option<(Point, Point)>,
    /// The polygon is star-shaped; both kernels are its kernel.
    pub coincident: bool,
    /// Left and right kernels when the polygon is monotone in x as well.
    pub left_right: Option<(KernelRegion, KernelRegion)>,
    /// Pairwise intersections of {top, bottom} with {left, right}.
    pub intersections: Vec<Rect>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("polygon is not monotone with respect to the y-axis")]
    NotMonotone,
}

/// Part of the polygon on one side of a horizontal line (`above` selects y >= c).
fn clip_horizontal(poly: &RectPolygon, c: &Coord, above: bool) -> Option<RectPolygon> {
    let keep = |p: &Point| if above { p.y >= *c } else { p.y <= *c };
    let vs = poly.vertices();
    let n = vs.len();
    let mut out: Vec<Point> = Vec::new();
    for i in 0..n {
        let a = &vs[i];
        let b = &vs[(i + 1) % n];
        let (ka, kb) = (keep(a), keep(b));
        if ka {
            out.push(a.clone());
        }
        if ka != kb && a.y != *c && b.y != *c {
            out.push(Point::new(a.x.clone(), c.clone()));
        }
    }
    simplify_cycle(&mut out);
    if out.len() < 4 {
        return None;
    }
    validate_polygon(out).ok()
}

pub(crate) fn simplify_cycle(pts: &mut Vec<Point>) {
    pts.dedup();
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    let mut changed = true;
    while changed && pts.len() >= 3 {
        changed = false;
        let k = pts.len();
        for i in 0..k {
            let a = &pts[(i + k - 1) % k];
            let b = &pts[i];
            let c = &pts[(i + 1) % k];
            if crate::geom::orient(a, b, c) == 0 {
                pts.remove(i);
                changed = true;
                break;
            }
        }
    }
}

fn transpose(p: &Point) -> Point {
    Point::new(p.y.clone(), p.x.clone())
}

fn transpose_kernel(k: KernelRegion) -> KernelRegion {
    KernelRegion {
        rect: k.rect.map(|r| Rect { lo: transpose(&r.lo), hi: transpose(&r.hi) }),
        is_star_shaped: k.is_star_shaped,
    }
}

fn vertical_kernels(poly: &RectPolygon) -> Result<(Coord, Coord, KernelRegion, KernelRegion), KernelError> {
    if !is_y_monotone(poly) {
        return Err(KernelError::NotMonotone);
    }
    let y_t = poly.edges().iter().filter(|e| e.inward == Dir::North).map(|e| e.start.y.clone()).max().unwrap();
    let y_b = poly.edges().iter().filter(|e| e.inward == Dir::South).map(|e| e.start.y.clone()).min().unwrap();
    let empty = KernelRegion { rect: None, is_star_shaped: false };
    let top = clip_horizontal(poly, &y_t, true).map(|p| kernel(&p)).unwrap_or(empty.clone());
    let bottom = clip_horizontal(poly, &y_b, false).map(|p| kernel(&p)).unwrap_or(empty);
    Ok((y_t, y_b, top, bottom))
}

pub fn top_bottom_kernels(poly: &RectPolygon) -> Result<TopBottomKernels, KernelError> {
    let (y_t, y_b, top, bottom) = vertical_kernels(poly)?;
    let k_t = top.rect.as_ref().filter(|r| r.lo.y == y_t).map(|r| (r.lo.clone(), Point::new(r.hi.x.clone(), r.lo.y.clone())));
    let k_b = bottom.rect.as_ref().filter(|r| r.hi.y == y_b).map(|r| (Point::new(r.lo.x.clone(), r.hi.y.clone()), r.hi.clone()));
    let coincident = kernel(poly).is_star_shaped;
    let left_right = if is_x_monotone(poly) {
        let flipped = validate_polygon(poly.vertices().iter().map(transpose).collect()).expect("transpose keeps validity");
        vertical_kernels(&flipped).ok().map(|(_, _, right, left)| (transpose_kernel(left), transpose_kernel(right)))
    } else {
        None
    };
    let mut intersections = Vec::new();
    if let Some((l, r)) = &left_right {
        for a in [&top, &bottom] {
            for b in [l, r] {
                if let (Some(x), Some(y)) = (&a.rect, &b.rect) {
                    if let Some(z) = x.intersect(y) {
                        intersections.push(z);
                    }
                }
            }
        }
    }
    Ok(TopBottomKernels { y_t, y_b, top, bottom, k_t, k_b, coincident, left_right, intersections })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: &str, y: &str) -> Point {
        Point::parse(x, y).unwrap()
    }

    fn square() -> RectPolygon {
        RectPolygon::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap()
    }

    fn lshape() -> RectPolygon {
        RectPolygon::from_ints(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn brute_visible(poly: &RectPolygon, p: &Point, q: &Point) -> bool {
        poly.segment_inside(p, q)
    }

    fn grid(n: i64, lo: i64, hi: i64) -> Vec<Point> {
        let mut v = Vec::new();
        for i in 0..=n {
            for j in 0..=n {
                let x = Coord::int(lo) + Coord::frac(i * (hi - lo), n);
                let y = Coord::int(lo) + Coord::frac(j * (hi - lo), n);
                v.push(Point::new(x, y));
            }
        }
        v
    }

    #[test]
    fn square_sees_everything() {
        let sq = square();
        for p in [pt("0.5", "0.5"), pt("0.5", "0"), pt("0", "0")] {
            let r = visibility_polygon(&sq, &p).unwrap();
            assert_eq!(r.area(), Coord::one());
        }
    }

    #[test]
    fn lshape_region_matches_brute_force() {
        let l = lshape();
        for p in [pt("0.5", "0.5"), pt("0.25", "1.75"), pt("1.75", "0.5"), pt("1", "1"), pt("0", "1"), pt("2", "0.5")] {
            let r = visibility_polygon(&l, &p).unwrap();
            for q in grid(16, 0, 2) {
                if !l.contains(&q) {
                    continue;
                }
                assert_eq!(r.contains(&q), brute_visible(&l, &p, &q), "p={:?} q={:?} region={:?}", p, q, r.polygon);
            }
        }
    }

    #[test]
    fn lshape_interior_start_is_whole_polygon_from_kernel() {
        let l = lshape();
        let r = visibility_polygon(&l, &pt("0.5", "0.5")).unwrap();
        assert_eq!(r.area(), l.area());
        let r = visibility_polygon(&l, &pt("0.25", "1.75")).unwrap();
        assert!(r.area() < l.area());
    }

    #[test]
    fn antenna_between_two_reflex_vertices() {
        // sight line y = 1 from the left passes exactly between two corners
        let poly = RectPolygon::from_ints(&[(0, 0), (2, 0), (2, -2), (4, -2), (4, 4), (1, 4), (1, 2), (0, 2)]).unwrap();
        let p = pt("0", "1");
        let r = visibility_polygon(&poly, &p).unwrap();
        for q in grid(16, 0, 4) {
            if poly.contains(&q) {
                assert_eq!(r.contains(&q), brute_visible(&poly, &p, &q), "q={:?}", q);
            }
        }
        assert!(r.contains(&pt("3.5", "1")));
    }

    #[test]
    fn edge_visibility_examples() {
        let l = lshape();
        // edge (1,1)-(1,2)
        let e = l.edges().iter().find(|e| e.start == Point::ints(1, 1)).unwrap().index;
        let weak = weak_visibility(&l, e);
        let full = full_edge_visibility(&l, e);
        let mut strict = false;
        for q in grid(16, 0, 2) {
            if !l.contains(&q) {
                continue;
            }
            if full.contains(&q) {
                assert!(weak.contains(&q));
            }
            strict |= weak.contains(&q) && !full.contains(&q);
        }
        assert!(strict);
        let west = l.edges().iter().find(|e| e.start == Point::ints(0, 2)).unwrap().index;
        assert!(!edge_fully_visible_from(&pt("1.75", "0.5"), west, &l).unwrap());
        assert!(edge_fully_visible_from(&pt("0", "1"), west, &l).unwrap());
        let sq = square();
        for i in 0..4 {
            assert!(edge_fully_visible_from(&pt("0.5", "0.5"), i, &sq).unwrap());
        }
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&square()).rect.unwrap().area(), Coord::one());
        let k = kernel(&lshape());
        assert_eq!(k.rect, Some(Rect { lo: Point::ints(0, 0), hi: Point::ints(1, 1) }));
        // two niches opening to opposite sides
        let comb = RectPolygon::from_ints(&[(0, 0), (1, 0), (1, -1), (2, -1), (2, 0), (5, 0), (5, 1), (4, 1), (4, 2), (3, 2), (3, 1), (0, 1)]).unwrap();
        assert!(!kernel(&comb).is_star_shaped);
    }

    #[test]
    fn top_bottom_examples() {
        let sq = top_bottom_kernels(&square()).unwrap();
        assert!(sq.coincident);
        // staircase rising to the right, then falling: T above B
        let stairs = RectPolygon::from_ints(&[(0, 0), (4, 0), (4, 2), (6, 2), (6, 4), (8, 4), (8, 6), (4, 6), (4, 3), (0, 3)]).unwrap();
        let k = top_bottom_kernels(&stairs).unwrap();
        assert!(!k.coincident);
        let (t0, _) = k.k_t.clone().unwrap();
        let (b0, _) = k.k_b.clone().unwrap();
        assert!(t0.y > b0.y);
        let comb = RectPolygon::from_ints(&[(0, 0), (5, 0), (5, 2), (4, 2), (4, 1), (1, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(top_bottom_kernels(&comb), Err(KernelError::NotMonotone));
    }
}
