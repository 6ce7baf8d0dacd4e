//! Exact rectilinear geometry: points, polygons, containment, segment
//! predicates and L1 shortest paths.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coord::Coord;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub fn new(x: Coord, y: Coord) -> Point {
        Point { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Point {
        Point::new(Coord::int(x), Coord::int(y))
    }

    /// Parses two decimal strings.
    pub fn parse(x: &str, y: &str) -> Result<Point, crate::coord::ParseCoordError> {
        Ok(Point::new(x.parse()?, y.parse()?))
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, k: &Coord) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        Point::new((&self.x + &o.x).half(), (&self.y + &o.y).half())
    }

    pub fn l1(&self, o: &Point) -> Coord {
        l1_distance(self, o)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn l1_distance(p: &Point, q: &Point) -> Coord {
    (&p.x - &q.x).abs() + (&p.y - &q.y).abs()
}

/// Cross product of `a - o` and `b - o`.
pub fn cross(o: &Point, a: &Point, b: &Point) -> Coord {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

pub fn cross_vec(u: &Point, v: &Point) -> Coord {
    &u.x * &v.y - &u.y * &v.x
}

pub fn dot_vec(u: &Point, v: &Point) -> Coord {
    &u.x * &v.x + &u.y * &v.y
}

pub fn orient(o: &Point, a: &Point, b: &Point) -> i32 {
    cross(o, a, b).signum()
}

/// Closed-segment membership.
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    let (lx, hx) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (ly, hy) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    *lx <= p.x && p.x <= *hx && *ly <= p.y && p.y <= *hy
}

/// Parameter `t` with `p = a + t (b - a)`, assuming `p` is on the line and `a != b`.
pub fn param_on(a: &Point, b: &Point, p: &Point) -> Coord {
    if a.x != b.x {
        (&p.x - &a.x) / (&b.x - &a.x)
    } else {
        (&p.y - &a.y) / (&b.y - &a.y)
    }
}

pub fn lerp(a: &Point, b: &Point, t: &Coord) -> Point {
    Point::new(&a.x + &((&b.x - &a.x) * t), &a.y + &((&b.y - &a.y) * t))
}

/// Intersection of two closed segments described by parameters on the first one.
#[derive(Debug, Clone)]
pub enum SegHit {
    None,
    /// Single point; `proper` when it is interior to both segments and not collinear.
    Point { t: Coord, proper: bool },
    /// Collinear overlap `[t0, t1]` on the first segment.
    Overlap(Coord, Coord),
}

pub fn segment_hit(a: &Point, b: &Point, u: &Point, v: &Point) -> SegHit {
    let r = b.sub(a);
    let s = v.sub(u);
    let den = cross_vec(&r, &s);
    let ua = u.sub(a);
    if den.is_zero() {
        if !cross_vec(&ua, &r).is_zero() {
            return SegHit::None;
        }
        if a == b {
            return if on_segment(a, u, v) {
                SegHit::Point { t: Coord::zero(), proper: false }
            } else {
                SegHit::None
            };
        }
        let rr = dot_vec(&r, &r);
        let t0 = dot_vec(&ua, &r) / &rr;
        let t1 = dot_vec(&v.sub(a), &r) / &rr;
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let lo = lo.max(Coord::zero());
        let hi = hi.min(Coord::one());
        return match lo.cmp(&hi) {
            Ordering::Greater => SegHit::None,
            Ordering::Equal => SegHit::Point { t: lo, proper: false },
            Ordering::Less => SegHit::Overlap(lo, hi),
        };
    }
    let t = cross_vec(&ua, &s) / &den;
    let w = cross_vec(&ua, &r) / &den;
    let zero = Coord::zero();
    let one = Coord::one();
    if t < zero || t > one || w < zero || w > one {
        return SegHit::None;
    }
    let proper = t > zero && t < one && w > zero && w < one;
    SegHit::Point { t, proper }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

impl Location {
    pub fn inside(self) -> bool {
        self != Location::Exterior
    }

    pub fn inside_strict(self) -> bool {
        self == Location::Interior
    }
}

/// Vertex cycle of an arbitrary (possibly weakly simple) polygon.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Polygon {
    pub vertices: Vec<Point>,
}

impl fmt::Debug for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.vertices.iter()).finish()
    }
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Polygon {
        Polygon { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, i: usize) -> (&Point, &Point) {
        let n = self.vertices.len();
        (&self.vertices[i], &self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    /// Twice the signed area (positive for counterclockwise).
    pub fn signed_area2(&self) -> Coord {
        let mut s = Coord::zero();
        for (a, b) in self.edges() {
            s = s + cross_vec(a, b);
        }
        s
    }

    pub fn area(&self) -> Coord {
        self.signed_area2().abs().half()
    }

    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            if v.x < lo.x {
                lo.x = v.x.clone();
            }
            if v.y < lo.y {
                lo.y = v.y.clone();
            }
            if v.x > hi.x {
                hi.x = v.x.clone();
            }
            if v.y > hi.y {
                hi.y = v.y.clone();
            }
        }
        (lo, hi)
    }

    pub fn locate(&self, p: &Point) -> Location {
        let mut inside = false;
        for (a, b) in self.edges() {
            if on_segment(p, a, b) {
                return Location::Boundary;
            }
            if (a.y > p.y) != (b.y > p.y) {
                // x of the crossing compared with p.x, without division
                let lhs = (&p.x - &a.x) * (&b.y - &a.y);
                let rhs = (&b.x - &a.x) * (&p.y - &a.y);
                let before = if b.y > a.y { lhs < rhs } else { lhs > rhs };
                if before {
                    inside = !inside;
                }
            }
        }
        if inside {
            Location::Interior
        } else {
            Location::Exterior
        }
    }

    /// True iff the closed segment `ab` lies in the closed polygon.
    pub fn segment_inside(&self, a: &Point, b: &Point) -> bool {
        if !self.locate(a).inside() || !self.locate(b).inside() {
            return false;
        }
        if a == b {
            return true;
        }
        let mut ts: Vec<Coord> = Vec::new();
        for (u, v) in self.edges() {
            match segment_hit(a, b, u, v) {
                SegHit::None => {}
                SegHit::Point { t, proper } => {
                    if proper {
                        return false;
                    }
                    ts.push(t);
                }
                SegHit::Overlap(t0, t1) => {
                    ts.push(t0);
                    ts.push(t1);
                }
            }
        }
        ts.push(Coord::zero());
        ts.push(Coord::one());
        ts.sort();
        ts.dedup();
        for w in ts.windows(2) {
            let mid = (&w[0] + &w[1]).half();
            if !self.locate(&lerp(a, b, &mid)).inside() {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    East,
    North,
    West,
    South,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::East, Dir::North, Dir::West, Dir::South];

    pub fn vec(self) -> Point {
        match self {
            Dir::East => Point::ints(1, 0),
            Dir::North => Point::ints(0, 1),
            Dir::West => Point::ints(-1, 0),
            Dir::South => Point::ints(0, -1),
        }
    }

    pub fn ccw(self) -> Dir {
        match self {
            Dir::East => Dir::North,
            Dir::North => Dir::West,
            Dir::West => Dir::South,
            Dir::South => Dir::East,
        }
    }

    pub fn cw(self) -> Dir {
        self.ccw().ccw().ccw()
    }

    pub fn opposite(self) -> Dir {
        self.ccw().ccw()
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, Dir::East | Dir::West)
    }

    /// Direction of the axis-parallel vector `b - a`, if it is one.
    pub fn between(a: &Point, b: &Point) -> Option<Dir> {
        if a == b {
            return None;
        }
        if a.y == b.y {
            Some(if b.x > a.x { Dir::East } else { Dir::West })
        } else if a.x == b.x {
            Some(if b.y > a.y { Dir::North } else { Dir::South })
        } else {
            None
        }
    }

    /// `p` moved by `len` in this direction.
    pub fn step(self, p: &Point, len: &Coord) -> Point {
        p.add(&self.vec().scale(len))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub index: usize,
    pub start: Point,
    pub end: Point,
    pub dir: Dir,
    /// Direction pointing from the edge into the polygon.
    pub inward: Dir,
}

impl Edge {
    pub fn axis(&self) -> Axis {
        if self.dir.is_horizontal() {
            Axis::Horizontal
        } else {
            Axis::Vertical
        }
    }

    pub fn length(&self) -> Coord {
        l1_distance(&self.start, &self.end)
    }

    pub fn contains(&self, p: &Point) -> bool {
        on_segment(p, &self.start, &self.end)
    }

    /// Signed offset of `p` from the edge's line, positive on the interior side.
    pub fn inner_offset(&self, p: &Point) -> Coord {
        match self.inward {
            Dir::North => &p.y - &self.start.y,
            Dir::South => &self.start.y - &p.y,
            Dir::East => &p.x - &self.start.x,
            Dir::West => &self.start.x - &p.x,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("polygon needs at least 4 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("edge {0} is neither horizontal nor vertical")]
    NotRectilinear(usize),
    #[error("edge {0} has zero length")]
    ZeroLengthEdge(usize),
    #[error("edges {0} and {1} are collinear")]
    CollinearEdges(usize, usize),
    #[error("edges {0} and {1} intersect")]
    SelfIntersecting(usize, usize),
    #[error("polygon has zero area")]
    NotCCW,
    #[error("point {0:?} lies outside the polygon")]
    PointOutside(Point),
    #[error("segment {0:?} -> {1:?} is not axis-parallel")]
    NonAxisParallel(Point, Point),
    #[error("segment {0:?} -> {1:?} leaves the polygon")]
    SegmentOutside(Point, Point),
}

/// A validated simple rectilinear polygon in counterclockwise order.
///
/// The vertex cycle is rotated so that it starts at the lexicographically
/// smallest `(x, y)` vertex, which makes every cache independent of the
/// input's starting vertex.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct RectPolygon {
    poly: Polygon,
    edges: Vec<Edge>,
    reflex: Vec<usize>,
    a_min: Coord,
    a_max: Coord,
}

impl fmt::Debug for RectPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RectPolygon{:?}", self.poly)
    }
}

impl TryFrom<Vec<Point>> for RectPolygon {
    type Error = GeomError;
    fn try_from(v: Vec<Point>) -> Result<Self, GeomError> {
        validate_polygon(v)
    }
}

impl From<RectPolygon> for Vec<Point> {
    fn from(p: RectPolygon) -> Vec<Point> {
        p.poly.vertices
    }
}

pub fn validate_polygon(vertices: Vec<Point>) -> Result<RectPolygon, GeomError> {
    let n = vertices.len();
    if n < 4 {
        return Err(GeomError::TooFewVertices(n));
    }
    let dirs: Vec<Dir> = (0..n)
        .map(|i| {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            if a == b {
                Err(GeomError::ZeroLengthEdge(i))
            } else {
                Dir::between(a, b).ok_or(GeomError::NotRectilinear(i))
            }
        })
        .collect::<Result<_, _>>()?;
    for i in 0..n {
        let j = (i + 1) % n;
        if dirs[i].is_horizontal() == dirs[j].is_horizontal() {
            return Err(GeomError::CollinearEdges(i, j));
        }
    }
    let raw = Polygon::new(vertices);
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (a, b) = raw.edge(i);
            let (u, v) = raw.edge(j);
            if !matches!(segment_hit(a, b, u, v), SegHit::None) {
                return Err(GeomError::SelfIntersecting(i, j));
            }
        }
    }
    let area = raw.signed_area2();
    if area.is_zero() {
        return Err(GeomError::NotCCW);
    }
    let mut vs = raw.vertices;
    if area.is_negative() {
        vs.reverse();
    }
    let first = (0..n).min_by(|&i, &j| vs[i].cmp(&vs[j])).unwrap();
    vs.rotate_left(first);
    Ok(RectPolygon::from_ccw(vs))
}

impl RectPolygon {
    fn from_ccw(vs: Vec<Point>) -> RectPolygon {
        let n = vs.len();
        let poly = Polygon::new(vs);
        let mut edges = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = poly.edge(i);
            let dir = Dir::between(a, b).expect("validated");
            edges.push(Edge { index: i, start: a.clone(), end: b.clone(), dir, inward: dir.ccw() });
        }
        let mut reflex = Vec::new();
        for i in 0..n {
            let prev = &edges[(i + n - 1) % n];
            let next = &edges[i];
            // right turn at vertex i in a ccw polygon
            if prev.dir.cw() == next.dir {
                reflex.push(i);
            }
        }
        let a_min = edges.iter().map(|e| e.length()).min().unwrap();
        let a_max = edges.iter().map(|e| e.length()).max().unwrap();
        RectPolygon { poly, edges, reflex, a_min, a_max }
    }

    pub fn from_ints(pts: &[(i64, i64)]) -> Result<RectPolygon, GeomError> {
        validate_polygon(pts.iter().map(|&(x, y)| Point::ints(x, y)).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.poly.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.poly.vertices[i % self.len()]
    }

    pub fn len(&self) -> usize {
        self.poly.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_polygon(&self) -> &Polygon {
        &self.poly
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i % self.len()]
    }

    pub fn reflex_vertices(&self) -> &[usize] {
        &self.reflex
    }

    pub fn is_reflex(&self, i: usize) -> bool {
        self.reflex.binary_search(&(i % self.len())).is_ok()
    }

    pub fn a_min(&self) -> &Coord {
        &self.a_min
    }

    pub fn a_max(&self) -> &Coord {
        &self.a_max
    }

    pub fn aspect_ratio(&self) -> Coord {
        &self.a_max / &self.a_min
    }

    pub fn area(&self) -> Coord {
        self.poly.area()
    }

    pub fn locate(&self, p: &Point) -> Location {
        self.poly.locate(p)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.locate(p).inside()
    }

    pub fn segment_inside(&self, a: &Point, b: &Point) -> bool {
        self.poly.segment_inside(a, b)
    }

    /// Index of a vertex equal to `p`.
    pub fn vertex_index(&self, p: &Point) -> Option<usize> {
        self.poly.vertices.iter().position(|v| v == p)
    }

    /// Indices of the edges whose closed segment contains `p`.
    pub fn edges_at(&self, p: &Point) -> Vec<usize> {
        self.edges.iter().filter(|e| e.contains(p)).map(|e| e.index).collect()
    }

    /// Perimeter length.
    pub fn perimeter(&self) -> Coord {
        self.edges.iter().map(|e| e.length()).sum()
    }

    /// Arc length from vertex 0 along the ccw boundary to the point `p` on edge `i`.
    pub fn boundary_position(&self, i: usize, p: &Point) -> Coord {
        let before: Coord = self.edges[..i].iter().map(|e| e.length()).sum();
        before + l1_distance(&self.edges[i].start, p)
    }

    /// Boundary position of a boundary point; `None` if `p` is not on the boundary.
    pub fn boundary_position_of(&self, p: &Point) -> Option<Coord> {
        let i = self.edges.iter().position(|e| e.contains(p))?;
        Some(self.boundary_position(i, p))
    }

    /// Point at ccw arc length `s` (taken modulo the perimeter).
    pub fn point_at(&self, s: &Coord) -> Point {
        let per = self.perimeter();
        let mut s = s.clone();
        while s.is_negative() {
            s = s + &per;
        }
        while s >= per {
            s = s - &per;
        }
        for e in &self.edges {
            let l = e.length();
            if s <= l {
                return e.dir.step(&e.start, &s);
            }
            s = s - l;
        }
        self.poly.vertices[0].clone()
    }

    /// Shortest L1 path inside the polygon.
    pub fn geodesic_l1_path(&self, p: &Point, q: &Point) -> Result<PathPolyline, GeomError> {
        for x in [p, q] {
            if !self.contains(x) {
                return Err(GeomError::PointOutside(x.clone()));
            }
        }
        if p == q {
            return Ok(PathPolyline { points: vec![p.clone()], length: Coord::zero() });
        }
        if (p.x == q.x || p.y == q.y)
            && self.segment_inside(p, q) {
                return Ok(PathPolyline { points: vec![p.clone(), q.clone()], length: l1_distance(p, q) });
            }
        let extra = [p.clone(), q.clone()];
        let grid = HananGrid::new(self.vertices().iter().chain(extra.iter()), |a, b| {
            let m = a.midpoint(b);
            self.contains(&m)
        }, |a| self.contains(a));
        let pts = grid.shortest(p, q).expect("simple polygon is connected");
        Ok(PathPolyline::from_points_unchecked(pts))
    }

    pub fn geodesic_distance(&self, p: &Point, q: &Point) -> Result<Coord, GeomError> {
        Ok(self.geodesic_l1_path(p, q)?.length)
    }

    /// Hanan grid over the vertices and `extra`, for many geodesic queries at once.
    pub fn geodesic_grid<'a>(&self, extra: impl Iterator<Item = &'a Point>) -> GeodesicGrid {
        let pts: Vec<Point> = self.vertices().iter().cloned().chain(extra.cloned()).collect();
        let grid = HananGrid::new(pts.iter(), |a, b| self.contains(&a.midpoint(b)), |a| self.contains(a));
        GeodesicGrid { grid }
    }

    /// Lowest boundary point directly below `p` (first hit of a downward ray).
    pub fn first_hit_below(&self, p: &Point) -> Option<Point> {
        let mut best: Option<Coord> = None;
        for e in &self.edges {
            if e.dir.is_horizontal() {
                let (lo, hi) = if e.start.x <= e.end.x { (&e.start.x, &e.end.x) } else { (&e.end.x, &e.start.x) };
                if *lo <= p.x && p.x <= *hi && e.start.y <= p.y
                    && best.as_ref().is_none_or(|b| e.start.y > *b) {
                        best = Some(e.start.y.clone());
                    }
            } else if e.start.x == p.x {
                let (lo, hi) = if e.start.y <= e.end.y { (&e.start.y, &e.end.y) } else { (&e.end.y, &e.start.y) };
                if *lo <= p.y {
                    let top = if *hi < p.y { hi.clone() } else { p.y.clone() };
                    if best.as_ref().is_none_or(|b| top > *b) {
                        best = Some(top);
                    }
                }
            }
        }
        best.map(|y| Point::new(p.x.clone(), y))
    }
}

/// Axis-parallel polyline with cached L1 length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathPolyline {
    pub points: Vec<Point>,
    pub length: Coord,
}

impl PathPolyline {
    pub fn new(points: Vec<Point>, within: &RectPolygon) -> Result<PathPolyline, GeomError> {
        for w in points.windows(2) {
            if w[0] != w[1] && Dir::between(&w[0], &w[1]).is_none() {
                return Err(GeomError::NonAxisParallel(w[0].clone(), w[1].clone()));
            }
            if !within.segment_inside(&w[0], &w[1]) {
                return Err(GeomError::SegmentOutside(w[0].clone(), w[1].clone()));
            }
        }
        if let [p] = points.as_slice() {
            if !within.contains(p) {
                return Err(GeomError::PointOutside(p.clone()));
            }
        }
        Ok(PathPolyline::from_points_unchecked(points))
    }

    /// Builds the polyline without containment checks; drops repeated and
    /// collinear interior points.
    pub fn from_points_unchecked(points: Vec<Point>) -> PathPolyline {
        let mut out: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if out.last() == Some(&p) {
                continue;
            }
            if out.len() >= 2 {
                let a = &out[out.len() - 2];
                let b = &out[out.len() - 1];
                if orient(a, b, &p) == 0 && dot_vec(&b.sub(a), &p.sub(b)).is_positive() {
                    out.pop();
                }
            }
            out.push(p);
        }
        let length = out.windows(2).map(|w| l1_distance(&w[0], &w[1])).sum();
        PathPolyline { points: out, length }
    }

    pub fn start(&self) -> &Point {
        &self.points[0]
    }

    pub fn end(&self) -> &Point {
        self.points.last().unwrap()
    }

    pub fn bends(&self) -> usize {
        self.points.len().saturating_sub(2)
    }
}

/// Grid spanned by the x and y coordinates of a point set. Nodes and unit
/// links are admitted by caller predicates.
pub(crate) struct HananGrid {
    xs: Vec<Coord>,
    ys: Vec<Coord>,
    node_ok: Vec<bool>,
    // link to the east / north neighbour
    east_ok: Vec<bool>,
    north_ok: Vec<bool>,
}

/// Exact L1 geodesic distances between points of one Hanan grid.
pub struct GeodesicGrid {
    grid: HananGrid,
}

impl GeodesicGrid {
    /// Distance from `p` to every grid node, indexed like [`GeodesicGrid::node`].
    pub fn field(&self, p: &Point) -> Option<Vec<Option<Coord>>> {
        let s = self.grid.index_of(p)?;
        self.grid.node_ok[s].then(|| self.grid.all_distances(s))
    }

    pub fn node(&self, p: &Point) -> Option<usize> {
        self.grid.index_of(p).filter(|&k| self.grid.node_ok[k])
    }

    pub fn distance(&self, p: &Point, q: &Point) -> Option<Coord> {
        let t = self.node(q)?;
        self.field(p)?[t].clone()
    }

    pub fn path(&self, p: &Point, q: &Point) -> Option<PathPolyline> {
        self.grid.shortest(p, q).map(PathPolyline::from_points_unchecked)
    }
}

impl HananGrid {
    pub(crate) fn new<'a>(
        pts: impl Iterator<Item = &'a Point>,
        link: impl Fn(&Point, &Point) -> bool,
        node: impl Fn(&Point) -> bool,
    ) -> HananGrid {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for p in pts {
            xs.push(p.x.clone());
            ys.push(p.y.clone());
        }
        xs.sort();
        xs.dedup();
        ys.sort();
        ys.dedup();
        let (nx, ny) = (xs.len(), ys.len());
        let at = |i: usize, j: usize| Point::new(xs[i].clone(), ys[j].clone());
        let mut node_ok = vec![false; nx * ny];
        for i in 0..nx {
            for j in 0..ny {
                node_ok[j * nx + i] = node(&at(i, j));
            }
        }
        let mut east_ok = vec![false; nx * ny];
        let mut north_ok = vec![false; nx * ny];
        for i in 0..nx {
            for j in 0..ny {
                let k = j * nx + i;
                if !node_ok[k] {
                    continue;
                }
                if i + 1 < nx && node_ok[k + 1] {
                    east_ok[k] = link(&at(i, j), &at(i + 1, j));
                }
                if j + 1 < ny && node_ok[k + nx] {
                    north_ok[k] = link(&at(i, j), &at(i, j + 1));
                }
            }
        }
        HananGrid { xs, ys, node_ok, east_ok, north_ok }
    }

    fn index_of(&self, p: &Point) -> Option<usize> {
        let i = self.xs.binary_search(&p.x).ok()?;
        let j = self.ys.binary_search(&p.y).ok()?;
        Some(j * self.xs.len() + i)
    }

    fn point(&self, k: usize) -> Point {
        let nx = self.xs.len();
        Point::new(self.xs[k % nx].clone(), self.ys[k / nx].clone())
    }

    /// Plain Dijkstra from node `s` to all nodes.
    fn all_distances(&self, s: usize) -> Vec<Option<Coord>> {
        let nx = self.xs.len();
        let n = self.node_ok.len();
        let mut dist: Vec<Option<Coord>> = vec![None; n];
        let mut heap = BinaryHeap::new();
        dist[s] = Some(Coord::zero());
        heap.push(std::cmp::Reverse((Coord::zero(), s)));
        while let Some(std::cmp::Reverse((d, k))) = heap.pop() {
            if dist[k].as_ref() != Some(&d) {
                continue;
            }
            let (i, j) = (k % nx, k / nx);
            let mut nbrs: Vec<(usize, Coord)> = Vec::with_capacity(4);
            if self.east_ok[k] {
                nbrs.push((k + 1, &self.xs[i + 1] - &self.xs[i]));
            }
            if i > 0 && self.east_ok[k - 1] {
                nbrs.push((k - 1, &self.xs[i] - &self.xs[i - 1]));
            }
            if self.north_ok[k] {
                nbrs.push((k + nx, &self.ys[j + 1] - &self.ys[j]));
            }
            if j > 0 && self.north_ok[k - nx] {
                nbrs.push((k - nx, &self.ys[j] - &self.ys[j - 1]));
            }
            for (nk, len) in nbrs {
                let nd = &d + &len;
                if dist[nk].as_ref().is_none_or(|o| nd < *o) {
                    dist[nk] = Some(nd.clone());
                    heap.push(std::cmp::Reverse((nd, nk)));
                }
            }
        }
        dist
    }

    /// Dijkstra over (node, heading) states; cost is (length, bends).
    pub(crate) fn shortest(&self, p: &Point, q: &Point) -> Option<Vec<Point>> {
        let s = self.index_of(p)?;
        let t = self.index_of(q)?;
        if !self.node_ok[s] || !self.node_ok[t] {
            return None;
        }
        let nx = self.xs.len();
        let n = self.node_ok.len();
        // heading 0..4 for Dir::ALL, 4 for "no move yet"
        let state = |k: usize, h: usize| k * 5 + h;
        let mut best: Vec<Option<(Coord, usize)>> = vec![None; n * 5];
        let mut prev: Vec<usize> = vec![usize::MAX; n * 5];
        #[derive(PartialEq, Eq)]
        struct Item(Coord, usize, usize);
        impl Ord for Item {
            fn cmp(&self, o: &Self) -> Ordering {
                o.0.cmp(&self.0).then(o.1.cmp(&self.1)).then(o.2.cmp(&self.2))
            }
        }
        impl PartialOrd for Item {
            fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
                Some(self.cmp(o))
            }
        }
        let mut heap = BinaryHeap::new();
        best[state(s, 4)] = Some((Coord::zero(), 0));
        heap.push(Item(Coord::zero(), 0, state(s, 4)));
        let mut goal = None;
        while let Some(Item(d, b, st)) = heap.pop() {
            if best[st].as_ref() != Some(&(d.clone(), b)) {
                continue;
            }
            let k = st / 5;
            let h = st % 5;
            if k == t {
                goal = Some(st);
                break;
            }
            let (i, j) = (k % nx, k / nx);
            for (hd, dir) in Dir::ALL.iter().enumerate() {
                let nk = match dir {
                    Dir::East if self.east_ok[k] => k + 1,
                    Dir::West if i > 0 && self.east_ok[k - 1] => k - 1,
                    Dir::North if self.north_ok[k] => k + nx,
                    Dir::South if j > 0 && self.north_ok[k - nx] => k - nx,
                    _ => continue,
                };
                let len = match dir {
                    Dir::East | Dir::West => (&self.xs[nk % nx] - &self.xs[i]).abs(),
                    _ => (&self.ys[nk / nx] - &self.ys[j]).abs(),
                };
                let nd = &d + &len;
                let nb = b + usize::from(h != 4 && h != hd);
                let ns = state(nk, hd);
                let better = match &best[ns] {
                    None => true,
                    Some((od, ob)) => (&nd, nb) < (od, *ob),
                };
                if better {
                    best[ns] = Some((nd.clone(), nb));
                    prev[ns] = st;
                    heap.push(Item(nd, nb, ns));
                }
            }
        }
        let mut st = goal?;
        let mut pts = vec![self.point(st / 5)];
        while prev[st] != usize::MAX {
            st = prev[st];
            pts.push(self.point(st / 5));
        }
        pts.reverse();
        Some(pts)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn c(s: &str) -> Coord {
        s.parse().unwrap()
    }

    fn pt(x: &str, y: &str) -> Point {
        Point::parse(x, y).unwrap()
    }

    pub(crate) fn square() -> RectPolygon {
        RectPolygon::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap()
    }

    pub(crate) fn lshape() -> RectPolygon {
        RectPolygon::from_ints(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn validates_fixtures() {
        let sq = square();
        assert_eq!(sq.aspect_ratio(), Coord::one());
        assert_eq!(*sq.a_min(), Coord::one());
        let l = lshape();
        assert_eq!(l.reflex_vertices().len(), 1);
        assert_eq!(*l.vertex(l.reflex_vertices()[0]), Point::ints(1, 1));
        assert_eq!(*l.a_min(), Coord::one());
        assert_eq!(l.aspect_ratio(), Coord::int(2));
    }

    #[test]
    fn rejects_bad_input() {
        let tri = vec![Point::ints(0, 0), Point::ints(1, 1), Point::ints(2, 0)];
        assert_eq!(validate_polygon(tri), Err(GeomError::TooFewVertices(3)));
        let diag = vec![Point::ints(0, 0), Point::ints(1, 1), Point::ints(2, 0), Point::ints(2, -1)];
        assert!(matches!(validate_polygon(diag), Err(GeomError::NotRectilinear(_))));
        let col = RectPolygon::from_ints(&[(0, 0), (1, 0), (2, 0), (2, 1), (0, 1)]);
        assert!(matches!(col, Err(GeomError::CollinearEdges(_, _))));
        let bow = RectPolygon::from_ints(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, -1), (0, -1)]);
        assert!(matches!(bow, Err(GeomError::SelfIntersecting(_, _))));
    }

    #[test]
    fn clockwise_input_is_normalized() {
        let cw = RectPolygon::from_ints(&[(0, 2), (1, 2), (1, 1), (2, 1), (2, 0), (0, 0)]).unwrap();
        assert_eq!(cw, lshape());
        assert!(cw.as_polygon().signed_area2().is_positive());
    }

    #[test]
    fn l1_examples() {
        assert_eq!(l1_distance(&Point::ints(0, 0), &Point::ints(3, 4)), Coord::int(7));
        assert_eq!(l1_distance(&Point::ints(0, 0), &Point::ints(-2, 5)), Coord::int(7));
        assert_eq!(l1_distance(&pt("1.5", "2"), &pt("1.5", "2")), Coord::zero());
    }

    #[test]
    fn contains_examples() {
        assert_eq!(square().locate(&pt("0.5", "0.5")), Location::Interior);
        assert_eq!(square().locate(&pt("0", "0.5")), Location::Boundary);
        assert_eq!(lshape().locate(&pt("1.5", "1.5")), Location::Exterior);
        assert_eq!(lshape().locate(&pt("1", "1")), Location::Boundary);
    }

    #[test]
    fn segment_inside_examples() {
        assert!(square().segment_inside(&pt("0.1", "0.1"), &pt("0.9", "0.9")));
        assert!(!lshape().segment_inside(&pt("1.75", "0.5"), &pt("0.5", "1.75")));
        assert!(square().segment_inside(&pt("0", "0"), &pt("1", "0")));
        // grazing the reflex vertex stays inside
        assert!(lshape().segment_inside(&pt("1.5", "0.5"), &pt("0.5", "1.5")));
        assert!(!lshape().segment_inside(&pt("1.5", "0.5"), &pt("1.5", "1.5")));
    }

    #[test]
    fn geodesic_examples() {
        let sq = square();
        assert_eq!(sq.geodesic_l1_path(&pt("0", "0"), &pt("1", "1")).unwrap().length, Coord::int(2));
        let l = lshape();
        let path = l.geodesic_l1_path(&pt("1.75", "0.5"), &pt("0.5", "1.75")).unwrap();
        assert_eq!(path.length, c("2.5"));
        assert_eq!(path.bends(), 1);
        for w in path.points.windows(2) {
            assert!(l.segment_inside(&w[0], &w[1]));
        }
        let same = sq.geodesic_l1_path(&pt("0.5", "0.5"), &pt("0.5", "0.5")).unwrap();
        assert_eq!(same.length, Coord::zero());
        assert_eq!(same.points.len(), 1);
        assert!(matches!(sq.geodesic_l1_path(&pt("2", "0"), &pt("0", "0")), Err(GeomError::PointOutside(_))));
    }

    #[test]
    fn rotation_invariance() {
        let base = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)];
        let reference = RectPolygon::from_ints(&base).unwrap();
        for k in 0..base.len() {
            let mut v = base.to_vec();
            v.rotate_left(k);
            assert_eq!(RectPolygon::from_ints(&v).unwrap(), reference);
        }
    }

    #[test]
    fn first_hit_below_examples() {
        let l = lshape();
        assert_eq!(l.first_hit_below(&pt("0.5", "1.5")), Some(pt("0.5", "0")));
        assert_eq!(l.first_hit_below(&pt("1", "1.5")), Some(pt("1", "1.5")));
    }
}
