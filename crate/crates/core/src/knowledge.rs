//! What the robot can infer from its scans: the boundary pieces seen so
//! far, the clockwise chain from the start, the frontier, and free space
//! for planning moves. Nothing here looks at the hidden polygon.

use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::cmp::Reverse;

use crate::coord::Coord;
use crate::geom::{on_segment, orient, segment_hit, validate_polygon, Dir, Point, Polygon, RectPolygon, SegHit};
use crate::simulator::ScanRecord;
use crate::visibility::RegionEdgeKind;

/// Maximal seen stretch of one boundary line, oriented like the polygon (interior on the left).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub start: Point,
    pub end: Point,
    pub dir: Dir,
}

impl Piece {
    pub fn contains(&self, p: &Point) -> bool {
        on_segment(p, &self.start, &self.end)
    }

    pub fn length(&self) -> Coord {
        self.start.l1(&self.end)
    }
}

/// A scan region with counterclockwise outline.
#[derive(Debug, Clone)]
pub struct KnownRegion {
    pub viewpoint: Point,
    pub outline: Polygon,
    pub kinds: Vec<RegionEdgeKind>,
}

/// Ray `origin + t dir`, t >= 0, the part of an extension still to be reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    pub origin: Point,
    pub dir: Dir,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrontierKind {
    /// `f` is a reflex corner whose clockwise side is hidden.
    Reflex,
    /// `f` lies behind the sight-blocking corner `b`.
    Blocked { b: Point },
    /// No window meets `f`; only `f` itself is a safe target.
    Bare,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frontier {
    pub f: Point,
    /// Direction of the seen piece that ends the chain at `f`.
    pub piece_dir: Dir,
    pub kind: FrontierKind,
    pub ext: Option<Ray>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainEnd {
    Gap(Frontier),
    Closed,
}

#[derive(Debug, Clone)]
pub struct Chain {
    /// Corners passed walking clockwise from the anchor.
    pub corners: Vec<Point>,
    pub end: ChainEnd,
}

#[derive(Debug, Clone)]
pub struct Knowledge {
    pub regions: Vec<KnownRegion>,
    pub pieces: Vec<Piece>,
    by_start: HashMap<Point, Vec<usize>>,
    by_end: HashMap<Point, Vec<usize>>,
}

fn normalize(rec: &ScanRecord) -> KnownRegion {
    let pts = rec.region.polygon.vertices.clone();
    let kinds = rec.region.kinds.clone();
    let n = pts.len();
    if rec.region.polygon.signed_area2().is_negative() && n > 0 {
        let rev: Vec<Point> = pts.iter().rev().cloned().collect();
        let rk: Vec<RegionEdgeKind> = (0..n).map(|j| kinds[(2 * n - 2 - j) % n]).collect();
        KnownRegion { viewpoint: rec.p.clone(), outline: Polygon::new(rev), kinds: rk }
    } else {
        KnownRegion { viewpoint: rec.p.clone(), outline: Polygon::new(pts), kinds }
    }
}

/// Boundary edges of a region outline with their polygon orientation.
fn oriented_pieces(r: &KnownRegion) -> Vec<(Point, Point, Dir)> {
    let n = r.outline.len();
    let mut out = Vec::new();
    for i in 0..n {
        if r.kinds[i] != RegionEdgeKind::Boundary {
            continue;
        }
        let (u, v) = r.outline.edge(i);
        let Some(d) = Dir::between(u, v) else { continue };
        // a spike traversed both ways has no interior side
        let spike = (0..n).any(|j| {
            if j == i {
                return false;
            }
            let (x, y) = r.outline.edge(j);
            Dir::between(x, y) == Some(d.opposite()) && matches!(segment_hit(u, v, x, y), SegHit::Overlap(..))
        });
        if spike {
            continue;
        }
        // the viewpoint sees the edge from the interior side (left)
        match orient(u, v, &r.viewpoint) {
            o if o < 0 => out.push((v.clone(), u.clone(), d.opposite())),
            _ => out.push((u.clone(), v.clone(), d)),
        }
    }
    out
}

impl Knowledge {
    pub fn from_scans(scans: &[ScanRecord]) -> Knowledge {
        let regions: Vec<KnownRegion> = scans.iter().map(normalize).collect();
        // group by (direction, supporting line) and merge intervals
        let mut groups: BTreeMap<(Dir, Coord), Vec<(Coord, Coord)>> = BTreeMap::new();
        for r in &regions {
            for (u, v, d) in oriented_pieces(r) {
                let (line, a, b) = if d.is_horizontal() { (u.y.clone(), u.x.clone(), v.x.clone()) } else { (u.x.clone(), u.y.clone(), v.y.clone()) };
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                groups.entry((d, line)).or_default().push((lo, hi));
            }
        }
        let mut pieces = Vec::new();
        for ((d, line), mut ivs) in groups {
            ivs.sort();
            let mut merged: Vec<(Coord, Coord)> = Vec::new();
            for (lo, hi) in ivs {
                match merged.last_mut() {
                    Some(last) if lo <= last.1 => {
                        if hi > last.1 {
                            last.1 = hi;
                        }
                    }
                    _ => merged.push((lo, hi)),
                }
            }
            for (lo, hi) in merged {
                let at = |c: &Coord| if d.is_horizontal() { Point::new(c.clone(), line.clone()) } else { Point::new(line.clone(), c.clone()) };
                let (s, e) = match d {
                    Dir::East | Dir::North => (at(&lo), at(&hi)),
                    Dir::West | Dir::South => (at(&hi), at(&lo)),
                };
                pieces.push(Piece { start: s, end: e, dir: d });
            }
        }
        let mut by_start: HashMap<Point, Vec<usize>> = HashMap::new();
        let mut by_end: HashMap<Point, Vec<usize>> = HashMap::new();
        for (i, p) in pieces.iter().enumerate() {
            by_start.entry(p.start.clone()).or_default().push(i);
            by_end.entry(p.end.clone()).or_default().push(i);
        }
        Knowledge { regions, pieces, by_start, by_end }
    }

    /// Total length of seen boundary.
    pub fn seen_length(&self) -> Coord {
        self.pieces.iter().map(|p| p.length()).sum()
    }

    /// Piece that continues clockwise from the start of piece `k`.
    fn before(&self, k: usize) -> Option<usize> {
        let p = &self.pieces[k];
        self.by_end
            .get(&p.start)?
            .iter()
            .copied()
            .find(|&q| self.pieces[q].dir.is_horizontal() != p.dir.is_horizontal())
    }

    /// Piece that continues counterclockwise from the end of piece `k`.
    fn after(&self, k: usize) -> Option<usize> {
        let p = &self.pieces[k];
        self.by_start
            .get(&p.end)?
            .iter()
            .copied()
            .find(|&q| self.pieces[q].dir.is_horizontal() != p.dir.is_horizontal())
    }

    /// Piece ends with no perpendicular continuation.
    pub fn gaps(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for k in 0..self.pieces.len() {
            if self.before(k).is_none() {
                out.push(self.pieces[k].start.clone());
            }
            if self.after(k).is_none() {
                out.push(self.pieces[k].end.clone());
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.regions.iter().any(|r| r.outline.locate(p).inside())
    }

    /// The closed segment lies in the union of scan regions.
    pub fn segment_free(&self, a: &Point, b: &Point) -> bool {
        if let Some(r) = self.regions.iter().find(|r| r.outline.segment_inside(a, b)) {
            let _ = r;
            return true;
        }
        if a == b {
            return self.contains(a);
        }
        let mut ts = vec![Coord::zero(), Coord::one()];
        for r in &self.regions {
            for (u, v) in r.outline.edges() {
                match segment_hit(a, b, u, v) {
                    SegHit::None => {}
                    SegHit::Point { t, .. } => ts.push(t),
                    SegHit::Overlap(t0, t1) => {
                        ts.push(t0);
                        ts.push(t1);
                    }
                }
            }
        }
        ts.sort();
        ts.dedup();
        for t in &ts {
            if !self.contains(&crate::geom::lerp(a, b, t)) {
                return false;
            }
        }
        ts.windows(2).all(|w| self.contains(&crate::geom::lerp(a, b, &(&w[0] + &w[1]).half())))
    }

    /// Boundary reference point of the start: the start itself when it lies
    /// on seen boundary, else the seen boundary straight below it.
    pub fn anchor(&self, start: &Point) -> Option<Point> {
        if self.pieces.iter().any(|p| p.contains(start)) {
            return Some(start.clone());
        }
        self.pieces
            .iter()
            .filter(|p| p.dir == Dir::East && p.start.x <= start.x && start.x <= p.end.x && p.start.y < start.y)
            .map(|p| Point::new(start.x.clone(), p.start.y.clone()))
            .max_by(|a, b| a.y.cmp(&b.y))
    }

    /// Walks clockwise from `anchor` until the first gap.
    pub fn chain(&self, anchor: &Point) -> Option<Chain> {
        // the piece reached first when leaving the anchor clockwise
        let mut k0 = None;
        for (i, p) in self.pieces.iter().enumerate() {
            if p.contains(anchor) && p.start != *anchor {
                k0 = Some(i);
                break;
            }
        }
        let k0 = match k0 {
            Some(k) => k,
            None => {
                let k = self.by_start.get(anchor)?.first().copied()?;
                let f = self.pieces[k].start.clone();
                return Some(Chain { corners: Vec::new(), end: ChainEnd::Gap(self.classify_gap(f, k)) });
            }
        };
        let mut corners = Vec::new();
        let mut k = k0;
        for _ in 0..=self.pieces.len() {
            match self.before(k) {
                Some(q) => {
                    corners.push(self.pieces[k].start.clone());
                    if q == k0 {
                        return Some(Chain { corners, end: ChainEnd::Closed });
                    }
                    k = q;
                }
                None => {
                    let f = self.pieces[k].start.clone();
                    return Some(Chain { corners, end: ChainEnd::Gap(self.classify_gap(f, k)) });
                }
            }
        }
        None
    }

    /// The seen boundary closes into the whole polygon.
    pub fn polygon(&self, anchor: &Point) -> Option<RectPolygon> {
        let ch = self.chain(anchor)?;
        if ch.end != ChainEnd::Closed {
            return None;
        }
        let mut pts = ch.corners;
        pts.reverse();
        validate_polygon(pts).ok()
    }

    fn classify_gap(&self, f: Point, k: usize) -> Frontier {
        let piece_dir = self.pieces[k].dir;
        let mut blocker: Option<Point> = None;
        for r in &self.regions {
            let n = r.outline.len();
            for i in 0..n {
                if r.outline.vertices[i] != f {
                    continue;
                }
                for j in [(i + n - 1) % n, i] {
                    if r.kinds[j] != RegionEdgeKind::Window {
                        continue;
                    }
                    let (u, v) = r.outline.edge(j);
                    let g = if *u == f { v } else { u };
                    if on_segment(&f, &r.viewpoint, g) && f != *g {
                        // f is the near end: it occludes, so it is a reflex corner and
                        // the hidden side ending at f continues straight on past it
                        return Frontier {
                            ext: Some(Ray { origin: f.clone(), dir: piece_dir.ccw() }),
                            f,
                            piece_dir,
                            kind: FrontierKind::Reflex,
                        };
                    }
                    if on_segment(g, &r.viewpoint, &f) && blocker.is_none() {
                        blocker = Some(g.clone());
                    }
                }
            }
        }
        match blocker {
            Some(b) => {
                let ext = self.hidden_side_extension(&b, &f);
                Frontier { f, piece_dir, kind: FrontierKind::Blocked { b }, ext }
            }
            None => Frontier { f, piece_dir, kind: FrontierKind::Bare, ext: None },
        }
    }

    /// Extension of the side of `b` that is not seen, beyond `b`.
    fn hidden_side_extension(&self, b: &Point, f: &Point) -> Option<Ray> {
        let out: Vec<usize> = self.by_start.get(b).cloned().unwrap_or_default();
        let inc: Vec<usize> = self.by_end.get(b).cloned().unwrap_or_default();
        match (out.first(), inc.first()) {
            // seen outgoing side; the incoming side continues forward past b
            (Some(&o), None) => Some(Ray { origin: b.clone(), dir: self.pieces[o].dir.ccw() }),
            // seen incoming side; the outgoing side extends backward past b
            (None, Some(&i)) => Some(Ray { origin: b.clone(), dir: self.pieces[i].dir.cw().opposite() }),
            (Some(&o), Some(&i)) => {
                // both seen: take the extension heading towards the hidden stretch
                let c1 = Ray { origin: b.clone(), dir: self.pieces[o].dir.opposite() };
                let c2 = Ray { origin: b.clone(), dir: self.pieces[i].dir };
                let toward = |r: &Ray| crate::geom::dot_vec(&r.dir.vec(), &f.sub(b));
                Some(if toward(&c1) >= toward(&c2) { c1 } else { c2 })
            }
            (None, None) => None,
        }
    }

    /// Farthest point of the ray reachable from its origin through known space,
    /// stopping at the first seen wall.
    pub fn ray_free_extent(&self, ray: &Ray) -> Point {
        let o = &ray.origin;
        if !self.contains(o) {
            return o.clone();
        }
        let mut span = Coord::one();
        for r in &self.regions {
            for v in &r.outline.vertices {
                span = span + v.l1(o);
            }
        }
        let far = ray.dir.step(o, &span);
        let mut cands: Vec<(Coord, Point)> = Vec::new();
        // the extension ends at its first contact with seen boundary
        let mut wall: Option<(Coord, Point)> = None;
        for p in &self.pieces {
            let t = match segment_hit(o, &far, &p.start, &p.end) {
                SegHit::None => None,
                SegHit::Point { t, .. } => Some(t),
                SegHit::Overlap(t0, _) => Some(t0),
            };
            if let Some(t) = t.filter(|t| t.is_positive()) {
                let q = crate::geom::lerp(o, &far, &t);
                if wall.as_ref().is_none_or(|(d, _)| o.l1(&q) < *d) {
                    wall = Some((o.l1(&q), q));
                }
            }
        }
        for r in &self.regions {
            for (u, v) in r.outline.edges() {
                match segment_hit(o, &far, u, v) {
                    SegHit::None => {}
                    SegHit::Point { t, .. } => {
                        let p = crate::geom::lerp(o, &far, &t);
                        cands.push((o.l1(&p), p));
                    }
                    SegHit::Overlap(t0, t1) => {
                        for t in [t0, t1] {
                            let p = crate::geom::lerp(o, &far, &t);
                            cands.push((o.l1(&p), p));
                        }
                    }
                }
            }
        }
        if let Some(w) = &wall {
            cands.push(w.clone());
        }
        cands.sort();
        cands.dedup();
        let mut best = o.clone();
        for (d, c) in cands {
            if c == *o {
                continue;
            }
            if wall.as_ref().is_some_and(|(wd, _)| d > *wd) {
                break;
            }
            if self.segment_free(o, &c) {
                best = c;
            } else {
                break;
            }
        }
        best
    }

    /// Index of the region whose viewpoint is `p`, most recent first.
    pub fn region_at(&self, p: &Point) -> Option<usize> {
        (0..self.regions.len()).rev().find(|&i| self.regions[i].viewpoint == *p)
    }
}

/// Monotone staircase from `u` to `v` inside `poly`, by L-paths and bisection.
pub fn staircase(poly: &Polygon, u: &Point, v: &Point, depth: u32) -> Option<Vec<Point>> {
    // vertices touching the open segment are forced bends
    let mut cuts = vec![Coord::zero(), Coord::one()];
    if u != v {
        for w in &poly.vertices {
            if on_segment(w, u, v) && w != u && w != v {
                cuts.push(crate::geom::param_on(u, v, w));
            }
        }
    }
    cuts.sort();
    cuts.dedup();
    let mut out = vec![u.clone()];
    for c in cuts.windows(2) {
        let a = crate::geom::lerp(u, v, &c[0]);
        let b = crate::geom::lerp(u, v, &c[1]);
        stair_rec(poly, &a, &b, depth, &mut out)?;
    }
    Some(out)
}

fn stair_rec(poly: &Polygon, a: &Point, b: &Point, depth: u32, out: &mut Vec<Point>) -> Option<()> {
    if a == b {
        return Some(());
    }
    if a.x == b.x || a.y == b.y {
        if poly.segment_inside(a, b) {
            out.push(b.clone());
            return Some(());
        }
        return None;
    }
    for c in [Point::new(b.x.clone(), a.y.clone()), Point::new(a.x.clone(), b.y.clone())] {
        if poly.segment_inside(a, &c) && poly.segment_inside(&c, b) {
            out.push(c);
            out.push(b.clone());
            return Some(());
        }
    }
    if depth == 0 {
        return None;
    }
    let m = a.midpoint(b);
    stair_rec(poly, a, &m, depth - 1, out)?;
    stair_rec(poly, &m, b, depth - 1, out)
}

/// Route planner over known free space: retracing the traveled path, and
/// staircases inside single scan regions.
#[derive(Debug, Default)]
pub struct Planner {
    cache: HashMap<(usize, Point), Option<Vec<Point>>>,
}

const STAIR_DEPTH: u32 = 10;

impl Planner {
    pub fn new() -> Planner {
        Planner::default()
    }

    fn stair_from(&mut self, k: &Knowledge, i: usize, q: &Point) -> Option<Vec<Point>> {
        let key = (i, q.clone());
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let r = &k.regions[i];
        let res = if r.outline.locate(q).inside() {
            staircase(&r.outline, &r.viewpoint, q, STAIR_DEPTH)
        } else {
            None
        };
        self.cache.insert(key, res.clone());
        res
    }

    /// Waypoints (excluding `from`) of a route to `to` through known free space.
    /// `path` is the traveled polyline ending at `from`.
    pub fn route(&mut self, k: &Knowledge, path: &[Point], from: &Point, to: &Point) -> Option<Vec<Point>> {
        if from == to {
            return Some(Vec::new());
        }
        for c in [Point::new(to.x.clone(), from.y.clone()), Point::new(from.x.clone(), to.y.clone())] {
            if k.segment_free(from, &c) && k.segment_free(&c, to) {
                return Some(clean(vec![from.clone(), c, to.clone()]));
            }
        }
        // nodes: 0 = from, 1 = to, then distinct viewpoints
        let mut nodes: Vec<Point> = vec![from.clone(), to.clone()];
        let mut region_of: Vec<Option<usize>> = vec![None, None];
        for (i, r) in k.regions.iter().enumerate() {
            if !nodes.contains(&r.viewpoint) {
                nodes.push(r.viewpoint.clone());
                region_of.push(k.region_at(&r.viewpoint).or(Some(i)));
            }
        }
        let mut prefix = vec![Coord::zero()];
        for w in path.windows(2) {
            let l = prefix.last().unwrap() + &w[0].l1(&w[1]);
            prefix.push(l);
        }
        let path_idx: Vec<Option<usize>> =
            nodes.iter().map(|p| if p == from { Some(path.len() - 1) } else { path.iter().rposition(|x| x == p) }).collect();
        let n = nodes.len();
        let mut dist: Vec<Option<Coord>> = vec![None; n];
        let mut prev: Vec<Option<(usize, Vec<Point>)>> = vec![None; n];
        let mut done = vec![false; n];
        dist[0] = Some(Coord::zero());
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((Coord::zero(), 0usize)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            if u == 1 {
                break;
            }
            for v in 0..n {
                if v == u || done[v] {
                    continue;
                }
                let mut best: Option<(Coord, Vec<Point>)> = None;
                // retrace the traveled path
                if let (Some(iu), Some(iv)) = (path_idx[u], path_idx[v]) {
                    let c = (&prefix[iu] - &prefix[iv]).abs();
                    let seg: Vec<Point> = if iu >= iv { path[iv..=iu].iter().rev().cloned().collect() } else { path[iu..=iv].to_vec() };
                    best = Some((c, seg));
                }
                // staircase inside a region seen from either end
                let mut stair = None;
                if let Some(ri) = region_of[u] {
                    stair = self.stair_from(k, ri, &nodes[v]);
                }
                if stair.is_none() {
                    if let Some(rv) = region_of[v] {
                        stair = self.stair_from(k, rv, &nodes[u]).map(|mut s| {
                            s.reverse();
                            s
                        });
                    }
                }
                if let Some(s) = stair {
                    let c = nodes[u].l1(&nodes[v]);
                    if best.as_ref().is_none_or(|(b, _)| c < *b) {
                        best = Some((c, s));
                    }
                }
                if let Some((c, seg)) = best {
                    let nd = &d + &c;
                    if dist[v].as_ref().is_none_or(|x| nd < *x) {
                        dist[v] = Some(nd.clone());
                        prev[v] = Some((u, seg));
                        heap.push(Reverse((nd, v)));
                    }
                }
            }
        }
        dist[1].as_ref()?;
        let mut legs: Vec<Vec<Point>> = Vec::new();
        let mut at = 1;
        while at != 0 {
            let (p, seg) = prev[at].clone().unwrap();
            legs.push(seg);
            at = p;
        }
        legs.reverse();
        let mut pts = vec![from.clone()];
        for l in legs {
            pts.extend(l.into_iter().skip(1));
        }
        Some(clean(pts))
    }
}

/// Drops repeats and the leading point.
fn clean(pts: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for p in pts {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    out.remove(0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::tests::lshape;
    use crate::simulator::{new_world, CostModel, World};

    fn pt(x: &str, y: &str) -> Point {
        Point::parse(x, y).unwrap()
    }

    #[test]
    fn pieces_follow_polygon_orientation() {
        let poly = lshape();
        let mut ws = new_world(poly.clone(), pt("1.75", "0.5"), CostModel::default()).unwrap();
        ws.scan();
        let k = Knowledge::from_scans(ws.scans());
        for p in &k.pieces {
            let e = poly.edges().iter().find(|e| e.contains(&p.start) && e.contains(&p.end)).expect("on an edge");
            assert_eq!(e.dir, p.dir);
        }
        assert!(!k.gaps().is_empty());
    }

    #[test]
    fn one_scan_in_kernel_closes_the_chain() {
        let poly = lshape();
        let mut ws = new_world(poly.clone(), Point::ints(0, 0), CostModel::default()).unwrap();
        ws.scan();
        let k = Knowledge::from_scans(ws.scans());
        let a = k.anchor(&Point::ints(0, 0)).unwrap();
        assert_eq!(k.polygon(&a).unwrap(), poly);
    }

    #[test]
    fn frontier_behind_reflex_corner() {
        // from the north arm tip the east arm top is hidden behind (1,1)
        let poly = lshape();
        let start = pt("0.5", "2");
        let mut ws = new_world(poly, start.clone(), CostModel::default()).unwrap();
        ws.scan();
        let k = Knowledge::from_scans(ws.scans());
        let a = k.anchor(&start).unwrap();
        let ch = k.chain(&a).unwrap();
        match ch.end {
            ChainEnd::Gap(fr) => {
                assert_eq!(fr.kind, FrontierKind::Reflex);
                assert_eq!(fr.f, Point::ints(1, 1));
                // the hidden east-arm top extends west across the north arm
                assert_eq!(fr.ext, Some(Ray { origin: Point::ints(1, 1), dir: Dir::West }));
                assert_eq!(k.ray_free_extent(fr.ext.as_ref().unwrap()), Point::ints(0, 1));
            }
            ChainEnd::Closed => panic!("chain should be open"),
        }
    }

    #[test]
    fn route_uses_known_space() {
        let poly = lshape();
        let mut ws = new_world(poly, pt("0.5", "1.75"), CostModel::default()).unwrap();
        ws.scan();
        let k = Knowledge::from_scans(ws.scans());
        let mut pl = Planner::new();
        let r = pl.route(&k, ws.path(), &pt("0.5", "1.75"), &pt("0.75", "0.25")).unwrap();
        assert_eq!(r.last().unwrap(), &pt("0.75", "0.25"));
        let mut prev = pt("0.5", "1.75");
        for p in &r {
            assert!(k.segment_free(&prev, p));
            prev = p.clone();
        }
    }

    #[test]
    fn staircase_hugs_a_diagonal() {
        let poly = Polygon::new(vec![Point::ints(0, 0), Point::ints(4, 0), Point::ints(4, 4)]);
        let s = staircase(&poly, &Point::ints(1, 0), &pt("4", "2.5"), 12).unwrap();
        for w in s.windows(2) {
            assert!(poly.segment_inside(&w[0], &w[1]));
            assert!(Dir::between(&w[0], &w[1]).is_some());
        }
    }
}
