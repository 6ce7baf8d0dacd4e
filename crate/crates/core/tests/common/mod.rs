//! Brute-force oracles shared by the integration tests. They use nothing but
//! closed-segment containment, never the library's visibility code.
#![allow(dead_code)]

use scanwatch::corpus::{fuzz_spec, generate, Instance};
use scanwatch::extensions::{essential_order, order_violations};
use scanwatch::geom::{Edge, Point, RectPolygon};
use scanwatch::simulator::{new_world, CostModel};
use scanwatch::strategies::{scansearch, StrategyContext};
use scanwatch::visibility::{full_edge_visibility, visibility_polygon, weak_visibility};
use scanwatch::Coord;

/// `n x n` cell centres over the bounding box, kept if inside.
pub fn lattice(poly: &RectPolygon, n: i64) -> Vec<Point> {
    let xs: Vec<&Coord> = poly.vertices().iter().map(|v| &v.x).collect();
    let ys: Vec<&Coord> = poly.vertices().iter().map(|v| &v.y).collect();
    let (x0, x1) = (xs.iter().min().unwrap(), xs.iter().max().unwrap());
    let (y0, y1) = (ys.iter().min().unwrap(), ys.iter().max().unwrap());
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let x = *x0 + &((*x1 - *x0) * Coord::frac(2 * i + 1, 2 * n));
            let y = *y0 + &((*y1 - *y0) * Coord::frac(2 * j + 1, 2 * n));
            let p = Point::new(x, y);
            if poly.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

/// Points of `e` where visibility from `q` can change (lines through `q` and a
/// reflex vertex), plus the midpoints between them. Visibility is constant
/// between consecutive critical points, so testing these decides the whole
/// edge. Convex corners never matter: a segment through one leaves the polygon.
pub fn edge_samples(poly: &RectPolygon, e: &Edge, q: &Point) -> Vec<Point> {
    let horizontal = e.start.y == e.end.y;
    let (lo, hi) = if horizontal {
        (e.start.x.clone().min(e.end.x.clone()), e.start.x.clone().max(e.end.x.clone()))
    } else {
        (e.start.y.clone().min(e.end.y.clone()), e.start.y.clone().max(e.end.y.clone()))
    };
    let mut ts = vec![lo.clone(), hi.clone()];
    for v in poly.reflex_vertices().iter().map(|&i| poly.vertex(i)) {
        let (qa, qb, va, vb, line) = if horizontal {
            (&q.x, &q.y, &v.x, &v.y, &e.start.y)
        } else {
            (&q.y, &q.x, &v.y, &v.x, &e.start.x)
        };
        if vb == qb {
            if qb == line {
                ts.push(va.clone());
            }
            continue;
        }
        let t = qa + &((line - qb) * (va - qa) / (vb - qb));
        ts.push(t);
    }
    ts.retain(|t| *t >= lo && *t <= hi);
    ts.sort();
    ts.dedup();
    let mut all = ts.clone();
    for w in ts.windows(2) {
        all.push((&w[0] + &w[1]).half());
    }
    all.into_iter()
        .map(|t| if horizontal { Point::new(t, e.start.y.clone()) } else { Point::new(e.start.x.clone(), t) })
        .collect()
}

/// (weakly visible, fully visible) for edge `e` from `q`.
pub fn brute_edge(poly: &RectPolygon, e: &Edge, q: &Point) -> (bool, bool) {
    let seen: Vec<bool> = edge_samples(poly, e, q).iter().map(|x| poly.segment_inside(q, x)).collect();
    (seen.iter().any(|&b| b), seen.iter().all(|&b| b))
}

/// Compares the three visibility structures against the brute force on a
/// lattice: point visibility from the start and an interior point, edge
/// visibility for edge `edge % n`. Returns (checks, disagreements).
pub fn visibility_agreement(inst: &Instance, n: i64, edge: usize) -> (usize, Vec<String>) {
    let poly = &inst.polygon;
    let pts = lattice(poly, n);
    let mut bad = Vec::new();
    let mut checked = 0;
    let views = [inst.start.clone(), pts[pts.len() / 3].clone()];
    for p in &views {
        let r = visibility_polygon(poly, p).unwrap();
        for q in &pts {
            checked += 1;
            if r.contains(q) != poly.segment_inside(p, q) {
                bad.push(format!("point visibility p={p:?} q={q:?}"));
            }
        }
    }
    {
        let e = &poly.edges()[edge % poly.edges().len()];
        let weak = weak_visibility(poly, e.index);
        let full = full_edge_visibility(poly, e.index);
        for q in &pts {
            checked += 1;
            let (w, f) = brute_edge(poly, e, q);
            if weak.contains(q) != w {
                bad.push(format!("weak edge {} q={q:?}", e.index));
            }
            if full.contains(q) != f {
                bad.push(format!("full edge {} q={q:?}", e.index));
            }
        }
    }
    (checked, bad)
}

/// One fuzz run of SCANSEARCH with the checks shared by several criteria.
#[derive(Debug)]
pub struct FuzzRun {
    pub seed: u64,
    pub a: Coord,
    pub error: Option<String>,
    pub covered: bool,
    pub searches: usize,
    pub search_violations: usize,
    pub order_violations: usize,
}

pub fn fuzz_run(seed: u64, a: Coord) -> FuzzRun {
    let inst = generate(&fuzz_spec(seed, a.clone())).unwrap();
    let ctx = StrategyContext::measured(&inst.polygon);
    let mut w = new_world(inst.polygon.clone(), inst.start.clone(), CostModel::default()).unwrap();
    let mut out = FuzzRun {
        seed,
        a,
        error: None,
        covered: false,
        searches: 0,
        search_violations: 0,
        order_violations: 0,
    };
    match scansearch(&mut w, &ctx, false) {
        Ok(r) => {
            out.covered = r.tour.terminated_ok;
            out.searches = r.searches.len();
            out.search_violations = r.searches.iter().filter(|s| !s.ok).count();
            let order = essential_order(&inst.polygon, &inst.start);
            out.order_violations = order_violations(&r.tour.path.points, &order).len();
        }
        Err(e) => out.error = Some(e.to_string()),
    }
    out
}

/// Pairwise structure of essential extensions: meeting pairs are perpendicular,
/// none meets more than two others, and two partners are parallel. A segment
/// listed from both of its reflex ends counts once.
pub fn essential_structure_violations(poly: &RectPolygon, start: &Point) -> Vec<String> {
    use scanwatch::extensions::segments_meet;
    let mut segs: Vec<(Point, Point, bool)> = Vec::new();
    for e in essential_order(poly, start) {
        let (p, q) = e.segment();
        let (p, q) = if p <= q { (p.clone(), q.clone()) } else { (q.clone(), p.clone()) };
        let horizontal = p.y == q.y;
        if !segs.iter().any(|s| s.0 == p && s.1 == q) {
            segs.push((p, q, horizontal));
        }
    }
    let mut bad = Vec::new();
    for (i, a) in segs.iter().enumerate() {
        let partners: Vec<&(Point, Point, bool)> = segs
            .iter()
            .enumerate()
            .filter(|(j, b)| *j != i && segments_meet((&a.0, &a.1), (&b.0, &b.1)))
            .map(|(_, b)| b)
            .collect();
        if partners.iter().any(|b| b.2 == a.2) {
            bad.push(format!("parallel essentials meet at {a:?}"));
        }
        if partners.len() > 2 {
            bad.push(format!("{a:?} meets {} others", partners.len()));
        }
        if partners.len() == 2 && partners[0].2 != partners[1].2 {
            bad.push(format!("partners of {a:?} are not parallel"));
        }
    }
    bad
}
