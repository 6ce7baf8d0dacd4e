//! The online world: a hidden polygon that answers scans and moves, with
//! exact cost accounting and an event log.

use serde::{Deserialize, Serialize};

use crate::coord::Coord;
use crate::geom::{Dir, GeomError, PathPolyline, Point, RectPolygon};
use crate::visibility::{
    edge_fully_visible_from, ray_extent, visibility_polygon, VisibilityRegion,
};

/// Points as `["x", "y"]` decimal-string pairs.
pub mod pair {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::coord::Coord;
    use crate::geom::Point;

    pub fn serialize<S: Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
        (&p.x, &p.y).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Point, D::Error> {
        let (x, y) = <(Coord, Coord)>::deserialize(d)?;
        Ok(Point::new(x, y))
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(ps: &[Point], s: S) -> Result<S::Ok, S::Error> {
            let v: Vec<(&Coord, &Coord)> = ps.iter().map(|p| (&p.x, &p.y)).collect();
            v.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Point>, D::Error> {
            let v = Vec::<(Coord, Coord)>::deserialize(d)?;
            Ok(v.into_iter().map(|(x, y)| Point::new(x, y)).collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostModel {
    pub scan_cost: Coord,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel { scan_cost: Coord::one() }
    }
}

impl CostModel {
    pub fn new(scan_cost: Coord) -> Result<CostModel, SimError> {
        if !scan_cost.is_positive() {
            return Err(SimError::BadScanCost(scan_cost));
        }
        Ok(CostModel { scan_cost })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("start {0:?} is outside the polygon")]
    StartOutside(Point),
    #[error("move from {0:?} to {1:?} is not axis-parallel")]
    NonAxisParallel(Point, Point),
    #[error("scan cost must be positive, got {0}")]
    BadScanCost(Coord),
    #[error("not every edge is fully visible from a scan point")]
    NotTerminated,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// One line of the event log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "ev", rename_all = "snake_case")]
pub enum Event {
    Scan {
        #[serde(with = "pair")]
        p: Point,
        cost: Coord,
    },
    Move {
        #[serde(with = "pair")]
        to: Point,
        len: Coord,
        cost: Coord,
    },
    Blocked {
        #[serde(with = "pair")]
        at: Point,
        len: Coord,
        cost: Coord,
    },
    /// Strategy annotation: an episode starts.
    Episode { index: usize, case: String },
    /// Strategy annotation: a binary search over an interval of width `w`.
    Nvr { w: Coord, side: String },
    Terminated { cost: Coord },
}

impl Event {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("events serialize")
    }
}

pub fn events_to_jsonl(events: &[Event]) -> String {
    let mut s = String::new();
    for e in events {
        s.push_str(&e.to_json());
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoveOutcome {
    Completed,
    Blocked { at: Point, achieved: Coord },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    #[serde(with = "pair")]
    pub p: Point,
    pub region: VisibilityRegion,
}

/// What a strategy may ask of the world. Nothing here exposes the hidden
/// polygon: geometry arrives through scan regions and blocked contact points.
pub trait World {
    fn position(&self) -> &Point;
    fn start(&self) -> &Point;
    fn cost_model(&self) -> &CostModel;
    fn cost(&self) -> &Coord;
    fn scan(&mut self) -> VisibilityRegion;
    fn move_to(&mut self, waypoints: &[Point]) -> Result<MoveOutcome, SimError>;
    fn scans(&self) -> &[ScanRecord];
    /// Traveled polyline, starting at the start point.
    fn path(&self) -> &[Point];
    fn travel(&self) -> &Coord;
    fn events(&self) -> &[Event];
    fn log_event(&mut self, ev: Event);
    /// Checks coverage, walks home and closes the log.
    fn finish(&mut self) -> Result<ScanTour, SimError>;
}

#[derive(Debug, Clone)]
pub struct WorldState {
    pub(crate) hidden: RectPolygon,
    start: Point,
    robot: Point,
    cm: CostModel,
    scans: Vec<ScanRecord>,
    path: Vec<Point>,
    travel: Coord,
    cost: Coord,
    events: Vec<Event>,
}

pub fn new_world(poly: RectPolygon, start: Point, cm: CostModel) -> Result<WorldState, SimError> {
    if !poly.contains(&start) {
        return Err(SimError::StartOutside(start));
    }
    Ok(WorldState {
        hidden: poly,
        robot: start.clone(),
        path: vec![start.clone()],
        start,
        cm,
        scans: Vec::new(),
        travel: Coord::zero(),
        cost: Coord::zero(),
        events: Vec::new(),
    })
}

impl WorldState {
    /// Union of all scan regions contains `q`.
    pub fn known_contains(&self, q: &Point) -> bool {
        self.scans.iter().any(|s| s.region.contains(q))
    }

    pub(crate) fn set_hidden(&mut self, poly: RectPolygon) {
        self.hidden = poly;
    }

    /// Everything a query can change, for comparing two hypothetical answers.
    pub(crate) fn robot_state(&self) -> (Point, Coord, usize) {
        (self.robot.clone(), self.cost.clone(), self.events.len())
    }

    /// Advances along one axis-parallel leg, clipped at the boundary.
    fn leg(&mut self, to: &Point) -> Result<Option<Point>, SimError> {
        let from = self.robot.clone();
        if from == *to {
            return Ok(None);
        }
        let d = Dir::between(&from, to).ok_or_else(|| SimError::NonAxisParallel(from.clone(), to.clone()))?;
        let reach = ray_extent(&self.hidden, &from, &d.vec());
        let want = from.l1(to);
        let can = from.l1(&reach);
        let (dest, blocked) = if can >= want { (to.clone(), false) } else { (reach, true) };
        let len = from.l1(&dest);
        self.travel = &self.travel + &len;
        self.cost = &self.cost + &len;
        if !len.is_zero() {
            self.path.push(dest.clone());
        }
        self.robot = dest.clone();
        if blocked {
            self.events.push(Event::Blocked { at: dest.clone(), len, cost: self.cost.clone() });
            Ok(Some(dest))
        } else {
            self.events.push(Event::Move { to: dest, len, cost: self.cost.clone() });
            Ok(None)
        }
    }
}

impl World for WorldState {
    fn position(&self) -> &Point {
        &self.robot
    }

    fn start(&self) -> &Point {
        &self.start
    }

    fn cost_model(&self) -> &CostModel {
        &self.cm
    }

    fn cost(&self) -> &Coord {
        &self.cost
    }

    fn scan(&mut self) -> VisibilityRegion {
        let region = visibility_polygon(&self.hidden, &self.robot).expect("robot stays inside");
        self.cost = &self.cost + &self.cm.scan_cost;
        self.scans.push(ScanRecord { p: self.robot.clone(), region: region.clone() });
        self.events.push(Event::Scan { p: self.robot.clone(), cost: self.cost.clone() });
        region
    }

    fn move_to(&mut self, waypoints: &[Point]) -> Result<MoveOutcome, SimError> {
        // reject malformed plans before moving at all
        let mut prev = self.robot.clone();
        for w in waypoints {
            if prev != *w && Dir::between(&prev, w).is_none() {
                return Err(SimError::NonAxisParallel(prev, w.clone()));
            }
            prev = w.clone();
        }
        let before = self.travel.clone();
        for w in waypoints {
            if let Some(at) = self.leg(w)? {
                return Ok(MoveOutcome::Blocked { at, achieved: &self.travel - &before });
            }
        }
        Ok(MoveOutcome::Completed)
    }

    fn scans(&self) -> &[ScanRecord] {
        &self.scans
    }

    fn path(&self) -> &[Point] {
        &self.path
    }

    fn travel(&self) -> &Coord {
        &self.travel
    }

    fn events(&self) -> &[Event] {
        &self.events
    }

    fn log_event(&mut self, ev: Event) {
        self.events.push(ev);
    }

    fn finish(&mut self) -> Result<ScanTour, SimError> {
        finalize(self)
    }
}

/// Output artifact of a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanTour {
    pub path: PathPolyline,
    #[serde(with = "pair::vec")]
    pub scan_points: Vec<Point>,
    pub length: Coord,
    pub scans: usize,
    pub cost: Coord,
    pub terminated_ok: bool,
}

impl ScanTour {
    pub fn from_world(w: &dyn World) -> ScanTour {
        let path = PathPolyline::from_points_unchecked(w.path().to_vec());
        ScanTour {
            scan_points: w.scans().iter().map(|s| s.p.clone()).collect(),
            length: w.travel().clone(),
            scans: w.scans().len(),
            cost: w.cost().clone(),
            path,
            terminated_ok: false,
        }
    }
}

/// Every edge of the hidden polygon is fully visible from some scan point.
pub fn termination_check(ws: &WorldState) -> bool {
    uncovered_edges(&ws.hidden, ws.scans.iter().map(|s| &s.p)).is_empty()
}

/// Edges of `poly` not fully visible from any of `points`.
pub fn uncovered_edges<'a>(poly: &RectPolygon, points: impl Iterator<Item = &'a Point> + Clone) -> Vec<usize> {
    (0..poly.len())
        .filter(|&i| !points.clone().any(|p| edge_fully_visible_from(p, i, poly).unwrap_or(false)))
        .collect()
}

/// Returns to the start along a geodesic of the hidden polygon and closes the run.
pub fn finalize(ws: &mut WorldState) -> Result<ScanTour, SimError> {
    if !termination_check(ws) {
        return Err(SimError::NotTerminated);
    }
    if ws.robot != ws.start {
        let back = ws.hidden.geodesic_l1_path(&ws.robot, &ws.start)?;
        let pts: Vec<Point> = back.points[1..].to_vec();
        ws.move_to(&pts)?;
    }
    let cost = ws.cost.clone();
    ws.events.push(Event::Terminated { cost });
    let mut tour = ScanTour::from_world(ws);
    tour.terminated_ok = true;
    Ok(tour)
}

/// Cost recomputed from the event log alone.
pub fn replay_cost(events: &[Event], cm: &CostModel) -> Coord {
    let mut t = Coord::zero();
    for e in events {
        match e {
            Event::Scan { .. } => t = t + &cm.scan_cost,
            Event::Move { len, .. } | Event::Blocked { len, .. } => t = t + len,
            _ => {}
        }
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NvrSide {
    Clockwise,
    Counterclockwise,
    North,
    South,
}

/// A stretch of boundary that continuous vision from a traveled segment would
/// have seen but no scan has.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nvr {
    /// Unseen sub-intervals of boundary edges, as (edge index, from, to).
    pub target_edges: Vec<(usize, Point, Point)>,
    pub side: NvrSide,
    /// Width bound: length of the passed segment.
    pub w: Coord,
}

/// Continuous-vision benchmark against the scans taken so far.
///
/// Each edge is split at every point where some scan region boundary meets it;
/// a piece is a target when continuous vision from the segment sees it but
/// none of the scans do. Pieces on the same side of the segment form one NVR.
pub fn detect_nvrs(ws: &WorldState, seg: (&Point, &Point)) -> Vec<Nvr> {
    let poly = &ws.hidden;
    let (p, q) = seg;
    let w = p.l1(q);
    let horizontal = p.y == q.y;
    let mut by_side: Vec<(NvrSide, Vec<(usize, Point, Point)>)> = Vec::new();
    for e in poly.edges() {
        // split points: edge ends plus every crossing with a region outline
        let mut ts = vec![Coord::zero(), Coord::one()];
        for s in &ws.scans {
            for (u, v) in s.region.polygon.edges() {
                match crate::geom::segment_hit(&e.start, &e.end, u, v) {
                    crate::geom::SegHit::None => {}
                    crate::geom::SegHit::Point { t, .. } => ts.push(t),
                    crate::geom::SegHit::Overlap(a, b) => {
                        ts.push(a);
                        ts.push(b);
                    }
                }
            }
        }
        ts.sort();
        ts.dedup();
        for win in ts.windows(2) {
            let a = crate::geom::lerp(&e.start, &e.end, &win[0]);
            let b = crate::geom::lerp(&e.start, &e.end, &win[1]);
            let mid = a.midpoint(&b);
            if ws.known_contains(&mid) {
                continue;
            }
            if !seen_from_segment(poly, p, q, &mid) {
                continue;
            }
            let side = if horizontal {
                if mid.y > p.y {
                    NvrSide::North
                } else {
                    NvrSide::South
                }
            } else {
                // left of the travel direction is counterclockwise
                let up = q.y > p.y;
                if (mid.x < p.x) == up {
                    NvrSide::Counterclockwise
                } else {
                    NvrSide::Clockwise
                }
            };
            match by_side.iter_mut().find(|(s, _)| *s == side) {
                Some((_, v)) => v.push((e.index, a, b)),
                None => by_side.push((side, vec![(e.index, a, b)])),
            }
        }
    }
    by_side.into_iter().map(|(side, target_edges)| Nvr { target_edges, side, w: w.clone() }).collect()
}

/// Some point of the closed segment `pq` sees `x`.
fn seen_from_segment(poly: &RectPolygon, p: &Point, q: &Point, x: &Point) -> bool {
    // a two-vertex temporary "edge" cannot be built, so sample the critical
    // positions: ends, and where lines through x and a vertex meet the segment
    let mut cands = vec![p.clone(), q.clone(), p.midpoint(q)];
    for v in poly.vertices() {
        if let crate::geom::SegHit::Point { t, .. } = crate::geom::segment_hit(p, q, x, &extend(x, v)) {
            let c = crate::geom::lerp(p, q, &t);
            cands.push(c);
        }
    }
    cands.sort();
    cands.dedup();
    // midpoints between consecutive critical positions cover the open cells
    let mut all = cands.clone();
    for w in cands.windows(2) {
        all.push(w[0].midpoint(&w[1]));
    }
    all.iter().any(|c| poly.segment_inside(c, x))
}

/// Point far beyond `v` on the ray from `x` through `v`.
fn extend(x: &Point, v: &Point) -> Point {
    let d = v.sub(x);
    x.add(&d.scale(&Coord::int(1 << 20)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::tests::{lshape, square};

    fn pt(x: &str, y: &str) -> Point {
        Point::parse(x, y).unwrap()
    }

    #[test]
    fn new_world_is_empty() {
        let ws = new_world(square(), Point::ints(0, 0), CostModel::default()).unwrap();
        assert_eq!(*ws.cost(), Coord::zero());
        assert!(ws.scans().is_empty());
        assert!(!ws.known_contains(&pt("0.5", "0.5")));
        assert_eq!(
            new_world(square(), Point::ints(5, 5), CostModel::default()).unwrap_err(),
            SimError::StartOutside(Point::ints(5, 5))
        );
    }

    #[test]
    fn scan_costs_c_and_reveals() {
        let mut ws = new_world(lshape(), pt("0.5", "0.5"), CostModel::default()).unwrap();
        let r = ws.scan();
        assert_eq!(*ws.cost(), Coord::one());
        assert!(r.contains(&pt("1.5", "0.5")));
        let area = r.area();
        ws.scan();
        assert_eq!(*ws.cost(), Coord::int(2));
        assert_eq!(ws.scans()[1].region.area(), area);
    }

    #[test]
    fn moves_clip_at_walls() {
        let mut ws = new_world(square(), Point::ints(0, 0), CostModel::default()).unwrap();
        assert_eq!(ws.move_to(&[pt("0.5", "0")]).unwrap(), MoveOutcome::Completed);
        assert_eq!(*ws.cost(), pt("0.5", "0").x);
        let mut ws = new_world(square(), pt("0.5", "0.5"), CostModel::default()).unwrap();
        let out = ws.move_to(&[pt("10.5", "0.5")]).unwrap();
        assert_eq!(out, MoveOutcome::Blocked { at: pt("1", "0.5"), achieved: pt("0.5", "0").x });
        let mut ws = new_world(lshape(), pt("0.5", "0.5"), CostModel::default()).unwrap();
        assert_eq!(ws.move_to(&[pt("0.5", "1.9")]).unwrap(), MoveOutcome::Completed);
        assert!(matches!(ws.move_to(&[pt("1", "1")]), Err(SimError::NonAxisParallel(..))));
    }

    #[test]
    fn termination_on_lshape() {
        // (0.5, 0.5) is in the kernel, so start in the east arm instead
        let mut ws = new_world(lshape(), pt("1.75", "0.5"), CostModel::default()).unwrap();
        ws.scan();
        assert!(!termination_check(&ws));
        ws.move_to(&[pt("0.5", "0.5")]).unwrap();
        ws.scan();
        assert!(termination_check(&ws));
        let tour = finalize(&mut ws).unwrap();
        assert_eq!(tour.length, pt("2.5", "0").x);
        assert_eq!(tour.cost, pt("4.5", "0").x);
        assert_eq!(replay_cost(ws.events(), ws.cost_model()), tour.cost);
    }

    #[test]
    fn finalize_square_from_corner() {
        let mut ws = new_world(square(), Point::ints(0, 0), CostModel::default()).unwrap();
        assert_eq!(finalize(&mut ws.clone()).unwrap_err(), SimError::NotTerminated);
        ws.move_to(&[pt("0.5", "0"), pt("0.5", "0.5")]).unwrap();
        ws.scan();
        let tour = finalize(&mut ws).unwrap();
        assert_eq!(tour.length, Coord::int(2));
        assert_eq!(tour.scans, 1);
    }

    #[test]
    fn event_json_shape() {
        let e = Event::Scan { p: pt("0.5", "2"), cost: Coord::int(3) };
        assert_eq!(e.to_json(), r#"{"ev":"scan","p":["0.5","2"],"cost":"3"}"#);
        let back: Event = serde_json::from_str(&e.to_json()).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn nvr_in_square_is_empty() {
        let mut ws = new_world(square(), Point::ints(0, 0), CostModel::default()).unwrap();
        ws.scan();
        ws.move_to(&[Point::ints(1, 0)]).unwrap();
        assert!(detect_nvrs(&ws, (&Point::ints(0, 0), &Point::ints(1, 0))).is_empty());
    }
}
