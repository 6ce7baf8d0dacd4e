//! SCANSEARCH. The robot follows the seen boundary clockwise from the start.
//! Each episode targets the extension that hides the next stretch. Scans
//! placed along the way are charged to binary searches of bounded cost.

use serde::{Deserialize, Serialize};

use super::{BinarySearchRecord, RunReport, StrategyContext, StrategyError};
use crate::bounds::within_binary_search_bound;
use crate::coord::Coord;
use crate::geom::{on_segment, Dir, Point};
use crate::knowledge::{ChainEnd, Frontier, FrontierKind, Knowledge, Planner, Ray};
use crate::simulator::{uncovered_edges, Event, MoveOutcome, NvrSide, World};
use crate::visibility::edge_fully_visible_from;

/// Reference quantities of the running episode.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CaseState {
    /// Distance to the perpendicular of the next unresolved corner along the move.
    pub d_i: Option<Coord>,
    /// Distance to the corner where the robot turns.
    pub b_i: Option<Coord>,
    /// Distance to the nearer candidate foot on the first leg.
    pub m_i: Option<Coord>,
    pub e: Option<Coord>,
    pub ab_e: Option<Coord>,
    pub kor: Option<Coord>,
    pub p_e: Option<Point>,
    pub p_big_e: Option<Point>,
    pub p_cor: Option<Point>,
    pub p_m: Option<Point>,
}

/// Halving schedule over an interval of width `w`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinarySearchPlan {
    pub w: Coord,
    pub a: Coord,
    /// Step lengths w/2, w/4, ... while the interval is wider than `a`.
    pub steps: Vec<Coord>,
}

impl BinarySearchPlan {
    pub fn new(w: &Coord, a: &Coord) -> BinarySearchPlan {
        let mut steps = Vec::new();
        let mut width = w.clone();
        while width > *a {
            width = width.half();
            steps.push(width.clone());
        }
        BinarySearchPlan { w: w.clone(), a: a.clone(), steps }
    }

    /// Travel plus one unit per scan when every step is taken.
    pub fn worst_cost(&self) -> Coord {
        let travel: Coord = self.steps.iter().cloned().sum();
        travel + Coord::int(self.steps.len() as i64)
    }
}

pub fn binary_search_steps(w: &Coord, a: &Coord) -> usize {
    BinarySearchPlan::new(w, a).steps.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineCreation {
    Positive,
    Negative,
}

/// Imaginary line through `pos` parallel to the extension: positive when the
/// known boundary beyond it, away from the extension, has no open ends.
pub fn line_creation(know: &Knowledge, ext: &Ray, pos: &Point) -> LineCreation {
    let across = |p: &Point| if ext.dir.is_horizontal() { p.y.clone() } else { p.x.clone() };
    let line = across(pos);
    let e_line = across(&ext.origin);
    let beyond = |p: &Point| {
        let v = across(p);
        if line >= e_line {
            v > line
        } else {
            v < line
        }
    };
    if know.gaps().iter().any(beyond) {
        LineCreation::Negative
    } else {
        LineCreation::Positive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjustKind {
    EarlyTurn,
    CorridorInNvr,
    ClosedSouth,
}

/// Cross-section of a corridor valid from `at` (distance along it) onwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorridorSlice {
    pub at: Coord,
    pub lo: Coord,
    pub hi: Coord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustPlan {
    /// (along, lateral) positions of the centre line walk.
    pub waypoints: Vec<(Coord, Coord)>,
    pub recenters: usize,
    pub travel: Coord,
    pub final_adjust: Coord,
    pub phases: usize,
    /// Travel plus the final adjustment plus one scan per phase.
    pub cost: Coord,
}

/// Walks a corridor on its centre line. Re-centres whenever the width
/// shrinks (or the robot would leave the corridor), never when it grows.
pub fn turn_adjustment(slices: &[CorridorSlice], length: &Coord, kind: AdjustKind) -> AdjustPlan {
    let phases = if kind == AdjustKind::ClosedSouth { 2 } else { 1 };
    let mut travel = Coord::zero();
    let mut recenters = 0;
    let mut final_adjust = Coord::zero();
    let mut waypoints = Vec::new();
    for _ in 0..phases {
        let Some(first) = slices.first() else { break };
        let mut lat = (&first.lo + &first.hi).half();
        let mut width = &first.hi - &first.lo;
        let mut along = first.at.clone();
        waypoints.push((along.clone(), lat.clone()));
        for s in &slices[1..] {
            let w = &s.hi - &s.lo;
            let outside = lat < s.lo || lat > s.hi;
            if w < width || outside {
                travel = travel + (&s.at - &along);
                along = s.at.clone();
                waypoints.push((along.clone(), lat.clone()));
                let c = (&s.lo + &s.hi).half();
                travel = travel + (&c - &lat).abs();
                lat = c;
                waypoints.push((along.clone(), lat.clone()));
                recenters += 1;
            }
            width = w;
        }
        travel = travel + (length - &along);
        waypoints.push((length.clone(), lat.clone()));
        final_adjust = final_adjust + width.half();
    }
    let cost = &travel + &final_adjust + Coord::int(phases as i64);
    AdjustPlan { waypoints, recenters, travel, final_adjust, phases, cost }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Snap {
    corners: usize,
    f: Option<Point>,
}

enum Plan {
    Fallback,
    AInterval { m: Dir, foot: Point, e: Coord, direct: bool },
    AExtension { m: Dir, foot: Point, e: Coord },
    BInterval { p_e: Point, e: Coord },
    BExtension { p_e: Point, e: Coord },
}

struct Explorer<'w> {
    w: &'w mut dyn World,
    a: Coord,
    wide: bool,
    anchor: Point,
    know: Knowledge,
    planner: Planner,
    episode: usize,
    logged: bool,
    tags: Vec<String>,
    searches: Vec<BinarySearchRecord>,
    state: CaseState,
}

const MAX_ROUNDS: usize = 20_000;
const SUBSTEPS: usize = 4;

/// Runs SCANSEARCH to completion. `wide` selects the variant that scans after
/// every distance `a` of exploratory travel.
pub fn scansearch(w: &mut dyn World, ctx: &StrategyContext, wide: bool) -> Result<RunReport, StrategyError> {
    let start = w.position().clone();
    w.scan();
    let know = Knowledge::from_scans(w.scans());
    let anchor = know.anchor(&start).ok_or(StrategyError::Stuck { episode: 0, at: start.clone() })?;
    let mut ex = Explorer {
        w,
        a: ctx.a.clone(),
        wide,
        anchor,
        know,
        planner: Planner::new(),
        episode: 0,
        logged: false,
        tags: Vec::new(),
        searches: Vec::new(),
        state: CaseState::default(),
    };
    ex.run()?;
    let (episodes, tags, searches) = (ex.episode, ex.tags, ex.searches);
    let tour = w.finish()?;
    let name = if wide { "scansearch-wide" } else { "scansearch" };
    let mut rep = RunReport::new(name, tour);
    rep.episodes = episodes;
    rep.case_tags = tags;
    rep.assertions_checked = searches.len();
    rep.assertion_failures = searches.iter().filter(|s| !s.ok).count();
    rep.searches = searches;
    Ok(rep)
}

impl Explorer<'_> {
    fn pos(&self) -> Point {
        self.w.position().clone()
    }

    fn stuck(&self) -> StrategyError {
        StrategyError::Stuck { episode: self.episode, at: self.pos() }
    }

    fn scan(&mut self) {
        self.w.scan();
        self.know = Knowledge::from_scans(self.w.scans());
    }

    fn frontier(&self) -> Result<ChainEnd, StrategyError> {
        Ok(self.know.chain(&self.anchor).ok_or_else(|| self.stuck())?.end)
    }

    fn snap(&self) -> Result<Snap, StrategyError> {
        let ch = self.know.chain(&self.anchor).ok_or_else(|| self.stuck())?;
        let f = match ch.end {
            ChainEnd::Gap(fr) => Some(fr.f),
            ChainEnd::Closed => None,
        };
        Ok(Snap { corners: ch.corners.len(), f })
    }

    fn tag(&mut self, t: &str) {
        if !self.logged {
            self.w.log_event(Event::Episode { index: self.episode, case: t.to_string() });
            self.logged = true;
        }
        self.tags.push(t.to_string());
    }

    fn run(&mut self) -> Result<(), StrategyError> {
        let mut stalls = 0;
        for _ in 0..MAX_ROUNDS {
            match self.frontier()? {
                ChainEnd::Closed => {
                    self.episode += 1;
                    self.logged = false;
                    if !self.certify()? {
                        self.episode -= 1;
                        return Ok(());
                    }
                }
                ChainEnd::Gap(fr) => {
                    self.episode += 1;
                    self.logged = false;
                    self.state = CaseState::default();
                    let before = self.snap()?;
                    if stalls >= 2 {
                        self.fallback(&fr, &before)?;
                    } else {
                        self.episode_cases(&before)?;
                    }
                    stalls = if self.snap()? != before { 0 } else { stalls + 1 };
                }
            }
        }
        Err(self.stuck())
    }

    fn episode_cases(&mut self, before: &Snap) -> Result<(), StrategyError> {
        for _ in 0..SUBSTEPS {
            if self.snap()? != *before {
                return Ok(());
            }
            let ChainEnd::Gap(fr) = self.frontier()? else { return Ok(()) };
            let plan = self.decide(&fr);
            let moved_from = self.pos();
            let scans_before = self.w.scans().len();
            match plan {
                Plan::Fallback => return self.fallback(&fr, before),
                Plan::AInterval { m, foot, e, direct } => {
                    self.tag(if direct { "A.interval.direct" } else { "A.interval" });
                    self.a_interval(m, foot, e)?;
                }
                Plan::AExtension { m, foot, e } => {
                    self.tag("A.extension");
                    self.a_extension(&fr, m, foot, e)?;
                }
                Plan::BInterval { p_e, e } => self.b_interval(p_e, e)?,
                Plan::BExtension { p_e, e } => self.b_extension(p_e, e)?,
            }
            if self.pos() == moved_from && self.w.scans().len() == scans_before {
                // the case machine had nothing to do here
                return self.fallback(&fr, before);
            }
        }
        Ok(())
    }

    fn decide(&mut self, fr: &Frontier) -> Plan {
        let Some(ray) = &fr.ext else { return Plan::Fallback };
        let r = self.pos();
        let o = &ray.origin;
        let end = self.know.ray_free_extent(ray);
        let foot = if ray.dir.is_horizontal() { Point::new(r.x.clone(), o.y.clone()) } else { Point::new(o.x.clone(), r.y.clone()) };
        let two_a1 = &self.a * Coord::int(2) + Coord::one();
        if on_segment(&foot, o, &end) && (foot == r || self.know.segment_free(&r, &foot)) {
            let e = r.l1(&foot);
            if e.is_zero() {
                return Plan::Fallback;
            }
            let m = Dir::between(&r, &foot).expect("axis-parallel");
            self.state.e = Some(e.clone());
            self.state.p_big_e = Some(foot.clone());
            if e >= two_a1 {
                let direct = self.nvr_candidates(&r, &foot).is_empty();
                Plan::AInterval { m, foot, e, direct }
            } else {
                Plan::AExtension { m, foot, e }
            }
        } else {
            let p_e = clamp_on(&foot, o, &end);
            let e = r.l1(&p_e);
            if e.is_zero() {
                return Plan::Fallback;
            }
            self.state.e = Some(e.clone());
            self.state.p_e = Some(p_e.clone());
            if e >= &self.a + Coord::one() {
                Plan::BInterval { p_e, e }
            } else {
                Plan::BExtension { p_e, e }
            }
        }
    }

    /// Open ends of seen boundary beside the open segment `s0 s1`, with their feet on it.
    fn nvr_candidates(&self, s0: &Point, s1: &Point) -> Vec<(Point, Point)> {
        let mut out = Vec::new();
        if s0 == s1 {
            return out;
        }
        let horizontal = s0.y == s1.y;
        for g in self.know.gaps() {
            let p = if horizontal { Point::new(g.x.clone(), s0.y.clone()) } else { Point::new(s0.x.clone(), g.y.clone()) };
            if p == g || !on_segment(&p, s0, s1) || p == *s0 || p == *s1 {
                continue;
            }
            if self.know.segment_free(&p, &g) {
                out.push((g, p));
            }
        }
        // easternmost first, then northernmost
        out.sort_by(|x, y| y.1.x.cmp(&x.1.x).then(y.1.y.cmp(&x.1.y)).then(x.0.cmp(&y.0)));
        out
    }

    /// Straight exploratory move; the wide variant scans after every `a`.
    fn advance(&mut self, target: &Point) -> Result<MoveOutcome, StrategyError> {
        if self.wide {
            loop {
                let r = self.pos();
                if r.l1(target) <= self.a {
                    break;
                }
                let d = Dir::between(&r, target).expect("axis-parallel");
                let next = d.step(&r, &self.a);
                match self.w.move_to(&[next])? {
                    MoveOutcome::Completed => self.scan(),
                    blocked => return Ok(blocked),
                }
            }
        }
        Ok(self.w.move_to(std::slice::from_ref(target))?)
    }

    fn route_to(&mut self, q: &Point) -> Result<bool, StrategyError> {
        let r = self.pos();
        let Some(route) = self.planner.route(&self.know, self.w.path(), &r, q) else { return Ok(false) };
        self.w.move_to(&route)?;
        Ok(self.pos() == *q)
    }

    fn a_interval(&mut self, m: Dir, foot: Point, _e: Coord) -> Result<(), StrategyError> {
        let before = self.snap()?;
        let two_a1 = &self.a * Coord::int(2) + Coord::one();
        while self.pos() != foot {
            let r = self.pos();
            let cands = self.nvr_candidates(&r, &foot);
            if cands.is_empty() {
                self.advance(&foot)?;
                self.scan();
                break;
            }
            let d_i = cands.iter().map(|(_, p)| r.l1(p)).min().expect("nonempty");
            self.state.d_i = Some(d_i.clone());
            let step = if d_i > two_a1 {
                d_i
            } else if d_i > self.a {
                &d_i * Coord::int(2) + Coord::one()
            } else {
                two_a1.clone()
            };
            let step = step.min(r.l1(&foot));
            let target = m.step(&r, &step);
            if let MoveOutcome::Blocked { .. } = self.advance(&target)? {
                self.scan();
                break;
            }
            self.scan();
            self.search_passed(&r)?;
            if self.snap()? != before {
                break;
            }
            if self.pos() != target {
                // searching moved the robot back; resume from the far end
                let back = target.clone();
                self.w.move_to(&[back])?;
            }
        }
        Ok(())
    }

    fn a_extension(&mut self, fr: &Frontier, m: Dir, foot: Point, e: Coord) -> Result<(), StrategyError> {
        let r = self.pos();
        let plan = &e * Coord::int(2) + Coord::one();
        let target = m.step(&r, &plan);
        let out = self.advance(&target)?;
        self.scan();
        if matches!(out, MoveOutcome::Blocked { .. }) {
            self.tags.push("A.extension.blocked".into());
        }
        let ray = fr.ext.clone().expect("extension case has a ray");
        match line_creation(&self.know, &ray, &self.pos()) {
            LineCreation::Positive => {
                self.tags.push("A.extension.positive".into());
                let far = self.pos();
                if far != foot && self.frontier_unchanged(fr)? {
                    self.w.move_to(std::slice::from_ref(&foot))?;
                    self.scan();
                    self.search_between(&far)?;
                }
            }
            LineCreation::Negative => {
                self.tags.push("A.extension.negative".into());
                self.search_passed(&r)?;
            }
        }
        Ok(())
    }

    fn frontier_unchanged(&self, fr: &Frontier) -> Result<bool, StrategyError> {
        Ok(matches!(self.frontier()?, ChainEnd::Gap(g) if g.f == fr.f))
    }

    fn b_interval(&mut self, p_e: Point, _e: Coord) -> Result<(), StrategyError> {
        let r = self.pos();
        let corners = [Point::new(p_e.x.clone(), r.y.clone()), Point::new(r.x.clone(), p_e.y.clone())];
        let pick = corners
            .into_iter()
            .find(|c| *c != r && self.know.segment_free(&r, c) && self.know.segment_free(c, &p_e));
        let Some(c) = pick else {
            self.tag("B.interval.route");
            self.route_to(&p_e)?;
            self.scan();
            return Ok(());
        };
        let cands = self.nvr_candidates(&r, &c);
        if cands.is_empty() {
            self.tag("B.interval.alpha");
            self.state.b_i = Some(r.l1(&c));
            let turn = self.adjusted_turn(&r, &c, &p_e);
            self.state.p_cor = Some(turn.clone());
            self.advance(&turn)?;
        } else {
            self.tag("B.interval.beta");
            let (_, pm) = cands.iter().min_by_key(|(_, p)| r.l1(p)).cloned().expect("nonempty");
            self.state.m_i = Some(r.l1(&pm));
            self.state.p_m = Some(pm.clone());
            self.advance(&pm)?;
        }
        self.scan();
        Ok(())
    }

    /// Turn point at the centre of the corridor that the second leg enters,
    /// when that keeps both legs in known space.
    fn adjusted_turn(&mut self, r: &Point, c: &Point, p_e: &Point) -> Point {
        let (Some(d1), Some(d2)) = (Dir::between(r, c), Dir::between(c, p_e)) else { return c.clone() };
        let probe_len = c.l1(p_e).min(self.a.clone()).half();
        let probe = d2.step(c, &probe_len);
        let lo = self.know.ray_free_extent(&Ray { origin: probe.clone(), dir: d1.opposite() });
        let hi = self.know.ray_free_extent(&Ray { origin: probe.clone(), dir: d1 });
        let axis = |p: &Point| if d1.is_horizontal() { p.x.clone() } else { p.y.clone() };
        let (l, h) = (axis(&lo), axis(&hi));
        let (l, h) = if l <= h { (l, h) } else { (h, l) };
        let slices = [CorridorSlice { at: Coord::zero(), lo: l, hi: h }];
        let plan = turn_adjustment(&slices, &Coord::zero(), AdjustKind::EarlyTurn);
        self.state.kor = Some(plan.final_adjust.clone() * Coord::int(2));
        let centre = plan.waypoints[0].1.clone();
        let turn = if d1.is_horizontal() { Point::new(centre, c.y.clone()) } else { Point::new(c.x.clone(), centre) };
        if turn == *c || Dir::between(r, &turn) != Some(d1) {
            return c.clone();
        }
        let land = if d2.is_horizontal() { Point::new(p_e.x.clone(), turn.y.clone()) } else { Point::new(turn.x.clone(), p_e.y.clone()) };
        if self.know.segment_free(r, &turn) && self.know.segment_free(&turn, &land) {
            self.tags.push("B.interval.adjust".into());
            turn
        } else {
            c.clone()
        }
    }

    fn b_extension(&mut self, p_e: Point, _e: Coord) -> Result<(), StrategyError> {
        let r = self.pos();
        let Some(route) = self.planner.route(&self.know, self.w.path(), &r, &p_e) else {
            self.tag("B.extension.unreachable");
            return Ok(());
        };
        let mut len = Coord::zero();
        let mut prev = r.clone();
        for q in &route {
            len = len + prev.l1(q);
            prev = q.clone();
        }
        self.state.ab_e = Some(len.clone());
        let far = &self.a * Coord::int(2) + Coord::int(3);
        if len > far && route.len() > 1 {
            self.tag("B.extension.far");
            self.w.move_to(&route[..1])?;
            self.scan();
            self.w.move_to(&route[1..])?;
        } else {
            self.tag("B.extension");
            self.w.move_to(&route)?;
        }
        self.scan();
        Ok(())
    }

    /// Searches the open ends beside the segment just traveled from `s0`.
    fn search_passed(&mut self, s0: &Point) -> Result<(), StrategyError> {
        let s1 = self.pos();
        let cands = self.nvr_candidates(s0, &s1);
        self.search_list(s0, &s1, cands)
    }

    /// Same, for a segment from the robot to `far` that was traveled earlier.
    fn search_between(&mut self, far: &Point) -> Result<(), StrategyError> {
        let s0 = self.pos();
        let cands = self.nvr_candidates(&s0, far);
        self.search_list(&s0, far, cands)
    }

    fn search_list(&mut self, s0: &Point, s1: &Point, cands: Vec<(Point, Point)>) -> Result<(), StrategyError> {
        let mut done = 0;
        for (g, foot) in cands {
            if done == 2 {
                break;
            }
            if !self.know.gaps().contains(&g) {
                continue;
            }
            let r = self.pos();
            // the search interval runs from the robot to the end beyond the foot
            let far = if on_segment(&foot, &r, s1) { s1.clone() } else { s0.clone() };
            if far == r {
                continue;
            }
            let side = side_of(&r, &far, &g);
            self.binary_search(&far, &g, &foot, side)?;
            done += 1;
        }
        Ok(())
    }

    /// Halves the interval between the robot and `far` towards `foot` until
    /// the open end `g` closes or the interval is no wider than `a`.
    fn binary_search(&mut self, far: &Point, g: &Point, foot: &Point, side: NvrSide) -> Result<(), StrategyError> {
        let mut near = self.pos();
        let mut far = far.clone();
        let w = near.l1(&far);
        if w < self.a {
            return Ok(());
        }
        self.w.log_event(Event::Nvr { w: w.clone(), side: side_name(side).to_string() });
        let mut travel = Coord::zero();
        let mut scans = 0usize;
        while near.l1(&far) > self.a {
            let m = near.midpoint(&far);
            self.w.move_to(std::slice::from_ref(&m))?;
            travel = travel + near.l1(&m);
            self.scan();
            scans += 1;
            if !self.know.gaps().contains(g) {
                break;
            }
            if on_segment(foot, &m, &far) {
                near = m;
            } else {
                far = near;
                near = m;
            }
        }
        let cost = &travel + &Coord::int(scans as i64);
        let ok = within_binary_search_bound(&cost, &w, &self.a).unwrap_or(false);
        self.searches.push(BinarySearchRecord { episode: self.episode, w, a: self.a.clone(), travel, scans, ok });
        Ok(())
    }

    /// Guaranteed progress: scanning at the chain end sees at least one more corner.
    fn fallback(&mut self, fr: &Frontier, before: &Snap) -> Result<(), StrategyError> {
        self.tag("fallback");
        let mut targets = vec![fr.f.clone()];
        if let FrontierKind::Blocked { b } = &fr.kind {
            targets.push(b.clone());
        }
        if let Some(ray) = &fr.ext {
            targets.push(self.know.ray_free_extent(ray));
        }
        for t in targets {
            if self.pos() != t && !self.route_to(&t)? {
                continue;
            }
            self.scan();
            if self.snap()? != *before {
                return Ok(());
            }
        }
        Err(self.stuck())
    }

    /// Closed chain: the polygon is known. Scan where the most uncertified
    /// edges become fully visible per unit of travel plus scan cost.
    fn certify(&mut self) -> Result<bool, StrategyError> {
        let poly = self.know.polygon(&self.anchor).ok_or_else(|| self.stuck())?;
        let pts: Vec<Point> = self.w.scans().iter().map(|s| s.p.clone()).collect();
        let unc = uncovered_edges(&poly, pts.iter());
        if unc.is_empty() {
            return Ok(false);
        }
        self.tag("certify");
        let mut cands: Vec<Point> = poly.vertices().to_vec();
        for &i in &unc {
            let e = poly.edge(i);
            cands.push(e.start.midpoint(&e.end));
        }
        let mut xs: Vec<Coord> = poly.vertices().iter().map(|v| v.x.clone()).collect();
        let mut ys: Vec<Coord> = poly.vertices().iter().map(|v| v.y.clone()).collect();
        xs.sort();
        xs.dedup();
        ys.sort();
        ys.dedup();
        for x in &xs {
            for y in &ys {
                let p = Point::new(x.clone(), y.clone());
                if poly.contains(&p) {
                    cands.push(p);
                }
            }
        }
        cands.sort();
        cands.dedup();
        let r = self.pos();
        let grid = poly.geodesic_grid(cands.iter().chain(std::iter::once(&r)));
        let field = grid.field(&r).ok_or_else(|| self.stuck())?;
        let c = self.w.cost_model().scan_cost.clone();
        let mut best: Option<(Coord, Coord, Point)> = None;
        for p in &cands {
            let Some(Some(d)) = grid.node(p).map(|k| field[k].clone()) else { continue };
            let n = unc.iter().filter(|&&i| edge_fully_visible_from(p, i, &poly).unwrap_or(false)).count();
            if n == 0 {
                continue;
            }
            let score = Coord::int(n as i64) / (&d + &c);
            let better = match &best {
                None => true,
                Some((s, bd, _)) => score > *s || (score == *s && d < *bd),
            };
            if better {
                best = Some((score, d, p.clone()));
            }
        }
        let (_, _, target) = best.ok_or_else(|| self.stuck())?;
        if target != r {
            let path = grid.path(&r, &target).ok_or_else(|| self.stuck())?;
            self.w.move_to(&path.points[1..])?;
        }
        self.scan();
        Ok(true)
    }
}

fn clamp_on(p: &Point, a: &Point, b: &Point) -> Point {
    let cl = |v: &Coord, x: &Coord, y: &Coord| {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        v.clone().max(lo.clone()).min(hi.clone())
    };
    Point::new(cl(&p.x, &a.x, &b.x), cl(&p.y, &a.y, &b.y))
}

fn side_of(from: &Point, to: &Point, g: &Point) -> NvrSide {
    if from.y == to.y {
        if g.y > from.y {
            NvrSide::North
        } else {
            NvrSide::South
        }
    } else if crate::geom::orient(from, to, g) > 0 {
        NvrSide::Counterclockwise
    } else {
        NvrSide::Clockwise
    }
}

fn side_name(s: NvrSide) -> &'static str {
    match s {
        NvrSide::Clockwise => "clockwise",
        NvrSide::Counterclockwise => "counterclockwise",
        NvrSide::North => "north",
        NvrSide::South => "south",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::binary_search_bound;

    fn c(s: &str) -> Coord {
        s.parse().unwrap()
    }

    #[test]
    fn plan_schedule_and_bound() {
        let p = BinarySearchPlan::new(&c("4"), &c("1"));
        assert_eq!(p.steps, vec![c("2"), c("1")]);
        assert!(p.worst_cost().to_f64() <= binary_search_bound(4.0, 1.0).unwrap());
        assert_eq!(binary_search_steps(&c("1"), &c("1")), 0);
        // ceil(log2(w/a)) steps
        assert_eq!(binary_search_steps(&c("5"), &c("1")), 3);
        assert_eq!(binary_search_steps(&c("2"), &c("0.5")), 2);
    }

    #[test]
    fn straight_corridor_adjustment() {
        let s = [CorridorSlice { at: c("0"), lo: c("0"), hi: c("2") }];
        let p = turn_adjustment(&s, &c("5"), AdjustKind::EarlyTurn);
        assert_eq!(p.recenters, 0);
        assert_eq!(p.cost, c("5") + c("1") + c("1"));
    }

    #[test]
    fn narrowing_recentres_once_per_reduction() {
        let s = [
            CorridorSlice { at: c("0"), lo: c("0"), hi: c("4") },
            CorridorSlice { at: c("1"), lo: c("0"), hi: c("2") },
            CorridorSlice { at: c("2"), lo: c("0"), hi: c("3") },
            CorridorSlice { at: c("3"), lo: c("1"), hi: c("2") },
        ];
        let p = turn_adjustment(&s, &c("4"), AdjustKind::EarlyTurn);
        assert_eq!(p.recenters, 2);
        let two = turn_adjustment(&s, &c("4"), AdjustKind::ClosedSouth);
        assert_eq!(two.phases, 2);
        assert_eq!(two.final_adjust, &p.final_adjust * Coord::int(2));
    }
}
