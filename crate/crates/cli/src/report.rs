use serde::{Deserialize, Serialize};

use scanwatch::bounds::instance_upper_bound;
use scanwatch::corpus::PolygonFile;
use scanwatch::extensions::essential_order;
use scanwatch::simulator::Event;
use scanwatch::strategies::{OracleResult, OracleStatus, RunReport, StrategyContext};
use scanwatch::{Coord, Point, RectPolygon};

/// A number in exact and rounded form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Num {
    pub exact: String,
    pub approx: String,
}

impl From<&Coord> for Num {
    fn from(c: &Coord) -> Num {
        Num { exact: c.to_string(), approx: format!("{:.6}", c.to_f64()) }
    }
}

pub type Pair = [String; 2];

pub fn pair(p: &Point) -> Pair {
    [p.x.to_string(), p.y.to_string()]
}

pub fn unpair(p: &Pair) -> anyhow::Result<(f64, f64)> {
    let x: Coord = p[0].parse().map_err(|e| anyhow::anyhow!("bad coordinate {:?}: {e}", p[0]))?;
    let y: Coord = p[1].parse().map_err(|e| anyhow::anyhow!("bad coordinate {:?}: {e}", p[1]))?;
    Ok((x.to_f64(), y.to_f64()))
}

/// Everything `explore` knows about one run; `render` draws from it alone.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExploreReport {
    pub instance: String,
    pub strategy: String,
    pub seed: u64,
    pub c: Num,
    pub a: Num,
    pub a_k: Num,
    /// False when `a` or `a_k` exceed what the polygon actually has.
    pub context_valid: bool,
    pub t: Num,
    #[serde(rename = "L")]
    pub length: Num,
    #[serde(rename = "S")]
    pub scans: usize,
    pub episodes: usize,
    pub case_tags: Vec<String>,
    pub assertions_checked: usize,
    pub assertion_failures: usize,
    pub max_searches_per_episode: usize,
    pub terminated_ok: bool,
    pub oracle: Option<OracleSummary>,
    /// Present only against an exact optimum.
    pub ratio: Option<String>,
    pub bound: Option<String>,
    pub polygon: PolygonFile,
    pub path: Vec<Pair>,
    pub scan_points: Vec<Pair>,
    pub search_segments: Vec<[Pair; 2]>,
    pub extensions: Vec<[Pair; 2]>,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleSummary {
    pub status: OracleStatus,
    pub t: Num,
    pub lower: Num,
    pub resolution: u32,
}

impl From<&OracleResult> for OracleSummary {
    fn from(o: &OracleResult) -> OracleSummary {
        OracleSummary { status: o.status, t: (&o.t).into(), lower: (&o.lower).into(), resolution: o.resolution }
    }
}

/// `t / t_opt`, only when the optimum is exact.
pub fn ratio(t: &Coord, oracle: Option<&OracleResult>) -> Option<Coord> {
    let o = oracle?;
    (o.status == OracleStatus::Exact && o.t.is_positive()).then(|| t / &o.t)
}

pub fn bound_for(ctx: &StrategyContext) -> Option<f64> {
    instance_upper_bound(ctx.a.to_f64(), ctx.a_k.to_f64()).ok()
}

/// Moves belonging to binary searches. Each search is announced by an NVR
/// event and then takes one move and one scan per halving step.
pub fn search_segments(start: &Point, events: &[Event], rep: &RunReport) -> Vec<(Point, Point)> {
    let mut out = Vec::new();
    let mut pos = start.clone();
    let mut searches = rep.searches.iter();
    let mut left = 0usize;
    for ev in events {
        match ev {
            Event::Nvr { .. } => left = searches.next().map_or(0, |s| s.scans),
            Event::Move { to, .. } | Event::Blocked { at: to, .. } => {
                if left > 0 {
                    out.push((pos.clone(), to.clone()));
                    left -= 1;
                }
                pos = to.clone();
            }
            _ => {}
        }
    }
    out
}

pub struct RunInput<'a> {
    pub instance: &'a str,
    pub polygon: &'a RectPolygon,
    pub start: &'a Point,
    pub seed: u64,
    pub c: &'a Coord,
    pub ctx: &'a StrategyContext,
    pub oracle: Option<&'a OracleResult>,
}

pub fn explore_report(input: &RunInput, rep: &RunReport, events: &[Event]) -> ExploreReport {
    let seg = |(p, q): (&Point, &Point)| [pair(p), pair(q)];
    ExploreReport {
        instance: input.instance.to_string(),
        strategy: rep.strategy.clone(),
        seed: input.seed,
        c: input.c.into(),
        a: (&input.ctx.a).into(),
        a_k: (&input.ctx.a_k).into(),
        context_valid: input.ctx.holds_for(input.polygon),
        t: (&rep.t).into(),
        length: (&rep.length).into(),
        scans: rep.scans,
        episodes: rep.episodes,
        case_tags: rep.case_tags.clone(),
        assertions_checked: rep.assertions_checked,
        assertion_failures: rep.assertion_failures,
        max_searches_per_episode: rep.max_searches_per_episode(),
        terminated_ok: rep.tour.terminated_ok,
        oracle: input.oracle.map(OracleSummary::from),
        ratio: ratio(&rep.t, input.oracle).map(|r| format!("{:.6}", r.to_f64())),
        bound: bound_for(input.ctx).map(|b| format!("{b:.4}")),
        polygon: PolygonFile { vertices: input.polygon.vertices().to_vec(), start: input.start.clone() },
        path: rep.tour.path.points.iter().map(pair).collect(),
        scan_points: rep.tour.scan_points.iter().map(pair).collect(),
        search_segments: search_segments(input.start, events, rep).iter().map(|(p, q)| seg((p, q))).collect(),
        extensions: essential_order(input.polygon, input.start).iter().map(|e| seg(e.segment())).collect(),
        events: events.to_vec(),
    }
}
