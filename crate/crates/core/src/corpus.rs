//! Instance generators and named fixtures.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coord::Coord;
use crate::geom::{validate_polygon, GeomError, Point, RectPolygon};
use crate::simulator::{new_world, pair, CostModel};
use crate::strategies::{offline_oracle, run_strategy, star_optimum, OracleStatus, StrategyContext};
use crate::visibility::kernel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    RandomRectilinear { max_vertices: usize, seed: u64 },
    Staircase { steps: usize },
    Comb { teeth: usize },
    Fig4a { niches: usize },
    Fig5Nvr,
    Fig10ClosedSouth,
    Fig12,
    LShape,
    Square,
    NicheStatic { depth: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartRule {
    /// The fixture's own start.
    Default,
    /// Random dyadic point on a random edge, from the generator seed.
    RandomBoundary,
    Given(Point),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub generator: Generator,
    /// Rescale so that the minimum edge length equals this value.
    pub a_target: Option<Coord>,
    pub start: StartRule,
}

impl InstanceSpec {
    pub fn new(generator: Generator) -> InstanceSpec {
        InstanceSpec { generator, a_target: None, start: StartRule::Default }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub polygon: RectPolygon,
    pub start: Point,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{path}: {msg}")]
    Format { path: String, msg: String },
}

pub fn generate(spec: &InstanceSpec) -> Result<Instance, CorpusError> {
    let (poly, start) = match &spec.generator {
        Generator::RandomRectilinear { max_vertices, seed } => {
            let p = random_rectilinear(*max_vertices, *seed)?;
            let s = p.vertex(0).midpoint(p.vertex(1));
            (p, s)
        }
        Generator::Staircase { steps } => staircase(*steps),
        Generator::Comb { teeth } => comb(*teeth),
        Generator::Fig4a { niches } => fig4a(*niches),
        Generator::Fig5Nvr => fig5_nvr(),
        Generator::Fig10ClosedSouth => fig10_closed_south(),
        Generator::Fig12 => fig12(),
        Generator::LShape => (
            RectPolygon::from_ints(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])?,
            Point::parse("0.25", "0.25").unwrap(),
        ),
        Generator::Square => (RectPolygon::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)])?, Point::ints(0, 0)),
        Generator::NicheStatic { depth } => {
            let np = crate::bounds::NicheParams::standard(*depth);
            let p = crate::bounds::static_niche(&np, &crate::bounds::alternating_choices(*depth))
                .map_err(|_| CorpusError::GenerationFailed(1))?;
            (p, np.start())
        }
    };
    let seed = match &spec.generator {
        Generator::RandomRectilinear { seed, .. } => *seed,
        _ => 0,
    };
    let (poly, start) = match &spec.a_target {
        Some(a) => {
            let k = a / poly.a_min();
            let scaled = validate_polygon(poly.vertices().iter().map(|v| v.scale(&k)).collect())?;
            (scaled, start.scale(&k))
        }
        None => (poly, start),
    };
    let start = match &spec.start {
        StartRule::Default => start,
        StartRule::Given(p) => p.clone(),
        StartRule::RandomBoundary => random_boundary_point(&poly, seed),
    };
    Ok(Instance { polygon: poly, start })
}

/// Point `k/4` of the way along a random edge, chosen by seed.
pub fn random_boundary_point(poly: &RectPolygon, seed: u64) -> Point {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_b0d5);
    let e = &poly.edges()[rng.gen_range(0..poly.len())];
    let k = rng.gen_range(0..4i64);
    let t = Coord::frac(k, 4);
    e.dir.step(&e.start, &(e.length() * t))
}

type Cell = (i32, i32);

fn neighbours((x, y): Cell) -> [Cell; 4] {
    [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)]
}

/// No two cells of the set touch only at a corner.
fn pinch_free(cells: &HashSet<Cell>, c: Cell) -> bool {
    for (dx, dy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let d = (c.0 + dx, c.1 + dy);
        let h = (c.0 + dx, c.1);
        let v = (c.0, c.1 + dy);
        if cells.contains(&d) && !cells.contains(&h) && !cells.contains(&v) {
            return false;
        }
    }
    true
}

fn hole_free(cells: &HashSet<Cell>) -> bool {
    let minx = cells.iter().map(|c| c.0).min().unwrap() - 1;
    let maxx = cells.iter().map(|c| c.0).max().unwrap() + 1;
    let miny = cells.iter().map(|c| c.1).min().unwrap() - 1;
    let maxy = cells.iter().map(|c| c.1).max().unwrap() + 1;
    let total = ((maxx - minx + 1) * (maxy - miny + 1)) as usize - cells.len();
    let mut seen = HashSet::new();
    let mut q = VecDeque::new();
    q.push_back((minx, miny));
    seen.insert((minx, miny));
    while let Some(c) = q.pop_front() {
        for n in neighbours(c) {
            if n.0 < minx || n.0 > maxx || n.1 < miny || n.1 > maxy || cells.contains(&n) || seen.contains(&n) {
                continue;
            }
            seen.insert(n);
            q.push_back(n);
        }
    }
    seen.len() == total
}

fn corner_pinches(cells: &HashSet<Cell>) -> bool {
    cells.iter().any(|&c| !pinch_free(cells, c))
}

/// Boundary cycle of a pinch-free, hole-free polyomino on the given grid lines.
fn trace(cells: &HashSet<Cell>, xs: &HashMap<i32, Coord>, ys: &HashMap<i32, Coord>) -> Vec<Point> {
    // ccw unit boundary edges keyed by start lattice point
    let mut next: HashMap<Cell, Cell> = HashMap::new();
    for &(x, y) in cells {
        if !cells.contains(&(x, y - 1)) {
            next.insert((x, y), (x + 1, y));
        }
        if !cells.contains(&(x + 1, y)) {
            next.insert((x + 1, y), (x + 1, y + 1));
        }
        if !cells.contains(&(x, y + 1)) {
            next.insert((x + 1, y + 1), (x, y + 1));
        }
        if !cells.contains(&(x - 1, y)) {
            next.insert((x, y + 1), (x, y));
        }
    }
    let start = *next.keys().min().unwrap();
    let mut lattice = vec![start];
    let mut cur = next[&start];
    while cur != start {
        lattice.push(cur);
        cur = next[&cur];
    }
    let n = lattice.len();
    let mut corners = Vec::new();
    for i in 0..n {
        let a = lattice[(i + n - 1) % n];
        let b = lattice[i];
        let c = lattice[(i + 1) % n];
        let straight = (a.0 == b.0 && b.0 == c.0) || (a.1 == b.1 && b.1 == c.1);
        if !straight {
            corners.push(Point::new(xs[&b.0].clone(), ys[&b.1].clone()));
        }
    }
    corners
}

/// Random simple rectilinear polygon with at most `max_vertices` vertices.
///
/// Grows a hole-free polyomino cell by cell, then assigns random dyadic
/// widths to the grid columns and rows.
pub fn random_rectilinear(max_vertices: usize, seed: u64) -> Result<RectPolygon, CorpusError> {
    let max_vertices = max_vertices.max(4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..64 {
        let target = rng.gen_range(4..=max_vertices);
        let mut cells: HashSet<Cell> = HashSet::new();
        cells.insert((0, 0));
        let mut best = cells.clone();
        for _ in 0..200 {
            let mut frontier: Vec<Cell> =
                cells.iter().flat_map(|&c| neighbours(c)).filter(|n| !cells.contains(n)).collect();
            frontier.sort();
            frontier.dedup();
            frontier.shuffle(&mut rng);
            let mut grown = false;
            for cand in frontier {
                let mut next = cells.clone();
                next.insert(cand);
                if corner_pinches(&next) || !hole_free(&next) {
                    continue;
                }
                let count = vertex_count(&next);
                if count > max_vertices {
                    continue;
                }
                cells = next;
                grown = true;
                break;
            }
            if !grown {
                break;
            }
            if vertex_count(&cells) >= target {
                best = cells.clone();
                break;
            }
            best = cells.clone();
        }
        let minx = best.iter().map(|c| c.0).min().unwrap();
        let maxx = best.iter().map(|c| c.0).max().unwrap() + 1;
        let miny = best.iter().map(|c| c.1).min().unwrap();
        let maxy = best.iter().map(|c| c.1).max().unwrap() + 1;
        let widths = [Coord::frac(1, 2), Coord::one(), Coord::frac(3, 2), Coord::int(2)];
        let mut xs = HashMap::new();
        let mut acc = Coord::zero();
        for x in minx..=maxx {
            xs.insert(x, acc.clone());
            acc = acc + widths.choose(&mut rng).unwrap();
        }
        let mut ys = HashMap::new();
        let mut acc = Coord::zero();
        for y in miny..=maxy {
            ys.insert(y, acc.clone());
            acc = acc + widths.choose(&mut rng).unwrap();
        }
        let pts = trace(&best, &xs, &ys);
        if pts.len() < 4 {
            continue;
        }
        match validate_polygon(pts) {
            Ok(p) => return Ok(p),
            Err(_) if attempt < 63 => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(CorpusError::GenerationFailed(64))
}

fn vertex_count(cells: &HashSet<Cell>) -> usize {
    let minx = cells.iter().map(|c| c.0).min().unwrap();
    let maxx = cells.iter().map(|c| c.0).max().unwrap() + 1;
    let miny = cells.iter().map(|c| c.1).min().unwrap();
    let maxy = cells.iter().map(|c| c.1).max().unwrap() + 1;
    let xs: HashMap<i32, Coord> = (minx..=maxx).map(|x| (x, Coord::int(x as i64))).collect();
    let ys: HashMap<i32, Coord> = (miny..=maxy).map(|y| (y, Coord::int(y as i64))).collect();
    trace(cells, &xs, &ys).len()
}

fn staircase(steps: usize) -> (RectPolygon, Point) {
    // top side descends westwards in `steps` unit steps of width 2
    let s = steps.max(1) as i64;
    let mut v = vec![(0, 0), (2 * s + 2, 0), (2 * s + 2, s + 1)];
    for k in (1..=s).rev() {
        v.push((2 * k, k + 1));
        v.push((2 * k, k));
    }
    v.push((0, 1));
    (RectPolygon::from_ints(&v).expect("staircase fixture"), Point::ints(1, 0))
}

fn comb(teeth: usize) -> (RectPolygon, Point) {
    // corridor with narrow niches rising from its top side, each hooking east
    let t = teeth.max(1) as i64;
    let mut v = vec![(0, 0), (4 * t + 1, 0), (4 * t + 1, 2)];
    for k in (0..t).rev() {
        let x = 4 * k + 1;
        v.extend([(x + 2, 2), (x + 2, 4), (x + 3, 4), (x + 3, 5), (x + 1, 5), (x + 1, 2)]);
    }
    v.push((0, 2));
    (RectPolygon::from_ints(&v).expect("comb fixture"), Point::ints(0, 0))
}

fn fig4a(niches: usize) -> (RectPolygon, Point) {
    // long wall with many shallow niches, all visible from far away
    let k = niches.max(1) as i64;
    let w = 2 * k + 1;
    let mut v = vec![(0, 0), (w, 0), (w, 3 * w)];
    for j in (0..k).rev() {
        let x = 2 * j + 1;
        v.push((x + 1, 3 * w));
        v.push((x + 1, 3 * w + 1));
        v.push((x, 3 * w + 1));
        v.push((x, 3 * w));
    }
    v.push((0, 3 * w));
    let poly = RectPolygon::from_ints(&v).expect("fig4a fixture");
    (poly, Point::new(Coord::frac(w, 2), Coord::zero()))
}

fn fig5_nvr() -> (RectPolygon, Point) {
    // corridor along y in [0, 2] with a pocket above x in [4, 5] whose top
    // is wider than its opening, so only part of the corridor sees it fully
    let v = [(0, 0), (10, 0), (10, 2), (5, 2), (5, 3), (6, 3), (6, 4), (3, 4), (3, 3), (4, 3), (4, 2), (0, 2)];
    (RectPolygon::from_ints(&v).expect("fig5 fixture"), Point::ints(0, 1))
}

fn fig10_closed_south() -> (RectPolygon, Point) {
    // corridor running north whose south is closed; side corridors west and north
    let v = [(0, 0), (4, 0), (4, 8), (2, 8), (2, 6), (-3, 6), (-3, 5), (2, 5), (2, 3), (0, 3)];
    (RectPolygon::from_ints(&v).expect("fig10 fixture"), Point::ints(1, 0))
}

fn fig12() -> (RectPolygon, Point) {
    // reconstruction: start on the south wall, the first hidden pocket to the
    // west with its extension straight north of the start, pockets to the north
    let v = [
        (2, 0),
        (12, 0),
        (12, 6),
        (11, 6),
        (11, 8),
        (9, 8),
        (9, 6),
        (6, 6),
        (6, 9),
        (4, 9),
        (4, 7),
        (0, 7),
        (0, 5),
        (2, 5),
    ];
    let half = |(x, y): (i64, i64)| Point::new(Coord::frac(x, 2), Coord::frac(y, 2));
    let poly = validate_polygon(v.iter().copied().map(half).collect()).expect("fig12 fixture");
    (poly, Point::new(Coord::frac(5, 2), Coord::zero()))
}

/// On-disk polygon: `{"vertices": [["0","0"], ...], "start": ["x","y"]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonFile {
    #[serde(with = "pair::vec")]
    pub vertices: Vec<Point>,
    #[serde(with = "pair")]
    pub start: Point,
}

impl From<&Instance> for PolygonFile {
    fn from(inst: &Instance) -> PolygonFile {
        PolygonFile { vertices: inst.polygon.vertices().to_vec(), start: inst.start.clone() }
    }
}

impl PolygonFile {
    pub fn into_instance(self) -> Result<Instance, CorpusError> {
        Ok(Instance { polygon: validate_polygon(self.vertices)?, start: self.start })
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CorpusError {
    CorpusError::Io { path: path.display().to_string(), msg: e.to_string() }
}

fn fmt_err(path: &Path, e: impl std::fmt::Display) -> CorpusError {
    CorpusError::Format { path: path.display().to_string(), msg: e.to_string() }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| fmt_err(path, e))
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<(), CorpusError> {
    let mut text = serde_json::to_string_pretty(v).map_err(|e| fmt_err(path, e))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Reads and validates a polygon file.
pub fn read_instance(path: &Path) -> Result<Instance, CorpusError> {
    read_json::<PolygonFile>(path)?.into_instance()
}

pub fn write_instance(path: &Path, inst: &Instance) -> Result<(), CorpusError> {
    write_json(path, &PolygonFile::from(inst))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub t: Coord,
    #[serde(rename = "L")]
    pub length: Coord,
    #[serde(rename = "S")]
    pub scans: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub status: OracleStatus,
    pub t: Coord,
    pub lower: Coord,
}

/// Frozen regression values for one corpus entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub name: String,
    pub spec: InstanceSpec,
    pub vertices: usize,
    pub a_min: Coord,
    pub a_k: Coord,
    pub runs: BTreeMap<String, RunSummary>,
    pub oracle: Option<OracleSummary>,
    pub star_optimum: Option<Coord>,
    pub note: String,
}

/// Grid resolution used for frozen oracle values.
pub const ORACLE_RES: u32 = 16;

/// Strategies whose results are frozen in `expected.json`.
pub const FROZEN_STRATEGIES: &[&str] = &["scansearch", "reflex"];

/// Runs the frozen strategies, the oracle and the star optimum on an instance.
pub fn compute_expected(name: &str, spec: &InstanceSpec, inst: &Instance, note: &str) -> Result<Expected, CorpusError> {
    let poly = &inst.polygon;
    let cm = CostModel::default();
    let a_k = corridor_width(poly);
    let ctx = StrategyContext::new(poly.a_min().clone(), a_k.clone()).map_err(|e| fmt_err(Path::new(name), e))?;
    let mut runs = BTreeMap::new();
    for s in FROZEN_STRATEGIES {
        let mut w = new_world(poly.clone(), inst.start.clone(), cm.clone()).map_err(|e| fmt_err(Path::new(name), e))?;
        let r = run_strategy(s, &mut w, &ctx).map_err(|e| fmt_err(Path::new(name), e))?;
        runs.insert(s.to_string(), RunSummary { t: r.t, length: r.length, scans: r.scans });
    }
    let oracle = offline_oracle(poly, &inst.start, &cm, ORACLE_RES)
        .ok()
        .map(|o| OracleSummary { status: o.status, t: o.t, lower: o.lower });
    Ok(Expected {
        name: name.to_string(),
        spec: spec.clone(),
        vertices: poly.len(),
        a_min: poly.a_min().clone(),
        a_k,
        runs,
        oracle,
        star_optimum: star_optimum(poly, &inst.start, &cm.scan_cost).ok(),
        note: note.to_string(),
    })
}

/// Minimum edge lengths used by the fuzz campaigns.
pub const FUZZ_A: [(i64, i64); 3] = [(1, 1), (1, 2), (1, 4)];

/// Random instance of at most 24 vertices rescaled to `a`, started on the boundary.
pub fn fuzz_spec(seed: u64, a: Coord) -> InstanceSpec {
    InstanceSpec {
        generator: Generator::RandomRectilinear { max_vertices: 24, seed },
        a_target: Some(a),
        start: StartRule::RandomBoundary,
    }
}

/// Named corpus entries with a short note on what each one exercises.
pub fn corpus_specs() -> Vec<(String, InstanceSpec, String)> {
    let mut out: Vec<(String, InstanceSpec, String)> = [
        ("square", Generator::Square, "one scan from the corner sees everything"),
        ("lshape", Generator::LShape, "start inside the kernel"),
        ("staircase3", Generator::Staircase { steps: 3 }, "one reflex vertex per step"),
        ("comb3", Generator::Comb { teeth: 3 }, "hooked teeth, three essential extensions"),
        ("fig4a", Generator::Fig4a { niches: 5 }, "many shallow niches seen from afar; one scan is optimal"),
        ("fig5_nvr", Generator::Fig5Nvr, "pocket only partly visible from the corridor"),
        ("fig10_closed_south", Generator::Fig10ClosedSouth, "corridor closed to the south"),
        ("fig12", Generator::Fig12, "walkthrough fixture; the first episode moves straight to E"),
        ("niche2", Generator::NicheStatic { depth: 2 }, "static lower-bound niche, alternating thirds"),
    ]
    .into_iter()
    .map(|(n, g, note)| (n.to_string(), InstanceSpec::new(g), note.to_string()))
    .collect();
    let targets = [Coord::one(), Coord::frac(1, 2), Coord::frac(1, 4)];
    for seed in 0..24u64 {
        let spec = InstanceSpec {
            generator: Generator::RandomRectilinear { max_vertices: 10, seed },
            a_target: Some(targets[seed as usize % 3].clone()),
            start: StartRule::RandomBoundary,
        };
        out.push((format!("tiny_{seed:02}"), spec, "random, small enough for the exact oracle".into()));
    }
    for seed in 0..6u64 {
        let spec = InstanceSpec {
            generator: Generator::RandomRectilinear { max_vertices: 24, seed: 1000 + seed },
            a_target: Some(targets[seed as usize % 3].clone()),
            start: StartRule::RandomBoundary,
        };
        out.push((format!("random_{seed:02}"), spec, "random, beyond the oracle's size limit".into()));
    }
    out.extend(star_specs(10).into_iter().enumerate().map(|(i, spec)| {
        (format!("star_{i:02}"), spec, "star-shaped with 2 d(start, kernel) <= c".into())
    }));
    out
}

/// Star-shaped random instances whose start lies within c/2 of the kernel.
pub fn star_specs(count: usize) -> Vec<InstanceSpec> {
    let mut out = Vec::new();
    let half = Coord::frac(1, 2);
    for seed in 0..10_000u64 {
        if out.len() == count {
            break;
        }
        let spec = InstanceSpec {
            generator: Generator::RandomRectilinear { max_vertices: 10, seed: 5000 + seed },
            a_target: Some(Coord::frac(1, 4)),
            start: StartRule::RandomBoundary,
        };
        let Ok(inst) = generate(&spec) else { continue };
        let Some(rect) = kernel(&inst.polygon).rect else { continue };
        let near = rect.clamp(&inst.start);
        let Ok(d) = inst.polygon.geodesic_distance(&inst.start, &near) else { continue };
        if inst.polygon.len() > 4 && d <= half {
            out.push(spec);
        }
    }
    out
}

/// Writes `<dir>/<name>/polygon.json` and `expected.json` for every corpus entry.
pub fn write_corpus(dir: &Path) -> Result<Vec<PathBuf>, CorpusError> {
    let mut written = Vec::new();
    for (name, spec, note) in corpus_specs() {
        let inst = generate(&spec)?;
        let sub = dir.join(&name);
        std::fs::create_dir_all(&sub).map_err(|e| io_err(&sub, e))?;
        write_instance(&sub.join("polygon.json"), &inst)?;
        write_json(&sub.join("expected.json"), &compute_expected(&name, &spec, &inst, &note)?)?;
        written.push(sub);
    }
    Ok(written)
}

/// One corpus directory entry.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub instance: Instance,
    pub expected: Option<Expected>,
}

/// Loads every `<dir>/*/polygon.json`, sorted by name. A plain polygon file
/// passed as `dir` loads as a single entry.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    if dir.is_file() {
        let name = dir.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        return Ok(vec![CorpusEntry { name, instance: read_instance(dir)?, expected: None }]);
    }
    let mut out = Vec::new();
    for ent in std::fs::read_dir(dir).map_err(|e| io_err(dir, e))? {
        let path = ent.map_err(|e| io_err(dir, e))?.path();
        let poly = path.join("polygon.json");
        if !poly.is_file() {
            continue;
        }
        let exp = path.join("expected.json");
        let expected = if exp.is_file() { Some(read_json(&exp)?) } else { None };
        let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        out.push(CorpusEntry { name, instance: read_instance(&poly)?, expected });
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

/// Minimum clearance between facing parallel edges, used as the corridor width.
pub fn corridor_width(poly: &RectPolygon) -> Coord {
    let mut best: Option<Coord> = None;
    for e in poly.edges() {
        for f in poly.edges() {
            if e.inward != f.inward.opposite() || e.dir.is_horizontal() != f.dir.is_horizontal() {
                continue;
            }
            let gap = e.inner_offset(&f.start);
            if !gap.is_positive() || !f.inner_offset(&e.start).is_positive() {
                continue;
            }
            let along = |p: &Point| if e.dir.is_horizontal() { p.x.clone() } else { p.y.clone() };
            let (a0, a1) = sorted(along(&e.start), along(&e.end));
            let (b0, b1) = sorted(along(&f.start), along(&f.end));
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo >= hi {
                continue;
            }
            let mid = (&lo + &hi).half();
            let (p, q) = if e.dir.is_horizontal() {
                (Point::new(mid.clone(), e.start.y.clone()), Point::new(mid, f.start.y.clone()))
            } else {
                (Point::new(e.start.x.clone(), mid.clone()), Point::new(f.start.x.clone(), mid))
            };
            if !poly.segment_inside(&p, &q) {
                continue;
            }
            if best.as_ref().is_none_or(|b| gap < *b) {
                best = Some(gap);
            }
        }
    }
    best.unwrap_or_else(|| poly.a_min().clone())
}

fn sorted(a: Coord, b: Coord) -> (Coord, Coord) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_polygons_are_valid_and_deterministic() {
        for seed in 0..40 {
            let a = random_rectilinear(24, seed).unwrap();
            let b = random_rectilinear(24, seed).unwrap();
            assert_eq!(a, b);
            assert!(a.len() <= 24);
        }
        let sizes: HashSet<usize> = (0..40).map(|s| random_rectilinear(24, s).unwrap().len()).collect();
        assert!(sizes.len() > 4, "{:?}", sizes);
    }

    #[test]
    fn fixtures_validate() {
        for g in [
            Generator::Staircase { steps: 3 },
            Generator::Comb { teeth: 3 },
            Generator::Fig4a { niches: 5 },
            Generator::Fig5Nvr,
            Generator::Fig10ClosedSouth,
            Generator::Fig12,
            Generator::LShape,
            Generator::Square,
        ] {
            let inst = generate(&InstanceSpec::new(g.clone())).unwrap();
            assert!(inst.polygon.contains(&inst.start), "{:?}", g);
        }
    }

    #[test]
    fn rescaling_hits_target() {
        let mut spec = InstanceSpec::new(Generator::RandomRectilinear { max_vertices: 16, seed: 7 });
        spec.a_target = Some(Coord::frac(1, 4));
        let inst = generate(&spec).unwrap();
        assert_eq!(*inst.polygon.a_min(), Coord::frac(1, 4));
    }

    #[test]
    fn corridor_width_examples() {
        let l = RectPolygon::from_ints(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(corridor_width(&l), Coord::one());
        let (c, _) = comb(2);
        assert_eq!(corridor_width(&c), Coord::one());
    }
}
