//! Single-niche lower-bound instances: a wide shallow room whose ceiling opens
//! into a stack of layers, each layer one outer third of the one below.

use serde::{Deserialize, Serialize};

use crate::coord::Coord;
use crate::geom::{validate_polygon, GeomError, Point, RectPolygon};
use crate::simulator::{finalize, new_world, CostModel, Event, MoveOutcome, ScanRecord, ScanTour, SimError, World, WorldState};
use crate::visibility::{simplify_cycle, VisibilityRegion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryMode {
    Static,
    Adaptive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NicheParams {
    /// Distance from the start to the base line.
    pub delta: Coord,
    /// Horizontal offset of the start from the corner `a0`.
    pub d: Coord,
    pub eps: Coord,
    /// Growth constant of the longest side.
    pub f: Coord,
    pub depth: usize,
    pub a0: Coord,
    pub b0: Coord,
    pub mode: AdversaryMode,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NicheError {
    #[error("invalid niche parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

impl NicheParams {
    /// δ = d = f = 1 over the base interval [0, 1].
    pub fn standard(depth: usize) -> NicheParams {
        NicheParams::new(Coord::one(), Coord::one(), depth)
    }

    pub fn new(delta: Coord, d: Coord, depth: usize) -> NicheParams {
        let (a0, b0) = (Coord::zero(), Coord::one());
        let eps = (&b0 - &a0) * Coord::pow2(-20);
        NicheParams { delta, d, eps, f: Coord::one(), depth, a0, b0, mode: AdversaryMode::Static }
    }

    pub fn validate(&self) -> Result<(), NicheError> {
        if !self.delta.is_positive() || !self.d.is_positive() || !self.eps.is_positive() {
            return Err(NicheError::InvalidParams("delta, d and eps must be positive".into()));
        }
        if self.b0 <= self.a0 {
            return Err(NicheError::InvalidParams("empty base interval".into()));
        }
        if self.depth > 40 {
            return Err(NicheError::InvalidParams(format!("depth {} too large", self.depth)));
        }
        Ok(())
    }

    pub fn width(&self) -> Coord {
        &self.b0 - &self.a0
    }

    /// Layer heights y_0 ..= y_depth.
    pub fn heights(&self) -> Vec<Coord> {
        let mut ys: Vec<Coord> = Vec::with_capacity(self.depth + 1);
        ys.push(&self.delta / &self.d * self.width() + &self.eps);
        let mut total = ys[0].clone();
        for _ in 1..=self.depth {
            let y = (&total + &self.delta) * Coord::int(2) + &self.eps;
            total = total + &y;
            ys.push(y);
        }
        ys
    }

    /// Floor level of each layer plus the top: Y_0 = 0 ..= Y_{depth+1}.
    pub fn levels(&self) -> Vec<Coord> {
        let mut out = vec![Coord::zero()];
        for y in self.heights() {
            let last = out.last().unwrap().clone();
            out.push(last + y);
        }
        out
    }

    /// Intervals [a_j, b_j] for the given open-third choices.
    pub fn intervals(&self, choices: &[Side]) -> Vec<(Coord, Coord)> {
        let mut out = vec![(self.a0.clone(), self.b0.clone())];
        for j in 0..self.depth {
            let (a, b) = out[j].clone();
            let third = (&b - &a) / Coord::int(3);
            let next = match choices.get(j).copied().unwrap_or(Side::Right) {
                Side::Left => (a.clone(), &a + &third),
                Side::Right => (&b - &third, b),
            };
            out.push(next);
        }
        out
    }

    pub fn room(&self) -> (Coord, Coord) {
        let two_d = &self.d * Coord::int(2);
        (&self.a0 - &two_d, &self.b0 + &two_d)
    }

    pub fn start(&self) -> Point {
        Point::new(&self.a0 - &self.d, -&self.delta)
    }

    /// Aspect ratio read off the schedule alone.
    pub fn schedule_aspect_ratio(&self, choices: &[Side]) -> Coord {
        let iv = self.intervals(choices);
        let ys = self.heights();
        let (l, r) = self.room();
        let mut sides: Vec<Coord> = vec![&r - &l, self.delta.clone(), &self.a0 - &l, &r - &self.b0];
        sides.push(iv[self.depth].1.clone() - &iv[self.depth].0);
        // vertical runs merge while the wall keeps its x
        for left in [true, false] {
            let mut run = Coord::zero();
            for j in 0..=self.depth {
                run = run + &ys[j];
                let x = |k: usize| if left { iv[k].0.clone() } else { iv[k].1.clone() };
                if j == self.depth || x(j) != x(j + 1) {
                    sides.push(run.clone());
                    run = Coord::zero();
                    if j < self.depth {
                        sides.push((x(j) - x(j + 1)).abs());
                    }
                }
            }
        }
        let max = sides.iter().max().unwrap().clone();
        let min = sides.iter().min().unwrap().clone();
        max / min
    }
}

/// Left, Right, Left, ... of the given length.
pub fn alternating_choices(depth: usize) -> Vec<Side> {
    (0..depth).map(|j| if j % 2 == 0 { Side::Left } else { Side::Right }).collect()
}

/// Vertex cycle for the given choices, with `layers` layers stacked above the room.
pub(crate) fn niche_ring(np: &NicheParams, choices: &[Side], layers: usize) -> Vec<Point> {
    let iv = np.intervals(choices);
    let lv = np.levels();
    let (l, r) = np.room();
    let top = layers.min(np.depth + 1);
    let mut pts = vec![
        Point::new(l.clone(), -&np.delta),
        Point::new(r.clone(), -&np.delta),
        Point::new(r, Coord::zero()),
    ];
    for j in 0..top {
        pts.push(Point::new(iv[j].1.clone(), lv[j].clone()));
        pts.push(Point::new(iv[j].1.clone(), lv[j + 1].clone()));
    }
    for j in (0..top).rev() {
        pts.push(Point::new(iv[j].0.clone(), lv[j + 1].clone()));
        pts.push(Point::new(iv[j].0.clone(), lv[j].clone()));
    }
    pts.push(Point::new(l, Coord::zero()));
    simplify_cycle(&mut pts);
    pts
}

/// Fully committed niche polygon.
pub fn static_niche(np: &NicheParams, choices: &[Side]) -> Result<RectPolygon, NicheError> {
    np.validate()?;
    Ok(validate_polygon(niche_ring(np, choices, np.depth + 1))?)
}

/// A layer fixed by the adaptive adversary, and the query that forced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub layer: usize,
    pub open: Side,
    /// Scans taken before the deciding query (the query itself included when it is a scan).
    pub scans: usize,
    pub by_scan: bool,
}

/// Niche world whose layers are fixed lazily. Every query is answered against
/// the committed layers with right thirds assumed beyond them; a layer is
/// committed only once its two open-third candidates would answer differently,
/// and then the third farther from the robot stays open.
#[derive(Debug, Clone)]
pub struct AdaptiveNiche {
    np: NicheParams,
    committed: Vec<Side>,
    resolutions: Vec<Resolution>,
    ws: WorldState,
}

impl AdaptiveNiche {
    pub fn new(np: NicheParams, cm: CostModel) -> Result<AdaptiveNiche, NicheError> {
        let poly = static_niche(&np, &[])?;
        let ws = new_world(poly, np.start(), cm).map_err(|e| NicheError::InvalidParams(e.to_string()))?;
        Ok(AdaptiveNiche { np, committed: Vec::new(), resolutions: Vec::new(), ws })
    }

    pub fn params(&self) -> &NicheParams {
        &self.np
    }

    pub fn committed(&self) -> &[Side] {
        &self.committed
    }

    pub fn resolutions(&self) -> &[Resolution] {
        &self.resolutions
    }

    /// The polygon every answer so far is consistent with.
    pub fn committed_polygon(&self) -> RectPolygon {
        self.ws.hidden.clone()
    }

    fn polygon_with(&self, extra: Option<Side>) -> RectPolygon {
        let mut ch = self.committed.clone();
        ch.extend(extra);
        static_niche(&self.np, &ch).expect("validated parameters")
    }

    fn answer<R: PartialEq>(&mut self, by_scan: bool, op: impl Fn(&mut WorldState) -> R) -> R {
        while self.committed.len() < self.np.depth {
            let j = self.committed.len();
            let mut outcomes = [Side::Left, Side::Right].map(|side| {
                let mut probe = self.ws.clone();
                probe.set_hidden(self.polygon_with(Some(side)));
                let r = op(&mut probe);
                (r, probe.robot_state())
            });
            let [(rl, sl), (rr, sr)] = &mut outcomes;
            if rl == rr && sl == sr {
                break;
            }
            let (a, b) = self.np.intervals(&self.committed)[j].clone();
            let mid = (&a + &b) / Coord::int(2);
            let open = if self.ws.position().x > mid { Side::Left } else { Side::Right };
            self.committed.push(open);
            let scans = self.ws.scans().len() + usize::from(by_scan);
            self.resolutions.push(Resolution { layer: j, open, scans, by_scan });
            let poly = self.polygon_with(None);
            self.ws.set_hidden(poly);
        }
        op(&mut self.ws)
    }
}

impl World for AdaptiveNiche {
    fn position(&self) -> &Point {
        self.ws.position()
    }

    fn start(&self) -> &Point {
        self.ws.start()
    }

    fn cost_model(&self) -> &CostModel {
        self.ws.cost_model()
    }

    fn cost(&self) -> &Coord {
        self.ws.cost()
    }

    fn scan(&mut self) -> VisibilityRegion {
        self.answer(true, |w| w.scan())
    }

    fn move_to(&mut self, waypoints: &[Point]) -> Result<MoveOutcome, SimError> {
        self.answer(false, |w| w.move_to(waypoints))
    }

    fn scans(&self) -> &[ScanRecord] {
        self.ws.scans()
    }

    fn path(&self) -> &[Point] {
        self.ws.path()
    }

    fn travel(&self) -> &Coord {
        self.ws.travel()
    }

    fn events(&self) -> &[Event] {
        self.ws.events()
    }

    fn log_event(&mut self, ev: Event) {
        self.ws.log_event(ev);
    }

    /// Open layers keep their default right third.
    fn finish(&mut self) -> Result<ScanTour, SimError> {
        self.committed.resize(self.np.depth, Side::Right);
        finalize(&mut self.ws)
    }
}

/// Output of the generator: a fixed polygon or a lazily committing world.
#[derive(Debug, Clone)]
pub enum GeneratedNiche {
    Static(RectPolygon),
    Adaptive(Box<AdaptiveNiche>),
}

/// Static mode commits alternating thirds.
pub fn gen_niche(np: &NicheParams, cm: CostModel) -> Result<GeneratedNiche, NicheError> {
    np.validate()?;
    Ok(match np.mode {
        AdversaryMode::Static => GeneratedNiche::Static(static_niche(np, &alternating_choices(np.depth))?),
        AdversaryMode::Adaptive => GeneratedNiche::Adaptive(Box::new(AdaptiveNiche::new(np.clone(), cm)?)),
    })
}
