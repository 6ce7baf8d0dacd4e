//! Exploration strategies, comparison baselines and offline yardsticks.

pub mod baselines;
pub mod oracle;
pub mod scansearch;

use serde::{Deserialize, Serialize};

use crate::coord::Coord;
use crate::geom::{Point, RectPolygon};
use crate::simulator::{ScanTour, SimError, World};

pub use baselines::{continuous_greedy, reflex_baseline, star_optimum, GreedyPath};
pub use oracle::{offline_oracle, OracleResult, OracleStatus};
pub use scansearch::{binary_search_steps, line_creation, scansearch, turn_adjustment, AdjustKind, BinarySearchPlan, LineCreation};

/// A-priori knowledge handed to a strategy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyContext {
    /// Minimum edge length.
    pub a: Coord,
    /// Minimum corridor width.
    pub a_k: Coord,
}

impl StrategyContext {
    pub fn new(a: Coord, a_k: Coord) -> Result<StrategyContext, StrategyError> {
        if !a.is_positive() || !a_k.is_positive() {
            return Err(StrategyError::InvalidContext(format!("a = {a}, a_k = {a_k}")));
        }
        Ok(StrategyContext { a, a_k })
    }

    /// The true minima of a known polygon, as the harness would hand them over.
    pub fn measured(poly: &RectPolygon) -> StrategyContext {
        StrategyContext { a: poly.a_min().clone(), a_k: crate::corpus::corridor_width(poly) }
    }

    /// Whether `poly` honours the promised minima.
    pub fn holds_for(&self, poly: &RectPolygon) -> bool {
        *poly.a_min() >= self.a && crate::corpus::corridor_width(poly) >= self.a_k
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrategyError {
    #[error("no progress in episode {episode} at {at:?}")]
    Stuck { episode: usize, at: Point },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("polygon is not star-shaped")]
    NotStarShaped,
    #[error("instance too large for the oracle: {0}")]
    TooLarge(String),
    #[error("start is not on the boundary")]
    StartNotOnBoundary,
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
}

/// Bookkeeping for one binary search. Cost counts one unit per scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinarySearchRecord {
    pub episode: usize,
    pub w: Coord,
    pub a: Coord,
    pub travel: Coord,
    pub scans: usize,
    /// `travel + scans` is within `w - a/2 + log2(w/a) + 1`.
    pub ok: bool,
}

impl BinarySearchRecord {
    pub fn cost(&self) -> Coord {
        &self.travel + &Coord::int(self.scans as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub strategy: String,
    pub t: Coord,
    #[serde(rename = "L")]
    pub length: Coord,
    #[serde(rename = "S")]
    pub scans: usize,
    pub episodes: usize,
    pub case_tags: Vec<String>,
    pub searches: Vec<BinarySearchRecord>,
    pub assertions_checked: usize,
    pub assertion_failures: usize,
    pub tour: ScanTour,
}

impl RunReport {
    pub(crate) fn new(strategy: &str, tour: ScanTour) -> RunReport {
        RunReport {
            strategy: strategy.to_string(),
            t: tour.cost.clone(),
            length: tour.length.clone(),
            scans: tour.scans,
            episodes: 0,
            case_tags: Vec::new(),
            searches: Vec::new(),
            assertions_checked: 0,
            assertion_failures: 0,
            tour,
        }
    }

    /// Largest number of binary searches launched within one episode.
    pub fn max_searches_per_episode(&self) -> usize {
        let mut counts = std::collections::BTreeMap::new();
        for s in &self.searches {
            *counts.entry(s.episode).or_insert(0usize) += 1;
        }
        counts.values().copied().max().unwrap_or(0)
    }
}

pub const STRATEGY_NAMES: &[&str] = &["scansearch", "scansearch-wide", "reflex"];

/// Runs the named strategy to completion, including the walk home.
pub fn run_strategy(name: &str, world: &mut dyn World, ctx: &StrategyContext) -> Result<RunReport, StrategyError> {
    match name {
        "scansearch" => scansearch(world, ctx, ctx.a > Coord::one()),
        "scansearch-wide" => scansearch(world, ctx, true),
        "reflex" => reflex_baseline(world),
        other => Err(StrategyError::UnknownStrategy(other.to_string())),
    }
}
