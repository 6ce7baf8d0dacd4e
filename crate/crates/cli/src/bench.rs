use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use scanwatch::corpus::CorpusEntry;
use scanwatch::simulator::{new_world, CostModel};
use scanwatch::strategies::{offline_oracle, run_strategy, OracleResult, OracleStatus, StrategyContext, StrategyError};
use scanwatch::Coord;

use crate::report::{bound_for, ratio};

/// One CSV row per (instance, strategy). Column order is the README schema.
#[derive(Debug, Clone, Default, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub strategy: String,
    pub vertices: usize,
    pub c: String,
    pub a: String,
    pub a_k: String,
    pub context_valid: bool,
    pub t: String,
    pub t_float: String,
    #[serde(rename = "L")]
    pub length: String,
    #[serde(rename = "S")]
    pub scans: String,
    pub episodes: String,
    pub case_tags: String,
    pub assertions_checked: String,
    pub assertion_failures: String,
    pub max_searches_per_episode: String,
    pub oracle_status: String,
    pub oracle_t: String,
    pub ratio: String,
    pub bound: String,
    pub failed: bool,
    pub error: String,
    pub wall_ms: u128,
}

/// Header line, also written for an empty corpus.
pub const HEADER: &[&str] = &[
    "instance",
    "strategy",
    "vertices",
    "c",
    "a",
    "a_k",
    "context_valid",
    "t",
    "t_float",
    "L",
    "S",
    "episodes",
    "case_tags",
    "assertions_checked",
    "assertion_failures",
    "max_searches_per_episode",
    "oracle_status",
    "oracle_t",
    "ratio",
    "bound",
    "failed",
    "error",
    "wall_ms",
];

pub struct BenchConfig {
    pub strategies: Vec<String>,
    pub c: Coord,
    pub a: Option<Coord>,
    pub a_k: Option<Coord>,
    /// Zero skips the oracle.
    pub oracle_res: u32,
}

enum OracleOutcome {
    Skipped,
    Done(OracleResult),
    TooLarge,
    Failed(String),
}

fn context(entry: &CorpusEntry, cfg: &BenchConfig) -> Result<StrategyContext, StrategyError> {
    let m = StrategyContext::measured(&entry.instance.polygon);
    let a = cfg.a.clone().unwrap_or(m.a);
    let a_k = cfg.a_k.clone().unwrap_or(m.a_k);
    StrategyContext::new(a, a_k)
}

fn oracle(entry: &CorpusEntry, cm: &CostModel, res: u32) -> OracleOutcome {
    if res == 0 {
        return OracleOutcome::Skipped;
    }
    match offline_oracle(&entry.instance.polygon, &entry.instance.start, cm, res) {
        Ok(o) => OracleOutcome::Done(o),
        Err(StrategyError::TooLarge(_)) => OracleOutcome::TooLarge,
        Err(e) => OracleOutcome::Failed(e.to_string()),
    }
}

fn row(entry: &CorpusEntry, strategy: &str, cfg: &BenchConfig, cm: &CostModel, orc: &OracleOutcome) -> BenchRow {
    let poly = &entry.instance.polygon;
    let mut r = BenchRow {
        instance: entry.name.clone(),
        strategy: strategy.to_string(),
        vertices: poly.len(),
        c: cfg.c.to_string(),
        ..BenchRow::default()
    };
    let (oracle_status, oracle_t, opt) = match orc {
        OracleOutcome::Skipped => ("skipped".to_string(), String::new(), None),
        OracleOutcome::TooLarge => ("too_large".to_string(), String::new(), None),
        OracleOutcome::Failed(e) => (format!("error: {e}"), String::new(), None),
        OracleOutcome::Done(o) => {
            let s = if o.status == OracleStatus::Exact { "exact" } else { "bounds" };
            (s.to_string(), o.t.to_string(), Some(o))
        }
    };
    r.oracle_status = oracle_status;
    r.oracle_t = oracle_t;
    let ctx = match context(entry, cfg) {
        Ok(c) => c,
        Err(e) => {
            r.failed = true;
            r.error = e.to_string();
            return r;
        }
    };
    r.a = ctx.a.to_string();
    r.a_k = ctx.a_k.to_string();
    r.context_valid = ctx.holds_for(poly);
    r.bound = bound_for(&ctx).map(|b| format!("{b:.4}")).unwrap_or_default();
    let clock = Instant::now();
    let outcome = new_world(poly.clone(), entry.instance.start.clone(), cm.clone())
        .map_err(StrategyError::from)
        .and_then(|mut w| run_strategy(strategy, &mut w, &ctx));
    r.wall_ms = clock.elapsed().as_millis();
    match outcome {
        Ok(rep) => {
            r.t = rep.t.to_string();
            r.t_float = format!("{:.6}", rep.t.to_f64());
            r.length = rep.length.to_string();
            r.scans = rep.scans.to_string();
            r.episodes = rep.episodes.to_string();
            r.case_tags = rep.case_tags.join(";");
            r.assertions_checked = rep.assertions_checked.to_string();
            r.assertion_failures = rep.assertion_failures.to_string();
            r.max_searches_per_episode = rep.max_searches_per_episode().to_string();
            r.ratio = ratio(&rep.t, opt).map(|q| format!("{:.6}", q.to_f64())).unwrap_or_default();
            if !rep.tour.terminated_ok || rep.assertion_failures > 0 {
                r.failed = true;
                r.error = if rep.tour.terminated_ok { "assertion failures".into() } else { "coverage incomplete".into() };
            }
        }
        Err(e) => {
            r.failed = true;
            r.error = e.to_string();
        }
    }
    r
}

/// Runs the cross product on a pool of `workers` threads. Rows come back in
/// corpus order, strategies in the order given.
pub fn run(entries: &[CorpusEntry], cfg: &BenchConfig, workers: usize) -> anyhow::Result<Vec<BenchRow>> {
    let cm = CostModel::new(cfg.c.clone())?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    Ok(pool.install(|| {
        let oracles: Vec<OracleOutcome> = entries.par_iter().map(|e| oracle(e, &cm, cfg.oracle_res)).collect();
        let jobs: Vec<(usize, &String)> =
            (0..entries.len()).flat_map(|i| cfg.strategies.iter().map(move |s| (i, s))).collect();
        jobs.par_iter().map(|&(i, s)| row(&entries[i], s, cfg, &cm, &oracles[i])).collect()
    }))
}

pub fn write_csv<W: std::io::Write>(out: W, rows: &[BenchRow]) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_matches_row_fields() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(BenchRow::default()).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert_eq!(text.lines().next().unwrap(), HEADER.join(","));
    }
}
