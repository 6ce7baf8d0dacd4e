//! Brute-force optimum for tiny instances: scan sets drawn from a candidate
//! grid, covered edge by edge, toured in the best order.
//!
//! "Exact" here is a grid certificate: the optimum over candidates did not
//! change across two successive halvings of the grid spacing.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{continuous_greedy, StrategyError};
use crate::coord::Coord;
use crate::extensions::compute_extensions;
use crate::geom::{GeodesicGrid, Point, RectPolygon};
use crate::simulator::{pair, CostModel};
use crate::visibility::edge_fully_visible_from;

pub const MAX_VERTICES: usize = 14;
pub const MAX_RES: u32 = 16;
const MAX_SCANS: usize = 6;
const MAX_CANDIDATES: usize = 6000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleStatus {
    Exact,
    /// Refinement did not settle; `t` is an upper bound and `lower` a lower bound.
    Bounds,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub t: Coord,
    pub lower: Coord,
    pub length: Coord,
    #[serde(with = "pair::vec")]
    pub scans: Vec<Point>,
    pub status: OracleStatus,
    /// Finest grid resolution used, in points per unit.
    pub resolution: u32,
    /// Optimum value at each resolution tried.
    pub history: Vec<(u32, Coord)>,
}

/// Runs the refinement 1, 2, 4, ... up to `grid_res` points per unit.
pub fn offline_oracle(poly: &RectPolygon, start: &Point, cm: &CostModel, grid_res: u32) -> Result<OracleResult, StrategyError> {
    if poly.len() > MAX_VERTICES {
        return Err(StrategyError::TooLarge(format!("{} vertices", poly.len())));
    }
    if grid_res == 0 || grid_res > MAX_RES {
        return Err(StrategyError::TooLarge(format!("grid resolution {grid_res}")));
    }
    let mut history: Vec<(u32, Coord)> = Vec::new();
    let mut best: Option<Solution> = None;
    let mut res = 1;
    let mut status = OracleStatus::Bounds;
    while res <= grid_res {
        let Some(sol) = solve(poly, start, cm, res)? else { break };
        history.push((res, sol.t.clone()));
        if best.as_ref().is_none_or(|b| sol.t < b.t) {
            best = Some(sol);
        }
        let n = history.len();
        if n >= 3 && history[n - 1].1 == history[n - 2].1 && history[n - 2].1 == history[n - 3].1 {
            status = OracleStatus::Exact;
            break;
        }
        res *= 2;
    }
    let best = best.ok_or_else(|| StrategyError::TooLarge("no feasible scan set on the grid".into()))?;
    let lower = match status {
        OracleStatus::Exact => best.t.clone(),
        OracleStatus::Bounds => {
            let walk = match continuous_greedy(poly, start) {
                Ok(g) if !g.interior_start => g.length,
                _ => Coord::zero(),
            };
            walk + &cm.scan_cost
        }
    };
    let resolution = history.last().map(|h| h.0).unwrap_or(1);
    Ok(OracleResult { t: best.t, lower, length: best.length, scans: best.scans, status, resolution, history })
}

#[derive(Debug, Clone)]
struct Solution {
    t: Coord,
    length: Coord,
    scans: Vec<Point>,
}

fn grid_values(lo: &Coord, hi: &Coord, res: u32) -> Vec<Coord> {
    let r = Coord::int(res as i64);
    let a = num_traits::ToPrimitive::to_i64(&(lo * &r).ceil()).unwrap_or(0);
    let b = num_traits::ToPrimitive::to_i64(&(hi * &r).floor()).unwrap_or(0);
    (a..=b).map(|k| Coord::frac(k, res as i64)).collect()
}

struct Search {
    grid: GeodesicGrid,
    cands: Vec<Point>,
    masks: Vec<u32>,
    d0: Vec<Coord>,
    /// For each edge, candidates covering it, nearest to the start first.
    covers: Vec<Vec<usize>>,
    fields: HashMap<usize, Vec<Option<Coord>>>,
    c: Coord,
    full: u32,
    best: Option<(Coord, Vec<usize>, Coord)>,
}

fn solve(poly: &RectPolygon, start: &Point, cm: &CostModel, res: u32) -> Result<Option<Solution>, StrategyError> {
    let (lo, hi) = poly.as_polygon().bbox();
    let gx = grid_values(&lo.x, &hi.x, res);
    let gy = grid_values(&lo.y, &hi.y, res);
    if gx.len() * gy.len() > MAX_CANDIDATES {
        return Ok(None);
    }
    let mut xs: Vec<Coord> = poly.vertices().iter().map(|v| v.x.clone()).chain([start.x.clone()]).collect();
    let mut ys: Vec<Coord> = poly.vertices().iter().map(|v| v.y.clone()).chain([start.y.clone()]).collect();
    xs.sort();
    xs.dedup();
    ys.sort();
    ys.dedup();
    let mut raw: Vec<Point> = Vec::new();
    for (xv, yv) in [(&gx, &gy), (&xs, &ys)] {
        for x in xv {
            for y in yv {
                raw.push(Point::new(x.clone(), y.clone()));
            }
        }
    }
    for e in compute_extensions(poly) {
        raw.push(e.far_end.clone());
    }
    raw.push(start.clone());
    raw.sort();
    raw.dedup();
    let n = poly.len();
    let mut cands = Vec::new();
    let mut masks = Vec::new();
    for p in raw {
        if !poly.contains(&p) {
            continue;
        }
        let mut m = 0u32;
        for i in 0..n {
            if edge_fully_visible_from(&p, i, poly).unwrap_or(false) {
                m |= 1 << i;
            }
        }
        if m != 0 {
            cands.push(p);
            masks.push(m);
        }
    }
    let grid = poly.geodesic_grid(cands.iter().chain([start]));
    let f0 = grid.field(start).ok_or(StrategyError::Sim(crate::simulator::SimError::StartOutside(start.clone())))?;
    let d0: Vec<Coord> = cands.iter().map(|p| grid.node(p).and_then(|k| f0[k].clone()).expect("candidate reachable")).collect();
    let mut covers: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, m) in masks.iter().enumerate() {
        for (e, cov) in covers.iter_mut().enumerate() {
            if m & (1 << e) != 0 {
                cov.push(i);
            }
        }
    }
    for cov in &mut covers {
        cov.sort_by(|&a, &b| d0[a].cmp(&d0[b]).then(a.cmp(&b)));
    }
    let mut s = Search {
        grid,
        cands,
        masks,
        d0,
        covers,
        fields: HashMap::new(),
        c: cm.scan_cost.clone(),
        full: if n == 32 { u32::MAX } else { (1u32 << n) - 1 },
        best: None,
    };
    let mut chosen = Vec::new();
    s.dfs(&mut chosen, 0);
    let Some((t, order, length)) = s.best.clone() else { return Ok(None) };
    Ok(Some(Solution { t, length, scans: order.iter().map(|&i| s.cands[i].clone()).collect() }))
}

impl Search {
    fn dist(&mut self, i: usize, j: usize) -> Coord {
        if i == j {
            return Coord::zero();
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        if !self.fields.contains_key(&a) {
            let f = self.grid.field(&self.cands[a]).expect("candidate on grid");
            self.fields.insert(a, f);
        }
        let k = self.grid.node(&self.cands[b]).expect("candidate on grid");
        self.fields[&a][k].clone().expect("connected polygon")
    }

    fn lower_bound(&self, chosen: &[usize], covered: u32) -> Coord {
        let k = chosen.len() + usize::from(covered != self.full);
        let far = chosen.iter().map(|&i| self.d0[i].clone()).max().unwrap_or_else(Coord::zero);
        &self.c * Coord::int(k as i64) + far * Coord::int(2)
    }

    /// Best closed tour from the start through `chosen`, by brute force.
    fn tour(&mut self, chosen: &[usize]) -> Option<(Coord, Vec<usize>)> {
        // cheap L1 bound first
        let mut best: Option<(Coord, Vec<usize>)> = None;
        let mut perm: Vec<usize> = chosen.to_vec();
        perm.sort();
        loop {
            let mut l1 = self.d0[perm[0]].clone() + &self.d0[*perm.last().unwrap()];
            for w in perm.windows(2) {
                l1 = l1 + self.cands[w[0]].l1(&self.cands[w[1]]);
            }
            let cutoff = self.best.as_ref().map(|b| &b.0 - &self.c * Coord::int(chosen.len() as i64));
            let worth = cutoff.as_ref().is_none_or(|cut| l1 < *cut) && best.as_ref().is_none_or(|b| l1 < b.0);
            if worth {
                let mut len = self.d0[perm[0]].clone() + &self.d0[*perm.last().unwrap()];
                for k in 0..perm.len() - 1 {
                    len = len + self.dist(perm[k], perm[k + 1]);
                }
                if best.as_ref().is_none_or(|b| len < b.0) {
                    best = Some((len, perm.clone()));
                }
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        best
    }

    fn dfs(&mut self, chosen: &mut Vec<usize>, covered: u32) {
        if let Some((b, _, _)) = &self.best {
            if self.lower_bound(chosen, covered) >= *b {
                return;
            }
        }
        if covered == self.full {
            if let Some((len, order)) = self.tour(chosen) {
                let t = &len + &(&self.c * Coord::int(chosen.len() as i64));
                if self.best.as_ref().is_none_or(|b| t < b.0) {
                    self.best = Some((t, order, len));
                }
            }
            return;
        }
        if chosen.len() == MAX_SCANS {
            return;
        }
        // branch on the uncovered edge with the fewest covering candidates
        let e = (0..self.covers.len())
            .filter(|&e| covered & (1 << e) == 0)
            .min_by_key(|&e| self.covers[e].len())
            .expect("something uncovered");
        let list = self.covers[e].clone();
        for i in list {
            if chosen.contains(&i) {
                continue;
            }
            chosen.push(i);
            let cov = covered | self.masks[i];
            let lb = self.lower_bound(chosen, cov);
            let prune = self.best.as_ref().is_some_and(|b| lb >= b.0);
            if prune && &self.d0[i] * &Coord::int(2) + &self.c * Coord::int(chosen.len() as i64) >= self.best.as_ref().unwrap().0 {
                // later candidates are no closer to the start
                chosen.pop();
                break;
            }
            if !prune {
                self.dfs(chosen, cov);
            }
            chosen.pop();
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategies::star_optimum;

    #[test]
    fn square_is_one_scan_at_start() {
        let sq = RectPolygon::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
        let r = offline_oracle(&sq, &Point::ints(0, 0), &CostModel::default(), 4).unwrap();
        assert_eq!(r.t, Coord::one());
        assert_eq!(r.scans, vec![Point::ints(0, 0)]);
        assert_eq!(r.status, OracleStatus::Exact);
    }

    #[test]
    fn agrees_with_star_optimum_on_l() {
        let l = RectPolygon::from_ints(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]).unwrap();
        let s = Point::parse("1.75", "0.5").unwrap();
        let cm = CostModel::new(Coord::int(2)).unwrap();
        let r = offline_oracle(&l, &s, &cm, 8).unwrap();
        assert_eq!(r.status, OracleStatus::Exact);
        assert_eq!(r.t, star_optimum(&l, &s, &cm.scan_cost).unwrap());
    }

    #[test]
    fn too_large() {
        // 16-vertex staircase
        let p = RectPolygon::from_ints(&[(0, 0), (9, 0), (9, 1), (8, 1), (8, 2), (7, 2), (7, 3), (6, 3), (6, 4), (5, 4), (5, 5), (4, 5), (4, 6), (3, 6), (3, 7), (0, 7)]).unwrap();
        assert!(matches!(offline_oracle(&p, &Point::ints(0, 0), &CostModel::default(), 4), Err(StrategyError::TooLarge(_))));
    }

    #[test]
    fn permutations() {
        let mut v = vec![0, 1, 2];
        let mut n = 1;
        while next_permutation(&mut v) {
            n += 1;
        }
        assert_eq!(n, 6);
    }
}
