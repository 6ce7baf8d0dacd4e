//! Comparison strategies and closed-form yardsticks.

use serde::{Deserialize, Serialize};

use super::{RunReport, StrategyError};
use crate::coord::Coord;
use crate::extensions::essential_order;
use crate::geom::{on_segment, PathPolyline, Point, RectPolygon};
use crate::knowledge::{ChainEnd, FrontierKind, Knowledge, Planner};
use crate::simulator::{uncovered_edges, World};
use crate::visibility::{edge_fully_visible_from, kernel};

/// Scans at the start and then at every discovered reflex corner, the classic
/// `r + 1` scheme. Uncertified edges left at the end get a scan each.
pub fn reflex_baseline(w: &mut dyn World) -> Result<RunReport, StrategyError> {
    let start = w.position().clone();
    w.scan();
    let mut know = Knowledge::from_scans(w.scans());
    let stuck = |w: &dyn World| StrategyError::Stuck { episode: 0, at: w.position().clone() };
    let anchor = know.anchor(&start).ok_or_else(|| stuck(w))?;
    let mut planner = Planner::new();
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > 20_000 {
            return Err(stuck(w));
        }
        let ch = know.chain(&anchor).ok_or_else(|| stuck(w))?;
        match ch.end {
            ChainEnd::Gap(fr) => {
                let before = (ch.corners.len(), fr.f.clone());
                let mut targets = Vec::new();
                if let FrontierKind::Blocked { b } = &fr.kind {
                    targets.push(b.clone());
                }
                targets.push(fr.f.clone());
                let mut grew = false;
                for t in targets {
                    let r = w.position().clone();
                    if r != t {
                        let Some(route) = planner.route(&know, w.path(), &r, &t) else { continue };
                        w.move_to(&route)?;
                    }
                    w.scan();
                    know = Knowledge::from_scans(w.scans());
                    let now = know.chain(&anchor).ok_or_else(|| stuck(w))?;
                    let after = match &now.end {
                        ChainEnd::Gap(g) => (now.corners.len(), g.f.clone()),
                        ChainEnd::Closed => (usize::MAX, t.clone()),
                    };
                    if after != before {
                        grew = true;
                        break;
                    }
                }
                if !grew {
                    return Err(stuck(w));
                }
            }
            ChainEnd::Closed => {
                let poly = know.polygon(&anchor).ok_or_else(|| stuck(w))?;
                let pts: Vec<Point> = w.scans().iter().map(|s| s.p.clone()).collect();
                let unc = uncovered_edges(&poly, pts.iter());
                let Some(&first) = unc.first() else { break };
                // an unscanned reflex vertex seeing the edge, else its midpoint
                let e = poly.edge(first);
                let target = poly
                    .reflex_vertices()
                    .iter()
                    .map(|&i| poly.vertex(i).clone())
                    .filter(|v| !pts.contains(v) && edge_fully_visible_from(v, first, &poly).unwrap_or(false))
                    .min_by_key(|v| poly.geodesic_distance(w.position(), v).unwrap_or_else(|_| Coord::int(i64::MAX / 4)))
                    .unwrap_or_else(|| e.start.midpoint(&e.end));
                let path = poly.geodesic_l1_path(w.position(), &target).map_err(|e| StrategyError::Sim(e.into()))?;
                w.move_to(&path.points[1..])?;
                w.scan();
                know = Knowledge::from_scans(w.scans());
            }
        }
    }
    let tour = w.finish()?;
    Ok(RunReport::new("reflex", tour))
}

/// Continuous-vision watchman path through the essential extensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyPath {
    pub path: PathPolyline,
    pub length: Coord,
    /// Interior starts lose the optimality guarantee.
    pub interior_start: bool,
}

/// Shortest closed L1 route from `start` touching every essential extension
/// in clockwise order. This is the zero-scan-cost optimum for boundary starts,
/// so its length is an additive lower bound on any scan tour's travel.
pub fn continuous_greedy(poly: &RectPolygon, start: &Point) -> Result<GreedyPath, StrategyError> {
    let interior_start = poly.boundary_position_of(start).is_none();
    let exts = essential_order(poly, start);
    if exts.is_empty() {
        let path = PathPolyline::from_points_unchecked(vec![start.clone()]);
        return Ok(GreedyPath { path, length: Coord::zero(), interior_start });
    }
    let mut xs: Vec<Coord> = poly.vertices().iter().map(|v| v.x.clone()).chain([start.x.clone()]).collect();
    let mut ys: Vec<Coord> = poly.vertices().iter().map(|v| v.y.clone()).chain([start.y.clone()]).collect();
    xs.sort();
    xs.dedup();
    ys.sort();
    ys.dedup();
    // touch candidates: where grid lines cross each extension
    let layers: Vec<Vec<Point>> = exts
        .iter()
        .map(|e| {
            let (p, q) = e.segment();
            let pts: Vec<Point> = if e.dir.is_horizontal() {
                xs.iter().map(|x| Point::new(x.clone(), p.y.clone())).collect()
            } else {
                ys.iter().map(|y| Point::new(p.x.clone(), y.clone())).collect()
            };
            pts.into_iter().filter(|t| on_segment(t, p, q)).collect()
        })
        .collect();
    let all: Vec<Point> = layers.iter().flatten().cloned().chain([start.clone()]).collect();
    let grid = poly.geodesic_grid(all.iter());
    let dist_from = |p: &Point| grid.field(p);
    let bad = || StrategyError::Sim(crate::simulator::SimError::StartOutside(start.clone()));
    // dp over layers: best cost to stand at each candidate
    let f0 = dist_from(start).ok_or_else(bad)?;
    let mut cost: Vec<Option<Coord>> = layers[0].iter().map(|t| grid.node(t).and_then(|k| f0[k].clone())).collect();
    let mut back: Vec<Vec<usize>> = vec![vec![0; layers[0].len()]];
    for li in 1..layers.len() {
        let prev = &layers[li - 1];
        let mut next: Vec<Option<Coord>> = vec![None; layers[li].len()];
        let mut arg = vec![0usize; layers[li].len()];
        for (pi, p) in prev.iter().enumerate() {
            let Some(cp) = cost[pi].clone() else { continue };
            let fp = dist_from(p).ok_or_else(bad)?;
            for (ti, t) in layers[li].iter().enumerate() {
                let Some(Some(d)) = grid.node(t).map(|k| fp[k].clone()) else { continue };
                let c = &cp + &d;
                if next[ti].as_ref().is_none_or(|o| c < *o) {
                    next[ti] = Some(c);
                    arg[ti] = pi;
                }
            }
        }
        cost = next;
        back.push(arg);
    }
    let fs = dist_from(start).ok_or_else(bad)?;
    let last = layers.len() - 1;
    let mut best: Option<(Coord, usize)> = None;
    for (ti, t) in layers[last].iter().enumerate() {
        let (Some(c), Some(Some(d))) = (cost[ti].clone(), grid.node(t).map(|k| fs[k].clone())) else { continue };
        let total = c + d;
        if best.as_ref().is_none_or(|(b, _)| total < *b) {
            best = Some((total, ti));
        }
    }
    let (length, mut ti) = best.ok_or_else(bad)?;
    let mut touches = vec![layers[last][ti].clone()];
    for li in (1..layers.len()).rev() {
        ti = back[li][ti];
        touches.push(layers[li - 1][ti].clone());
    }
    touches.reverse();
    let mut pts = vec![start.clone()];
    let mut at = start.clone();
    for t in touches.iter().chain([start]) {
        let leg = grid.path(&at, t).ok_or_else(bad)?;
        pts.extend(leg.points.into_iter().skip(1));
        at = t.clone();
    }
    Ok(GreedyPath { path: PathPolyline::from_points_unchecked(pts), length, interior_start })
}

/// Optimum for a star-shaped polygon: walk to the nearest kernel point, scan, walk back.
pub fn star_optimum(poly: &RectPolygon, start: &Point, c: &Coord) -> Result<Coord, StrategyError> {
    let k = kernel(poly);
    let rect = k.rect.ok_or(StrategyError::NotStarShaped)?;
    let target = rect.clamp(start);
    let d = poly.geodesic_distance(start, &target).map_err(|e| StrategyError::Sim(e.into()))?;
    Ok(d * Coord::int(2) + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate, Generator, InstanceSpec};
    use crate::simulator::{new_world, CostModel};

    fn pt(x: &str, y: &str) -> Point {
        Point::parse(x, y).unwrap()
    }

    fn lshape() -> RectPolygon {
        RectPolygon::from_ints(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn star_optimum_examples() {
        let sq = RectPolygon::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
        assert_eq!(star_optimum(&sq, &Point::ints(0, 0), &Coord::one()).unwrap(), Coord::one());
        // kernel [0,1]x[0,1], nearest point (1, 0.5)
        let t = star_optimum(&lshape(), &pt("1.75", "0.5"), &Coord::one()).unwrap();
        assert_eq!(t, "2.5".parse::<Coord>().unwrap());
        assert_eq!(star_optimum(&lshape(), &pt("0.5", "0.5"), &Coord::one()).unwrap(), Coord::one());
    }

    #[test]
    fn greedy_examples() {
        let sq = RectPolygon::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
        assert_eq!(continuous_greedy(&sq, &Point::ints(0, 0)).unwrap().length, Coord::zero());
        // from the east arm tip the x = 1 extension is the only essential one
        let g = continuous_greedy(&lshape(), &pt("2", "0.5")).unwrap();
        assert_eq!(g.length, Coord::int(2));
        assert!(!g.interior_start);
        assert!(continuous_greedy(&lshape(), &pt("1.5", "0.5")).unwrap().interior_start);
    }

    #[test]
    fn reflex_counts() {
        for (gen, max) in [(Generator::Square, 1), (Generator::LShape, 2), (Generator::Comb { teeth: 3 }, 7)] {
            let inst = generate(&InstanceSpec::new(gen.clone())).unwrap();
            let mut ws = new_world(inst.polygon, inst.start, CostModel::default()).unwrap();
            let rep = reflex_baseline(&mut ws).unwrap();
            assert!(rep.tour.terminated_ok);
            assert!(rep.scans <= max, "{gen:?}: {} scans", rep.scans);
        }
    }
}
