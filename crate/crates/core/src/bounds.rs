//! Competitive-ratio formulas, the binary-search cost bound and the
//! scan-count lower bound. All logarithms are base 2 unless named otherwise.

use serde::Serialize;

use crate::coord::Coord;

pub use crate::niche::{
    alternating_choices, gen_niche, static_niche, AdaptiveNiche, AdversaryMode, GeneratedNiche, NicheError, NicheParams, Resolution, Side,
};

/// Breakpoint printed for the two branches of the final bound.
pub const PRINTED_BREAKPOINT: f64 = 0.7004344;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundsError {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("unknown case {0}")]
    UnknownCase(String),
    #[error("case {0} has no formula in the requested column")]
    NoFormula(String),
}

fn log2(x: f64) -> f64 {
    x.log2()
}

/// First branch, used for small `a`.
pub fn branch_small(a: f64) -> f64 {
    8.0 * a + 34.0 + 4.0 * log2(2.0 + 3.0 / a)
}

/// Second branch, used for `a` near 1.
pub fn branch_large(a: f64) -> f64 {
    20.0 * a + 24.0 + 4.0 * log2(4.0 + 3.0 / a)
}

/// Piecewise upper bound on the competitive ratio for `a_k = a`, `a` in (0, 1].
pub fn upper_bound_c(a: f64) -> Result<f64, BoundsError> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(BoundsError::OutOfRange(format!("a = {a} not in (0, 1]")));
    }
    Ok(if a <= PRINTED_BREAKPOINT { branch_small(a) } else { branch_large(a) })
}

/// Upper bound for a general corridor width: the largest bold catalog entry.
pub fn upper_bound_general(a: f64, a_k: f64) -> Result<f64, BoundsError> {
    if !(a > 0.0 && a <= 1.0) || !(a_k > 0.0 && a_k <= a) {
        return Err(BoundsError::OutOfRange(format!("a = {a}, a_k = {a_k}")));
    }
    let catalog_max = catalog()
        .iter()
        .filter_map(|r| r.bold.map(|_| r.k_pos.as_ref().unwrap().eval(a, a_k)))
        .fold(f64::MIN, f64::max);
    if a_k == a {
        Ok(upper_bound_c(a)?.max(catalog_max))
    } else {
        Ok(catalog_max)
    }
}

/// Bound for a measured instance. A corridor wider than the shortest edge
/// gives no extra leverage, so `a_k` is capped at `a`.
pub fn instance_upper_bound(a: f64, a_k: f64) -> Result<f64, BoundsError> {
    upper_bound_general(a, a_k.min(a))
}

/// Crossover of the two branches, by bisection on (0.5, 0.9).
pub fn crossover() -> f64 {
    let (mut lo, mut hi) = (0.5f64, 0.9f64);
    let f = |a: f64| branch_small(a) - branch_large(a);
    debug_assert!(f(lo) * f(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `w − a/2 + log2(w/a) + 1`, the cost of one binary search over width `w`.
pub fn binary_search_bound(w: f64, a: f64) -> Result<f64, BoundsError> {
    if !(a > 0.0) || w < a {
        return Err(BoundsError::OutOfRange(format!("w = {w}, a = {a}")));
    }
    Ok(w - a / 2.0 + log2(w / a) + 1.0)
}

/// Exact test of `cost ≤ w − a/2 + log2(w/a) + 1`.
///
/// Returns `None` only if the log comparison cannot be decided.
pub fn within_binary_search_bound(cost: &Coord, w: &Coord, a: &Coord) -> Option<bool> {
    // cost − w + a/2 − 1 ≤ log2(w/a)
    let lhs = cost - w + a.half() - Coord::one();
    Coord::le_log2(&lhs, &(w / a))
}

/// Scan-count lower bound `½ (log A − log(2δ/d + f)) / log 3`.
pub fn lower_bound_scans(aspect: f64, delta: f64, d: f64, f: f64) -> Result<f64, BoundsError> {
    let base = 2.0 * delta / d + f;
    if !(d > 0.0) || !(aspect >= base) {
        return Err(BoundsError::OutOfRange(format!("A = {aspect} below 2δ/d+f = {base}")));
    }
    Ok(0.5 * (aspect.ln() - base.ln()) / 3f64.ln())
}

/// `coef · log2((p·a + q) / den)` with `den` either `a` or `a_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogTerm {
    pub coef: f64,
    pub p: f64,
    pub q: f64,
    pub over_ak: bool,
}

/// `ca·a + ck·a_k + c0 + Σ log terms`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Formula {
    pub ca: f64,
    pub ck: f64,
    pub c0: f64,
    pub logs: Vec<LogTerm>,
}

impl Formula {
    pub fn eval(&self, a: f64, a_k: f64) -> f64 {
        let mut v = self.ca * a + self.ck * a_k + self.c0;
        for t in &self.logs {
            let den = if t.over_ak { a_k } else { a };
            v += t.coef * log2((t.p * a + t.q) / den);
        }
        v
    }

    fn constant(c0: f64) -> Formula {
        Formula { ca: 0.0, ck: 0.0, c0, logs: vec![] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseGroup {
    /// Reachable without a turn, interval case.
    AInterval,
    /// Reachable without a turn, extension case.
    AExtension,
    /// Turn needed, interval case, no NVRs up to the blocking corner.
    BAlpha,
    /// Turn needed, interval case, NVRs present.
    BBeta,
    /// Turn needed, extension case.
    BExtension,
}

impl CaseGroup {
    pub fn label(self) -> &'static str {
        match self {
            CaseGroup::AInterval => "A, e >= 2a+1",
            CaseGroup::AExtension => "A, e < 2a+1",
            CaseGroup::BAlpha => "B, e >= a+1, alpha",
            CaseGroup::BBeta => "B, e >= a+1, beta",
            CaseGroup::BExtension => "B, e < a+1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseRow {
    pub group: CaseGroup,
    /// 1-based row within its group.
    pub row: usize,
    pub k_zero: Option<Formula>,
    pub k_pos: Option<Formula>,
    /// Entry number when the k > 0 value is a dominating (bold) entry.
    pub bold: Option<u8>,
    /// Entry named as dominating a non-bold k > 0 value.
    pub dominated_by: Option<u8>,
}

/// Identifies a catalog row: a bold entry number or a (group, row) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseId {
    Entry(u8),
    Row(CaseGroup, usize),
}

// log-term shorthands: numerator p·a + q over a or a_k
fn la(coef: f64, p: f64, q: f64) -> LogTerm {
    LogTerm { coef, p, q, over_ak: false }
}
fn lk(coef: f64, p: f64, q: f64) -> LogTerm {
    LogTerm { coef, p, q, over_ak: true }
}
fn f(ca: f64, ck: f64, c0: f64, logs: Vec<LogTerm>) -> Option<Formula> {
    Some(Formula { ca, ck, c0, logs })
}

fn row(
    group: CaseGroup,
    row: usize,
    k_zero: Option<Formula>,
    k_pos: Option<Formula>,
    bold: Option<u8>,
    dominated_by: Option<u8>,
) -> CaseRow {
    CaseRow { group, row, k_zero, k_pos, bold, dominated_by }
}

/// Every row of the two case tables.
pub fn catalog() -> Vec<CaseRow> {
    use CaseGroup::*;
    let two = || Some(Formula::constant(2.0));
    let four = || Some(Formula::constant(4.0));
    // recurring log terms
    let inv_a = la(1.0, 0.0, 1.0); // log(1/a)
    let a1_a = |c| la(c, 1.0, 1.0); // log((a+1)/a)
    let a43_a = |c| la(c, 4.0, 3.0);
    let a23_a = |c| la(c, 2.0, 3.0);
    let k2a1 = |c| lk(c, 2.0, 2.0); // log(2(a+1)/a_k)
    let k3a1 = |c| lk(c, 3.0, 3.0);
    let k43 = |c| lk(c, 4.0, 3.0);
    let k23 = |c| lk(c, 2.0, 3.0);
    let ka2 = |c| lk(c, 1.0, 2.0);
    vec![
        row(AInterval, 1, two(), None, None, None),
        row(AInterval, 2, two(), f(1.5, 0.0, 5.0, vec![a1_a(1.0)]), Some(1), None),
        row(AInterval, 3, two(), f(1.5, 0.0, 5.0, vec![a1_a(1.0)]), None, Some(1)),
        row(
            AInterval,
            4,
            f(4.5, -0.5, 22.0, vec![k2a1(1.0), inv_a]),
            f(13.5, -0.5, 29.0, vec![inv_a, k2a1(1.0), a43_a(2.0)]),
            Some(2),
            None,
        ),
        row(
            AInterval,
            5,
            f(5.0, -0.5, 10.0, vec![k2a1(1.0)]),
            f(14.0, -0.5, 18.0, vec![k2a1(1.0), a43_a(2.0)]),
            None,
            Some(5),
        ),
        row(AExtension, 1, two(), f(7.0, 0.0, 9.0, vec![a43_a(2.0)]), Some(3), None),
        row(
            AExtension,
            2,
            f(-0.5, 0.0, 14.0, vec![inv_a]),
            f(6.5, 0.0, 19.0, vec![inv_a, a43_a(2.0)]),
            Some(4),
            None,
        ),
        row(
            AExtension,
            3,
            f(4.5, -0.5, 22.0, vec![inv_a, k2a1(1.0)]),
            f(13.5, -0.5, 29.0, vec![inv_a, k2a1(1.0), a43_a(2.0)]),
            None,
            Some(2),
        ),
        row(AExtension, 4, None, f(12.0, -0.5, 16.0, vec![k2a1(1.0), a43_a(2.0)]), None, Some(6)),
        row(AExtension, 5, None, f(14.0, -0.5, 27.0, vec![k2a1(1.0), a43_a(2.0)]), Some(5), None),
        row(BAlpha, 1, four(), None, None, None),
        row(
            BAlpha,
            2,
            f(5.0, -0.5, 12.0, vec![k2a1(1.0)]),
            f(12.0, -0.5, 18.0, vec![k2a1(1.0), a43_a(2.0)]),
            Some(6),
            None,
        ),
        row(BAlpha, 3, None, f(15.0, -0.5, 17.5, vec![k43(1.0), a43_a(2.0)]), Some(7), None),
        row(
            BAlpha,
            4,
            f(0.0, -1.0, 23.5, vec![k43(2.0)]),
            f(21.0, -1.0, 23.5, vec![k43(2.0), a23_a(2.0)]),
            None,
            Some(14),
        ),
        row(
            BAlpha,
            5,
            f(8.0, -1.0, 17.0, vec![k2a1(2.0)]),
            f(15.0, -1.0, 21.0, vec![a43_a(2.0), k2a1(2.0)]),
            Some(8),
            None,
        ),
        row(BAlpha, 6, None, f(12.0, -1.0, 17.5, vec![a43_a(2.0), k2a1(1.0)]), None, Some(10)),
        row(
            BAlpha,
            7,
            f(12.0, -0.5, 14.5, vec![k43(1.0)]),
            f(19.0, -0.5, 21.5, vec![k43(1.0), a43_a(2.0)]),
            Some(9),
            None,
        ),
        row(
            BAlpha,
            8,
            f(23.0 / 8.0, -0.25, 8.75, vec![k3a1(0.5)]),
            f(10.25, -0.25, 8.75, vec![a43_a(2.0), k3a1(0.5)]),
            Some(10),
            None,
        ),
        row(
            BAlpha,
            9,
            f(7.0, -0.25, 10.25, vec![k43(0.5)]),
            f(14.0, -0.25, 14.25, vec![a43_a(2.0), k43(0.5)]),
            Some(11),
            None,
        ),
        row(
            BAlpha,
            10,
            f(0.0, -1.0, 24.0, vec![k43(2.0)]),
            f(21.0, -1.0, 24.0, vec![a43_a(2.0), k43(2.0)]),
            Some(12),
            None,
        ),
        row(
            BAlpha,
            11,
            f(3.5, -0.5, 17.0, vec![k43(1.0)]),
            f(15.0, -0.5, 17.0, vec![a43_a(2.0), k43(1.0)]),
            None,
            Some(11),
        ),
        row(BBeta, 1, four(), None, None, None),
        row(BBeta, 2, four(), f(3.0, 0.0, 10.0, vec![a1_a(2.0)]), Some(13), None),
        row(
            BBeta,
            3,
            f(5.0, 0.0, 12.0, vec![k2a1(1.0)]),
            f(8.0, -0.5, 16.0, vec![a1_a(2.0), k2a1(1.0)]),
            Some(14),
            None,
        ),
        row(
            BBeta,
            4,
            f(2.5, -0.25, 6.0, vec![k2a1(0.5)]),
            f(9.5, -0.25, 10.0, vec![k2a1(0.5), a43_a(2.0)]),
            None,
            Some(17),
        ),
        row(
            BBeta,
            5,
            f(3.5, -0.25, 8.0, vec![k2a1(0.5)]),
            f(10.5, -0.25, 10.0, vec![k2a1(0.5), a43_a(2.0)]),
            Some(15),
            None,
        ),
        row(
            BBeta,
            6,
            f(8.0, -0.5, 17.0, vec![k2a1(2.0)]),
            f(15.0, -0.5, 21.0, vec![k2a1(2.0), a43_a(2.0)]),
            Some(16),
            None,
        ),
        row(
            BBeta,
            7,
            f(5.0, -0.5, 12.5, vec![k2a1(1.0)]),
            f(12.0, -0.5, 16.5, vec![k2a1(1.0), a43_a(2.0)]),
            Some(17),
            None,
        ),
        row(
            BExtension,
            1,
            f(7.0, -0.5, 14.5, vec![k23(1.0)]),
            f(10.0, -0.5, 21.5, vec![k23(2.0), a23_a(2.0)]),
            Some(18),
            None,
        ),
        row(
            BExtension,
            2,
            f(0.0, -0.5, 17.5, vec![k23(1.0)]),
            f(4.0, -0.5, 17.5, vec![a23_a(2.0), k23(1.0)]),
            None,
            Some(20),
        ),
        row(
            BExtension,
            3,
            f(0.0, -1.0, 34.0, vec![k23(2.0)]),
            f(9.0, -1.0, 34.0, vec![k23(2.0), a23_a(2.0)]),
            Some(19),
            None,
        ),
        row(
            BExtension,
            4,
            f(6.0, -1.0, 18.0, vec![ka2(2.0)]),
            f(9.0, -1.0, 22.0, vec![ka2(2.0), a23_a(2.0)]),
            None,
            Some(24),
        ),
        row(
            BExtension,
            5,
            f(4.0, -1.0, 18.0, vec![ka2(2.0)]),
            f(7.0, -0.5, 18.0, vec![ka2(1.0), a23_a(2.0)]),
            Some(20),
            None,
        ),
    ]
}

pub fn find_case(id: CaseId) -> Result<CaseRow, BoundsError> {
    catalog()
        .into_iter()
        .find(|r| match id {
            CaseId::Entry(n) => r.bold == Some(n),
            CaseId::Row(g, k) => r.group == g && r.row == k,
        })
        .ok_or_else(|| BoundsError::UnknownCase(format!("{id:?}")))
}

/// Value of one catalog row, k > 0 column or k = 0 column.
pub fn case_bound(id: CaseId, a: f64, a_k: f64, k_positive: bool) -> Result<f64, BoundsError> {
    if !(a > 0.0) || !(a_k > 0.0) {
        return Err(BoundsError::OutOfRange(format!("a = {a}, a_k = {a_k}")));
    }
    let r = find_case(id)?;
    let form = if k_positive { r.k_pos } else { r.k_zero };
    form.map(|f| f.eval(a, a_k)).ok_or_else(|| BoundsError::NoFormula(format!("{id:?}")))
}

/// Dominance labels that name no bold entry.
pub fn dangling_labels() -> Vec<(CaseGroup, usize, u8)> {
    let cat = catalog();
    cat.iter()
        .filter_map(|r| r.dominated_by.map(|d| (r.group, r.row, d)))
        .filter(|(_, _, d)| !cat.iter().any(|r| r.bold == Some(*d)))
        .collect()
}

/// Bold entries exceeding the piecewise bound at some sampled `a` (with `a_k = a`).
pub fn errata(samples: usize) -> Vec<(u8, f64, f64, f64)> {
    let mut out = Vec::new();
    for r in catalog().iter().filter(|r| r.bold.is_some()) {
        for i in 1..=samples {
            let a = i as f64 / samples as f64;
            let v = r.k_pos.as_ref().unwrap().eval(a, a);
            let ub = upper_bound_c(a).unwrap();
            if v > ub + 1e-9 {
                out.push((r.bold.unwrap(), a, v, ub));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        assert!((upper_bound_c(0.5).unwrap() - 50.0).abs() < 1e-9);
        assert!((upper_bound_c(1.0).unwrap() - 55.2294).abs() < 1e-3);
        assert!((upper_bound_c(0.000001).unwrap() - 120.0661).abs() < 1e-3);
        assert!(upper_bound_c(2.0).is_err());
        assert!(upper_bound_c(0.0).is_err());
    }

    #[test]
    fn crossover_near_printed_breakpoint() {
        let x = crossover();
        assert!((x - PRINTED_BREAKPOINT).abs() < 1e-4, "{x}");
        assert!((branch_small(PRINTED_BREAKPOINT) - branch_large(PRINTED_BREAKPOINT)).abs() < 5e-3);
    }

    #[test]
    fn entry_values() {
        let e1 = case_bound(CaseId::Entry(1), 1.0, 1.0, true).unwrap();
        assert!((e1 - 7.5).abs() < 1e-12);
        let e12 = case_bound(CaseId::Entry(12), 0.5, 0.5, true).unwrap();
        let hand = 10.5 - 0.5 + 24.0 + 4.0 * 10f64.log2();
        assert!((e12 - hand).abs() < 1e-12);
        assert!((e12 - 47.288).abs() < 1e-3);
        assert_eq!(case_bound(CaseId::Row(CaseGroup::AInterval, 1), 0.3, 0.3, false).unwrap(), 2.0);
        assert!(matches!(case_bound(CaseId::Entry(99), 1.0, 1.0, true), Err(BoundsError::UnknownCase(_))));
    }

    #[test]
    fn branches_are_bold_entries_at_equal_widths() {
        for i in 1..=50 {
            let a = i as f64 / 50.0;
            let e19 = case_bound(CaseId::Entry(19), a, a, true).unwrap();
            let e12 = case_bound(CaseId::Entry(12), a, a, true).unwrap();
            assert!((e19 - branch_small(a)).abs() < 1e-9);
            assert!((e12 - branch_large(a)).abs() < 1e-9);
        }
    }

    #[test]
    fn catalog_shape() {
        let cat = catalog();
        let mut bold: Vec<u8> = cat.iter().filter_map(|r| r.bold).collect();
        bold.sort();
        assert_eq!(bold, (1..=20).collect::<Vec<u8>>());
        assert_eq!(dangling_labels(), vec![(CaseGroup::BExtension, 4, 24)]);
    }

    #[test]
    fn binary_search_bound_values() {
        assert_eq!(binary_search_bound(4.0, 1.0).unwrap(), 6.5);
        assert_eq!(binary_search_bound(2.0, 0.5).unwrap(), 4.75);
        assert_eq!(binary_search_bound(0.25, 0.25).unwrap(), 0.25 / 2.0 + 1.0);
        assert!(binary_search_bound(0.1, 1.0).is_err());
        let c = |s: &str| s.parse::<Coord>().unwrap();
        assert_eq!(within_binary_search_bound(&c("6.5"), &c("4"), &c("1")), Some(true));
        assert_eq!(within_binary_search_bound(&c("6.5001"), &c("4"), &c("1")), Some(false));
        // log2(3) is irrational, so this is decided strictly
        assert_eq!(within_binary_search_bound(&c("5.08"), &c("3"), &c("1")), Some(true));
        assert_eq!(within_binary_search_bound(&c("5.09"), &c("3"), &c("1")), Some(false));
    }

    #[test]
    fn lower_bound_formula() {
        assert!((lower_bound_scans(27.0, 1.0, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(lower_bound_scans(3.0, 1.0, 1.0, 1.0).unwrap().abs() < 1e-12);
        let d = lower_bound_scans(9.0 * 50.0, 1.0, 1.0, 1.0).unwrap() - lower_bound_scans(50.0, 1.0, 1.0, 1.0).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
        assert!(lower_bound_scans(2.0, 1.0, 1.0, 1.0).is_err());
    }
}
