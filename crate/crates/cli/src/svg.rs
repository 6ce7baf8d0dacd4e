use std::fmt::Write;

use anyhow::Result;

use crate::report::{unpair, ExploreReport, Pair};

type P = (f64, f64);

fn points(ps: &[Pair]) -> Result<Vec<P>> {
    ps.iter().map(unpair).collect()
}

/// `signum` maps 0.0 to 1.0, which would hide vertical moves.
fn sign(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum()
    }
}

/// Corners of the path where the direction changes.
fn turns(path: &[P]) -> Vec<P> {
    let mut out = Vec::new();
    let mut prev_dir: Option<P> = None;
    for w in path.windows(2) {
        let d = (sign(w[1].0 - w[0].0), sign(w[1].1 - w[0].1));
        if d == (0.0, 0.0) {
            continue;
        }
        if prev_dir.is_some_and(|p| p != d) {
            out.push(w[0]);
        }
        prev_dir = Some(d);
    }
    out
}

/// Draws the polygon, the tour, binary-search moves, essential extensions,
/// circled scan points (one circle each) and numbered turns.
pub fn render(rep: &ExploreReport) -> Result<String> {
    let poly: Vec<P> = rep.polygon.vertices.iter().map(|v| (v.x.to_f64(), v.y.to_f64())).collect();
    let path = points(&rep.path)?;
    let scans = points(&rep.scan_points)?;
    let (x0, x1) = poly.iter().fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
    let (y0, y1) = poly.iter().fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let scale = 600.0 / span;
    let pad = 20.0;
    let (w, h) = ((x1 - x0) * scale + 2.0 * pad, (y1 - y0) * scale + 2.0 * pad);
    // flip y so north is up
    let tx = |p: P| (pad + (p.0 - x0) * scale, pad + (y1 - p.1) * scale);
    let pts = |ps: &[P]| ps.iter().map(|&p| tx(p)).map(|(x, y)| format!("{x:.2},{y:.2}")).collect::<Vec<_>>().join(" ");
    let line = |s: &mut String, a: P, b: P, style: &str| {
        let (a, b) = (tx(a), tx(b));
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" {style}/>"#, a.0, a.1, b.0, b.1);
    };

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    let _ = writeln!(s, "<title>{} / {}</title>", xml_escape(&rep.instance), xml_escape(&rep.strategy));
    let _ = writeln!(s, r#"<polygon class="outline" points="{}" fill="white" stroke="black" stroke-width="2"/>"#, pts(&poly));
    let _ = writeln!(s, r#"<g class="extensions">"#);
    for e in &rep.extensions {
        line(&mut s, unpair(&e[0])?, unpair(&e[1])?, r#"stroke="black" stroke-width="1" stroke-dasharray="2,4""#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<polyline class="path" points="{}" fill="none" stroke="gray" stroke-width="2"/>"#, pts(&path));
    let _ = writeln!(s, r#"<g class="searches">"#);
    for seg in &rep.search_segments {
        line(&mut s, unpair(&seg[0])?, unpair(&seg[1])?, r#"stroke="lightgray" stroke-width="4""#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g class="scans">"#);
    for &p in &scans {
        let (x, y) = tx(p);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="6" fill="none" stroke="black" stroke-width="1.5"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g class="turns" font-family="sans-serif" font-size="11">"#);
    for (i, p) in turns(&path).into_iter().enumerate() {
        let (x, y) = tx(p);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 4.0, y - 4.0, i + 1);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::turns;

    #[test]
    fn turns_skip_straight_and_zero_moves() {
        let p = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)];
        assert_eq!(turns(&p), vec![(2.0, 0.0), (2.0, 1.0)]);
    }
}
