//! Deterministic SVG drawings of instances and their covers.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::geometry::{GeoCover, GeoCoverage, GeometricInstance};
use crate::grid::{Configuration, Coverage, CycleCover, GridInstance, Pixel};

const CELL: f64 = 24.0;
const MARGIN: f64 = 12.0;
/// Lane offset so the two directions along a strip stay apart.
const LANE: f64 = 0.18;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

fn fmt(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Pixels as unit squares (required pixels highlighted, penalty pixels
/// tinted), one closed path per cycle and a dot on every pixel where that
/// cycle turns. North is up.
pub fn render_svg(inst: &GridInstance, cover: &CycleCover) -> String {
    let px = inst.pixels();
    let (x0, x1) = (px.iter().map(|p| p.x).min().unwrap_or(0), px.iter().map(|p| p.x).max().unwrap_or(0));
    let (y0, y1) = (px.iter().map(|p| p.y).min().unwrap_or(0), px.iter().map(|p| p.y).max().unwrap_or(0));
    let w = f64::from(x1 - x0 + 1) * CELL + 2.0 * MARGIN;
    let h = f64::from(y1 - y0 + 1) * CELL + 2.0 * MARGIN;
    // Pixel (x, y) occupies [x, x+1] x [y, y+1] in grid units; flip y.
    let sx = |x: f64| MARGIN + (x - f64::from(x0)) * CELL;
    let sy = |y: f64| MARGIN + (f64::from(y1) + 1.0 - y) * CELL;

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#, fmt(w), fmt(h), fmt(w), fmt(h)).unwrap();
    out.push_str("<g stroke=\"#999999\" stroke-width=\"1\">\n");
    for (i, p) in px.iter().enumerate() {
        let fill = match inst.coverage() {
            Coverage::Subset(_) if inst.is_required(i) => "#ffd27f",
            Coverage::Penalty(_) if inst.penalty_units(i) > 0 => "#f6c6c6",
            _ => "#f2f2f2",
        };
        let (x, y) = (f64::from(p.x), f64::from(p.y));
        writeln!(out, r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#, fmt(sx(x)), fmt(sy(y + 1.0)), fmt(CELL), fmt(CELL)).unwrap();
    }
    out.push_str("</g>\n");

    for (ci, cy) in cover.cycles.iter().enumerate() {
        let colour = PALETTE[ci % PALETTE.len()];
        let point = |c: &Configuration| {
            let (rx, ry) = c.heading.clockwise().delta();
            let x = f64::from(c.pixel.x) + 0.5 + LANE * f64::from(rx);
            let y = f64::from(c.pixel.y) + 0.5 + LANE * f64::from(ry);
            (sx(x), sy(y))
        };
        let mut d = String::new();
        for (i, c) in cy.steps().iter().enumerate() {
            let (x, y) = point(c);
            write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, fmt(x), fmt(y)).unwrap();
        }
        d.push('Z');
        writeln!(out, r#"<path d="{d}" fill="none" stroke="{colour}" stroke-width="2" stroke-linejoin="round"/>"#).unwrap();
        let turning: BTreeSet<Pixel> = cy.pairs().filter(|(a, b)| a.pixel == b.pixel && a.heading != b.heading).map(|(a, _)| a.pixel).collect();
        for p in turning {
            let (x, y) = (sx(f64::from(p.x) + 0.5), sy(f64::from(p.y) + 0.5));
            writeln!(out, r#"<circle cx="{}" cy="{}" r="3" fill="{colour}"/>"#, fmt(x), fmt(y)).unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Obstacles as filled polygons, points with their allowed orientations as
/// short ticks, one closed path per cycle.
pub fn render_geo_svg(gi: &GeometricInstance, cover: &GeoCover) -> String {
    let all: Vec<(f64, f64)> = gi.points().iter().chain(gi.obstacles().iter().flat_map(|o| o.vertices.iter())).map(|p| p.to_f64()).collect();
    let (x0, x1) = all.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (y0, y1) = all.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let span = (x1 - x0).max(y1 - y0).max(1.0);
    let scale = 480.0 / span;
    let pad = 2.0 * MARGIN;
    let w = (x1 - x0) * scale + 2.0 * pad;
    let h = (y1 - y0) * scale + 2.0 * pad;
    let sx = |x: f64| pad + (x - x0) * scale;
    let sy = |y: f64| pad + (y1 - y) * scale;

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#, fmt(w), fmt(h), fmt(w), fmt(h)).unwrap();
    for poly in gi.obstacles() {
        let pts: Vec<String> = poly.vertices.iter().map(|v| v.to_f64()).map(|(x, y)| format!("{},{}", fmt(sx(x)), fmt(sy(y)))).collect();
        writeln!(out, r##"<polygon points="{}" fill="#bbbbbb" stroke="#666666"/>"##, pts.join(" ")).unwrap();
    }
    for (ci, cy) in cover.cycles.iter().enumerate() {
        let colour = PALETTE[ci % PALETTE.len()];
        let mut d = String::new();
        let mut first = true;
        for leg in &cy.legs {
            for (i, p) in leg.polyline.iter().enumerate() {
                // Each leg starts where the previous one ended.
                if i == 0 && !first {
                    continue;
                }
                let (x, y) = p.to_f64();
                write!(d, "{}{} {} ", if first { "M" } else { "L" }, fmt(sx(x)), fmt(sy(y))).unwrap();
                first = false;
            }
        }
        d.push('Z');
        writeln!(out, r#"<path d="{d}" fill="none" stroke="{colour}" stroke-width="2" stroke-linejoin="round"/>"#).unwrap();
    }
    for (i, p) in gi.points().iter().enumerate() {
        let (x, y) = p.to_f64();
        let fill = match gi.coverage() {
            GeoCoverage::Subset(s) if s.contains(&i) => "#e08a00",
            GeoCoverage::Penalty(_) if gi.penalty_f64(i) > 0.0 => "#c0392b",
            _ => "#222222",
        };
        for a in gi.orientations(i) {
            let (dx, dy) = (a.cos() * 8.0, a.sin() * 8.0);
            writeln!(out, r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#222222"/>"##, fmt(sx(x) - dx), fmt(sy(y) + dy), fmt(sx(x) + dx), fmt(sy(y) - dy)).unwrap();
        }
        writeln!(out, r#"<circle cx="{}" cy="{}" r="3" fill="{fill}"/>"#, fmt(sx(x)), fmt(sy(y))).unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid_instance, Cycle, Heading::*};

    fn domino() -> (GridInstance, CycleCover) {
        let inst = build_grid_instance([Pixel::new(0, 0), Pixel::new(1, 0)], Coverage::Full, 0.into(), 1.into()).unwrap();
        let c = |x, h| Configuration::new(Pixel::new(x, 0), h);
        let cycle = Cycle::new(vec![c(0, East), c(1, East), c(1, North), c(1, West), c(0, West), c(0, South)]).unwrap();
        (inst, CycleCover::new(vec![cycle]))
    }

    #[test]
    fn domino_structure() {
        let (inst, cover) = domino();
        let svg = render_svg(&inst, &cover);
        assert_eq!(svg.matches("<rect").count(), 2);
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(svg.contains("Z\""));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg, render_svg(&inst, &cover));
    }

    #[test]
    fn empty_cover_draws_pixels_only() {
        let (inst, _) = domino();
        let svg = render_svg(&inst, &CycleCover::default());
        assert_eq!(svg.matches("<rect").count(), 2);
        assert!(!svg.contains("<path") && !svg.contains("<circle"));
    }
}
