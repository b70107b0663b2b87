//! Plain-text instance and solution files.
//!
//! Instances start with a header line
//! `grid|geo full|subset|penalty kappa=<dec> tau=<dec>` followed by one
//! line per pixel (`x y [S] [pen=<dec>]`) or, for geometric instances,
//! `point x y angles=a1,a2 [S] [pen=<dec>]` and `obstacle x1 y1 x2 y2 ...`
//! lines. Angles are in degrees. `#` starts a comment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::geometry::{GeoConfiguration, GeoCover, GeoCoverage, GeoCycle, GeoError, GeoPath, GeoPoint, GeometricInstance, Polygon};
use crate::grid::{build_grid_instance, Configuration, Coverage, Cycle, CycleCover, GridError, GridInstance, Heading, Pixel};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug)]
pub enum Instance {
    Grid(GridInstance),
    Geo(GeometricInstance),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Grid(_) => "grid",
            Instance::Geo(_) => "geo",
        }
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Geo(#[from] GeoError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

/// Non-empty lines with comments removed, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn number(line: usize, s: &str) -> Result<Rational, ParseError> {
    parse_rational(s).map_err(|e| syntax(line, e.to_string()))
}

fn integer(line: usize, s: &str) -> Result<i32, ParseError> {
    s.parse().map_err(|_| syntax(line, format!("expected an integer coordinate, found `{s}`")))
}

struct Header {
    geo: bool,
    variant: String,
    kappa: Rational,
    tau: Rational,
}

fn header(line: usize, text: &str) -> Result<Header, ParseError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let [kind, variant, rest @ ..] = tokens.as_slice() else {
        return Err(syntax(line, "expected `grid|geo full|subset|penalty kappa=<dec> tau=<dec>`"));
    };
    let geo = match *kind {
        "grid" => false,
        "geo" => true,
        other => return Err(syntax(line, format!("unknown instance kind `{other}`"))),
    };
    if !matches!(*variant, "full" | "subset" | "penalty") {
        return Err(syntax(line, format!("unknown variant `{variant}`")));
    }
    let (mut kappa, mut tau) = (None, None);
    for t in rest {
        match t.split_once('=') {
            Some(("kappa", v)) if kappa.is_none() => kappa = Some(number(line, v)?),
            Some(("tau", v)) if tau.is_none() => tau = Some(number(line, v)?),
            _ => return Err(syntax(line, format!("unexpected `{t}` in header"))),
        }
    }
    let kappa = kappa.ok_or_else(|| syntax(line, "missing kappa="))?;
    let tau = tau.ok_or_else(|| syntax(line, "missing tau="))?;
    Ok(Header { geo, variant: variant.to_string(), kappa, tau })
}

/// Trailing `S` and `pen=` markers, checked against the variant.
fn markers(line: usize, variant: &str, tokens: &[&str]) -> Result<(bool, Option<Rational>), ParseError> {
    let (mut s, mut pen) = (false, None);
    for t in tokens {
        if *t == "S" && !s {
            if variant != "subset" {
                return Err(syntax(line, "`S` is only allowed in subset instances"));
            }
            s = true;
        } else if let (Some(v), None) = (t.strip_prefix("pen="), &pen) {
            if variant != "penalty" {
                return Err(syntax(line, "`pen=` is only allowed in penalty instances"));
            }
            pen = Some(number(line, v)?);
        } else {
            return Err(syntax(line, format!("unexpected `{t}`")));
        }
    }
    Ok((s, pen))
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut it = lines(text);
    let (hl, ht) = it.next().ok_or_else(|| syntax(1, "empty instance file"))?;
    let h = header(hl, ht)?;
    if h.geo {
        parse_geo(h, it)
    } else {
        parse_grid(h, it)
    }
}

fn parse_grid<'a>(h: Header, body: impl Iterator<Item = (usize, &'a str)>) -> Result<Instance, ParseError> {
    let mut pixels = Vec::new();
    let mut subset = BTreeSet::new();
    let mut penalties = BTreeMap::new();
    for (line, text) in body {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() < 2 {
            return Err(syntax(line, "expected `x y`"));
        }
        let p = Pixel::new(integer(line, tokens[0])?, integer(line, tokens[1])?);
        let (s, pen) = markers(line, &h.variant, &tokens[2..])?;
        pixels.push(p);
        if s {
            subset.insert(p);
        }
        if let Some(c) = pen {
            penalties.insert(p, c);
        }
    }
    let coverage = match h.variant.as_str() {
        "full" => Coverage::Full,
        "subset" => Coverage::Subset(subset),
        _ => Coverage::Penalty(penalties),
    };
    Ok(Instance::Grid(build_grid_instance(pixels, coverage, h.kappa, h.tau)?))
}

fn parse_geo<'a>(h: Header, body: impl Iterator<Item = (usize, &'a str)>) -> Result<Instance, ParseError> {
    let mut points = Vec::new();
    let mut angles = Vec::new();
    let mut obstacles = Vec::new();
    let mut subset = BTreeSet::new();
    let mut penalties = BTreeMap::new();
    for (line, text) in body {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        match tokens.first() {
            Some(&"point") => {
                if tokens.len() < 4 {
                    return Err(syntax(line, "expected `point x y angles=a1,a2`"));
                }
                let p = GeoPoint { x: number(line, tokens[1])?, y: number(line, tokens[2])? };
                let list = tokens[3].strip_prefix("angles=").ok_or_else(|| syntax(line, "expected `angles=`"))?;
                let a = list.split(',').map(|s| number(line, s)).collect::<Result<Vec<_>, _>>()?;
                let (s, pen) = markers(line, &h.variant, &tokens[4..])?;
                if s {
                    subset.insert(points.len());
                }
                if let Some(c) = pen {
                    penalties.insert(points.len(), c);
                }
                points.push(p);
                angles.push(a);
            }
            Some(&"obstacle") => {
                let coords = &tokens[1..];
                if coords.len() < 6 || !coords.len().is_multiple_of(2) {
                    return Err(syntax(line, "an obstacle needs at least three `x y` vertices"));
                }
                let vs = coords
                    .chunks(2)
                    .map(|c| Ok(GeoPoint { x: number(line, c[0])?, y: number(line, c[1])? }))
                    .collect::<Result<Vec<_>, ParseError>>()?;
                obstacles.push(Polygon::new(vs));
            }
            _ => return Err(syntax(line, "expected a `point` or `obstacle` line")),
        }
    }
    let coverage = match h.variant.as_str() {
        "full" => GeoCoverage::Full,
        "subset" => GeoCoverage::Subset(subset),
        _ => GeoCoverage::Penalty(penalties),
    };
    Ok(Instance::Geo(GeometricInstance::new(points, angles, obstacles, coverage, h.kappa, h.tau)?))
}

/// Normalized text: canonical header, sorted pixels, single spaces, no
/// comments.
pub fn write_instance(inst: &Instance) -> String {
    match inst {
        Instance::Grid(g) => write_grid(g),
        Instance::Geo(g) => write_geo(g),
    }
}

fn header_line(kind: &str, variant: &str, kappa: Rational, tau: Rational) -> String {
    format!("{kind} {variant} kappa={} tau={}\n", format_rational(&kappa), format_rational(&tau))
}

fn write_grid(g: &GridInstance) -> String {
    let mut out = header_line("grid", g.coverage().name(), g.kappa(), g.tau());
    for p in g.pixels() {
        write!(out, "{} {}", p.x, p.y).unwrap();
        match g.coverage() {
            Coverage::Full => {}
            Coverage::Subset(s) => {
                if s.contains(p) {
                    out.push_str(" S");
                }
            }
            Coverage::Penalty(m) => {
                if let Some(c) = m.get(p) {
                    write!(out, " pen={}", format_rational(c)).unwrap();
                }
            }
        }
        out.push('\n');
    }
    out
}

fn point_text(p: &GeoPoint) -> String {
    format!("{} {}", format_rational(&p.x), format_rational(&p.y))
}

fn write_geo(g: &GeometricInstance) -> String {
    let variant = match g.coverage() {
        GeoCoverage::Full => "full",
        GeoCoverage::Subset(_) => "subset",
        GeoCoverage::Penalty(_) => "penalty",
    };
    let mut out = header_line("geo", variant, g.kappa(), g.tau());
    for (i, p) in g.points().iter().enumerate() {
        let angles: Vec<String> = g.angles_degrees(i).iter().map(format_rational).collect();
        write!(out, "point {} angles={}", point_text(p), angles.join(",")).unwrap();
        match g.coverage() {
            GeoCoverage::Full => {}
            GeoCoverage::Subset(s) => {
                if s.contains(&i) {
                    out.push_str(" S");
                }
            }
            GeoCoverage::Penalty(m) => {
                if let Some(c) = m.get(&i) {
                    write!(out, " pen={}", format_rational(c)).unwrap();
                }
            }
        }
        out.push('\n');
    }
    for poly in g.obstacles() {
        let vs: Vec<String> = poly.vertices.iter().map(point_text).collect();
        writeln!(out, "obstacle {}", vs.join(" ")).unwrap();
    }
    out
}

/// A solution together with `key value` metadata (solver, goal, cost
/// breakdown, bound, ratio). Only the cycles matter for validation.
#[derive(Clone, Debug)]
pub struct SolutionFile {
    pub meta: Vec<(String, String)>,
    pub body: SolutionBody,
}

#[derive(Clone, Debug)]
pub enum SolutionBody {
    Grid(CycleCover),
    Geo(GeoCover),
}

impl SolutionFile {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match self.meta.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value,
            None => self.meta.push((key.to_string(), value)),
        }
    }
}

fn configuration_text(c: &Configuration) -> String {
    format!("{},{},{}", c.pixel.x, c.pixel.y, c.heading.letter())
}

/// Grid cycles are `cycle x,y,H ...` lines. Geometric cycles are a
/// `geocycle` line followed by alternating `visit x y radians` and
/// `leg x1 y1 x2 y2 ...` lines, the leg running to the next visit.
pub fn write_solution(sol: &SolutionFile) -> String {
    let mut out = String::new();
    for (k, v) in &sol.meta {
        writeln!(out, "{k} {v}").unwrap();
    }
    match &sol.body {
        SolutionBody::Grid(cover) => {
            for cy in &cover.cycles {
                let steps: Vec<String> = cy.steps().iter().map(configuration_text).collect();
                writeln!(out, "cycle {}", steps.join(" ")).unwrap();
            }
        }
        SolutionBody::Geo(cover) => {
            for cy in &cover.cycles {
                out.push_str("geocycle\n");
                for (v, leg) in cy.visits.iter().zip(&cy.legs) {
                    writeln!(out, "visit {} {}", point_text(&v.position), v.direction).unwrap();
                    let pts: Vec<String> = leg.polyline.iter().map(point_text).collect();
                    writeln!(out, "leg {}", pts.join(" ")).unwrap();
                }
            }
        }
    }
    out
}

fn parse_configuration(line: usize, t: &str) -> Result<Configuration, ParseError> {
    let bad = || syntax(line, format!("expected `x,y,H`, found `{t}`"));
    let parts: Vec<&str> = t.split(',').collect();
    let [x, y, h] = parts.as_slice() else { return Err(bad()) };
    let mut hs = h.chars();
    let heading = match (hs.next(), hs.next()) {
        (Some(c), None) => Heading::from_letter(c).ok_or_else(bad)?,
        _ => return Err(bad()),
    };
    Ok(Configuration::new(Pixel::new(integer(line, x)?, integer(line, y)?), heading))
}

/// Reads a solution for `inst`. Leg costs of geometric cycles are
/// recomputed from the polylines with the instance weights.
pub fn parse_solution(text: &str, inst: &Instance) -> Result<SolutionFile, ParseError> {
    let mut meta = Vec::new();
    let mut grid = Vec::new();
    let mut geo: Vec<GeoCycle> = Vec::new();
    let mut pending: Option<GeoConfiguration> = None;
    let mut legs: Vec<(usize, Vec<GeoPoint>)> = Vec::new();
    for (line, text) in lines(text) {
        let (key, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        match (key, inst) {
            ("cycle", Instance::Grid(_)) => {
                let steps = rest.split_whitespace().map(|t| parse_configuration(line, t)).collect::<Result<Vec<_>, _>>()?;
                grid.push(Cycle::new(steps).map_err(|e| syntax(line, e.to_string()))?);
            }
            ("geocycle", Instance::Geo(_)) => {
                if pending.is_some() {
                    return Err(syntax(line, "visit without a leg"));
                }
                geo.push(GeoCycle { visits: Vec::new(), legs: Vec::new() });
            }
            ("visit", Instance::Geo(_)) => {
                let t: Vec<&str> = rest.split_whitespace().collect();
                if geo.is_empty() || pending.is_some() || t.len() != 3 {
                    return Err(syntax(line, "expected `visit x y radians` after `geocycle` or a leg"));
                }
                let dir: f64 = t[2].parse().map_err(|_| syntax(line, format!("bad direction `{}`", t[2])))?;
                let position = GeoPoint { x: number(line, t[0])?, y: number(line, t[1])? };
                pending = Some(GeoConfiguration::new(position, dir));
            }
            ("leg", Instance::Geo(_)) => {
                let visit = pending.take().ok_or_else(|| syntax(line, "leg without a visit"))?;
                let t: Vec<&str> = rest.split_whitespace().collect();
                if t.len() < 4 || !t.len().is_multiple_of(2) {
                    return Err(syntax(line, "a leg needs at least two `x y` points"));
                }
                let poly = t
                    .chunks(2)
                    .map(|c| Ok(GeoPoint { x: number(line, c[0])?, y: number(line, c[1])? }))
                    .collect::<Result<Vec<_>, ParseError>>()?;
                let cy = geo.last_mut().expect("visit checked a cycle exists");
                cy.visits.push(visit);
                legs.push((geo.len() - 1, poly));
            }
            ("cycle" | "geocycle" | "visit" | "leg", _) => {
                return Err(syntax(line, format!("`{key}` does not belong in a {} solution", inst.kind())));
            }
            _ => meta.push((key.to_string(), rest.to_string())),
        }
    }
    if pending.is_some() {
        return Err(syntax(text.lines().count(), "visit without a leg"));
    }
    let body = match inst {
        Instance::Grid(_) => SolutionBody::Grid(CycleCover::new(grid)),
        Instance::Geo(gi) => {
            for (c, poly) in legs {
                let i = geo[c].legs.len();
                let from = geo[c].visits[i].direction;
                let to = geo[c].visits.get(i + 1).map_or(geo[c].visits[0].direction, |v| v.direction);
                let (length, turning) = crate::geometry::measure(&poly, from, to);
                let cost = gi.kappa_f64() * length + gi.tau_f64() * turning;
                geo[c].legs.push(GeoPath { cost, length, turning, polyline: poly });
            }
            SolutionBody::Geo(GeoCover { cycles: geo })
        }
    };
    Ok(SolutionFile { meta, body })
}
