//! Strips of geometric instances: one per allowed orientation of every point
//! that needs covering, connected by turn-cost shortest paths.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use rayon::prelude::*;

use super::path::{measure, TurnSearch};
use super::{deviation, turn_cost_shortest_path, GeoConfiguration, GeoCoverage, GeoError, GeoPath, GeometricInstance};
use crate::approx::round_strip_solution;
use crate::lp::solve_cover_lp;
use crate::rational::INF;
use crate::strips::{metric_close, penalty_to_full, StripError, StripGraph};

/// Cost units per unit of geometric cost in strip graphs.
pub const GEO_SCALE: i64 = 1_000_000;

const ANGLE_EPS: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct GeoStrips {
    /// Metrically closed strip graph in units of `1 / GEO_SCALE`.
    pub graph: StripGraph,
    /// Point index of every owner.
    pub owner_point: Vec<usize>,
    /// Orientation (radians) of every strip; endpoint `2k` leaves strip `k`
    /// heading along it, endpoint `2k + 1` heading against it.
    pub strip_angle: Vec<f64>,
}

impl GeoStrips {
    /// Heading when leaving the strip through `v`.
    pub fn out_direction(&self, v: usize) -> f64 {
        self.strip_angle[v / 2] + if v % 2 == 1 { PI } else { 0.0 }
    }

    pub fn out_configuration(&self, gi: &GeometricInstance, v: usize) -> GeoConfiguration {
        let p = self.owner_point[self.graph.endpoint_owner(v)];
        GeoConfiguration::new(gi.points()[p], self.out_direction(v))
    }

    /// Configuration while entering the strip through `v`.
    pub fn in_configuration(&self, gi: &GeometricInstance, v: usize) -> GeoConfiguration {
        self.out_configuration(gi, v).reversed()
    }
}

fn units(c: f64) -> i64 {
    (c * GEO_SCALE as f64).round() as i64
}

/// Strip graph of a geometric instance. The cost of `(a, b)` is the turn
/// cost shortest path from leaving through `a` to entering through `b`.
pub fn geo_strip_costs(gi: &GeometricInstance) -> Result<GeoStrips, GeoError> {
    if gi.points().len() < 2 {
        return Err(GeoError::TooFewPoints);
    }
    let owner_point = gi.owners();
    if owner_point.is_empty() {
        return Err(StripError::Empty.into());
    }
    let mut strip_owner = Vec::new();
    let mut strip_angle = Vec::new();
    for (o, &p) in owner_point.iter().enumerate() {
        for a in gi.orientations(p) {
            strip_owner.push(o);
            strip_angle.push(a);
        }
    }
    let mut graph = StripGraph::new(owner_point.len(), strip_owner, GEO_SCALE);
    graph.set_penalties(owner_point.iter().map(|&p| units(gi.penalty_f64(p))).collect());
    let mut gs = GeoStrips { graph, owner_point, strip_angle };

    let vg = gi.visibility();
    let (kappa, tau) = (gi.kappa_f64(), gi.tau_f64());
    let n = gs.graph.endpoint_count();
    let vertex: Vec<usize> = (0..n).map(|v| gs.owner_point[gs.graph.endpoint_owner(v)]).collect();
    let rows: Vec<Vec<i64>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let search = TurnSearch::run(vg, kappa, tau, vertex[a], gs.out_direction(a));
            (0..n)
                .map(|b| match search.arrival(vg, tau, vertex[b], gs.out_direction(b) + PI) {
                    Some((c, _)) => units(c),
                    None => INF,
                })
                .collect()
        })
        .collect();
    for a in 0..n {
        for b in a..n {
            if rows[a][b] < INF {
                gs.graph.set_direct(a, b, rows[a][b]);
            }
        }
    }
    metric_close(&mut gs.graph)?;
    Ok(gs)
}

/// A closed path through a sequence of strip visits.
#[derive(Clone, Debug, PartialEq)]
pub struct GeoCycle {
    /// Configurations in which the strips are passed.
    pub visits: Vec<GeoConfiguration>,
    /// `legs[i]` runs from `visits[i]` to the next visit.
    pub legs: Vec<GeoPath>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GeoCover {
    pub cycles: Vec<GeoCycle>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GeoReport {
    pub length: f64,
    pub turning: f64,
    pub penalties: f64,
    pub total: f64,
    pub problems: Vec<String>,
}

impl GeoReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Recomputes the cost of a cover from its polylines and checks them:
/// legs chain visit to visit along visibility edges, every visit passes an
/// instance point along an allowed orientation, and required points are
/// visited.
pub fn validate_geo_cover(gi: &GeometricInstance, cover: &GeoCover) -> GeoReport {
    let vg = gi.visibility();
    let mut r = GeoReport::default();
    let mut visited = BTreeSet::new();
    for (ci, cy) in cover.cycles.iter().enumerate() {
        if cy.visits.is_empty() || cy.legs.len() != cy.visits.len() {
            r.problems.push(format!("cycle {ci}: needs one leg per visit"));
            continue;
        }
        let m = cy.visits.len();
        for (i, visit) in cy.visits.iter().enumerate() {
            match gi.points().iter().position(|&p| p == visit.position) {
                None => r.problems.push(format!("cycle {ci}: visit {i} is not at an instance point")),
                Some(p) => {
                    let along = gi.orientations(p).iter().any(|&a| deviation(a, visit.direction).min(deviation(a + PI, visit.direction)) < ANGLE_EPS);
                    if along {
                        visited.insert(p);
                    } else {
                        r.problems.push(format!("cycle {ci}: visit {i} passes point {p} at a disallowed angle"));
                    }
                }
            }
            let leg = &cy.legs[i];
            let next = cy.visits[(i + 1) % m];
            if leg.polyline.len() < 2 || leg.polyline[0] != visit.position || *leg.polyline.last().unwrap() != next.position {
                r.problems.push(format!("cycle {ci}: leg {i} does not join its visits"));
                continue;
            }
            for w in leg.polyline.windows(2) {
                let ok = matches!((vg.vertex_of(w[0]), vg.vertex_of(w[1])), (Some(a), Some(b)) if vg.has_edge(a, b));
                if !ok {
                    r.problems.push(format!("cycle {ci}: leg {i} uses a blocked segment"));
                }
            }
            let (length, turning) = measure(&leg.polyline, visit.direction, next.direction);
            r.length += length;
            r.turning += turning;
        }
    }
    for p in gi.required() {
        if !visited.contains(&p) {
            r.problems.push(format!("point {p} is not covered"));
        }
    }
    if let GeoCoverage::Penalty(_) = gi.coverage() {
        r.penalties = (0..gi.points().len()).filter(|p| !visited.contains(p)).map(|p| gi.penalty_f64(p)).sum();
    }
    r.total = gi.kappa_f64() * r.length + gi.tau_f64() * r.turning + r.penalties;
    r
}

#[derive(Clone, Debug)]
pub struct GeoApproxResult {
    pub cover: GeoCover,
    pub report: GeoReport,
    /// Strip LP bound.
    pub lp_bound: f64,
    /// `cost / lp_bound`, absent when the bound is zero.
    pub ratio: Option<f64>,
    /// Proven factor, where one applies.
    pub guarantee: Option<f64>,
}

impl GeoApproxResult {
    fn new(gi: &GeometricInstance, cover: GeoCover, lp_bound: f64, guarantee: Option<f64>) -> Self {
        let report = validate_geo_cover(gi, &cover);
        let ratio = (lp_bound > 0.0).then(|| report.total / lp_bound);
        GeoApproxResult { cover, report, lp_bound, ratio, guarantee }
    }

    pub fn within_guarantee(&self) -> bool {
        // Costs are rounded to 1 / GEO_SCALE per connection.
        match (self.ratio, self.guarantee) {
            (Some(r), Some(g)) => r <= g + 1e-6,
            _ => true,
        }
    }
}

/// Strip sequences (entry endpoints) from rounding the strip LP.
fn rounded_sequences(gi: &GeometricInstance, gs: &GeoStrips) -> Result<(Vec<Vec<usize>>, f64), GeoError> {
    let penalty = matches!(gi.coverage(), GeoCoverage::Penalty(_));
    let graph = if penalty { penalty_to_full(&gs.graph)? } else { gs.graph.clone() };
    let lp = solve_cover_lp(&graph)?;
    let (cycles, _) = round_strip_solution(&graph, &lp)?;
    let real = gs.graph.endpoint_count();
    let mut seqs: Vec<Vec<usize>> = cycles.iter().map(|c| c.entries.iter().copied().filter(|&v| v < real).collect::<Vec<_>>()).filter(|s| !s.is_empty()).collect();
    if penalty {
        drop_unprofitable(gs, &mut seqs);
    }
    Ok((seqs, super::ratio_f64(lp.value)))
}

fn seq_cost(g: &StripGraph, s: &[usize]) -> i64 {
    (0..s.len()).map(|i| g.cost(StripGraph::mate(s[i]), s[(i + 1) % s.len()])).sum()
}

fn drop_unprofitable(gs: &GeoStrips, seqs: &mut Vec<Vec<usize>>) {
    let g = &gs.graph;
    loop {
        let owners = |s: &Vec<usize>| s.iter().map(|&v| g.endpoint_owner(v)).collect::<BTreeSet<_>>();
        let mut count = vec![0; g.owner_count()];
        for s in seqs.iter() {
            for o in owners(s) {
                count[o] += 1;
            }
        }
        let worst = seqs
            .iter()
            .enumerate()
            .map(|(k, s)| (seq_cost(g, s) - owners(s).iter().filter(|&&o| count[o] == 1).map(|&o| g.penalty(o)).sum::<i64>(), k))
            .filter(|&(gain, _)| gain > 0)
            .max();
        match worst {
            Some((_, k)) => {
                seqs.remove(k);
            }
            None => return,
        }
    }
}

fn realize(gi: &GeometricInstance, gs: &GeoStrips, seqs: &[Vec<usize>]) -> Result<GeoCover, GeoError> {
    let mut cycles = Vec::new();
    for s in seqs {
        let visits: Vec<GeoConfiguration> = s.iter().map(|&v| gs.in_configuration(gi, v)).collect();
        let legs = (0..s.len())
            .map(|i| turn_cost_shortest_path(gi, gs.out_configuration(gi, StripGraph::mate(s[i])), visits[(i + 1) % s.len()]))
            .collect::<Result<Vec<_>, _>>()?;
        cycles.push(GeoCycle { visits, legs });
    }
    Ok(GeoCover { cycles })
}

/// Cycle cover by LP rounding on the geometric strip graph, within `2ω`
/// of the LP bound.
pub fn approx_geo_cycle_cover(gi: &GeometricInstance) -> Result<GeoApproxResult, GeoError> {
    let guarantee = Some(2.0 * gi.omega() as f64);
    if gi.owners().is_empty() {
        return Ok(GeoApproxResult::new(gi, GeoCover::default(), 0.0, guarantee));
    }
    let gs = geo_strip_costs(gi)?;
    let (seqs, bound) = rounded_sequences(gi, &gs)?;
    Ok(GeoApproxResult::new(gi, realize(gi, &gs, &seqs)?, bound, guarantee))
}

/// Tour from the rounded cover by repeatedly joining the two cycles whose
/// exchange of one connection each is cheapest. No factor is claimed.
pub fn approx_geo_tour(gi: &GeometricInstance) -> Result<GeoApproxResult, GeoError> {
    if gi.owners().is_empty() {
        return Ok(GeoApproxResult::new(gi, GeoCover::default(), 0.0, None));
    }
    let gs = geo_strip_costs(gi)?;
    let (mut seqs, bound) = rounded_sequences(gi, &gs)?;
    let g = &gs.graph;
    while seqs.len() > 1 {
        let (a, b, merged) = best_join(g, &seqs);
        seqs[a] = merged;
        seqs.remove(b);
    }
    if let GeoCoverage::Penalty(_) = gi.coverage() {
        let all: i64 = (0..g.owner_count()).map(|o| g.penalty(o)).sum();
        if let Some(s) = seqs.first() {
            let covered: BTreeSet<usize> = s.iter().map(|&v| g.endpoint_owner(v)).collect();
            let paid: i64 = (0..g.owner_count()).filter(|o| !covered.contains(o)).map(|o| g.penalty(o)).sum();
            if seq_cost(g, s) + paid >= all {
                seqs.clear();
            }
        }
    }
    Ok(GeoApproxResult::new(gi, realize(gi, &gs, &seqs)?, bound, None))
}

/// Cheapest join of two sequences: cut each after one entry and cross the
/// two connections, possibly running the second sequence backwards.
fn best_join(g: &StripGraph, seqs: &[Vec<usize>]) -> (usize, usize, Vec<usize>) {
    let c = |x: usize, y: usize| g.cost(StripGraph::mate(x), y);
    let mut best: Option<(i64, usize, usize, usize, usize, bool)> = None;
    for a in 0..seqs.len() {
        for b in a + 1..seqs.len() {
            let sa = &seqs[a];
            for rev in [false, true] {
                let sb = oriented(&seqs[b], rev);
                for i in 0..sa.len() {
                    let an = sa[(i + 1) % sa.len()];
                    for j in 0..sb.len() {
                        let bn = sb[(j + 1) % sb.len()];
                        let delta = c(sa[i], bn).saturating_add(c(sb[j], an)) - c(sa[i], an) - c(sb[j], bn);
                        if best.is_none_or(|x| delta < x.0) {
                            best = Some((delta, a, b, i, j, rev));
                        }
                    }
                }
            }
        }
    }
    let (_, a, b, i, j, rev) = best.expect("at least two sequences");
    let sa = &seqs[a];
    let sb = oriented(&seqs[b], rev);
    let mut merged = sa[..=i].to_vec();
    merged.extend_from_slice(&sb[j + 1..]);
    merged.extend_from_slice(&sb[..=j]);
    merged.extend_from_slice(&sa[i + 1..]);
    (a, b, merged)
}

/// The sequence itself, or traversed backwards (entries become the mates).
fn oriented(s: &[usize], reversed: bool) -> Vec<usize> {
    if reversed {
        s.iter().rev().map(|&v| StripGraph::mate(v)).collect()
    } else {
        s.to_vec()
    }
}
