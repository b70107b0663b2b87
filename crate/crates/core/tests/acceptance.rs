//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed; exits nonzero when any
//! criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use turncover::approx::{approx_cycle_cover, approx_tour, brute_force_pcst, pcst_gw};
use turncover::exact::{brute_force_cycle_cover, brute_force_tour, solve_exact_cycle_cover, solve_exact_tour, ExactOptions, TraversalModel};
use turncover::generate::{gen_instance, GenKind, GenParams, Variant};
use turncover::geometry::{
    deviation, euclidean_shortest_path, geo_strip_costs, turn_cost_shortest_path, GeoConfiguration, GeoCoverage, GeoPoint, GeometricInstance, Polygon,
};
use turncover::grid::{build_grid_instance, validate_cycle_cover, validate_tour, Coverage, CycleCover, GridInstance, Pixel};
use turncover::matching::{brute_force_matching, min_weight_perfect_matching};
use turncover::rational::{format_rational, Rational};
use turncover::strips::{check_pseudo_triangle, metric_close, strips_from_grid, StripGraph};

type Outcome = Result<String, String>;

struct Suite {
    failed: usize,
    lines: Vec<(usize, String)>,
}

impl Suite {
    fn run(&mut self, id: usize, name: &str, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        let line = match r {
            Ok(detail) => format!("PASS [{id:2}] {name}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                self.failed += 1;
                format!("FAIL [{id:2}] {name}: {detail} ({secs:.2}s)")
            }
        };
        self.lines.push((id, line));
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// One instance of the oracle sweep with everything later criteria reuse.
struct SmallCase {
    inst: GridInstance,
    exact_cover: Rational,
    exact_tour: Rational,
    tour_cover: CycleCover,
    cover_cover: CycleCover,
    cut_violations: usize,
}

fn small_instances() -> Vec<GridInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..100u64)
        .map(|i| {
            let variant = match i % 4 {
                0 | 1 => Variant::Full,
                2 => Variant::Subset,
                _ => Variant::Penalty,
            };
            let params = GenParams {
                pixels: rng.gen_range(2..=12),
                scale: rng.gen_range(1..=6),
                variant,
                density: 0.4,
                kappa: r((i % 2) as i64),
                tau: r(1),
                ..GenParams::default()
            };
            gen_instance(GenKind::RandomPolyomino, &params, 1000 + i).expect("generator")
        })
        .collect()
}

fn main() -> ExitCode {
    let mut suite = Suite { failed: 0, lines: Vec::new() };
    let mut small: Vec<SmallCase> = Vec::new();
    let mut parity_checked = 0usize;
    let mut parity_bad = 0usize;
    let mut graphs_checked = 0usize;
    let mut graphs_bad = 0usize;
    let opts = ExactOptions::default();

    suite.run(1, "domino ground truth", || {
        let t = Instant::now();
        for (k, want) in [(0, 4), (1, 6)] {
            let inst = build_grid_instance([Pixel::new(0, 0), Pixel::new(1, 0)], Coverage::Full, r(k), r(1)).unwrap();
            let c = solve_exact_cycle_cover(&inst, &opts).map_err(|e| e.to_string())?.value;
            let t = solve_exact_tour(&inst, &opts).map_err(|e| e.to_string())?.value;
            ensure(c == r(want) && t == r(want), || format!("kappa={k}: cover {c}, tour {t}, expected {want}"))?;
        }
        let el = t.elapsed();
        ensure(el < Duration::from_secs(1), || format!("took {el:?}"))?;
        Ok("cover = tour = 4 at kappa 0, 6 at kappa 1".into())
    });

    suite.run(2, "oracle equivalence on 100 instances <= 12 pixels", || {
        let t = Instant::now();
        let mut bad = Vec::new();
        for (i, inst) in small_instances().into_iter().enumerate() {
            let ec = solve_exact_cycle_cover(&inst, &opts).map_err(|e| e.to_string())?;
            let et = solve_exact_tour(&inst, &opts).map_err(|e| e.to_string())?;
            let (_, bc) = brute_force_cycle_cover(&inst).map_err(|e| e.to_string())?;
            let (_, bt) = brute_force_tour(&inst).map_err(|e| e.to_string())?;
            if ec.value != bc || et.value != bt {
                bad.push(format!("#{i}: cover {} vs {bc}, tour {} vs {bt}", ec.value, et.value));
            }
            let x = TraversalModel::new(&inst).counts(&inst, &et.cover);
            let cut_violations = et.cuts.violated_by(&x).len();
            small.push(SmallCase {
                exact_cover: ec.value,
                exact_tour: et.value,
                tour_cover: et.cover,
                cover_cover: ec.cover,
                cut_violations,
                inst,
            });
        }
        let el = t.elapsed();
        ensure(bad.is_empty(), || format!("{} mismatches: {}", bad.len(), bad.join("; ")))?;
        ensure(el < Duration::from_secs(300), || format!("took {el:?}"))?;
        Ok(format!("{} instances agree", small.len()))
    });

    // Shared sweep for criteria 3 and 4: random polyominoes inside an 8x8 box.
    let sweep: Vec<GridInstance> = (0..50u64)
        .map(|i| {
            let params = GenParams { pixels: 10 + (i as usize * 7) % 40, scale: 1 + (i as usize % 8), bounds: Some((8, 8)), ..GenParams::default() };
            gen_instance(GenKind::RandomPolyomino, &params, 500 + i).expect("generator")
        })
        .collect();

    suite.run(3, "cycle cover within 4x the LP bound", || {
        let mut ratios = Vec::new();
        let mut bad = Vec::new();
        for (i, inst) in sweep.iter().enumerate() {
            let a = approx_cycle_cover(inst).map_err(|e| e.to_string())?;
            let report = validate_cycle_cover(inst, &a.cover);
            parity_checked += 1;
            parity_bad += usize::from(!report.parity.is_empty());
            if a.cost.total > r(4) * a.lp_bound || !report.is_valid() {
                bad.push(format!("#{i}: cost {} bound {}", a.cost.total, a.lp_bound));
            }
            if a.lp_bound > r(0) {
                ratios.push(turncover::rational::to_f64(&(a.cost.total / a.lp_bound)));
            }
            let g = strips_from_grid(inst).map_err(|e| e.to_string())?;
            graphs_checked += 1;
            graphs_bad += usize::from(!check_pseudo_triangle(&g.graph).is_empty());
        }
        ensure(bad.is_empty(), || format!("violations: {}", bad.join("; ")))?;
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        Ok(format!("50 instances, mean ratio {mean:.3}, max {max:.3}"))
    });

    suite.run(4, "tour factors 6 (full), 10 (subset), 12 (penalty)", || {
        let mut bad = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for (i, base) in sweep.iter().enumerate() {
            let px = base.pixels();
            let subset: BTreeSet<Pixel> = px.iter().copied().filter(|_| rng.gen_bool(0.3)).chain([px[0]]).collect();
            let pens: BTreeMap<Pixel, Rational> = px.iter().map(|&p| (p, r(rng.gen_range(0..=6)))).collect();
            for (coverage, factor) in [(Coverage::Full, 6), (Coverage::Subset(subset), 10), (Coverage::Penalty(pens), 12)] {
                let name = coverage.name();
                let inst = base.with_coverage(coverage).map_err(|e| e.to_string())?;
                let a = approx_tour(&inst).map_err(|e| e.to_string())?;
                let report = validate_tour(&inst, &a.cover);
                parity_checked += 1;
                parity_bad += usize::from(!report.parity.is_empty());
                if a.cost.total > r(factor) * a.lp_bound || !report.is_valid() || a.guarantee != r(factor) {
                    bad.push(format!("#{i} {name}: cost {} bound {} valid {}", a.cost.total, a.lp_bound, report.is_valid()));
                }
            }
        }
        ensure(bad.is_empty(), || format!("violations: {}", bad.join("; ")))?;
        Ok("150 tours, zero violations".into())
    });

    suite.run(5, "blossom matching equals brute force on 200 graphs", || {
        let t = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in 0..200 {
            let n = 2 * rng.gen_range(1..=6);
            let edges: Vec<(usize, usize, i64)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| (i, j, rng.gen_range(-20..=50))).collect();
            let a = min_weight_perfect_matching(n, &edges).map_err(|e| e.to_string())?;
            let b = brute_force_matching(n, &edges).map_err(|e| e.to_string())?;
            ensure(a.cost == b.cost, || format!("graph {k} (n={n}): blossom {} brute {}", a.cost, b.cost))?;
        }
        let el = t.elapsed();
        ensure(el < Duration::from_secs(60), || format!("took {el:?}"))?;
        Ok("200 graphs agree".into())
    });

    suite.run(6, "LP <= exact cover <= exact tour", || {
        ensure(!small.is_empty(), || "criterion 2 produced no instances".into())?;
        for (i, c) in small.iter().enumerate() {
            let lp = approx_cycle_cover(&c.inst).map_err(|e| e.to_string())?.lp_bound;
            ensure(lp <= c.exact_cover && c.exact_cover <= c.exact_tour, || {
                format!("#{i}: lp {} cover {} tour {}", format_rational(&lp), c.exact_cover, c.exact_tour)
            })?;
        }
        Ok(format!("{} instances", small.len()))
    });

    suite.run(7, "cuts valid for the optimal tour", || {
        ensure(!small.is_empty(), || "criterion 2 produced no instances".into())?;
        let total: usize = small.iter().map(|c| c.cut_violations).sum();
        ensure(total == 0, || format!("{total} violated cuts"))?;
        Ok("zero violated cuts".into())
    });

    suite.run(12, "scale: exact tours at 30 pixels, approx at 100", || {
        let mut worst_exact = Duration::ZERO;
        for seed in 0..10 {
            let inst = gen_instance(GenKind::RandomPolyomino, &GenParams { pixels: 30, kappa: r(seed as i64 % 2), ..GenParams::default() }, 900 + seed).unwrap();
            let t = Instant::now();
            let e = solve_exact_tour(&inst, &opts).map_err(|e| e.to_string())?;
            worst_exact = worst_exact.max(t.elapsed());
            let report = validate_tour(&inst, &e.cover);
            parity_checked += 1;
            parity_bad += usize::from(!report.parity.is_empty());
            ensure(report.is_valid(), || format!("seed {seed}: invalid exact tour"))?;
        }
        let mut worst_approx = Duration::ZERO;
        for seed in 0..3 {
            let inst = gen_instance(GenKind::RandomPolyomino, &GenParams { pixels: 100, scale: 8, ..GenParams::default() }, 950 + seed).unwrap();
            let t = Instant::now();
            let c = approx_cycle_cover(&inst).map_err(|e| e.to_string())?;
            let a = approx_tour(&inst).map_err(|e| e.to_string())?;
            worst_approx = worst_approx.max(t.elapsed());
            for (cover, tour) in [(&c.cover, false), (&a.cover, true)] {
                let report = if tour { validate_tour(&inst, cover) } else { validate_cycle_cover(&inst, cover) };
                parity_checked += 1;
                parity_bad += usize::from(!report.parity.is_empty());
            }
        }
        ensure(worst_exact < Duration::from_secs(60) && worst_approx < Duration::from_secs(60), || {
            format!("worst exact {worst_exact:?}, worst approx {worst_approx:?}")
        })?;
        Ok(format!("worst exact tour {:.2}s, worst approx {:.2}s", worst_exact.as_secs_f64(), worst_approx.as_secs_f64()))
    });

    suite.run(8, "even turns on every full strip", || {
        for c in &small {
            for (cover, tour) in [(&c.cover_cover, false), (&c.tour_cover, true)] {
                let report = if tour { validate_tour(&c.inst, cover) } else { validate_cycle_cover(&c.inst, cover) };
                parity_checked += 1;
                parity_bad += usize::from(!report.parity.is_empty());
            }
        }
        ensure(parity_bad == 0, || format!("{parity_bad} of {parity_checked} solutions violate parity"))?;
        Ok(format!("{parity_checked} solutions checked"))
    });

    suite.run(9, "pseudo-triangle inequality after closure", || {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for k in 0..100 {
            let owners = rng.gen_range(1..=10);
            let strip_owner: Vec<usize> = (0..owners).flat_map(|o| std::iter::repeat_n(o, rng.gen_range(1..=2))).collect();
            let mut g = StripGraph::new(owners, strip_owner, 1);
            let n = g.endpoint_count();
            for a in 0..n {
                for b in a..n {
                    g.set_direct(a, b, rng.gen_range(0..=40));
                }
            }
            metric_close(&mut g).map_err(|e| format!("table {k}: {e}"))?;
            let v = check_pseudo_triangle(&g);
            ensure(v.is_empty(), || format!("table {k}: {} violations", v.len()))?;
        }
        // Instances where nothing has to be visited have no strip graph.
        for c in small.iter().filter(|c| !c.inst.strip_owners().is_empty()) {
            let g = strips_from_grid(&c.inst).map_err(|e| e.to_string())?;
            graphs_checked += 1;
            graphs_bad += usize::from(!check_pseudo_triangle(&g.graph).is_empty());
        }
        for (i, gi) in scenes(10, 1).iter().enumerate() {
            let gs = geo_strip_costs(gi).map_err(|e| format!("scene {i}: {e}"))?;
            graphs_checked += 1;
            graphs_bad += usize::from(!check_pseudo_triangle(&gs.graph).is_empty());
        }
        ensure(graphs_bad == 0, || format!("{graphs_bad} of {graphs_checked} strip graphs violate the inequality"))?;
        Ok(format!("100 random tables and {graphs_checked} grid/geo strip graphs"))
    });

    suite.run(10, "prize-collecting tree within 2x optimum", || {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut worst = 0.0f64;
        for k in 0..100 {
            let n = rng.gen_range(2..=10);
            let mut edges: Vec<(usize, usize, i64)> = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.6) {
                        edges.push((i, j, rng.gen_range(1..=20)));
                    }
                }
            }
            let prizes: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=25)).collect();
            let gw = pcst_gw(n, &edges, &prizes);
            let opt = brute_force_pcst(n, &edges, &prizes);
            ensure(gw.objective <= 2 * opt.objective, || format!("graph {k}: gw {} opt {}", gw.objective, opt.objective))?;
            if opt.objective > 0 {
                worst = worst.max(gw.objective as f64 / opt.objective as f64);
            }
        }
        Ok(format!("100 graphs, worst ratio {worst:.3}"))
    });

    suite.run(11, "tau = 0 paths equal Euclidean visibility paths", || {
        let mut bends = 0usize;
        for (i, gi) in scenes(50, 0).iter().enumerate() {
            let vg = gi.visibility();
            let pts = gi.points();
            for a in 0..pts.len() {
                for b in 0..pts.len() {
                    if a == b {
                        continue;
                    }
                    let da = (a * 37 + b) as f64 * 0.41;
                    let db = (b * 11 + a) as f64 * 1.37;
                    let tc = turn_cost_shortest_path(gi, GeoConfiguration::new(pts[a], da), GeoConfiguration::new(pts[b], db));
                    let eu = euclidean_shortest_path(vg, a, b);
                    match (tc, eu) {
                        (Ok(p), Some(d)) => {
                            ensure((p.cost - d).abs() <= 1e-9 * d.max(1.0), || format!("scene {i} {a}->{b}: {} vs {d}", p.cost))?;
                            // Passing straight through another point is not a bend.
                            for w in p.polyline.windows(3) {
                                if deviation(w[0].direction_to(w[1]), w[1].direction_to(w[2])) > 1e-9 {
                                    let v = vg.vertex_of(w[1]).unwrap();
                                    ensure(vg.is_obstacle_vertex(v), || format!("scene {i} {a}->{b}: bend off obstacle vertices"))?;
                                    bends += 1;
                                }
                            }
                        }
                        (Err(_), None) => {}
                        (tc, eu) => return Err(format!("scene {i} {a}->{b}: reachability differs ({:?} vs {eu:?})", tc.map(|p| p.cost))),
                    }
                }
            }
        }
        Ok(format!("50 scenes, {bends} bends all on obstacle vertices"))
    });

    // Criterion 8 and 9 aggregate over the other sweeps, so print in order
    // at the end.
    suite.lines.sort();
    for (_, line) in &suite.lines {
        println!("{line}");
    }
    println!("{} of {} criteria failed", suite.failed, suite.lines.len());
    if suite.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

/// Random scenes: up to three disjoint convex obstacles (triangles or
/// quadrilaterals) in separate cells of a coarse grid, plus free points,
/// at most 20 vertices in total.
fn scenes(count: u64, tau: i64) -> Vec<GeometricInstance> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while (out.len() as u64) < count {
        seed += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed * 31 + tau as u64);
        let cells: Vec<(i64, i64)> = (0..3).flat_map(|x| (0..3).map(move |y| (x, y))).collect();
        let mut free = cells.clone();
        let mut obstacles = Vec::new();
        let mut vertices = 0;
        for _ in 0..rng.gen_range(0..=3) {
            let (cx, cy) = free.remove(rng.gen_range(0..free.len()));
            let (x0, y0) = (cx * 10 + 2, cy * 10 + 2);
            let poly = if rng.gen_bool(0.5) {
                let (w, h) = (rng.gen_range(2..=6), rng.gen_range(2..=6));
                vec![GeoPoint::new(x0, y0), GeoPoint::new(x0 + w, y0), GeoPoint::new(x0 + w, y0 + h), GeoPoint::new(x0, y0 + h)]
            } else {
                vec![GeoPoint::new(x0, y0), GeoPoint::new(x0 + rng.gen_range(3..=6), y0 + rng.gen_range(0..=2)), GeoPoint::new(x0 + rng.gen_range(0..=3), y0 + rng.gen_range(3..=6))]
            };
            vertices += poly.len();
            obstacles.push(Polygon::new(poly));
        }
        let n = rng.gen_range(2..=(20 - vertices).min(6));
        let mut points = BTreeSet::new();
        while points.len() < n {
            // Points live on the cell borders, outside every obstacle.
            let x = rng.gen_range(0..=30);
            let y = 10 * rng.gen_range(0..=3);
            points.insert(GeoPoint::new(x, y));
        }
        let points: Vec<GeoPoint> = points.into_iter().collect();
        let angles = points.iter().map(|_| vec![r(rng.gen_range(0..4) * 45)]).collect();
        if let Ok(gi) = GeometricInstance::new(points, angles, obstacles, GeoCoverage::Full, r(1), r(tau)) {
            out.push(gi);
        }
    }
    out
}
