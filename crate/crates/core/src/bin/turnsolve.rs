use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use turncover::bench::{run_bench, write_csv};
use turncover::exact::ExactOptions;
use turncover::generate::{gen_instance, GenKind, GenParams, Variant};
use turncover::geometry::{approx_geo_cycle_cover, approx_geo_tour, validate_geo_cover, GeometricInstance};
use turncover::grid::{CostBreakdown, GridInstance};
use turncover::io::{parse_instance, parse_solution, write_instance, write_solution, Instance, SolutionBody, SolutionFile};
use turncover::rational::{format_rational, parse_rational, to_f64, Rational};
use turncover::solve::{solve, validate_goal, Goal, Mode};
use turncover::svg::{render_geo_svg, render_svg};

const EXIT_INVALID: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "turnsolve", version, about = "Minimum-turn cycle covers and tours")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random grid instance.
    Generate {
        /// office, random-polyomino or corridor
        #[arg(long, default_value = "random-polyomino")]
        kind: GenKind,
        #[arg(long, default_value_t = 30)]
        pixels: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random walk length for polyominoes.
        #[arg(long, default_value_t = 4)]
        scale: usize,
        /// full, subset or penalty
        #[arg(long, default_value = "full")]
        variant: Variant,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value = "0", value_parser = rational)]
        kappa: Rational,
        #[arg(long, default_value = "1", value_parser = rational)]
        tau: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance file.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "approx")]
        mode: Mode,
        #[arg(long, default_value = "cover")]
        goal: Goal,
        /// Solution file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Seconds allowed for the exact solver.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Recorded in the solution; the solvers are deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest instance the exact solver accepts.
        #[arg(long, default_value_t = 60)]
        max_pixels: usize,
    },
    /// Check a solution file against its instance.
    Validate {
        instance: PathBuf,
        solution: PathBuf,
        /// Defaults to the `goal` recorded in the solution.
        #[arg(long)]
        goal: Option<Goal>,
    },
    /// Draw an instance and optionally a solution as SVG.
    Render {
        instance: PathBuf,
        solution: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve generated instances and write one CSV row per run.
    Bench {
        #[arg(long, default_value = "random-polyomino")]
        kind: GenKind,
        /// Comma separated pixel counts.
        #[arg(long, value_delimiter = ',', default_value = "10,20,30")]
        sizes: Vec<usize>,
        /// Seeds 0..seeds per size.
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        /// Comma separated modes.
        #[arg(long, value_delimiter = ',', default_value = "approx,exact")]
        mode: Vec<Mode>,
        #[arg(long, default_value = "tour")]
        goal: Goal,
        #[arg(long, default_value = "0", value_parser = rational)]
        kappa: Rational,
        #[arg(long, default_value = "1", value_parser = rational)]
        tau: Rational,
        #[arg(long)]
        time_limit: Option<f64>,
        /// Instance files to include alongside the generated ones.
        #[arg(long)]
        instances: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exact_options(time_limit: Option<f64>, max_pixels: usize) -> ExactOptions {
    ExactOptions { max_pixels, time_limit: time_limit.map(Duration::from_secs_f64), ..ExactOptions::default() }
}

fn breakdown(sol: &mut SolutionFile, cost: &CostBreakdown) {
    sol.set("cost", format_rational(&cost.total));
    sol.set("turns", cost.turns.to_string());
    sol.set("length", cost.length.to_string());
    sol.set("penalties", format_rational(&cost.penalties));
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Generate { kind, pixels, seed, scale, variant, density, kappa, tau, out } => {
            let params = GenParams { pixels, scale, variant, density, kappa, tau, ..GenParams::default() };
            let inst = gen_instance(kind, &params, seed)?;
            emit(out.as_deref(), &write_instance(&Instance::Grid(inst)))?;
            Ok(0)
        }
        Command::Solve { instance, mode, goal, out, svg, time_limit, seed, max_pixels } => match read_instance(&instance)? {
            Instance::Grid(g) => solve_grid(&g, mode, goal, out, svg, &exact_options(time_limit, max_pixels), seed),
            Instance::Geo(g) => solve_geo(&g, mode, goal, out, svg, seed),
        },
        Command::Validate { instance, solution, goal } => {
            let inst = read_instance(&instance)?;
            let text = fs::read_to_string(&solution).with_context(|| format!("reading {}", solution.display()))?;
            let sol = parse_solution(&text, &inst)?;
            let goal = match (goal, sol.get("goal")) {
                (Some(g), _) => g,
                (None, Some(g)) => g.parse()?,
                (None, None) => Goal::Cover,
            };
            let (valid, problems, cost) = match (&inst, &sol.body) {
                (Instance::Grid(g), SolutionBody::Grid(cover)) => {
                    let r = validate_goal(g, goal, cover);
                    (r.is_valid(), r.problems(), format_rational(&r.cost.total))
                }
                (Instance::Geo(g), SolutionBody::Geo(cover)) => {
                    let mut r = validate_geo_cover(g, cover);
                    if goal == Goal::Tour && cover.cycles.len() > 1 {
                        r.problems.push(format!("a tour must be a single cycle, found {}", cover.cycles.len()));
                    }
                    (r.is_valid(), r.problems.clone(), format!("{:.9}", r.total))
                }
                _ => bail!("solution does not match the instance kind"),
            };
            for p in &problems {
                println!("problem: {p}");
            }
            println!("valid {valid}\ncost {cost}");
            Ok(if valid { 0 } else { EXIT_INVALID })
        }
        Command::Render { instance, solution, out } => {
            let inst = read_instance(&instance)?;
            let body = match &solution {
                Some(p) => Some(parse_solution(&fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?, &inst)?.body),
                None => None,
            };
            let svg = match (&inst, body) {
                (Instance::Grid(g), Some(SolutionBody::Grid(c))) => render_svg(g, &c),
                (Instance::Grid(g), _) => render_svg(g, &Default::default()),
                (Instance::Geo(g), Some(SolutionBody::Geo(c))) => render_geo_svg(g, &c),
                (Instance::Geo(g), _) => render_geo_svg(g, &Default::default()),
            };
            emit(out.as_deref(), &svg)?;
            Ok(0)
        }
        Command::Bench { kind, sizes, seeds, mode, goal, kappa, tau, time_limit, instances, out } => {
            let mut list: Vec<(String, GridInstance)> = Vec::new();
            for &n in &sizes {
                for seed in 0..seeds {
                    let params = GenParams { pixels: n, kappa, tau, ..GenParams::default() };
                    list.push((format!("{n:04}-{seed:03}"), gen_instance(kind, &params, seed)?));
                }
            }
            for path in &instances {
                match read_instance(path)? {
                    Instance::Grid(g) => list.push((path.display().to_string(), g)),
                    Instance::Geo(_) => bail!("{}: bench only runs grid instances", path.display()),
                }
            }
            let rows = run_bench(&list, &mode, goal, &exact_options(time_limit, usize::MAX))?;
            match out {
                Some(p) => write_csv(&rows, fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?)?,
                None => write_csv(&rows, std::io::stdout().lock())?,
            }
            Ok(if rows.iter().any(|r| r.status == "invalid") { EXIT_INVALID } else { 0 })
        }
    }
}

fn solve_grid(inst: &GridInstance, mode: Mode, goal: Goal, out: Option<PathBuf>, svg: Option<PathBuf>, opts: &ExactOptions, seed: u64) -> Result<u8> {
    let outcome = match solve(inst, mode, goal, opts) {
        Ok(o) => o,
        Err(e) if e.is_limit() => {
            eprintln!("limit: {e}");
            return Ok(EXIT_LIMIT);
        }
        Err(e) => return Err(e.into()),
    };
    let report = outcome.validate(inst);
    let mut sol = SolutionFile { meta: Vec::new(), body: SolutionBody::Grid(outcome.best().clone()) };
    sol.set("kind", "grid");
    sol.set("goal", goal.name());
    sol.set("solver", outcome.solver());
    breakdown(&mut sol, &report.cost);
    if let Some(b) = outcome.lower_bound() {
        sol.set("bound", format_rational(&b));
    }
    if let Some(a) = &outcome.approx {
        sol.set("approx_cost", format_rational(&a.cost.total));
        sol.set("guarantee", format_rational(&a.guarantee));
    }
    if let Some(r) = outcome.ratio() {
        sol.set("ratio", format!("{:.6}", to_f64(&r)));
    }
    sol.set("seed", seed.to_string());
    let within = outcome.within_guarantee();
    sol.set("valid", (report.is_valid() && within).to_string());
    emit(out.as_deref(), &write_solution(&sol))?;
    if let Some(p) = svg {
        emit(Some(&p), &render_svg(inst, outcome.best()))?;
    }
    for p in report.problems() {
        eprintln!("problem: {p}");
    }
    if let Some(r) = outcome.ratio() {
        eprintln!("ratio {:.6}", to_f64(&r));
    }
    if !within {
        eprintln!("problem: approximation exceeds its guarantee");
    }
    eprintln!("cost {} ({} cycles)", format_rational(&report.cost.total), outcome.best().cycles.len());
    Ok(if report.is_valid() && within { 0 } else { EXIT_INVALID })
}

fn solve_geo(gi: &GeometricInstance, mode: Mode, goal: Goal, out: Option<PathBuf>, svg: Option<PathBuf>, seed: u64) -> Result<u8> {
    if mode != Mode::Approx {
        bail!("geometric instances only support --mode approx");
    }
    let r = match goal {
        Goal::Cover => approx_geo_cycle_cover(gi)?,
        Goal::Tour => approx_geo_tour(gi)?,
    };
    let mut sol = SolutionFile { meta: Vec::new(), body: SolutionBody::Geo(r.cover.clone()) };
    sol.set("kind", "geo");
    sol.set("goal", goal.name());
    sol.set("solver", "approx");
    sol.set("cost", format!("{:.9}", r.report.total));
    sol.set("length", format!("{:.9}", r.report.length));
    sol.set("turning", format!("{:.9}", r.report.turning));
    sol.set("penalties", format!("{:.9}", r.report.penalties));
    sol.set("bound", format!("{:.9}", r.lp_bound));
    if let Some(g) = r.guarantee {
        sol.set("guarantee", g.to_string());
    }
    sol.set("seed", seed.to_string());
    let tour_ok = goal == Goal::Cover || r.cover.cycles.len() <= 1;
    let ok = r.report.is_valid() && r.within_guarantee() && tour_ok;
    sol.set("valid", ok.to_string());
    emit(out.as_deref(), &write_solution(&sol))?;
    if let Some(p) = svg {
        emit(Some(&p), &render_geo_svg(gi, &r.cover))?;
    }
    for p in &r.report.problems {
        eprintln!("problem: {p}");
    }
    eprintln!("cost {:.6} ({} cycles)", r.report.total, r.cover.cycles.len());
    Ok(if ok { 0 } else { EXIT_INVALID })
}
