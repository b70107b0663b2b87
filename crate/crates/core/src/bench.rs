//! Benchmark sweeps: solve many instances and tabulate the results as CSV.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::exact::ExactOptions;
use crate::grid::GridInstance;
use crate::rational::{format_rational, Rational};
use crate::solve::{solve, Goal, Mode};

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "TURNSOLVE_THREADS";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{THREADS_VAR} must be a positive integer, found `{0}`")]
    BadThreads(String),
    #[error(transparent)]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Worker count from the environment, `None` when unset.
pub fn worker_limit() -> Result<Option<usize>, BenchError> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(BenchError::BadThreads(s)),
        },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub id: String,
    pub pixels: usize,
    pub mode: Mode,
    pub goal: Goal,
    /// Cost of the reported solution (exact when the exact solver ran).
    pub cost: Option<Rational>,
    /// Strip LP bound, or the root bound of the exact solver in exact mode.
    pub lp_bound: Option<Rational>,
    /// Approximate over exact cost in `both` mode, cost over bound otherwise.
    pub ratio: Option<f64>,
    pub wall_ms: f64,
    /// `ok`, `invalid`, `limit` or the error message.
    pub status: String,
}

fn run_one(id: &str, inst: &GridInstance, mode: Mode, goal: Goal, opts: &ExactOptions) -> BenchRow {
    let t = Instant::now();
    let result = solve(inst, mode, goal, opts);
    let wall_ms = t.elapsed().as_secs_f64() * 1e3;
    let mut row = BenchRow { id: id.to_string(), pixels: inst.len(), mode, goal, cost: None, lp_bound: None, ratio: None, wall_ms, status: String::new() };
    match result {
        Ok(out) => {
            row.cost = Some(out.value());
            row.lp_bound = out.lower_bound();
            let ratio = match mode {
                Mode::Both => out.ratio(),
                _ => row.lp_bound.filter(|b| *b > Rational::from_integer(0)).map(|b| out.value() / b),
            };
            row.ratio = ratio.map(|r| crate::rational::to_f64(&r));
            row.status = if !out.validate(inst).is_valid() || !out.within_guarantee() { "invalid".into() } else { "ok".into() };
        }
        Err(e) if e.is_limit() => row.status = "limit".into(),
        Err(e) => row.status = e.to_string(),
    }
    row
}

/// Solves every instance in every mode, in parallel, and returns the rows
/// ordered by instance id and then by mode order.
pub fn run_bench(instances: &[(String, GridInstance)], modes: &[Mode], goal: Goal, opts: &ExactOptions) -> Result<Vec<BenchRow>, BenchError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = worker_limit()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let jobs: Vec<(usize, usize)> = (0..instances.len()).flat_map(|i| (0..modes.len()).map(move |m| (i, m))).collect();
    let mut rows: Vec<(usize, usize, BenchRow)> =
        pool.install(|| jobs.par_iter().map(|&(i, m)| (i, m, run_one(&instances[i].0, &instances[i].1, modes[m], goal, opts))).collect());
    rows.sort_by(|a, b| a.2.id.cmp(&b.2.id).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    Ok(rows.into_iter().map(|r| r.2).collect())
}

pub const CSV_HEADER: [&str; 9] = ["id", "pixels", "mode", "goal", "cost", "lp_bound", "ratio", "wall_ms", "status"];

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let opt = |r: &Option<Rational>| r.as_ref().map(format_rational).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.id.clone(),
            r.pixels.to_string(),
            r.mode.name().to_string(),
            r.goal.name().to_string(),
            opt(&r.cost),
            opt(&r.lp_bound),
            r.ratio.map(|x| format!("{x:.6}")).unwrap_or_default(),
            format!("{:.3}", r.wall_ms),
            r.status.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_instance, GenKind, GenParams};

    #[test]
    fn rows_sorted_and_written() {
        let instances: Vec<(String, GridInstance)> = [3u64, 1, 2]
            .iter()
            .map(|&s| (format!("poly-{s}"), gen_instance(GenKind::RandomPolyomino, &GenParams { pixels: 8, ..GenParams::default() }, s).unwrap()))
            .collect();
        let rows = run_bench(&instances, &[Mode::Approx, Mode::Both], Goal::Tour, &ExactOptions::default()).unwrap();
        let ids: Vec<&str> = rows.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["poly-1", "poly-1", "poly-2", "poly-2", "poly-3", "poly-3"]);
        assert!(rows.iter().all(|r| r.status == "ok"), "{rows:?}");
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("id,pixels,mode,goal,cost,lp_bound,ratio,wall_ms,status\npoly-1,"));
        assert_eq!(text.lines().count(), 7);
    }
}
