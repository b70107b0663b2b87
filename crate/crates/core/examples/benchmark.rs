//! Small benchmark sweep printed as CSV. Set TURNSOLVE_THREADS to cap the
//! worker pool.

use std::error::Error;

use turncover::bench::{run_bench, write_csv};
use turncover::exact::ExactOptions;
use turncover::generate::{gen_instance, GenKind, GenParams};
use turncover::grid::GridInstance;
use turncover::solve::{Goal, Mode};

fn main() -> Result<(), Box<dyn Error>> {
    let mut instances: Vec<(String, GridInstance)> = Vec::new();
    for (kind, name) in [(GenKind::Office, "office"), (GenKind::RandomPolyomino, "poly")] {
        for n in [12, 24] {
            for seed in 0..2 {
                let params = GenParams { pixels: n, tau: 2.into(), kappa: 1.into(), ..GenParams::default() };
                instances.push((format!("{name}-{n}-{seed}"), gen_instance(kind, &params, seed)?));
            }
        }
    }
    let rows = run_bench(&instances, &[Mode::Approx, Mode::Exact], Goal::Tour, &ExactOptions::default())?;
    write_csv(&rows, std::io::stdout().lock())?;
    Ok(())
}
