//! Linear programming: a bounded revised simplex in floating point whose
//! answers are certified in exact arithmetic, an exact rational simplex for
//! small programs, and the strip cover relaxation.

mod certify;
mod cover;
mod exact;
mod export;
mod simplex;

use num_rational::Ratio;
use thiserror::Error;

pub use cover::{build_cover_lp, solve_cover_lp, wrap_cover_solution, CoverLp, CoverLpSolution};
pub(crate) use cover::initial_columns;
pub use exact::solve_exact;
pub use export::write_lp_format;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
    pub name: String,
}

/// `min c x` subject to the constraints and `lower <= x <= upper`. All data
/// is integral; `None` bounds are infinite.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<i64>,
    pub lower: Vec<Option<i64>>,
    pub upper: Vec<Option<i64>>,
    pub names: Vec<String>,
    pub rows: Vec<Constraint>,
}

impl LinearProgram {
    pub fn add_var(&mut self, name: impl Into<String>, cost: i64, lower: Option<i64>, upper: Option<i64>) -> usize {
        self.objective.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.names.push(name.into());
        self.objective.len() - 1
    }

    pub fn add_row(&mut self, name: impl Into<String>, coeffs: Vec<(usize, i64)>, sense: Sense, rhs: i64) -> usize {
        self.rows.push(Constraint { coeffs, sense, rhs, name: name.into() });
        self.rows.len() - 1
    }

    pub fn var_count(&self) -> usize {
        self.objective.len()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Row bounds `(L, U)` for `L <= a x <= U`.
    pub fn row_bounds(&self, i: usize) -> (Option<i64>, Option<i64>) {
        let r = &self.rows[i];
        match r.sense {
            Sense::Eq => (Some(r.rhs), Some(r.rhs)),
            Sense::Le => (None, Some(r.rhs)),
            Sense::Ge => (Some(r.rhs), None),
        }
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(&c, &v)| c as f64 * v).sum()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex could not certify its answer")]
    NumericFailure,
    #[error("iteration limit reached")]
    IterationLimit,
    #[error("exact backend needs finite lower bounds")]
    Unsupported,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    /// Floating point simplex with an exact certificate.
    Certified,
    /// Rational arithmetic throughout.
    Exact,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Exact lower bound on the optimum (equal to it when `certified`).
    pub bound: Ratio<i128>,
    pub certified: bool,
    pub iterations: usize,
    pub backend: Backend,
    /// Basic variables (structural `j` or logical `n + i`) for warm starts.
    pub basis: Vec<usize>,
    /// Row multipliers of the final basis (empty for the exact backend).
    pub duals: Vec<f64>,
}

/// Programs with at most this many rows times columns fall back to the exact
/// backend when the floating point answer cannot be certified.
pub const EXACT_FALLBACK_LIMIT: usize = 40_000;

/// Solves with the certified backend, falling back to exact arithmetic when
/// certification fails on a small program.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    solve_warm(lp, None)
}

pub fn solve_warm(lp: &LinearProgram, basis: Option<&[usize]>) -> Result<LpSolution, LpError> {
    finish(lp, simplex::solve_float(lp, basis))
}

fn is_small(lp: &LinearProgram) -> bool {
    lp.row_count() * (lp.var_count() + lp.row_count()) <= EXACT_FALLBACK_LIMIT
}

/// Certifies a floating point answer against `lp`, falling back as described
/// on [`solve`].
fn finish(lp: &LinearProgram, raw: Result<simplex::RawSolution, LpError>) -> Result<LpSolution, LpError> {
    let small = is_small(lp);
    match raw {
        Ok(raw) => {
            let cert = certify::certify(lp, &raw.x, &raw.duals);
            let solution = |bound, certified| LpSolution {
                x: raw.x.clone(),
                objective: raw.objective,
                bound,
                certified,
                iterations: raw.iterations,
                backend: Backend::Certified,
                basis: raw.basis.clone(),
                duals: raw.duals.clone(),
            };
            if cert.certified {
                return Ok(solution(cert.bound.unwrap(), true));
            }
            if small {
                return solve_exact(lp);
            }
            match cert.bound {
                Some(b) if ratio_to_f64(&b) >= raw.objective - 1e-6 * (1.0 + raw.objective.abs()) => {
                    Ok(solution(b, false))
                }
                _ => Err(LpError::NumericFailure),
            }
        }
        Err(LpError::NumericFailure) | Err(LpError::IterationLimit) if small => solve_exact(lp),
        Err(e) => Err(e),
    }
}

/// Column generation: solves over `initial` columns (plus whatever the warm
/// basis mentions), prices every other column with the duals and adds the
/// most attractive ones until none improves. The answer is certified against
/// the full program.
pub fn solve_with_columns(lp: &LinearProgram, initial: &[usize], basis: Option<&[usize]>) -> Result<LpSolution, LpError> {
    let n = lp.var_count();
    let m = lp.row_count();
    if n <= 4 * m + 500 {
        return solve_warm(lp, basis);
    }
    let mut active = vec![false; n];
    for &j in initial {
        active[j] = true;
    }
    for j in 0..n {
        if lp.lower[j].is_some_and(|l| l > 0) || lp.upper[j].is_some_and(|u| u < 0) {
            active[j] = true;
        }
    }
    if let Some(b) = basis {
        for &j in b.iter().filter(|&&j| j < n) {
            active[j] = true;
        }
    }
    let mut cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (i, r) in lp.rows.iter().enumerate() {
        for &(j, a) in &r.coeffs {
            cols[j].push((i, a));
        }
    }
    // Basis in full indexing (structural j < n, logical n + i).
    let mut full_basis: Option<Vec<usize>> = basis.map(|b| b.to_vec());
    let mut iterations = 0;
    loop {
        let vars: Vec<usize> = (0..n).filter(|&j| active[j]).collect();
        let mut local = vec![usize::MAX; n];
        for (k, &j) in vars.iter().enumerate() {
            local[j] = k;
        }
        let mut sub = LinearProgram::default();
        for &j in &vars {
            sub.add_var(String::new(), lp.objective[j], lp.lower[j], lp.upper[j]);
        }
        for r in &lp.rows {
            let coeffs = r.coeffs.iter().filter(|(j, _)| active[*j]).map(|&(j, a)| (local[j], a)).collect();
            sub.add_row(String::new(), coeffs, r.sense, r.rhs);
        }
        let sub_basis: Option<Vec<usize>> = full_basis.as_ref().map(|b| {
            b.iter()
                .filter_map(|&j| if j < n { (local[j] != usize::MAX).then(|| local[j]) } else { Some(vars.len() + j - n) })
                .collect()
        });
        let raw = match simplex::solve_float(&sub, sub_basis.as_deref()) {
            Ok(raw) => raw,
            Err(LpError::Infeasible) => return solve_warm(lp, None),
            Err(e) => return finish(lp, Err(e)),
        };
        iterations += raw.iterations;
        let mut candidates: Vec<(f64, usize)> = Vec::new();
        for j in 0..n {
            if active[j] {
                continue;
            }
            let d = lp.objective[j] as f64 - cols[j].iter().map(|&(i, a)| raw.duals[i] * a as f64).sum::<f64>();
            let can_rise = lp.upper[j].is_none_or(|u| u > 0);
            let can_fall = lp.lower[j].is_none_or(|l| l < 0);
            if (d < -1e-9 && can_rise) || (d > 1e-9 && can_fall) {
                candidates.push((-d.abs(), j));
            }
        }
        full_basis = Some(raw.basis.iter().map(|&k| if k < vars.len() { vars[k] } else { n + k - vars.len() }).collect());
        if candidates.is_empty() {
            let mut x = vec![0.0; n];
            for (k, &j) in vars.iter().enumerate() {
                x[j] = raw.x[k];
            }
            let full = simplex::RawSolution {
                objective: lp.objective_value(&x),
                x,
                duals: raw.duals,
                iterations,
                basis: full_basis.unwrap(),
            };
            return finish(lp, Ok(full));
        }
        candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        for &(_, j) in candidates.iter().take((2 * m).max(200)) {
            active[j] = true;
        }
    }
}

pub fn ratio_to_f64(r: &Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Smallest integer not below `r`.
pub fn ratio_ceil(r: &Ratio<i128>) -> i128 {
    r.ceil().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn toy() -> LinearProgram {
        // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6, x,y >= 0 ; optimum at (8/5, 6/5) value -14/5
        let mut lp = LinearProgram::default();
        let x = lp.add_var("x", -1, Some(0), None);
        let y = lp.add_var("y", -1, Some(0), None);
        lp.add_row("a", vec![(x, 1), (y, 2)], Sense::Le, 4);
        lp.add_row("b", vec![(x, 3), (y, 1)], Sense::Le, 6);
        lp
    }

    #[test]
    fn solves_toy_exactly() {
        let s = solve(&toy()).unwrap();
        assert_eq!(s.bound, Ratio::new(-14, 5));
        assert!(s.certified);
        let e = solve_exact(&toy()).unwrap();
        assert_eq!(e.bound, Ratio::new(-14, 5));
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::default();
        let x = lp.add_var("x", 1, Some(0), Some(1));
        lp.add_row("r", vec![(x, 1)], Sense::Ge, 2);
        assert_eq!(solve(&lp).unwrap_err(), LpError::Infeasible);
        assert_eq!(solve_exact(&lp).unwrap_err(), LpError::Infeasible);
        let mut lp = LinearProgram::default();
        let x = lp.add_var("x", -1, Some(0), None);
        lp.add_row("r", vec![(x, 1)], Sense::Ge, 2);
        assert_eq!(solve(&lp).unwrap_err(), LpError::Unbounded);
        assert_eq!(solve_exact(&lp).unwrap_err(), LpError::Unbounded);
    }

    proptest::proptest! {
        #[test]
        fn float_agrees_with_exact(
            n in 1usize..6,
            m in 1usize..5,
            data in proptest::collection::vec(-3i64..4, 60),
            senses in proptest::collection::vec(0u8..3, 5),
        ) {
            let mut lp = LinearProgram::default();
            for j in 0..n {
                lp.add_var(format!("v{j}"), data[j] - 1, Some(0), Some(1 + (data[j + 6].rem_euclid(3))));
            }
            for i in 0..m {
                let coeffs = (0..n).map(|j| (j, data[12 + i * 6 + j])).collect();
                let sense = [Sense::Le, Sense::Ge, Sense::Eq][senses[i] as usize];
                lp.add_row(format!("r{i}"), coeffs, sense, data[50 + i]);
            }
            let exact = solve_exact(&lp);
            match simplex::solve_float(&lp, None) {
                Ok(raw) => {
                    let e = exact.expect("float found a solution the exact backend did not");
                    let cert = certify::certify(&lp, &raw.x, &raw.duals);
                    if let Some(b) = cert.bound {
                        proptest::prop_assert!(b <= e.bound);
                    }
                    if cert.certified {
                        proptest::prop_assert_eq!(cert.bound.unwrap(), e.bound);
                    }
                    proptest::prop_assert!((raw.objective - e.objective).abs() < 1e-6);
                }
                Err(err) => proptest::prop_assert_eq!(Err(err), exact.map(|_| ())),
            }
        }
    }
}
