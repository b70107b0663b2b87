//! Exact certificates for floating point simplex answers.
//!
//! For any row multipliers `pi`, `c x = (c - pi A) x + pi (A x)`, so the sum of
//! the per-variable and per-row minima over their bounds is a lower bound on
//! the optimum. Rounding `pi` to nearby rationals keeps the bound valid; when
//! it meets the objective of an exactly feasible rounded primal, both are
//! optimal.

use num_integer::Integer;
use num_rational::Ratio;

use super::LinearProgram;
use crate::rational::rationalize;

const MAX_DENOM: i64 = 1_000_000;
const MAX_COMMON: i128 = 1_000_000_000_000;
const ROUND_TOL: f64 = 1e-7;

pub(crate) struct Certificate {
    pub bound: Option<Ratio<i128>>,
    pub certified: bool,
}

/// Integers `p` and a common denominator `d` with `p / d` close to `values`.
fn common_rationals(values: &[f64]) -> Option<(Vec<i128>, i128)> {
    let mut parts = Vec::with_capacity(values.len());
    let mut d: i128 = 1;
    for &v in values {
        let (p, q) = rationalize(v, MAX_DENOM, ROUND_TOL)?;
        d = d.lcm(&q);
        if d > MAX_COMMON {
            return None;
        }
        parts.push((p, q));
    }
    Some((parts.into_iter().map(|(p, q)| p * (d / q)).collect(), d))
}

fn min_over(coef: i128, lo: Option<i64>, up: Option<i64>) -> Option<i128> {
    if coef > 0 {
        lo.map(|l| coef * l as i128)
    } else if coef < 0 {
        up.map(|u| coef * u as i128)
    } else {
        Some(0)
    }
}

pub(crate) fn lower_bound(lp: &LinearProgram, duals: &[f64]) -> Option<Ratio<i128>> {
    let (mut p, d) = common_rationals(duals).unwrap_or_else(|| {
        let d = 1i128 << 20;
        (duals.iter().map(|&v| (v * d as f64).round() as i128).collect(), d)
    });
    for (i, pi) in p.iter_mut().enumerate() {
        match lp.row_bounds(i) {
            (None, Some(_)) => *pi = (*pi).min(0),
            (Some(_), None) => *pi = (*pi).max(0),
            (None, None) => *pi = 0,
            _ => {}
        }
    }
    let mut red: Vec<i128> = lp.objective.iter().map(|&c| c as i128 * d).collect();
    for (i, row) in lp.rows.iter().enumerate() {
        if p[i] != 0 {
            for &(j, a) in &row.coeffs {
                red[j] -= p[i] * a as i128;
            }
        }
    }
    let mut total: i128 = 0;
    for (j, &rc) in red.iter().enumerate() {
        total += min_over(rc, lp.lower[j], lp.upper[j])?;
    }
    for (i, &pi) in p.iter().enumerate() {
        let (l, u) = lp.row_bounds(i);
        total += min_over(pi, l, u)?;
    }
    Some(Ratio::new(total, d))
}

/// Exact objective of the rounded primal if it is exactly feasible.
pub(crate) fn exact_primal(lp: &LinearProgram, x: &[f64]) -> Option<Ratio<i128>> {
    let (q, d) = common_rationals(x)?;
    for (j, &v) in q.iter().enumerate() {
        if lp.lower[j].is_some_and(|l| v < l as i128 * d) || lp.upper[j].is_some_and(|u| v > u as i128 * d) {
            return None;
        }
    }
    for (i, row) in lp.rows.iter().enumerate() {
        let act: i128 = row.coeffs.iter().map(|&(j, a)| a as i128 * q[j]).sum();
        let (l, u) = lp.row_bounds(i);
        if l.is_some_and(|l| act < l as i128 * d) || u.is_some_and(|u| act > u as i128 * d) {
            return None;
        }
    }
    let obj: i128 = lp.objective.iter().zip(&q).map(|(&c, &v)| c as i128 * v).sum();
    Some(Ratio::new(obj, d))
}

pub(crate) fn certify(lp: &LinearProgram, x: &[f64], duals: &[f64]) -> Certificate {
    let bound = lower_bound(lp, duals);
    let primal = exact_primal(lp, x);
    let certified = matches!((&bound, &primal), (Some(b), Some(p)) if b == p);
    Certificate { bound, certified }
}
