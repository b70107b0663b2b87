//! Dense two-phase tableau simplex over exact rationals with Bland's rule.
//! Slow, but its answers need no certificate; used for small programs and as
//! an oracle in tests.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Backend, LinearProgram, LpError, LpSolution, Sense};

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    /// Objective row (reduced costs), with the negated objective value in the last slot.
    obj: Vec<BigRational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &p;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, pv) in self.obj.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule on the current objective row over columns `< allowed`.
    fn optimize(&mut self, allowed: usize) -> Result<(), LpError> {
        let rhs = self.width - 1;
        loop {
            let Some(c) = (0..allowed).find(|&c| self.obj[c].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(BigRational, usize)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[rhs] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((b, br)) => ratio < *b || (ratio == *b && self.basis[r] < self.basis[*br]),
                    };
                    if better {
                        best = Some((ratio, r));
                    }
                }
            }
            let Some((_, r)) = best else {
                return Err(LpError::Unbounded);
            };
            self.pivot(r, c);
        }
    }
}

fn big(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn solve_exact(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let n = lp.var_count();
    if lp.lower.iter().any(Option::is_none) {
        return Err(LpError::Unsupported);
    }
    let lower: Vec<i64> = lp.lower.iter().map(|l| l.unwrap()).collect();

    // Constraint rows over shifted variables: (coeffs, sense, rhs).
    let mut rows: Vec<(Vec<(usize, i64)>, Sense, i64)> = Vec::new();
    for r in &lp.rows {
        let shift: i64 = r.coeffs.iter().map(|&(j, a)| a * lower[j]).sum();
        rows.push((r.coeffs.clone(), r.sense, r.rhs - shift));
    }
    for j in 0..n {
        if let Some(u) = lp.upper[j] {
            if u < lower[j] {
                return Err(LpError::Infeasible);
            }
            rows.push((vec![(j, 1)], Sense::Le, u - lower[j]));
        }
    }
    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Sense::Eq).count();
    let art0 = n + n_slack;
    let width = art0 + m + 1;
    let rhs = width - 1;

    let mut t = Tableau { rows: Vec::with_capacity(m), obj: vec![BigRational::zero(); width], basis: vec![0; m], width };
    let mut slack_idx = n;
    for (i, (coeffs, sense, b)) in rows.iter().enumerate() {
        let mut row = vec![BigRational::zero(); width];
        for &(j, a) in coeffs {
            row[j] += big(a);
        }
        match sense {
            Sense::Le => {
                row[slack_idx] = BigRational::one();
                slack_idx += 1;
            }
            Sense::Ge => {
                row[slack_idx] = -BigRational::one();
                slack_idx += 1;
            }
            Sense::Eq => {}
        }
        row[rhs] = big(*b);
        if row[rhs].is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        row[art0 + i] = BigRational::one();
        t.basis[i] = art0 + i;
        t.rows.push(row);
    }

    // Phase one: minimize the sum of artificials.
    for row in &t.rows {
        for c in 0..width {
            if c < art0 || c == rhs {
                t.obj[c] -= &row[c];
            }
        }
    }
    t.optimize(art0).map_err(|_| LpError::NumericFailure)?;
    if t.obj[rhs].is_negative() {
        return Err(LpError::Infeasible);
    }
    // Drive remaining artificials out of the basis where possible.
    for r in 0..m {
        if t.basis[r] >= art0 {
            if let Some(c) = (0..art0).find(|&c| !t.rows[r][c].is_zero()) {
                t.pivot(r, c);
            }
        }
    }

    // Phase two.
    let mut obj = vec![BigRational::zero(); width];
    for j in 0..n {
        obj[j] = big(lp.objective[j]);
    }
    for (r, row) in t.rows.iter().enumerate() {
        let b = t.basis[r];
        if b < art0 && !obj[b].is_zero() {
            let f = obj[b].clone();
            for (v, rv) in obj.iter_mut().zip(row) {
                if !rv.is_zero() {
                    *v -= &f * rv;
                }
            }
        }
    }
    t.obj = obj;
    t.optimize(art0)?;

    let mut xs = vec![BigRational::zero(); n];
    for (r, row) in t.rows.iter().enumerate() {
        if t.basis[r] < n {
            xs[t.basis[r]] = row[rhs].clone();
        }
    }
    let mut value = BigRational::zero();
    let mut x = Vec::with_capacity(n);
    for j in 0..n {
        let v = &xs[j] + big(lower[j]);
        value += big(lp.objective[j]) * &v;
        x.push(v.to_f64().unwrap_or(f64::NAN));
    }
    let bound = Ratio::new(
        value.numer().to_i128().ok_or(LpError::NumericFailure)?,
        value.denom().to_i128().ok_or(LpError::NumericFailure)?,
    );
    Ok(LpSolution {
        objective: super::ratio_to_f64(&bound),
        x,
        bound,
        certified: true,
        iterations: 0,
        backend: Backend::Exact,
        basis: Vec::new(),
        duals: Vec::new(),
    })
}
