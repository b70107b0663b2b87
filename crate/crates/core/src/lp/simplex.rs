//! Bounded primal revised simplex with an explicit dense basis inverse.
//!
//! Rows are written as `A x - r = 0` with one logical variable `r_i` per row
//! carrying the row bounds, so the all-logical basis is always available.
//! Phase one minimizes the sum of bound violations of the basic variables.

use super::{LinearProgram, LpError};

const FEAS_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 250;
const DEGENERATE_SWITCH: usize = 60;

pub(crate) struct RawSolution {
    pub x: Vec<f64>,
    pub duals: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub basis: Vec<usize>,
}

struct Simplex {
    m: usize,
    n: usize,
    cols: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    lo: Vec<f64>,
    up: Vec<f64>,
    x: Vec<f64>,
    basis: Vec<usize>,
    /// Basis position of every variable, `usize::MAX` when nonbasic.
    pos: Vec<usize>,
    binv: Vec<f64>,
}

impl Simplex {
    fn new(lp: &LinearProgram) -> Self {
        let n = lp.var_count();
        let m = lp.row_count();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n + m];
        for (i, r) in lp.rows.iter().enumerate() {
            for &(j, a) in &r.coeffs {
                if a != 0 {
                    cols[j].push((i, a as f64));
                }
            }
        }
        for (i, col) in cols.iter_mut().skip(n).enumerate() {
            col.push((i, -1.0));
        }
        let inf = f64::INFINITY;
        let mut lo: Vec<f64> = lp.lower.iter().map(|b| b.map_or(-inf, |v| v as f64)).collect();
        let mut up: Vec<f64> = lp.upper.iter().map(|b| b.map_or(inf, |v| v as f64)).collect();
        for i in 0..m {
            let (l, u) = lp.row_bounds(i);
            lo.push(l.map_or(-inf, |v| v as f64));
            up.push(u.map_or(inf, |v| v as f64));
        }
        let mut cost: Vec<f64> = lp.objective.iter().map(|&c| c as f64).collect();
        cost.resize(n + m, 0.0);
        let x = (0..n + m)
            .map(|j| {
                if lo[j].is_finite() {
                    lo[j]
                } else if up[j].is_finite() {
                    up[j]
                } else {
                    0.0
                }
            })
            .collect();
        Simplex {
            m,
            n,
            cols,
            cost,
            lo,
            up,
            x,
            basis: (n..n + m).collect(),
            pos: (0..n).map(|_| usize::MAX).chain(0..m).collect(),
            binv: Vec::new(),
        }
    }

    fn set_basis(&mut self, basis: &[usize]) {
        let total = self.n + self.m;
        let mut seen = vec![false; total];
        let mut chosen: Vec<usize> = Vec::with_capacity(self.m);
        for &b in basis {
            if b < total && !seen[b] && chosen.len() < self.m {
                seen[b] = true;
                chosen.push(b);
            }
        }
        // Pad with logicals of rows not yet represented.
        for i in 0..self.m {
            if chosen.len() == self.m {
                break;
            }
            if !seen[self.n + i] {
                seen[self.n + i] = true;
                chosen.push(self.n + i);
            }
        }
        for p in self.pos.iter_mut() {
            *p = usize::MAX;
        }
        for (k, &b) in chosen.iter().enumerate() {
            self.pos[b] = k;
        }
        self.basis = chosen;
        for j in 0..total {
            if self.pos[j] == usize::MAX {
                self.x[j] = self.snap(j, self.x[j]);
            }
        }
    }

    /// Nonbasic value nearest to `v` that sits on a bound (or zero if free).
    fn snap(&self, j: usize, v: f64) -> f64 {
        let (l, u) = (self.lo[j], self.up[j]);
        if l.is_finite() && (!u.is_finite() || (v - l).abs() <= (u - v).abs()) {
            l
        } else if u.is_finite() {
            u
        } else {
            0.0
        }
    }

    /// Rebuilds the inverse from scratch, swapping dependent columns for
    /// logicals, then recomputes the basic values.
    fn refactor(&mut self) {
        let m = self.m;
        let w = 2 * m;
        let mut aug = vec![0.0; m * w];
        for k in 0..m {
            for &(i, a) in &self.cols[self.basis[k]] {
                aug[i * w + k] = a;
            }
            aug[k * w + m + k] = 1.0;
        }
        for k in 0..m {
            let mut piv = k;
            let mut best = aug[k * w + k].abs();
            for r in k + 1..m {
                let v = aug[r * w + k].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-11 {
                // Column k is dependent: replace it by the logical whose
                // transformed column has the largest entry in rows k.. .
                let mut pick = (0.0, usize::MAX, usize::MAX);
                for i in 0..m {
                    if self.pos[self.n + i] != usize::MAX {
                        continue;
                    }
                    for r in k..m {
                        let v = aug[r * w + m + i].abs();
                        if v > pick.0 {
                            pick = (v, i, r);
                        }
                    }
                }
                let (_, i, r) = pick;
                assert!(i != usize::MAX, "basis repair failed");
                let old = self.basis[k];
                self.pos[old] = usize::MAX;
                self.x[old] = self.snap(old, self.x[old]);
                self.basis[k] = self.n + i;
                self.pos[self.n + i] = k;
                for row in 0..m {
                    aug[row * w + k] = -aug[row * w + m + i];
                }
                piv = r;
            }
            if piv != k {
                for c in 0..w {
                    aug.swap(k * w + c, piv * w + c);
                }
            }
            let p = aug[k * w + k];
            for c in 0..w {
                aug[k * w + c] /= p;
            }
            for r in 0..m {
                if r == k {
                    continue;
                }
                let f = aug[r * w + k];
                if f != 0.0 {
                    for c in k..w {
                        aug[r * w + c] -= f * aug[k * w + c];
                    }
                }
            }
        }
        let mut binv = vec![0.0; m * m];
        for r in 0..m {
            binv[r * m..(r + 1) * m].copy_from_slice(&aug[r * w + m..(r + 1) * w]);
        }
        self.binv = binv;
        self.recompute_basics();
    }

    fn recompute_basics(&mut self) {
        let m = self.m;
        // B x_B = -N x_N
        let mut rhs = vec![0.0; m];
        for j in 0..self.n + self.m {
            if self.pos[j] == usize::MAX && self.x[j] != 0.0 {
                for &(i, a) in &self.cols[j] {
                    rhs[i] -= a * self.x[j];
                }
            }
        }
        for k in 0..m {
            let row = &self.binv[k * m..(k + 1) * m];
            let v: f64 = row.iter().zip(&rhs).map(|(a, b)| a * b).sum();
            self.x[self.basis[k]] = v;
        }
    }

    fn infeasibility(&self, j: usize) -> f64 {
        let v = self.x[j];
        if v < self.lo[j] - FEAS_TOL {
            self.lo[j] - v
        } else if v > self.up[j] + FEAS_TOL {
            v - self.up[j]
        } else {
            0.0
        }
    }

    fn phase_cost(&self, j: usize, phase1: bool) -> f64 {
        if !phase1 {
            return self.cost[j];
        }
        let v = self.x[j];
        if v < self.lo[j] - FEAS_TOL {
            -1.0
        } else if v > self.up[j] + FEAS_TOL {
            1.0
        } else {
            0.0
        }
    }

    fn duals(&self, phase1: bool) -> Vec<f64> {
        let m = self.m;
        let mut pi = vec![0.0; m];
        for k in 0..m {
            let c = self.phase_cost(self.basis[k], phase1);
            if c != 0.0 {
                let row = &self.binv[k * m..(k + 1) * m];
                for (p, &b) in pi.iter_mut().zip(row) {
                    *p += c * b;
                }
            }
        }
        pi
    }

    fn reduced_cost(&self, j: usize, pi: &[f64], phase1: bool) -> f64 {
        let c = if phase1 { 0.0 } else { self.cost[j] };
        c - self.cols[j].iter().map(|&(i, a)| pi[i] * a).sum::<f64>()
    }

    /// Direction (+1 / -1) in which nonbasic `j` may improve, if any.
    fn improving(&self, j: usize, d: f64) -> Option<f64> {
        let at_lo = self.lo[j].is_finite() && self.x[j] <= self.lo[j];
        let at_up = self.up[j].is_finite() && self.x[j] >= self.up[j];
        if d < -OPT_TOL && !at_up {
            Some(1.0)
        } else if d > OPT_TOL && !at_lo {
            Some(-1.0)
        } else {
            None
        }
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut alpha = vec![0.0; m];
        for &(i, a) in &self.cols[j] {
            for (k, al) in alpha.iter_mut().enumerate() {
                *al += self.binv[k * m + i] * a;
            }
        }
        alpha
    }

    fn pivot(&mut self, r: usize, alpha: &[f64]) {
        let m = self.m;
        let p = alpha[r];
        let (before, rest) = self.binv.split_at_mut(r * m);
        let (prow, after) = rest.split_at_mut(m);
        for v in prow.iter_mut() {
            *v /= p;
        }
        for (k, row) in before.chunks_mut(m).chain(after.chunks_mut(m)).enumerate() {
            let k = if k >= r { k + 1 } else { k };
            let f = alpha[k];
            if f != 0.0 {
                for (v, &pv) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * pv;
                }
            }
        }
    }

    fn run(&mut self, max_iter: usize) -> Result<usize, LpError> {
        let mut iterations = 0;
        let mut since_refactor = 0;
        let mut degenerate = 0;
        self.refactor();
        loop {
            if since_refactor >= REFACTOR_EVERY {
                self.refactor();
                since_refactor = 0;
            }
            let phase1 = self.basis.iter().any(|&j| self.infeasibility(j) > 0.0);
            let pi = self.duals(phase1);
            let bland = degenerate >= DEGENERATE_SWITCH;
            let mut enter: Option<(usize, f64, f64)> = None;
            for j in 0..self.n + self.m {
                if self.pos[j] != usize::MAX || self.lo[j] == self.up[j] {
                    continue;
                }
                let d = self.reduced_cost(j, &pi, phase1);
                if let Some(dir) = self.improving(j, d) {
                    if bland {
                        enter = Some((j, d, dir));
                        break;
                    }
                    if enter.is_none_or(|(_, bd, _)| d.abs() > bd.abs()) {
                        enter = Some((j, d, dir));
                    }
                }
            }
            let Some((q, _, dir)) = enter else {
                if phase1 {
                    // Refresh once before declaring infeasibility.
                    if since_refactor > 0 {
                        self.refactor();
                        since_refactor = 0;
                        continue;
                    }
                    return Err(LpError::Infeasible);
                }
                return Ok(iterations);
            };
            if iterations >= max_iter {
                return Err(LpError::IterationLimit);
            }
            iterations += 1;
            since_refactor += 1;

            let alpha = self.ftran(q);
            // Entering moves by dir * t; basic k moves by -dir * alpha_k * t.
            let mut t_best = self.up[q] - self.lo[q];
            let mut leave: Option<(usize, f64)> = None;
            let mut best_piv = 0.0;
            for k in 0..self.m {
                let a = alpha[k];
                if a.abs() < PIVOT_TOL {
                    continue;
                }
                let j = self.basis[k];
                let rate = -dir * a;
                let v = self.x[j];
                let limit = if rate < 0.0 {
                    if phase1 && v > self.up[j] + FEAS_TOL {
                        Some(self.up[j])
                    } else if phase1 && v < self.lo[j] - FEAS_TOL {
                        None
                    } else if self.lo[j].is_finite() {
                        Some(self.lo[j])
                    } else {
                        None
                    }
                } else if phase1 && v < self.lo[j] - FEAS_TOL {
                    Some(self.lo[j])
                } else if phase1 && v > self.up[j] + FEAS_TOL {
                    None
                } else if self.up[j].is_finite() {
                    Some(self.up[j])
                } else {
                    None
                };
                let Some(target) = limit else { continue };
                let t = ((target - v) / rate).max(0.0);
                let better = if bland {
                    t < t_best - 1e-12 || (t <= t_best + 1e-12 && leave.is_none_or(|(kk, _)| j < self.basis[kk]))
                } else {
                    t < t_best - 1e-12 || (t <= t_best + 1e-12 && a.abs() > best_piv)
                };
                if better {
                    t_best = t;
                    leave = Some((k, target));
                    best_piv = a.abs();
                }
            }
            if !t_best.is_finite() {
                if phase1 {
                    return Err(LpError::NumericFailure);
                }
                return Err(LpError::Unbounded);
            }
            if t_best <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            let t = t_best;
            self.x[q] += dir * t;
            for k in 0..self.m {
                if alpha[k] != 0.0 {
                    self.x[self.basis[k]] -= dir * alpha[k] * t;
                }
            }
            match leave {
                None => {
                    // Bound flip of the entering variable.
                    self.x[q] = if dir > 0.0 { self.up[q] } else { self.lo[q] };
                }
                Some((r, target)) => {
                    let out = self.basis[r];
                    self.x[out] = target;
                    self.pos[out] = usize::MAX;
                    self.basis[r] = q;
                    self.pos[q] = r;
                    self.pivot(r, &alpha);
                }
            }
        }
    }
}

pub(crate) fn solve_float(lp: &LinearProgram, basis: Option<&[usize]>) -> Result<RawSolution, LpError> {
    let mut s = Simplex::new(lp);
    if s.m == 0 {
        // Only bounds: every variable sits at its cheapest bound.
        for j in 0..s.n {
            let c = s.cost[j];
            s.x[j] = if c > 0.0 {
                s.lo[j]
            } else if c < 0.0 {
                s.up[j]
            } else {
                s.snap(j, 0.0)
            };
            if !s.x[j].is_finite() {
                return Err(LpError::Unbounded);
            }
        }
        let x = s.x[..s.n].to_vec();
        return Ok(RawSolution { objective: lp.objective_value(&x), x, duals: Vec::new(), iterations: 0, basis: Vec::new() });
    }
    if let Some(b) = basis {
        s.set_basis(b);
    }
    let max_iter = 200 * (s.m + s.n) + 10_000;
    let iterations = s.run(max_iter)?;
    s.refactor();
    let worst = (0..s.n + s.m).map(|j| s.infeasibility(j)).fold(0.0, f64::max);
    if worst > 1e-6 {
        return Err(LpError::NumericFailure);
    }
    let duals = s.duals(false);
    let x = s.x[..s.n].to_vec();
    Ok(RawSolution { objective: lp.objective_value(&x), x, duals, iterations, basis: s.basis.clone() })
}
