//! Dense linear programming by two-phase tableau simplex with Bland's rule.
//!
//! Problems arrive as `min c.x` subject to `a.x <= b` / `a.x >= b` rows and
//! optional variable bounds, with free variables. Everything is rewritten as
//! `A x >= b`, each row scaled by a power of two near its largest coefficient
//! (so the scaling is exact), and the simplex
//! runs on the dual `max b.y  s.t.  A^T y = c, y >= 0`, which is already in
//! standard form and has one tableau row per variable instead of per
//! constraint. The primal point is recovered from the final basis with
//! refinement. Degenerate stalls are avoided by solving a slightly
//! perturbed right-hand side first and then restoring it with dual simplex
//! pivots.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Pivots between rebuilds of the tableau from the original data.
const REFACTOR_INTERVAL: usize = 50;
const PERTURBATION: f64 = 1e-7;
/// pivots per row allowed on the unperturbed problem before reperturbing
const STALL_BUDGET_PER_ROW: usize = 50;
const REPERTURB_ATTEMPTS: usize = 3;
/// Largest scaled constraint violation accepted from an optimal basis.
const MAX_VIOLATION: f64 = 1e-7;
/// Pivots allowed in the final pass at the absolute tolerance, per tableau row.
const POLISH_BUDGET_PER_ROW: usize = 20;
/// Phase one residual below which phase two is attempted.
const PHASE_ONE_SLACK: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coefficients: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    /// minimized
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    /// (lower, upper) per variable; missing entries mean free
    pub bounds: Vec<(Option<f64>, Option<f64>)>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        LinearProgram { objective, constraints: Vec::new(), bounds: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coefficients: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint { coefficients, relation, rhs });
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<f64>, upper: Option<f64>) {
        if self.bounds.len() <= var {
            self.bounds.resize(self.num_vars().max(var + 1), (None, None));
        }
        self.bounds[var] = (lower, upper);
    }

    fn validate(&self) -> Result<()> {
        let k = self.num_vars();
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !finite(&self.objective) {
            return Err(Error::InvalidArgument("non-finite objective coefficient".into()));
        }
        for (r, c) in self.constraints.iter().enumerate() {
            if c.coefficients.len() != k {
                return Err(Error::SizeMismatch { left: c.coefficients.len(), right: k });
            }
            if !finite(&c.coefficients) || !c.rhs.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite value in constraint {r}")));
            }
        }
        if self.bounds.len() > k {
            return Err(Error::SizeMismatch { left: self.bounds.len(), right: k });
        }
        for &(lo, hi) in &self.bounds {
            if lo.is_some_and(|x| !x.is_finite()) || hi.is_some_and(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument("non-finite bound".into()));
            }
        }
        Ok(())
    }

    /// Largest amount by which `x` violates a constraint or bound, each row
    /// measured after dividing by its largest coefficient.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for c in &self.constraints {
            let scale = c.coefficients.iter().fold(0.0f64, |m, a| m.max(a.abs()));
            let scale = if scale > 0.0 { scale } else { 1.0 };
            let lhs: f64 = c.coefficients.iter().zip(x).map(|(a, v)| a * v).sum();
            let gap = match c.relation {
                Relation::Ge => c.rhs - lhs,
                Relation::Le => lhs - c.rhs,
            };
            worst = worst.max(gap / scale);
        }
        for (&(lo, hi), &v) in self.bounds.iter().zip(x) {
            if let Some(lo) = lo {
                worst = worst.max(lo - v);
            }
            if let Some(hi) = hi {
                worst = worst.max(v - hi);
            }
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    /// primal point; empty unless optimal
    pub values: Vec<f64>,
    pub objective_value: f64,
    pub max_violation: f64,
    /// one multiplier per constraint: >= 0 on `>=` rows, <= 0 on `<=` rows
    pub duals: Vec<f64>,
    pub pivots: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub max_pivots: usize,
    pub tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { max_pivots: 1_000_000, tolerance: 1e-9 }
    }
}

pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    solve_lp_with(lp, &SolverOptions::default())
}

/// A row of the normalized system `a.x >= b`.
struct Row {
    a: Vec<f64>,
    b: f64,
    /// original constraint and the factor mapping its multiplier back
    origin: Option<(usize, f64)>,
}

pub fn solve_lp_with(lp: &LinearProgram, options: &SolverOptions) -> Result<LpSolution> {
    lp.validate()?;
    let k = lp.num_vars();
    let tol = options.tolerance;

    let mut rows: Vec<(Vec<f64>, f64, Option<(usize, f64)>)> = Vec::new();
    for (idx, c) in lp.constraints.iter().enumerate() {
        let sign = match c.relation {
            Relation::Ge => 1.0,
            Relation::Le => -1.0,
        };
        rows.push((c.coefficients.iter().map(|a| sign * a).collect(), sign * c.rhs, Some((idx, sign))));
    }
    for (j, &(lo, hi)) in lp.bounds.iter().enumerate() {
        let unit = |s: f64| {
            let mut a = vec![0.0; k];
            a[j] = s;
            a
        };
        if let Some(lo) = lo {
            rows.push((unit(1.0), lo, None));
        }
        if let Some(hi) = hi {
            rows.push((unit(-1.0), -hi, None));
        }
    }

    let mut scaled = Vec::with_capacity(rows.len());
    for (a, b, origin) in rows {
        let largest = a.iter().fold(0.0f64, |m: f64, x: &f64| m.max(x.abs()));
        if largest == 0.0 {
            if b > tol {
                return Ok(failure(LpStatus::Infeasible, lp, 0));
            }
            continue;
        }
        let scale = largest.log2().round().exp2();
        scaled.push(Row {
            a: a.iter().map(|x| x / scale).collect(),
            b: b / scale,
            origin: origin.map(|(idx, sign)| (idx, sign / scale)),
        });
    }

    let mut pivots = 0usize;
    let mut tab = Tableau::new(&scaled, &lp.objective, tol, true);
    match tab.phase_one(options, &mut pivots) {
        PhaseOutcome::IterationLimit => return Ok(failure(LpStatus::IterationLimit, lp, pivots)),
        PhaseOutcome::Done | PhaseOutcome::Stalled => {}
        PhaseOutcome::Unbounded => {
            // impossible in exact arithmetic: the phase one objective is >= 0
            return Err(Error::Solver(format!("numerical breakdown in phase one after {pivots} pivots")));
        }
    }
    // the perturbation and the ratio-test shifts can leave a small residual
    // here; the strict test is repeated once the true right-hand side is back
    if tab.phase_one_value() > PHASE_ONE_SLACK * tab.rhs_scale {
        return classify_without_multipliers(&scaled, lp, options, pivots);
    }
    match tab.phase_two(options, &mut pivots) {
        PhaseOutcome::Unbounded => return Ok(failure(LpStatus::Infeasible, lp, pivots)),
        PhaseOutcome::IterationLimit => return Ok(failure(LpStatus::IterationLimit, lp, pivots)),
        PhaseOutcome::Done | PhaseOutcome::Stalled => {}
    }
    let target: Vec<f64> = lp.objective.iter().zip(&tab.signs).map(|(c, s)| c * s).collect();
    match tab.restore_rhs(&target, options, &mut pivots) {
        PhaseOutcome::Unbounded => return classify_without_multipliers(&scaled, lp, options, pivots),
        PhaseOutcome::IterationLimit => return Ok(failure(LpStatus::IterationLimit, lp, pivots)),
        PhaseOutcome::Done | PhaseOutcome::Stalled => {}
    }
    if tab.phase_one_value() > tol * 100.0 * tab.rhs_scale {
        return classify_without_multipliers(&scaled, lp, options, pivots);
    }

    let values = tab.primal_point();
    let multipliers = tab.dual_point();
    let mut duals = vec![0.0; lp.constraints.len()];
    for (row, y) in scaled.iter().zip(&multipliers) {
        if let Some((idx, factor)) = row.origin {
            duals[idx] += factor * y;
        }
    }
    let objective_value = lp.objective.iter().zip(&values).map(|(c, x)| c * x).sum();
    let max_violation = lp.max_violation(&values);
    if max_violation > MAX_VIOLATION {
        return Err(Error::Solver(format!(
            "final basis violates a constraint by {max_violation:e} after {pivots} pivots"
        )));
    }
    Ok(LpSolution { status: LpStatus::Optimal, max_violation, values, objective_value, duals, pivots })
}

/// No multipliers reproduce c, so the primal is infeasible or unbounded; it
/// is feasible exactly when the homogeneous dual is bounded.
fn classify_without_multipliers(
    scaled: &[Row],
    lp: &LinearProgram,
    options: &SolverOptions,
    mut pivots: usize,
) -> Result<LpSolution> {
    let zero = vec![0.0; lp.num_vars()];
    // perturbing keeps the probe feasible (y = eta) without changing its
    // recession directions, and avoids a fully degenerate start
    let mut probe = Tableau::new(scaled, &zero, options.tolerance, true);
    if let PhaseOutcome::IterationLimit = probe.phase_one(options, &mut pivots) {
        return Ok(failure(LpStatus::IterationLimit, lp, pivots));
    }
    let status = match probe.phase_two(options, &mut pivots) {
        PhaseOutcome::Unbounded => LpStatus::Infeasible,
        PhaseOutcome::Done | PhaseOutcome::Stalled => LpStatus::Unbounded,
        PhaseOutcome::IterationLimit => LpStatus::IterationLimit,
    };
    Ok(failure(status, lp, pivots))
}

fn failure(status: LpStatus, lp: &LinearProgram, pivots: usize) -> LpSolution {
    LpSolution {
        status,
        values: Vec::new(),
        objective_value: f64::NAN,
        max_violation: f64::NAN,
        duals: vec![0.0; lp.constraints.len()],
        pivots,
    }
}

/// Dot product accumulated in double-double precision.
fn compensated_dot(terms: impl Iterator<Item = (f64, f64)>) -> f64 {
    let (mut hi, mut lo) = (0.0f64, 0.0f64);
    for (a, b) in terms {
        let p = a * b;
        let p_err = a.mul_add(b, -p);
        let s = hi + p;
        let z = s - hi;
        let s_err = (hi - (s - z)) + (p - z);
        hi = s;
        lo += s_err + p_err;
    }
    hi + lo
}

enum PhaseOutcome {
    Done,
    /// the pivot budget ran out before optimality was reached
    Stalled,
    Unbounded,
    IterationLimit,
}

/// Tableau for `min -b.y  s.t.  s_r (A^T y)_r + art_r = s_r c_r`, one row per
/// primal variable r, with s_r chosen so the right-hand side is nonnegative.
struct Tableau {
    /// number of structural columns (normalized rows of the primal)
    cols: usize,
    /// number of tableau rows (primal variables)
    m: usize,
    width: usize,
    data: Vec<f64>,
    /// the starting tableau, kept for refactoring
    orig: Vec<f64>,
    /// reduced costs over all columns, plus minus the objective value in the last slot
    cost_row: Vec<f64>,
    basis: Vec<usize>,
    signs: Vec<f64>,
    b: Vec<f64>,
    tol: f64,
    rhs_scale: f64,
    /// largest phase two cost, for the reduced cost threshold
    cost_scale: f64,
}

impl Tableau {
    /// With `perturb`, the right-hand side is moved by a small generic amount
    /// so bases are rarely degenerate; `restore_rhs` undoes it.
    fn new(rows: &[Row], c: &[f64], tol: f64, perturb: bool) -> Self {
        let cols = rows.len();
        let m = c.len();
        let width = cols + m + 1;
        let rhs_scale = c.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
        // with `perturb`, shift by A^T eta for a small positive eta, so the
        // perturbed system stays feasible whenever the original one is
        let eta: Vec<f64> = (0..cols)
            .map(|j| PERTURBATION * rhs_scale * (1.0 + (j + 1) as f64 / (cols + 1) as f64))
            .collect();
        let mut data = vec![0.0; m * width];
        let mut signs = vec![1.0; m];
        for r in 0..m {
            let shift: f64 =
                if perturb { rows.iter().zip(&eta).map(|(row, e)| row.a[r] * e).sum() } else { 0.0 };
            let rhs = c[r] + shift;
            let s = if rhs < 0.0 { -1.0 } else { 1.0 };
            signs[r] = s;
            let line = &mut data[r * width..(r + 1) * width];
            for (j, row) in rows.iter().enumerate() {
                line[j] = s * row.a[r];
            }
            line[cols + r] = 1.0;
            line[width - 1] = s * rhs;
        }
        Tableau {
            cols,
            m,
            width,
            orig: data.clone(),
            data,
            cost_row: vec![0.0; width],
            basis: (cols..cols + m).collect(),
            signs,
            b: rows.iter().map(|row| row.b).collect(),
            tol,
            rhs_scale,
            cost_scale: rows.iter().fold(1.0f64, |acc, row| acc.max(row.b.abs())),
        }
    }

    #[inline]
    fn at(&self, r: usize, j: usize) -> f64 {
        self.data[r * self.width + j]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    fn cost(&self, phase_one: bool, j: usize) -> f64 {
        match (phase_one, j < self.cols) {
            (true, true) => 0.0,
            (true, false) => 1.0,
            (false, true) => -self.b[j],
            (false, false) => 0.0,
        }
    }

    fn price(&mut self, phase_one: bool) {
        for j in 0..self.width {
            let base = if j == self.width - 1 { 0.0 } else { self.cost(phase_one, j) };
            let mut v = base;
            for r in 0..self.m {
                v -= self.cost(phase_one, self.basis[r]) * self.at(r, j);
            }
            self.cost_row[j] = v;
        }
    }

    fn phase_one_value(&self) -> f64 {
        (0..self.m).filter(|&r| self.basis[r] >= self.cols).map(|r| self.rhs(r)).sum()
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let inv = 1.0 / self.at(pr, pc);
        for v in &mut self.data[pr * w..(pr + 1) * w] {
            *v *= inv;
        }
        self.data[pr * w + pc] = 1.0;
        let (before, rest) = self.data.split_at_mut(pr * w);
        let (prow, after) = rest.split_at_mut(w);
        for line in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let f = line[pc];
            if f != 0.0 {
                for (v, p) in line.iter_mut().zip(prow.iter()) {
                    *v -= f * p;
                }
                line[pc] = 0.0;
            }
        }
        let f = self.cost_row[pc];
        if f != 0.0 {
            for (v, p) in self.cost_row.iter_mut().zip(prow.iter()) {
                *v -= f * p;
            }
            self.cost_row[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Raises the basic value in row `r` to zero.
    fn shift_rhs(&mut self, r: usize) {
        let w = self.width;
        let delta = -self.rhs(r);
        let col = self.basis[r];
        for q in 0..self.m {
            let v = self.orig[q * w + col];
            self.orig[q * w + w - 1] += delta * v;
        }
        self.data[r * w + w - 1] = 0.0;
    }

    /// Rebuilds the tableau as B^-1 times the starting tableau for the
    /// current basis, discarding accumulated round-off.
    fn refactor(&mut self, phase_one: bool) {
        let m = self.m;
        let w = self.width;
        let basis = DenseMatrix::from_fn(m, m, |r, c| self.orig[r * w + self.basis[c]]);
        let Some(inv) = basis.inverse(1e-13) else {
            return;
        };
        let mut data = vec![0.0; m * w];
        for r in 0..m {
            let out = &mut data[r * w..(r + 1) * w];
            for (k, &f) in inv.row(r).iter().enumerate() {
                if f != 0.0 {
                    for (v, o) in out.iter_mut().zip(&self.orig[k * w..(k + 1) * w]) {
                        *v += f * o;
                    }
                }
            }
        }
        for (r, &j) in self.basis.iter().enumerate() {
            for q in 0..m {
                data[q * w + j] = if q == r { 1.0 } else { 0.0 };
            }
        }
        self.data = data;
        self.price(phase_one);
    }

    /// Leaving row for entering column `pc`: the largest pivot among rows
    /// whose ratio is within a small feasibility slack of the minimum, ties to
    /// the smallest basic index.
    fn ratio_test(&self, pc: usize) -> Option<usize> {
        let slack = self.tol * self.rhs_scale;
        let mut bound = f64::INFINITY;
        for r in 0..self.m {
            let a = self.at(r, pc);
            if a > self.tol {
                bound = bound.min((self.rhs(r) + slack) / a);
            }
        }
        if bound == f64::INFINITY {
            return None;
        }
        let bound = bound.max(0.0);
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.m {
            let a = self.at(r, pc);
            if a <= self.tol || self.rhs(r) / a > bound {
                continue;
            }
            best = match best {
                Some((br, ba)) if a < ba || (a == ba && self.basis[br] < self.basis[r]) => Some((br, ba)),
                _ => Some((r, a)),
            };
        }
        best.map(|(r, _)| r)
    }

    /// Phase two entering threshold, relative to the costs so that round-off
    /// in large costs cannot drive pivoting.
    fn coarse_threshold(&self) -> f64 {
        self.tol * self.cost_scale
    }

    /// Bland's rule over structural columns: the first column with reduced
    /// cost below `-threshold` enters. Phase one is bounded, so there a column
    /// without a pivot row only reflects round-off and is passed over. After
    /// `budget` pivots it reports a stall.
    fn iterate(
        &mut self,
        phase_one: bool,
        threshold: f64,
        budget: usize,
        options: &SolverOptions,
        pivots: &mut usize,
    ) -> PhaseOutcome {
        let mut since_refactor = 0usize;
        let mut final_checks = 0usize;
        let mut taken = 0usize;
        loop {
            if since_refactor >= REFACTOR_INTERVAL {
                self.refactor(phase_one);
                since_refactor = 0;
            }
            let mut choice = None;
            for pc in (0..self.cols).filter(|&j| self.cost_row[j] < -threshold) {
                match self.ratio_test(pc) {
                    Some(pr) => {
                        choice = Some((pr, pc));
                        break;
                    }
                    None if phase_one => continue,
                    None if since_refactor > 0 => break,
                    None => return PhaseOutcome::Unbounded,
                }
            }
            let Some((pr, pc)) = choice else {
                // confirm on a freshly factored tableau before stopping or
                // declaring a ray
                if since_refactor == 0 || final_checks >= 3 {
                    return PhaseOutcome::Done;
                }
                final_checks += 1;
                since_refactor = REFACTOR_INTERVAL;
                continue;
            };
            if *pivots >= options.max_pivots {
                return PhaseOutcome::IterationLimit;
            }
            if taken >= budget {
                return PhaseOutcome::Stalled;
            }
            taken += 1;
            if self.rhs(pr) < 0.0 {
                // a slightly infeasible leaving row takes a zero step; the
                // shift is carried into the original data so refactoring keeps
                // it, and restoring the right-hand side removes it
                self.shift_rhs(pr);
            }
            self.pivot(pr, pc);
            *pivots += 1;
            since_refactor += 1;
        }
    }

    fn phase_one(&mut self, options: &SolverOptions, pivots: &mut usize) -> PhaseOutcome {
        self.price(true);
        self.iterate(true, self.tol, usize::MAX, options, pivots)
    }

    fn phase_two(&mut self, options: &SolverOptions, pivots: &mut usize) -> PhaseOutcome {
        // move zero-level artificials out of the basis where a structural
        // column can replace them; rows where none can are redundant
        for r in 0..self.m {
            if self.basis[r] < self.cols {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.cols {
                let a = self.at(r, j).abs();
                if a > self.tol && best.is_none_or(|(_, v)| a > v) {
                    best = Some((j, a));
                }
            }
            if let Some((j, _)) = best {
                self.pivot(r, j);
            }
        }
        self.price(false);
        self.iterate(false, self.coarse_threshold(), usize::MAX, options, pivots)
    }

    /// Replaces the right-hand side by `target` (already sign-adjusted) and
    /// repairs any negative basic values with dual simplex pivots, which keep
    /// the reduced costs nonnegative. A final primal pass confirms optimality.
    /// Without the perturbation that pass can stall on degenerate vertices;
    /// then the problem is perturbed afresh, reoptimized and restored again.
    fn restore_rhs(&mut self, target: &[f64], options: &SolverOptions, pivots: &mut usize) -> PhaseOutcome {
        for attempt in 1..=REPERTURB_ATTEMPTS + 1 {
            match self.dual_repair(target, options, pivots) {
                PhaseOutcome::Done => {}
                other => return other,
            }
            let budget = STALL_BUDGET_PER_ROW * self.m;
            match self.iterate(false, self.coarse_threshold(), budget, options, pivots) {
                PhaseOutcome::Done => break,
                PhaseOutcome::Stalled if attempt <= REPERTURB_ATTEMPTS => {}
                PhaseOutcome::Stalled => break,
                other => return other,
            }
            let shifted = self.perturbed(target, attempt);
            match self.dual_repair(&shifted, options, pivots) {
                PhaseOutcome::Done => {}
                other => return other,
            }
            match self.iterate(false, self.coarse_threshold(), usize::MAX, options, pivots) {
                PhaseOutcome::Done | PhaseOutcome::Stalled => {}
                other => return other,
            }
        }
        // polish at the absolute tolerance; round-off may make this cycle, so
        // it gets a small budget and any remaining error shows up in the
        // final feasibility check
        match self.iterate(false, self.tol, POLISH_BUDGET_PER_ROW * self.m, options, pivots) {
            PhaseOutcome::Stalled => PhaseOutcome::Done,
            other => other,
        }
    }

    /// `target` plus A^T eta for a positive eta that differs per attempt.
    fn perturbed(&self, target: &[f64], attempt: usize) -> Vec<f64> {
        let w = self.width;
        let eta: Vec<f64> = (0..self.cols)
            .map(|j| {
                let spread = ((j + 1) as f64 * 0.618_033_988_749_895 * attempt as f64).fract();
                PERTURBATION * self.rhs_scale * (1.0 + spread)
            })
            .collect();
        (0..self.m)
            .map(|r| {
                let row = &self.orig[r * w..r * w + self.cols];
                target[r] + row.iter().zip(&eta).map(|(a, e)| a * e).sum::<f64>()
            })
            .collect()
    }

    /// Sets the right-hand side and runs dual simplex until every basic
    /// value is nonnegative.
    fn dual_repair(&mut self, target: &[f64], options: &SolverOptions, pivots: &mut usize) -> PhaseOutcome {
        let w = self.width;
        for (r, &t) in target.iter().enumerate() {
            self.orig[r * w + w - 1] = t;
        }
        self.refactor(false);
        let floor = -self.tol * self.rhs_scale;
        let mut since_refactor = 0usize;
        loop {
            if since_refactor >= REFACTOR_INTERVAL {
                self.refactor(false);
                since_refactor = 0;
            }
            let leaving = (0..self.m)
                .filter(|&r| self.rhs(r) < floor)
                .min_by(|&a, &b| self.rhs(a).total_cmp(&self.rhs(b)));
            let Some(pr) = leaving else {
                if since_refactor == 0 {
                    return PhaseOutcome::Done;
                }
                since_refactor = REFACTOR_INTERVAL;
                continue;
            };
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.cols {
                let a = self.at(pr, j);
                if a >= -self.tol {
                    continue;
                }
                let ratio = self.cost_row[j].max(0.0) / -a;
                if best.is_none_or(|(_, v)| ratio < v) {
                    best = Some((j, ratio));
                }
            }
            let Some((pc, _)) = best else {
                return PhaseOutcome::Unbounded;
            };
            if *pivots >= options.max_pivots {
                return PhaseOutcome::IterationLimit;
            }
            self.pivot(pr, pc);
            *pivots += 1;
            since_refactor += 1;
        }
    }

    /// x_r = -s_r pi_r where B^T pi = cost_B for the final basis B, solved
    /// with a few rounds of refinement using compensated residuals. Falls back
    /// to the reduced costs of the artificial columns if B is singular.
    fn primal_point(&self) -> Vec<f64> {
        let m = self.m;
        let w = self.width;
        let from_costs =
            || -> Vec<f64> { (0..m).map(|r| self.signs[r] * self.cost_row[self.cols + r]).collect() };
        let basis = DenseMatrix::from_fn(m, m, |r, c| self.orig[r * w + self.basis[c]]);
        let Some(inv) = basis.inverse(1e-13) else {
            return from_costs();
        };
        let target: Vec<f64> = self.basis.iter().map(|&j| self.cost(false, j)).collect();
        let mut pi = vec![0.0; m];
        let mut residual = target.clone();
        for _ in 0..4 {
            for (r, p) in pi.iter_mut().enumerate() {
                *p += (0..m).map(|c| inv[(c, r)] * residual[c]).sum::<f64>();
            }
            for (c, res) in residual.iter_mut().enumerate() {
                let terms = (0..m).map(|r| (-basis[(r, c)], pi[r]));
                *res = compensated_dot(std::iter::once((target[c], 1.0)).chain(terms));
            }
        }
        (0..m).map(|r| -self.signs[r] * pi[r]).collect()
    }

    fn dual_point(&self) -> Vec<f64> {
        let mut y = vec![0.0; self.cols];
        for r in 0..self.m {
            if self.basis[r] < self.cols {
                y[self.basis[r]] = self.rhs(r).max(0.0);
            }
        }
        y
    }
}
