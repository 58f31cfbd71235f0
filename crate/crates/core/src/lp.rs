//! Small dense linear programs.
//!
//! Every hyperplane search in the crate ends up here. Problems are tiny
//! (at most [`MAX_DIM`] variables, a few hundred rows), so the solver is a
//! dense two-phase simplex with Bland's rule.
//!
//! Feasibility is decided with an explicit slack: the solver first minimizes
//! the largest constraint violation `t`, and a system counts as feasible when
//! `t <= eps_feas`. The returned witness is then optimized (if an objective is
//! given) without letting any violation grow beyond that level, and ties among
//! optimal points are broken towards the lexicographically smallest witness.

use crate::error::{Error, Result};
use crate::geometry::{Tolerance, Vector};

/// Largest number of variables accepted by [`solve`].
pub const MAX_DIM: usize = 16;

const PIVOT_EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub coeffs: Vector,
    pub rel: Relation,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn new(coeffs: Vector, rel: Relation, rhs: f64) -> Self {
        LinearConstraint { coeffs, rel, rhs }
    }

    pub fn le(coeffs: Vector, rhs: f64) -> Self {
        Self::new(coeffs, Relation::Le, rhs)
    }

    pub fn ge(coeffs: Vector, rhs: f64) -> Self {
        Self::new(coeffs, Relation::Ge, rhs)
    }

    pub fn eq(coeffs: Vector, rhs: f64) -> Self {
        Self::new(coeffs, Relation::Eq, rhs)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.dim()
    }

    /// Amount by which `x` violates the constraint (zero when satisfied).
    pub fn violation(&self, x: &Vector) -> f64 {
        let lhs = self.coeffs.dot(x);
        match self.rel {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }

    pub fn is_satisfied(&self, x: &Vector, tol: &Tolerance) -> bool {
        self.violation(x) <= tol.eps_feas
    }
}

/// Per-coordinate bounds; infinite ends are allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub lower: f64,
    pub upper: f64,
}

impl Bound {
    pub fn new(lower: f64, upper: f64) -> Self {
        Bound { lower, upper }
    }

    pub fn symmetric(radius: f64) -> Self {
        Bound::new(-radius, radius)
    }

    pub fn free() -> Self {
        Bound::new(f64::NEG_INFINITY, f64::INFINITY)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub dim: usize,
    pub constraints: Vec<LinearConstraint>,
    /// Maximized when present.
    pub objective: Option<Vector>,
    pub bounds: Option<Vec<Bound>>,
}

impl LpProblem {
    pub fn feasibility(dim: usize, constraints: Vec<LinearConstraint>) -> Self {
        LpProblem {
            dim,
            constraints,
            objective: None,
            bounds: None,
        }
    }

    pub fn maximize(mut self, objective: Vector) -> Self {
        self.objective = Some(objective);
        self
    }

    pub fn with_bounds(mut self, bounds: Vec<Bound>) -> Self {
        self.bounds = Some(bounds);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::ZeroDimension);
        }
        for (row, c) in self.constraints.iter().enumerate() {
            if c.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: c.dim(),
                });
            }
            if !c.rhs.is_finite() {
                return Err(Error::NonFiniteCoefficient { row });
            }
        }
        if let Some(obj) = &self.objective {
            obj.check_dim(self.dim)?;
        }
        if let Some(bounds) = &self.bounds {
            if bounds.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: bounds.len(),
                });
            }
            for b in bounds {
                if b.lower.is_nan() || b.upper.is_nan() {
                    return Err(Error::NonFiniteCoefficient {
                        row: self.constraints.len(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Bounds as explicit constraints (infinite ends dropped).
    fn bound_rows(&self) -> Vec<LinearConstraint> {
        let mut rows = Vec::new();
        if let Some(bounds) = &self.bounds {
            for (j, b) in bounds.iter().enumerate() {
                if b.lower.is_finite() {
                    rows.push(LinearConstraint::ge(Vector::unit(self.dim, j), b.lower));
                }
                if b.upper.is_finite() {
                    rows.push(LinearConstraint::le(Vector::unit(self.dim, j), b.upper));
                }
            }
        }
        rows
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Feasible,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Present iff `status` is `Feasible`.
    pub witness: Option<Vector>,
    pub objective_value: Option<f64>,
}

impl LpOutcome {
    fn infeasible() -> Self {
        LpOutcome {
            status: LpStatus::Infeasible,
            witness: None,
            objective_value: None,
        }
    }

    fn unbounded() -> Self {
        LpOutcome {
            status: LpStatus::Unbounded,
            witness: None,
            objective_value: None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.status == LpStatus::Feasible
    }
}

/// Solve a small LP. See the module docs for the feasibility semantics.
pub fn solve(problem: &LpProblem, tol: &Tolerance) -> Result<LpOutcome> {
    if problem.dim > MAX_DIM {
        return Err(Error::DimensionOverEnvelope {
            dim: problem.dim,
            max: MAX_DIM,
        });
    }
    solve_unchecked(problem, tol)
}

fn solve_unchecked(problem: &LpProblem, tol: &Tolerance) -> Result<LpOutcome> {
    problem.validate()?;
    let dim = problem.dim;
    let mut rows = problem.constraints.clone();
    rows.extend(problem.bound_rows());

    // Minimize the largest violation.
    let relaxed = RelaxedLp::new(dim, &rows);
    let (t_star, mut x) = match relaxed.min_violation() {
        Some(found) => found,
        None => return Ok(LpOutcome::infeasible()),
    };
    if t_star > tol.eps_feas {
        return Ok(LpOutcome::infeasible());
    }
    // The exact cap first; a hair of slack if rounding makes it infeasible.
    let caps = [
        t_star.max(0.0),
        (t_star.max(0.0) + tol.eps_zero).min(tol.eps_feas),
    ];

    if let Some(objective) = &problem.objective {
        for cap in caps {
            match relaxed.maximize(objective.coords(), cap, &[]) {
                Extremum::Unbounded => return Ok(LpOutcome::unbounded()),
                Extremum::Failed => continue,
                Extremum::Optimal(value, point) => {
                    x = lexicographic_refinement(&relaxed, objective, value, cap, point);
                    break;
                }
            }
        }
    }

    let witness = Vector::new(x)
        .map_err(|_| Error::Inconsistent("simplex produced a non-finite witness".to_string()))?;
    let worst = rows
        .iter()
        .map(|r| r.violation(&witness))
        .fold(0.0, f64::max);
    if worst > tol.eps_feas {
        return Ok(LpOutcome::infeasible());
    }
    let objective_value = problem.objective.as_ref().map(|o| o.dot(&witness));
    Ok(LpOutcome {
        status: LpStatus::Feasible,
        witness: Some(witness),
        objective_value,
    })
}

/// Among points within `tie` of the optimum, walk each coordinate down in
/// turn. Stops at the first coordinate that is unbounded below on that face.
fn lexicographic_refinement(
    relaxed: &RelaxedLp,
    objective: &Vector,
    optimum: f64,
    cap: f64,
    mut x: Vec<f64>,
) -> Vec<f64> {
    let dim = objective.dim();
    let mut extra = vec![LinearConstraint::ge(objective.clone(), optimum)];
    for j in 0..dim {
        let direction = Vector::unit(dim, j).scale(-1.0);
        let mut settled = false;
        // Exact ties first, then a relative allowance for rounding.
        for rel in [0.0, 1e-12] {
            let last = extra.len() - 1;
            let bound = extra[last].rhs;
            let loosened = if extra[last].rel == Relation::Ge {
                bound - rel * (1.0 + bound.abs())
            } else {
                bound + rel * (1.0 + bound.abs())
            };
            let mut attempt = extra.clone();
            attempt[last].rhs = loosened;
            match relaxed.maximize(direction.coords(), cap, &attempt) {
                Extremum::Optimal(neg_min, point) => {
                    x = point;
                    extra = attempt;
                    extra.push(LinearConstraint::le(Vector::unit(dim, j), -neg_min));
                    settled = true;
                    break;
                }
                Extremum::Unbounded => return x,
                Extremum::Failed => continue,
            }
        }
        if !settled {
            break;
        }
    }
    x
}

/// Finds `N != 0` with `<row, N> <= 0` for every row, or reports that only
/// `N = 0` works.
///
/// `N = 0` is excluded by pinning one coordinate: for each axis `i` and sign
/// `s` (scan order: `i` ascending, `+` before `-`) the subproblem fixes
/// `N_i = s`, boxes the other coordinates to `[-1, 1]`, and maximizes the
/// smallest slack `min_k -<row_k, N>`. The returned normal comes from the
/// subproblem with the largest slack (first in scan order among those within
/// `eps_feas` of it), so `||N||_inf = 1` exactly. `objective_value` carries
/// that slack.
pub fn homogeneous_nonzero_solve(rows: &[LinearConstraint], tol: &Tolerance) -> Result<LpOutcome> {
    let dim = rows.first().ok_or(Error::EmptySet)?.dim();
    homogeneous_nonzero_solve_in(dim, rows, tol)
}

/// Like [`homogeneous_nonzero_solve`] but with an explicit dimension, so an
/// empty row list is allowed.
pub fn homogeneous_nonzero_solve_in(
    dim: usize,
    rows: &[LinearConstraint],
    tol: &Tolerance,
) -> Result<LpOutcome> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if dim > MAX_DIM {
        return Err(Error::DimensionOverEnvelope { dim, max: MAX_DIM });
    }
    for (row, c) in rows.iter().enumerate() {
        c.coeffs.check_dim(dim)?;
        if c.rel != Relation::Le || c.rhs != 0.0 {
            return Err(Error::NotHomogeneous { row });
        }
    }

    let mut candidates: Vec<(f64, Vector)> = Vec::with_capacity(2 * dim);
    for axis in 0..dim {
        for sign in [1.0, -1.0] {
            if let Some(found) = pinned_subproblem(dim, rows, axis, sign, tol)? {
                candidates.push(found);
            }
        }
    }
    let best = candidates
        .iter()
        .map(|(s, _)| *s)
        .fold(f64::NEG_INFINITY, f64::max);
    match candidates
        .into_iter()
        .find(|(s, _)| *s >= best - tol.eps_feas)
    {
        Some((slack, normal)) => Ok(LpOutcome {
            status: LpStatus::Feasible,
            witness: Some(normal),
            objective_value: Some(slack),
        }),
        None => Ok(LpOutcome::infeasible()),
    }
}

/// Variables: the free coordinates of `N` (all but `axis`), then the slack.
fn pinned_subproblem(
    dim: usize,
    rows: &[LinearConstraint],
    axis: usize,
    sign: f64,
    tol: &Tolerance,
) -> Result<Option<(f64, Vector)>> {
    let nvars = dim; // (dim - 1) free coordinates + slack
    let slack = dim - 1;
    let mut constraints = Vec::with_capacity(rows.len());
    for r in rows {
        let mut coeffs = Vec::with_capacity(nvars);
        for (j, &c) in r.coeffs.coords().iter().enumerate() {
            if j != axis {
                coeffs.push(c);
            }
        }
        coeffs.push(1.0);
        constraints.push(LinearConstraint::le(
            Vector::new(coeffs)?,
            -sign * r.coeffs[axis],
        ));
    }
    let mut bounds = vec![Bound::symmetric(1.0); nvars];
    // Without any rows the slack would be unbounded.
    bounds[slack] = Bound::new(0.0, if rows.is_empty() { 1.0 } else { f64::INFINITY });
    let problem = LpProblem::feasibility(nvars, constraints)
        .maximize(Vector::unit(nvars, slack))
        .with_bounds(bounds);
    let outcome = solve_unchecked(&problem, tol)?;
    let Some(w) = outcome.witness else {
        return Ok(None);
    };
    let mut normal = Vec::with_capacity(dim);
    let mut free = w.coords()[..slack].iter();
    for j in 0..dim {
        if j == axis {
            normal.push(sign);
        } else {
            normal.push(*free.next().expect("one free coordinate per axis"));
        }
    }
    Ok(Some((w[slack], Vector::new(normal)?)))
}

// ---------------------------------------------------------------------------
// Violation-relaxed form
// ---------------------------------------------------------------------------

enum Extremum {
    Optimal(f64, Vec<f64>),
    Unbounded,
    Failed,
}

/// The constraint system with free variables split as `x = x+ - x-` and
/// every row loosened by a shared violation variable `t >= 0`.
struct RelaxedLp<'a> {
    dim: usize,
    rows: &'a [LinearConstraint],
}

impl<'a> RelaxedLp<'a> {
    fn new(dim: usize, rows: &'a [LinearConstraint]) -> Self {
        RelaxedLp { dim, rows }
    }

    fn nvars(&self) -> usize {
        2 * self.dim + 1
    }

    fn t_index(&self) -> usize {
        2 * self.dim
    }

    fn push_row(&self, out: &mut Vec<StdRow>, c: &LinearConstraint, relax: bool) {
        let d = self.dim;
        let mut coeffs = vec![0.0; self.nvars()];
        for (j, &a) in c.coeffs.coords().iter().enumerate() {
            coeffs[j] = a;
            coeffs[d + j] = -a;
        }
        let mut emit = |rel: Relation, t_coeff: f64| {
            let mut row = coeffs.clone();
            if relax {
                row[self.t_index()] = t_coeff;
            }
            out.push(StdRow {
                coeffs: row,
                rel,
                rhs: c.rhs,
            });
        };
        match c.rel {
            Relation::Le => emit(Relation::Le, -1.0),
            Relation::Ge => emit(Relation::Ge, 1.0),
            Relation::Eq => {
                emit(Relation::Le, -1.0);
                emit(Relation::Ge, 1.0);
            }
        }
    }

    fn std_rows(&self, extra: &[LinearConstraint], t_cap: Option<f64>) -> Vec<StdRow> {
        let mut out = Vec::with_capacity(self.rows.len() + extra.len() + 1);
        for c in self.rows {
            self.push_row(&mut out, c, true);
        }
        // Tie-breaking rows are bookkeeping, not part of the user's system.
        for c in extra {
            self.push_row(&mut out, c, false);
        }
        if let Some(cap) = t_cap {
            let mut coeffs = vec![0.0; self.nvars()];
            coeffs[self.t_index()] = 1.0;
            out.push(StdRow {
                coeffs,
                rel: Relation::Le,
                rhs: cap,
            });
        }
        out
    }

    fn recover(&self, y: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|j| y[j] - y[self.dim + j]).collect()
    }

    fn min_violation(&self) -> Option<(f64, Vec<f64>)> {
        let mut cost = vec![0.0; self.nvars()];
        cost[self.t_index()] = -1.0;
        match simplex(self.nvars(), &self.std_rows(&[], None), &cost) {
            CoreResult::Optimal(y) => Some((y[self.t_index()], self.recover(&y))),
            _ => None,
        }
    }

    fn maximize(&self, objective: &[f64], t_cap: f64, extra: &[LinearConstraint]) -> Extremum {
        let mut cost = vec![0.0; self.nvars()];
        for (j, &c) in objective.iter().enumerate() {
            cost[j] = c;
            cost[self.dim + j] = -c;
        }
        match simplex(self.nvars(), &self.std_rows(extra, Some(t_cap)), &cost) {
            CoreResult::Optimal(y) => {
                let x = self.recover(&y);
                let value = objective.iter().zip(&x).map(|(a, b)| a * b).sum();
                Extremum::Optimal(value, x)
            }
            CoreResult::Unbounded => Extremum::Unbounded,
            CoreResult::Infeasible => Extremum::Failed,
        }
    }
}

// ---------------------------------------------------------------------------
// Dense two-phase simplex over nonnegative variables
// ---------------------------------------------------------------------------

struct StdRow {
    coeffs: Vec<f64>,
    rel: Relation,
    rhs: f64,
}

enum CoreResult {
    Optimal(Vec<f64>),
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `m` rows of `ncols` coefficients followed by the right-hand side.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.rows[r][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize, reduced: &mut [f64]) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        let f = reduced[c];
        if f != 0.0 {
            for (v, pv) in reduced.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            reduced[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Reduced costs `c_j - c_B B^-1 A_j`; the last entry is minus the
    /// objective value.
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut reduced = vec![0.0; self.ncols + 1];
        reduced[..cost.len()].copy_from_slice(cost);
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost.get(b).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for (v, a) in reduced.iter_mut().zip(&self.rows[r]) {
                    *v -= cb * a;
                }
            }
        }
        reduced
    }

    /// Bland's rule iterations maximizing `cost` over the allowed columns.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Option<bool> {
        let mut reduced = self.reduced_costs(cost);
        for _ in 0..MAX_PIVOTS {
            let Some(enter) = (0..allowed).find(|&j| reduced[j] > PIVOT_EPS) else {
                return Some(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][enter];
                if a > PIVOT_EPS {
                    let ratio = self.rhs(r).max(0.0) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - 1e-13
                                || (ratio <= lratio + 1e-13 && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return Some(false),
                Some((r, _)) => self.pivot(r, enter, &mut reduced),
            }
        }
        None
    }
}

/// Maximize `cost . y` subject to `rows`, `y >= 0`.
fn simplex(nvars: usize, rows: &[StdRow], cost: &[f64]) -> CoreResult {
    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.rel != Relation::Eq).count();
    let mut needs_artificial = Vec::with_capacity(m);
    for r in rows {
        let flipped = r.rhs < 0.0;
        let rel = match (r.rel, flipped) {
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
            (rel, _) => rel,
        };
        needs_artificial.push(rel != Relation::Le);
    }
    let n_art = needs_artificial.iter().filter(|&&a| a).count();
    let ncols = nvars + n_slack + n_art;
    let art_start = nvars + n_slack;

    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        ncols,
    };
    let mut slack_col = nvars;
    let mut art_col = art_start;
    for r in rows {
        let sign = if r.rhs < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; ncols + 1];
        for (j, &a) in r.coeffs.iter().enumerate() {
            row[j] = sign * a;
        }
        row[ncols] = sign * r.rhs;
        let rel = match (r.rel, sign < 0.0) {
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
            (rel, _) => rel,
        };
        match rel {
            Relation::Le => {
                row[slack_col] = 1.0;
                tab.basis.push(slack_col);
                slack_col += 1;
            }
            Relation::Ge => {
                row[slack_col] = -1.0;
                slack_col += 1;
                row[art_col] = 1.0;
                tab.basis.push(art_col);
                art_col += 1;
            }
            Relation::Eq => {
                row[art_col] = 1.0;
                tab.basis.push(art_col);
                art_col += 1;
            }
        }
        tab.rows.push(row);
    }

    if n_art > 0 {
        let mut phase1 = vec![0.0; ncols];
        for c in phase1.iter_mut().skip(art_start) {
            *c = -1.0;
        }
        if tab.optimize(&phase1, ncols).is_none() {
            return CoreResult::Infeasible;
        }
        let scale = 1.0 + rows.iter().fold(0.0_f64, |m, r| m.max(r.rhs.abs()));
        let residual: f64 = (0..m)
            .filter(|&r| tab.basis[r] >= art_start)
            .map(|r| tab.rhs(r))
            .sum();
        if residual > 1e-9 * scale {
            return CoreResult::Infeasible;
        }
        // Drive remaining artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= art_start {
                let col = (0..art_start).find(|&j| tab.rows[r][j].abs() > 1e-9);
                match col {
                    Some(j) => {
                        let mut dummy = vec![0.0; ncols + 1];
                        tab.pivot(r, j, &mut dummy);
                        r += 1;
                    }
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }

    let mut phase2 = vec![0.0; ncols];
    phase2[..nvars].copy_from_slice(cost);
    match tab.optimize(&phase2, art_start) {
        None => CoreResult::Infeasible,
        Some(false) => CoreResult::Unbounded,
        Some(true) => {
            let mut y = vec![0.0; nvars];
            for (r, &b) in tab.basis.iter().enumerate() {
                if b < nvars {
                    y[b] = tab.rhs(r).max(0.0);
                }
            }
            CoreResult::Optimal(y)
        }
    }
}
