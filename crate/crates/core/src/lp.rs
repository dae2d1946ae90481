//! Dense linear programming over exact rationals.
//!
//! `min c·x  s.t.  rows (≥, ≤, =),  lower ≤ x ≤ upper` (bounds may be
//! infinite). The solver is a bounded-variable tableau simplex with Bland's
//! rule. [`SimplexSession`] keeps the final tableau so that appended rows are
//! handled by a warm dual simplex instead of a cold start.
//!
//! Every optimal solve is checked for strong duality: the row multipliers are
//! plugged into the Lagrangian dual function, computed from the original
//! problem data, and the result must equal the primal objective exactly. The
//! outcome of every check is tallied in [`duality_stats`].

use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpRow {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl LpRow {
    pub fn new(coeffs: Vec<Rational>, sense: Sense, rhs: Rational) -> Self {
        LpRow { coeffs, sense, rhs }
    }

    pub fn activity(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum()
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let act = self.activity(x);
        match self.sense {
            Sense::Ge => act >= self.rhs,
            Sense::Le => act <= self.rhs,
            Sense::Eq => act == self.rhs,
        }
    }
}

/// A minimization problem. `None` bounds are infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub objective: Vec<Rational>,
    pub rows: Vec<LpRow>,
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
}

impl LpProblem {
    /// All variables start in `[0, ∞)`.
    pub fn new(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LpProblem {
            objective,
            rows: Vec::new(),
            lower: vec![Some(Rational::zero()); n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_bounds(&mut self, j: usize, lower: Option<Rational>, upper: Option<Rational>) {
        self.lower[j] = lower;
        self.upper[j] = upper;
    }

    pub fn push_row(&mut self, row: LpRow) -> Result<()> {
        if row.coeffs.len() != self.num_vars() {
            return Err(Error::DimensionMismatch { expected: self.num_vars(), got: row.coeffs.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.lower.len().min(self.upper.len()) });
        }
        for row in &self.rows {
            if row.coeffs.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.coeffs.len() });
            }
        }
        for j in 0..n {
            if let (Some(l), Some(u)) = (&self.lower[j], &self.upper[j]) {
                if l > u {
                    return Err(Error::DimensionMismatch { expected: j, got: j });
                }
            }
        }
        Ok(())
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// True when `x` satisfies every row and bound exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && self.rows.iter().all(|r| r.is_satisfied(x))
            && (0..x.len()).all(|j| {
                self.lower[j].as_ref().is_none_or(|l| x[j] >= *l)
                    && self.upper[j].as_ref().is_none_or(|u| x[j] <= *u)
            })
    }
}

/// Appends a row, returning the extended problem.
pub fn lp_add_row(problem: &LpProblem, row: LpRow) -> Result<LpProblem> {
    let mut p = problem.clone();
    p.push_row(row)?;
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point (or the last basic point for non-optimal outcomes).
    pub primal: Vec<Rational>,
    /// Row multipliers: `≥` rows nonnegative, `≤` rows nonpositive.
    pub dual: Vec<Rational>,
    pub objective_value: Rational,
    /// Improving direction when unbounded.
    pub ray: Option<Vec<Rational>>,
    /// Phase-one row multipliers certifying infeasibility.
    pub farkas: Option<Vec<Rational>>,
    /// Reduced costs of the structural variables at the final basis.
    pub reduced_costs: Vec<Rational>,
    pub pivots: usize,
}

static OPTIMAL_SOLVES: AtomicUsize = AtomicUsize::new(0);
static DUALITY_FAILURES: AtomicUsize = AtomicUsize::new(0);

/// `(optimal solves checked, strong-duality failures)` since process start.
pub fn duality_stats() -> (usize, usize) {
    (OPTIMAL_SOLVES.load(Ordering::Relaxed), DUALITY_FAILURES.load(Ordering::Relaxed))
}

/// Value of the Lagrangian dual function at the row multipliers `y`:
/// `y·b + Σ_j min_{l_j ≤ x_j ≤ u_j} (c - Aᵀy)_j x_j`. `None` stands for `-∞`,
/// which includes multipliers with the wrong sign.
pub fn dual_objective(problem: &LpProblem, y: &[Rational]) -> Option<Rational> {
    if y.len() != problem.rows.len() {
        return None;
    }
    let mut value = Rational::zero();
    let mut d = problem.objective.clone();
    for (row, yi) in problem.rows.iter().zip(y) {
        let sign_ok = match row.sense {
            Sense::Ge => !yi.is_negative(),
            Sense::Le => !yi.is_positive(),
            Sense::Eq => true,
        };
        if !sign_ok {
            return None;
        }
        if yi.is_zero() {
            continue;
        }
        value += yi * &row.rhs;
        for (dj, a) in d.iter_mut().zip(&row.coeffs) {
            if !a.is_zero() {
                *dj -= yi * a;
            }
        }
    }
    for (j, dj) in d.iter().enumerate() {
        if dj.is_positive() {
            value += dj * problem.lower[j].as_ref()?;
        } else if dj.is_negative() {
            value += dj * problem.upper[j].as_ref()?;
        }
    }
    Some(value)
}

impl LpSolution {
    /// Exact strong-duality check against `problem`.
    pub fn strong_duality_holds(&self, problem: &LpProblem) -> bool {
        self.status == LpStatus::Optimal
            && dual_objective(problem, &self.dual).as_ref() == Some(&self.objective_value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack(usize),
    Artificial,
}

/// Dense tableau `B⁻¹ [A | slack | artificial]` with every variable's value.
#[derive(Debug, Clone)]
struct Tableau {
    n_struct: usize,
    kind: Vec<ColKind>,
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    basic_row: Vec<Option<usize>>,
    x: Vec<Rational>,
    lo: Vec<Option<Rational>>,
    hi: Vec<Option<Rational>>,
    cost: Vec<Rational>,
    d: Vec<Rational>,
    /// Slack column and its sign (`+1` for `≤`/`=`, `-1` for `≥`) per row.
    slack: Vec<(usize, i8)>,
    pivots: usize,
}

enum PrimalOutcome {
    Optimal,
    Unbounded(Vec<Rational>),
}

/// Safety valve; Bland's rule terminates, this only guards against bugs.
const MAX_PIVOTS: usize = 1_000_000;

impl Tableau {
    fn ncols(&self) -> usize {
        self.kind.len()
    }

    fn fixed(&self, j: usize) -> bool {
        matches!((&self.lo[j], &self.hi[j]), (Some(l), Some(u)) if l == u)
    }

    fn can_increase(&self, j: usize) -> bool {
        self.hi[j].as_ref().is_none_or(|u| self.x[j] < *u)
    }

    fn can_decrease(&self, j: usize) -> bool {
        self.lo[j].as_ref().is_none_or(|l| self.x[j] > *l)
    }

    fn recompute_reduced_costs(&mut self) {
        let mut d = self.cost.clone();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &self.cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (dj, a) in d.iter_mut().zip(row) {
                if !a.is_zero() {
                    *dj -= cb * a;
                }
            }
        }
        self.d = d;
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let piv = self.rows[r][q].clone();
        debug_assert!(!piv.is_zero());
        let nz: Vec<usize> = (0..self.ncols()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        if piv != Rational::one() {
            for &j in &nz {
                self.rows[r][j] /= &piv;
            }
        }
        let pivot_row = core::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[q].is_zero() {
                continue;
            }
            let f = row[q].clone();
            for &j in &nz {
                row[j] -= &f * &pivot_row[j];
            }
        }
        if !self.d[q].is_zero() {
            let f = self.d[q].clone();
            for &j in &nz {
                self.d[j] -= &f * &pivot_row[j];
            }
        }
        self.rows[r] = pivot_row;
        let leaving = self.basis[r];
        self.basic_row[leaving] = None;
        self.basic_row[q] = Some(r);
        self.basis[r] = q;
        self.pivots += 1;
    }

    /// Moves nonbasic `q` by `delta`, updating the basic variables.
    fn shift(&mut self, q: usize, delta: &Rational) {
        if delta.is_zero() {
            return;
        }
        self.x[q] += delta;
        for i in 0..self.rows.len() {
            let a = &self.rows[i][q];
            if !a.is_zero() {
                let b = self.basis[i];
                let change = a * delta;
                self.x[b] -= change;
            }
        }
    }

    fn primal(&mut self) -> PrimalOutcome {
        loop {
            assert!(self.pivots < MAX_PIVOTS, "simplex pivot limit exceeded");
            // Bland: smallest improving index.
            let entering = (0..self.ncols()).find_map(|j| {
                if self.basic_row[j].is_some() || self.fixed(j) {
                    return None;
                }
                if self.d[j].is_negative() && self.can_increase(j) {
                    Some((j, 1))
                } else if self.d[j].is_positive() && self.can_decrease(j) {
                    Some((j, -1))
                } else {
                    None
                }
            });
            let Some((q, dir)) = entering else {
                return PrimalOutcome::Optimal;
            };
            // (step, variable index, row or None for a bound flip)
            let mut best: Option<(Rational, usize, Option<usize>)> = None;
            let mut consider = |t: Rational, var: usize, row: Option<usize>| {
                let better = match &best {
                    None => true,
                    Some((bt, bv, _)) => t < *bt || (t == *bt && var < *bv),
                };
                if better {
                    best = Some((t, var, row));
                }
            };
            if let (Some(l), Some(u)) = (&self.lo[q], &self.hi[q]) {
                consider(u - l, q, None);
            }
            for i in 0..self.rows.len() {
                let a = &self.rows[i][q];
                if a.is_zero() {
                    continue;
                }
                let b = self.basis[i];
                // Rate of change of x_b per unit step.
                let rate = if dir > 0 { -a } else { a.clone() };
                if rate.is_negative() {
                    if let Some(l) = &self.lo[b] {
                        consider((&self.x[b] - l) / -&rate, b, Some(i));
                    }
                } else if let Some(u) = &self.hi[b] {
                    consider((u - &self.x[b]) / &rate, b, Some(i));
                }
            }
            let Some((t, _, row)) = best else {
                let mut ray = vec![Rational::zero(); self.ncols()];
                let sgn = Rational::from_integer(dir);
                ray[q] = sgn.clone();
                for i in 0..self.rows.len() {
                    ray[self.basis[i]] = -(&sgn * &self.rows[i][q]);
                }
                ray.truncate(self.n_struct);
                return PrimalOutcome::Unbounded(ray);
            };
            let delta = if dir > 0 { t } else { -t };
            self.shift(q, &delta);
            match row {
                None => self.pivots += 1,
                Some(r) => {
                    let leaving = self.basis[r];
                    // Snap the leaving variable onto the bound it reached.
                    let at_lo = self.lo[leaving].as_ref().filter(|l| **l == self.x[leaving]).cloned();
                    if let Some(l) = at_lo {
                        self.x[leaving] = l;
                    }
                    self.pivot(r, q);
                }
            }
        }
    }

    /// Dual simplex from a dual-feasible basis. Returns `false` when the
    /// primal is infeasible.
    fn dual(&mut self) -> bool {
        loop {
            assert!(self.pivots < MAX_PIVOTS, "simplex pivot limit exceeded");
            let mut leaving: Option<(usize, usize, Rational)> = None; // (var, row, target)
            for (r, &b) in self.basis.iter().enumerate() {
                let target = match (&self.lo[b], &self.hi[b]) {
                    (Some(l), _) if self.x[b] < *l => l.clone(),
                    (_, Some(u)) if self.x[b] > *u => u.clone(),
                    _ => continue,
                };
                if leaving.as_ref().is_none_or(|(v, _, _)| b < *v) {
                    leaving = Some((b, r, target));
                }
            }
            let Some((b, r, target)) = leaving else {
                return true;
            };
            let delta_b = &target - &self.x[b];
            let mut entering: Option<(Rational, usize)> = None;
            for j in 0..self.ncols() {
                if self.basic_row[j].is_some() || self.fixed(j) {
                    continue;
                }
                let a = &self.rows[r][j];
                if a.is_zero() {
                    continue;
                }
                // x_b changes by -a * Δx_j, so Δx_j has the sign of -delta_b / a.
                let increase = delta_b.is_positive() != a.is_positive();
                let allowed = if increase { self.can_increase(j) } else { self.can_decrease(j) };
                if !allowed {
                    continue;
                }
                let ratio = (&self.d[j] / a).abs();
                if entering.as_ref().is_none_or(|(best, _)| ratio < *best) {
                    entering = Some((ratio, j));
                }
            }
            let Some((_, q)) = entering else {
                return false;
            };
            let delta = -(&delta_b / &self.rows[r][q]);
            self.shift(q, &delta);
            self.x[b] = target;
            self.pivot(r, q);
        }
    }

    fn set_phase_two_costs(&mut self, objective: &[Rational]) {
        for j in 0..self.ncols() {
            self.cost[j] = if j < self.n_struct { objective[j].clone() } else { Rational::zero() };
        }
        self.recompute_reduced_costs();
    }

    /// `y_i = -σ_i d_{slack_i}` at the current costs.
    fn row_duals(&self) -> Vec<Rational> {
        self.slack
            .iter()
            .map(|&(col, sigma)| if sigma > 0 { -&self.d[col] } else { self.d[col].clone() })
            .collect()
    }

    fn append_row(&mut self, row: &LpRow) {
        let col = self.ncols();
        let sigma: i8 = if row.sense == Sense::Ge { -1 } else { 1 };
        for r in self.rows.iter_mut() {
            r.push(Rational::zero());
        }
        self.kind.push(ColKind::Slack(self.slack.len()));
        self.lo.push(Some(Rational::zero()));
        self.hi.push(if row.sense == Sense::Eq { Some(Rational::zero()) } else { None });
        self.cost.push(Rational::zero());
        self.d.push(Rational::zero());
        self.basic_row.push(Some(self.rows.len()));

        let mut full = row.coeffs.clone();
        full.resize(col + 1, Rational::zero());
        full[col] = Rational::from_integer(sigma as i64);
        for (i, r) in self.rows.iter().enumerate() {
            let coef = full[self.basis[i]].clone();
            if coef.is_zero() {
                continue;
            }
            for (fj, rj) in full.iter_mut().zip(r) {
                if !rj.is_zero() {
                    *fj -= &coef * rj;
                }
            }
        }
        if sigma < 0 {
            for v in full.iter_mut() {
                *v = -&*v;
            }
        }
        let activity: Rational = row.coeffs.iter().zip(&self.x).map(|(a, v)| a * v).sum();
        let value = &row.rhs - activity;
        self.x.push(if sigma < 0 { -value } else { value });
        self.rows.push(full);
        self.basis.push(col);
        self.slack.push((col, sigma));
    }
}

fn initial_value(lo: &Option<Rational>, hi: &Option<Rational>) -> Rational {
    match (lo, hi) {
        (Some(l), _) => l.clone(),
        (None, Some(u)) => u.clone(),
        (None, None) => Rational::zero(),
    }
}

enum Cold {
    Solved(Tableau, PrimalOutcome),
    Infeasible(Tableau, Vec<Rational>),
}

fn cold_solve(problem: &LpProblem) -> Cold {
    let n = problem.num_vars();
    let m = problem.rows.len();
    let x_struct: Vec<Rational> =
        (0..n).map(|j| initial_value(&problem.lower[j], &problem.upper[j])).collect();

    // Decide per row whether its slack can start basic.
    let mut art_sign: Vec<Option<i8>> = vec![None; m];
    let mut slack_val: Vec<Rational> = Vec::with_capacity(m);
    for (i, row) in problem.rows.iter().enumerate() {
        let r = &row.rhs - row.activity(&x_struct);
        let sigma = if row.sense == Sense::Ge { -1 } else { 1 };
        let s = if sigma < 0 { -&r } else { r.clone() };
        let ok = match row.sense {
            Sense::Eq => s.is_zero(),
            _ => !s.is_negative(),
        };
        if ok {
            slack_val.push(s);
        } else {
            slack_val.push(Rational::zero());
            art_sign[i] = Some(if r.is_negative() { -1 } else { 1 });
        }
    }
    let n_art = art_sign.iter().filter(|s| s.is_some()).count();
    let ncols = n + m + n_art;

    let mut kind = vec![ColKind::Structural; n];
    let mut lo: Vec<Option<Rational>> = problem.lower.clone();
    let mut hi: Vec<Option<Rational>> = problem.upper.clone();
    let mut x = x_struct;
    let mut slack = Vec::with_capacity(m);
    for (i, row) in problem.rows.iter().enumerate() {
        kind.push(ColKind::Slack(i));
        lo.push(Some(Rational::zero()));
        hi.push(if row.sense == Sense::Eq { Some(Rational::zero()) } else { None });
        x.push(slack_val[i].clone());
        slack.push((n + i, if row.sense == Sense::Ge { -1i8 } else { 1 }));
    }
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_art = n + m;
    for (i, row) in problem.rows.iter().enumerate() {
        let mut full = row.coeffs.clone();
        full.resize(ncols, Rational::zero());
        let sigma = slack[i].1;
        full[n + i] = Rational::from_integer(sigma as i64);
        let (basic, coef) = match art_sign[i] {
            None => (n + i, sigma),
            Some(tau) => {
                let col = next_art;
                next_art += 1;
                full[col] = Rational::from_integer(tau as i64);
                kind.push(ColKind::Artificial);
                lo.push(Some(Rational::zero()));
                hi.push(None);
                let r = &row.rhs - row.activity(&x[..n]);
                x.push(r.abs());
                (col, tau)
            }
        };
        if coef < 0 {
            for v in full.iter_mut() {
                *v = -&*v;
            }
        }
        rows.push(full);
        basis.push(basic);
    }
    let mut basic_row = vec![None; ncols];
    for (i, &b) in basis.iter().enumerate() {
        basic_row[b] = Some(i);
    }
    let cost = kind
        .iter()
        .map(|k| if *k == ColKind::Artificial { Rational::one() } else { Rational::zero() })
        .collect();
    let mut tab = Tableau {
        n_struct: n,
        kind,
        rows,
        basis,
        basic_row,
        x,
        lo,
        hi,
        cost,
        d: Vec::new(),
        slack,
        pivots: 0,
    };

    if n_art > 0 {
        tab.recompute_reduced_costs();
        // Phase one is bounded below by zero.
        let _ = tab.primal();
        let infeasibility: Rational =
            (0..tab.ncols()).filter(|&j| tab.kind[j] == ColKind::Artificial).map(|j| &tab.x[j]).sum();
        if infeasibility.is_positive() {
            let farkas = tab.row_duals();
            return Cold::Infeasible(tab, farkas);
        }
        // Drive zero artificials out of the basis where possible, then fix them.
        for r in 0..tab.rows.len() {
            let b = tab.basis[r];
            if tab.kind[b] != ColKind::Artificial {
                continue;
            }
            let q = (0..tab.ncols()).find(|&j| {
                tab.kind[j] != ColKind::Artificial
                    && tab.basic_row[j].is_none()
                    && !tab.rows[r][j].is_zero()
            });
            if let Some(q) = q {
                tab.pivot(r, q);
            }
        }
        for j in 0..tab.ncols() {
            if tab.kind[j] == ColKind::Artificial {
                tab.hi[j] = Some(Rational::zero());
                tab.x[j] = Rational::zero();
            }
        }
    }
    tab.set_phase_two_costs(&problem.objective);
    let outcome = tab.primal();
    Cold::Solved(tab, outcome)
}

fn finish(problem: &LpProblem, tab: &Tableau, outcome: PrimalOutcome) -> LpSolution {
    let n = problem.num_vars();
    let primal = tab.x[..n].to_vec();
    let objective_value = problem.objective_at(&primal);
    let reduced_costs = tab.d[..n].to_vec();
    match outcome {
        PrimalOutcome::Optimal => {
            let dual = tab.row_duals();
            let sol = LpSolution {
                status: LpStatus::Optimal,
                primal,
                dual,
                objective_value,
                ray: None,
                farkas: None,
                reduced_costs,
                pivots: tab.pivots,
            };
            OPTIMAL_SOLVES.fetch_add(1, Ordering::Relaxed);
            if !sol.strong_duality_holds(problem) {
                DUALITY_FAILURES.fetch_add(1, Ordering::Relaxed);
            }
            sol
        }
        PrimalOutcome::Unbounded(ray) => LpSolution {
            status: LpStatus::Unbounded,
            primal,
            dual: vec![Rational::zero(); problem.rows.len()],
            objective_value,
            ray: Some(ray),
            farkas: None,
            reduced_costs,
            pivots: tab.pivots,
        },
    }
}

fn infeasible(problem: &LpProblem, tab: &Tableau, farkas: Vec<Rational>) -> LpSolution {
    let n = problem.num_vars();
    let primal = tab.x[..n].to_vec();
    LpSolution {
        status: LpStatus::Infeasible,
        objective_value: problem.objective_at(&primal),
        primal,
        dual: vec![Rational::zero(); problem.rows.len()],
        ray: None,
        farkas: Some(farkas),
        reduced_costs: vec![Rational::zero(); n],
        pivots: tab.pivots,
    }
}

/// Solves `problem` from scratch.
pub fn lp_solve(problem: &LpProblem) -> Result<LpSolution> {
    problem.validate()?;
    Ok(match cold_solve(problem) {
        Cold::Solved(tab, outcome) => finish(problem, &tab, outcome),
        Cold::Infeasible(tab, farkas) => infeasible(problem, &tab, farkas),
    })
}

/// A problem plus the tableau of its last optimal solve.
#[derive(Debug, Clone)]
pub struct SimplexSession {
    problem: LpProblem,
    tableau: Option<Tableau>,
    pending: bool,
}

impl SimplexSession {
    pub fn new(problem: LpProblem) -> Result<Self> {
        problem.validate()?;
        Ok(SimplexSession { problem, tableau: None, pending: false })
    }

    pub fn problem(&self) -> &LpProblem {
        &self.problem
    }

    /// Appends a row. If the previous solve was optimal the next
    /// [`solve`](Self::solve) restarts from its basis.
    pub fn add_row(&mut self, row: LpRow) -> Result<()> {
        self.problem.push_row(row)?;
        let row = self.problem.rows.last().unwrap();
        if let Some(tab) = self.tableau.as_mut() {
            tab.append_row(row);
            self.pending = true;
        }
        Ok(())
    }

    pub fn solve(&mut self) -> LpSolution {
        if let Some(mut tab) = self.tableau.take() {
            if !self.pending || tab.dual() {
                self.pending = false;
                let outcome = tab.primal();
                let sol = finish(&self.problem, &tab, outcome);
                if sol.status == LpStatus::Optimal {
                    self.tableau = Some(tab);
                }
                return sol;
            }
            // Infeasible after the new rows: rerun cold for a certificate.
        }
        self.pending = false;
        match cold_solve(&self.problem) {
            Cold::Solved(tab, outcome) => {
                let sol = finish(&self.problem, &tab, outcome);
                if sol.status == LpStatus::Optimal {
                    self.tableau = Some(tab);
                }
                sol
            }
            Cold::Infeasible(tab, farkas) => infeasible(&self.problem, &tab, farkas),
        }
    }
}
