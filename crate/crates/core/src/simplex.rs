//! Dense two-phase primal simplex.
//!
//! Problems are `maximize c·x` subject to rows `a·x {<=,=,>=} b` and
//! `x >= 0`. Pricing uses Dantzig's largest-coefficient rule until the solver
//! has made `3 × rows` consecutive non-improving pivots, after which Bland's
//! smallest-index rule takes over for the rest of the phase so degenerate
//! cycling cannot occur.

use std::fmt;

use log::trace;
use thiserror::Error;

/// Primal feasibility tolerance, scaled by row magnitude.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Tolerance for comparing objective values.
pub const OBJECTIVE_TOL: f64 = 1e-7;
/// Entries smaller than this are never pivoted on.
pub const PIVOT_TOL: f64 = 1e-10;

const OPTIMALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `maximize objective·x` over `x >= 0` subject to `constraints`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(variable_count: usize) -> Self {
        LinearProgram {
            objective: vec![0.0; variable_count],
            constraints: Vec::new(),
        }
    }

    pub fn variable_count(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coefficients: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
    }

    /// Adds a row given as sparse `(variable, coefficient)` pairs.
    pub fn add_sparse(&mut self, terms: &[(usize, f64)], relation: Relation, rhs: f64) {
        let mut row = vec![0.0; self.variable_count()];
        for &(var, coef) in terms {
            row[var] += coef;
        }
        self.add_constraint(row, relation, rhs);
    }

    fn check(&self) -> Result<(), SimplexError> {
        let n = self.variable_count();
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(SimplexError::NonFinite { row: None });
        }
        for (row, c) in self.constraints.iter().enumerate() {
            if c.coefficients.len() != n {
                return Err(SimplexError::DimensionMismatch {
                    row,
                    expected: n,
                    found: c.coefficients.len(),
                });
            }
            if !c.rhs.is_finite() || c.coefficients.iter().any(|v| !v.is_finite()) {
                return Err(SimplexError::NonFinite { row: Some(row) });
            }
        }
        Ok(())
    }

    /// Largest scaled violation of `values` against the constraints and
    /// non-negativity. Zero means feasible.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let mut worst = values.iter().map(|&x| (-x).max(0.0)).fold(0.0, f64::max);
        for c in &self.constraints {
            let lhs: f64 = c.coefficients.iter().zip(values).map(|(a, x)| a * x).sum();
            let norm = c
                .coefficients
                .iter()
                .map(|a| a * a)
                .sum::<f64>()
                .sqrt()
                .max(1.0);
            let gap = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(gap / norm);
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal { objective: f64, values: Vec<f64> },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn status(&self) -> LpStatus {
        match self {
            LpSolution::Optimal { .. } => LpStatus::Optimal,
            LpSolution::Infeasible => LpStatus::Infeasible,
            LpSolution::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn objective_value(&self) -> Option<f64> {
        match self {
            LpSolution::Optimal { objective, .. } => Some(*objective),
            _ => None,
        }
    }

    pub fn variable_values(&self) -> Option<&[f64]> {
        match self {
            LpSolution::Optimal { values, .. } => Some(values),
            _ => None,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SimplexError {
    #[error("constraint {row} has {found} coefficients, expected {expected}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite coefficient in {}", match .row { Some(r) => format!("constraint {r}"), None => "objective".to_string() })]
    NonFinite { row: Option<usize> },
    #[error("numerical breakdown: no pivot element above tolerance in column {column}")]
    NumericalBreakdown { column: usize },
    #[error("iteration limit of {0} pivots reached")]
    IterationLimit(usize),
    #[error("solution fails residual check (violation {0:e})")]
    ResidualCheck(f64),
}

/// Solves `lp`.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, SimplexError> {
    lp.check()?;
    let mut tableau = Tableau::build(lp);
    let limit = 50_000 + 100 * (tableau.rows + tableau.cols);

    if tableau.artificial_start < tableau.cols {
        tableau.set_phase_one_objective();
        tableau.run(limit, true)?;
        let infeasibility = -tableau.objective_value();
        let scale = 1.0
            + lp.constraints
                .iter()
                .map(|c| c.rhs.abs())
                .fold(0.0, f64::max);
        if infeasibility > FEASIBILITY_TOL * scale {
            trace!("phase one ended with infeasibility {infeasibility:e}");
            return Ok(LpSolution::Infeasible);
        }
        tableau.drive_out_artificials();
    }

    tableau.set_phase_two_objective(&lp.objective);
    if tableau.run(limit, false)? == PhaseEnd::Unbounded {
        return Ok(LpSolution::Unbounded);
    }

    let mut values = tableau.primal_values(lp.variable_count());
    for v in &mut values {
        if *v <= 0.0 && *v > -FEASIBILITY_TOL {
            *v = 0.0;
        }
    }
    let violation = lp.max_violation(&values);
    if violation > FEASIBILITY_TOL {
        return Err(SimplexError::ResidualCheck(violation));
    }
    let objective = lp
        .objective
        .iter()
        .zip(&values)
        .fold(0.0, |acc, (c, x)| acc + c * x);
    Ok(LpSolution::Optimal { objective, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PhaseEnd {
    Optimal,
    Unbounded,
}

/// Row-major tableau with the right-hand side as the last column and the
/// reduced-cost row kept separately. `cost[cols]` holds minus the current
/// objective value.
struct Tableau {
    rows: usize,
    cols: usize,
    width: usize,
    data: Vec<f64>,
    basis: Vec<usize>,
    cost: Vec<f64>,
    /// Columns at or beyond this index are artificial.
    artificial_start: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.variable_count();
        let rows = lp.constraints.len();

        // Normalize to non-negative right-hand sides.
        let normalized: Vec<(Vec<f64>, Relation, f64)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs < 0.0 {
                    let flipped = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coefficients.iter().map(|a| -a).collect(), flipped, -c.rhs)
                } else {
                    (c.coefficients.clone(), c.relation, c.rhs)
                }
            })
            .collect();

        let slack_count = normalized.iter().filter(|c| c.1 != Relation::Eq).count();
        let artificial_count = normalized.iter().filter(|c| c.1 != Relation::Le).count();
        let artificial_start = n + slack_count;
        let cols = artificial_start + artificial_count;
        let width = cols + 1;

        let mut data = vec![0.0; rows * width];
        let mut basis = vec![0; rows];
        let mut next_slack = n;
        let mut next_artificial = artificial_start;
        for (r, (coefs, relation, rhs)) in normalized.iter().enumerate() {
            let row = &mut data[r * width..(r + 1) * width];
            row[..n].copy_from_slice(coefs);
            row[cols] = *rhs;
            match relation {
                Relation::Le => {
                    row[next_slack] = 1.0;
                    basis[r] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_artificial] = 1.0;
                    basis[r] = next_artificial;
                    next_artificial += 1;
                }
                Relation::Eq => {
                    row[next_artificial] = 1.0;
                    basis[r] = next_artificial;
                    next_artificial += 1;
                }
            }
        }

        Tableau {
            rows,
            cols,
            width,
            data,
            basis,
            cost: vec![0.0; width],
            artificial_start,
        }
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn objective_value(&self) -> f64 {
        -self.cost[self.cols]
    }

    /// Reduced costs for `maximize sum(c_j x_j)` against the current basis.
    fn price(&mut self, c: &[f64]) {
        let mut cost = c.to_vec();
        cost.resize(self.width, 0.0);
        for r in 0..self.rows {
            let cb = c.get(self.basis[r]).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for j in 0..self.width {
                    cost[j] -= cb * self.at(r, j);
                }
            }
        }
        self.cost = cost;
    }

    fn set_phase_one_objective(&mut self) {
        let mut c = vec![0.0; self.cols];
        for v in &mut c[self.artificial_start..] {
            *v = -1.0;
        }
        self.price(&c);
    }

    fn set_phase_two_objective(&mut self, objective: &[f64]) {
        self.price(objective);
        for j in self.artificial_start..self.cols {
            self.cost[j] = 0.0;
        }
    }

    fn entering(&self, bland: bool, allow_artificial: bool) -> Option<usize> {
        let limit = if allow_artificial {
            self.cols
        } else {
            self.artificial_start
        };
        let candidates = (0..limit).filter(|&j| self.cost[j] > OPTIMALITY_TOL);
        if bland {
            candidates.into_iter().next()
        } else {
            // Largest reduced cost; first index wins ties.
            candidates.fold(None, |best: Option<usize>, j| match best {
                Some(b) if self.cost[b] >= self.cost[j] => Some(b),
                _ => Some(j),
            })
        }
    }

    /// Minimum-ratio row for entering column `q`.
    fn leaving(&self, q: usize, bland: bool) -> Result<Option<usize>, SimplexError> {
        let mut best: Option<(usize, f64)> = None;
        let mut tiny_positive = false;
        for r in 0..self.rows {
            let a = self.at(r, q);
            if a <= PIVOT_TOL {
                if a > 0.0 {
                    tiny_positive = true;
                }
                continue;
            }
            let ratio = self.rhs(r).max(0.0) / a;
            best = match best {
                None => Some((r, ratio)),
                Some((b, br)) => {
                    let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                    let better = if tie {
                        if bland {
                            self.basis[r] < self.basis[b]
                        } else {
                            a > self.at(b, q)
                        }
                    } else {
                        ratio < br
                    };
                    if better {
                        Some((r, ratio))
                    } else {
                        Some((b, br))
                    }
                }
            };
        }
        match best {
            Some((r, _)) => Ok(Some(r)),
            None if tiny_positive => Err(SimplexError::NumericalBreakdown { column: q }),
            None => Ok(None),
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let w = self.width;
        let p = self.at(r, q);
        {
            let row = &mut self.data[r * w..(r + 1) * w];
            for v in row.iter_mut() {
                *v /= p;
            }
            row[q] = 1.0;
        }
        let pivot_row: Vec<f64> = self.data[r * w..(r + 1) * w].to_vec();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let factor = self.data[i * w + q];
            if factor != 0.0 {
                let row = &mut self.data[i * w..(i + 1) * w];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * pv;
                }
                row[q] = 0.0;
            }
        }
        let factor = self.cost[q];
        if factor != 0.0 {
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
            }
            self.cost[q] = 0.0;
        }
        self.basis[r] = q;
    }

    fn run(&mut self, limit: usize, phase_one: bool) -> Result<PhaseEnd, SimplexError> {
        let mut bland = false;
        let mut stalled = 0usize;
        let threshold = 3 * self.rows.max(1);
        for iteration in 0..limit {
            let Some(q) = self.entering(bland, false) else {
                trace!(
                    "phase {} optimal after {iteration} pivots, objective {}",
                    if phase_one { 1 } else { 2 },
                    self.objective_value()
                );
                return Ok(PhaseEnd::Optimal);
            };
            let Some(r) = self.leaving(q, bland)? else {
                if phase_one {
                    // The phase-one objective is bounded above by zero.
                    return Err(SimplexError::NumericalBreakdown { column: q });
                }
                return Ok(PhaseEnd::Unbounded);
            };
            let before = self.objective_value();
            self.pivot(r, q);
            if log::log_enabled!(log::Level::Trace) {
                trace!(
                    "pivot row {r} column {q}{}",
                    if bland { " (bland)" } else { "" }
                );
                self.dump();
            }
            if self.objective_value() > before + 1e-12 * (1.0 + before.abs()) {
                stalled = 0;
            } else {
                stalled += 1;
                if !bland && stalled > threshold {
                    trace!("switching to Bland's rule after {stalled} degenerate pivots");
                    bland = true;
                }
            }
        }
        Err(SimplexError::IterationLimit(limit))
    }

    /// Pivots basic artificial variables out after phase one. Rows where no
    /// structural or slack column can replace the artificial are redundant
    /// and are removed.
    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows {
            if self.basis[r] < self.artificial_start {
                r += 1;
                continue;
            }
            let w = self.width;
            self.data[r * w + self.cols] = 0.0;
            let mut best: Option<usize> = None;
            for j in 0..self.artificial_start {
                let a = self.at(r, j).abs();
                if a > PIVOT_TOL && best.is_none_or(|b| a > self.at(r, b).abs()) {
                    best = Some(j);
                }
            }
            match best {
                Some(q) => {
                    self.pivot(r, q);
                    r += 1;
                }
                None => {
                    self.data.drain(r * w..(r + 1) * w);
                    self.basis.remove(r);
                    self.rows -= 1;
                }
            }
        }
    }

    fn primal_values(&self, n: usize) -> Vec<f64> {
        let mut values = vec![0.0; n];
        for r in 0..self.rows {
            if self.basis[r] < n {
                values[self.basis[r]] = self.rhs(r);
            }
        }
        values
    }

    fn dump(&self) {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.width)
                .map(|j| format!("{:8.3}", self.at(r, j)))
                .collect();
            trace!("x{:<3} | {}", self.basis[r], row.join(" "));
        }
        let cost: Vec<String> = self.cost.iter().map(|v| format!("{v:8.3}")).collect();
        trace!("cost | {}", cost.join(" "));
    }
}
