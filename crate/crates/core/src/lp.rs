//! Exact linear programming for covering relaxations.
//!
//! Problems have the form `min c·x` subject to rows `a·x ≥ b` and the box
//! `0 ≤ x ≤ 1`. They are solved by a two-phase bounded-variable primal
//! simplex over exact rationals; Bland's smallest-index rule picks both the
//! entering and the leaving variable, so the method terminates and the
//! returned vertex is deterministic.

use std::fmt::Write as _;

use crate::error::SolveError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    /// Sparse coefficients `(variable, value)`.
    pub coeffs: Vec<(usize, Scalar)>,
    pub rhs: Scalar,
    pub label: String,
}

/// `min c·x` s.t. every row `≥` its right-hand side, `0 ≤ x ≤ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearProgram {
    pub objective: Vec<Scalar>,
    pub rows: Vec<Constraint>,
    pub var_labels: Vec<String>,
}

impl LinearProgram {
    /// A program over `n` variables labelled `x0, x1, …` with objective zero.
    pub fn new(n: usize) -> Self {
        LinearProgram {
            objective: vec![Scalar::zero(); n],
            rows: Vec::new(),
            var_labels: (0..n).map(|i| format!("x{i}")).collect(),
        }
    }

    /// Unit costs: `min Σ x`.
    pub fn covering(n: usize) -> Self {
        let mut lp = LinearProgram::new(n);
        lp.objective = vec![Scalar::one(); n];
        lp
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Scalar)>, rhs: Scalar, label: impl Into<String>) {
        self.rows.push(Constraint { coeffs, rhs, label: label.into() });
    }

    /// `Σ_{i ∈ vars} x_i ≥ 1`.
    pub fn add_cover_row(&mut self, vars: impl IntoIterator<Item = usize>, label: impl Into<String>) {
        let coeffs = vars.into_iter().map(|v| (v, Scalar::one())).collect();
        self.add_row(coeffs, Scalar::one(), label);
    }

    fn validate(&self) -> Result<(), SolveError> {
        let n = self.num_vars();
        if self.var_labels.len() != n {
            return Err(SolveError::Structure(format!("{} labels for {n} variables", self.var_labels.len())));
        }
        for row in &self.rows {
            if let Some((v, _)) = row.coeffs.iter().find(|(v, _)| *v >= n) {
                return Err(SolveError::Structure(format!("row {} references variable {v} of {n}", row.label)));
            }
        }
        Ok(())
    }

    /// CPLEX-style LP text with a fixed section and field order.
    pub fn to_lp_text(&self) -> String {
        let mut out = String::new();
        let term = |out: &mut String, coef: &Scalar, var: &str| {
            let sign = if coef.is_negative() { '-' } else { '+' };
            let _ = write!(out, " {sign} {} {var}", lp_number(&coef.abs()));
        };
        out.push_str("Minimize\n obj:");
        for (i, c) in self.objective.iter().enumerate() {
            if !c.is_zero() {
                term(&mut out, c, &self.var_labels[i]);
            }
        }
        out.push_str("\nSubject To\n");
        for (r, row) in self.rows.iter().enumerate() {
            let label = if row.label.is_empty() { format!("r{r}") } else { row.label.clone() };
            let _ = write!(out, " {label}:");
            if row.coeffs.is_empty() {
                out.push_str(" 0 x0");
            }
            for (v, c) in &row.coeffs {
                term(&mut out, c, &self.var_labels[*v]);
            }
            let _ = writeln!(out, " >= {}", lp_number(&row.rhs));
        }
        out.push_str("Bounds\n");
        for label in &self.var_labels {
            let _ = writeln!(out, " 0 <= {label} <= 1");
        }
        out.push_str("End\n");
        out
    }
}

fn lp_number(v: &Scalar) -> String {
    let text = v.to_string();
    if text.contains('/') {
        format!("{:.17}", v.to_f64())
    } else {
        text
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution {
    pub status: LpStatus,
    /// Optimal vertex (empty when infeasible).
    pub x: Vec<Scalar>,
    pub objective: Scalar,
}

impl LinearSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

struct Tableau {
    rows: Vec<Vec<Scalar>>,
    basis: Vec<usize>,
    /// Row of each basic variable.
    basic_row: Vec<Option<usize>>,
    value: Vec<Scalar>,
    upper: Vec<Option<Scalar>>,
}

enum Step {
    Optimal,
    Pivoted,
}

impl Tableau {
    fn reduced_cost(&self, cost: &[Scalar], j: usize) -> Scalar {
        let mut d = cost[j].clone();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if !cb.is_zero() && !row[j].is_zero() {
                d -= &(cb * &row[j]);
            }
        }
        d
    }

    fn at_upper(&self, j: usize) -> bool {
        self.upper[j].as_ref().is_some_and(|u| self.value[j] == *u)
    }

    fn step(&mut self, cost: &[Scalar]) -> Result<Step, SolveError> {
        let total = self.value.len();
        // Bland: first improving nonbasic variable
        let mut entering = None;
        for j in 0..total {
            if self.basic_row[j].is_some() || self.upper[j].as_ref().is_some_and(Scalar::is_zero) {
                continue;
            }
            let d = self.reduced_cost(cost, j);
            if d.is_negative() && !self.at_upper(j) {
                entering = Some((j, true));
                break;
            }
            if d.is_positive() && self.at_upper(j) {
                entering = Some((j, false));
                break;
            }
        }
        let Some((j, increase)) = entering else {
            return Ok(Step::Optimal);
        };

        // ratio test; ties go to the smallest variable index
        let mut best: Option<(Scalar, usize, Option<usize>)> = None;
        let mut consider = |theta: Scalar, var: usize, row: Option<usize>| {
            let better = match &best {
                None => true,
                Some((t, v, _)) => theta < *t || (theta == *t && var < *v),
            };
            if better {
                best = Some((theta, var, row));
            }
        };
        if let Some(u) = &self.upper[j] {
            consider(u.clone(), j, None);
        }
        for (i, row) in self.rows.iter().enumerate() {
            let a = &row[j];
            if a.is_zero() {
                continue;
            }
            // basic variable moves at rate -a per unit increase of x_j
            let rate = if increase { -a } else { a.clone() };
            let b = self.basis[i];
            if rate.is_negative() {
                consider(&self.value[b] / &(-&rate), b, Some(i));
            } else if let Some(u) = &self.upper[b] {
                consider(&(u - &self.value[b]) / &rate, b, Some(i));
            }
        }
        let Some((theta, _, leaving_row)) = best else {
            return Err(SolveError::Structure("linear program is unbounded".into()));
        };

        let delta = if increase { theta.clone() } else { -&theta };
        if !delta.is_zero() {
            for (i, row) in self.rows.iter().enumerate() {
                if !row[j].is_zero() {
                    let b = self.basis[i];
                    self.value[b] -= &(&row[j] * &delta);
                }
            }
            self.value[j] += &delta;
        }
        if let Some(r) = leaving_row {
            self.pivot(r, j);
        }
        Ok(Step::Pivoted)
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = &*v / &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &(&f * pv);
                }
            }
        }
        let out = self.basis[r];
        self.basic_row[out] = None;
        self.basic_row[j] = Some(r);
        self.basis[r] = j;
    }

    fn optimize(&mut self, cost: &[Scalar]) -> Result<(), SolveError> {
        while let Step::Pivoted = self.step(cost)? {}
        Ok(())
    }
}

/// Solves `lp` exactly. An infeasible program is reported through
/// [`LpStatus::Infeasible`]; malformed input is an error.
pub fn solve_lp(lp: &LinearProgram) -> Result<LinearSolution, SolveError> {
    lp.validate()?;
    let n = lp.num_vars();
    let m = lp.rows.len();
    // columns: structural | surplus | artificial
    let total = n + 2 * m;
    let mut rows = vec![vec![Scalar::zero(); total]; m];
    let mut value = vec![Scalar::zero(); total];
    for (i, row) in lp.rows.iter().enumerate() {
        let flip = row.rhs.is_negative();
        let sign = |v: &Scalar| if flip { -v } else { v.clone() };
        for (v, c) in &row.coeffs {
            rows[i][*v] += &sign(c);
        }
        rows[i][n + i] = sign(&-Scalar::one());
        rows[i][n + m + i] = Scalar::one();
        value[n + m + i] = sign(&row.rhs);
    }
    let mut upper: Vec<Option<Scalar>> = vec![Some(Scalar::one()); n];
    upper.extend(std::iter::repeat_n(None, 2 * m));
    let mut basic_row = vec![None; total];
    for i in 0..m {
        basic_row[n + m + i] = Some(i);
    }
    let mut tab = Tableau { rows, basis: (n + m..total).collect(), basic_row, value, upper };

    let mut phase1 = vec![Scalar::zero(); total];
    phase1[n + m..].iter_mut().for_each(|c| *c = Scalar::one());
    tab.optimize(&phase1)?;
    let infeasibility: Scalar = tab.value[n + m..].iter().sum();
    if infeasibility.is_positive() {
        return Ok(LinearSolution { status: LpStatus::Infeasible, x: Vec::new(), objective: Scalar::zero() });
    }

    // move degenerate artificials out of the basis where possible, then fix them at zero
    for r in 0..m {
        if tab.basis[r] >= n + m {
            if let Some(j) = (0..n + m).find(|&j| tab.basic_row[j].is_none() && !tab.rows[r][j].is_zero()) {
                tab.pivot(r, j);
            }
        }
    }
    for a in n + m..total {
        tab.upper[a] = Some(Scalar::zero());
    }

    let mut cost = lp.objective.clone();
    cost.resize(total, Scalar::zero());
    tab.optimize(&cost)?;
    let x: Vec<Scalar> = tab.value[..n].to_vec();
    let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LinearSolution { status: LpStatus::Optimal, x, objective })
}
