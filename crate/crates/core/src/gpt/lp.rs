//! Dense two-phase simplex with Bland's rule.
//!
//! Sized for the small feasibility and optimization problems behind the
//! existential definitions of the theory layer: tens of variables and a
//! few hundred constraints at most.

use alloc::vec;
use alloc::vec::Vec;

/// Pivot and reduced-cost tolerance.
pub const PIVOT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub value: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
}

/// `maximize objective · x` subject to linear constraints.
///
/// Variables are non-negative unless marked free.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    free: Vec<bool>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    /// A program over `n` non-negative variables with a zero objective.
    pub fn new(n: usize) -> Self {
        LinearProgram {
            objective: vec![0.0; n],
            free: vec![false; n],
            constraints: Vec::new(),
        }
    }

    /// A program over `n` free variables with a zero objective.
    pub fn new_free(n: usize) -> Self {
        LinearProgram {
            objective: vec![0.0; n],
            free: vec![true; n],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn is_free(&self, var: usize) -> bool {
        self.free[var]
    }

    pub fn maximize(mut self, objective: Vec<f64>) -> Self {
        assert_eq!(objective.len(), self.num_vars());
        self.objective = objective;
        self
    }

    pub fn set_free(&mut self, var: usize, free: bool) {
        self.free[var] = free;
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        assert_eq!(coeffs.len(), self.num_vars());
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn add_le(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.add(coeffs, Relation::Le, rhs);
    }

    pub fn add_ge(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.add(coeffs, Relation::Ge, rhs);
    }

    pub fn add_eq(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.add(coeffs, Relation::Eq, rhs);
    }

    pub fn solve(&self) -> Result<Solution, LpError> {
        // Column layout: one column per non-negative variable, two per free
        // variable (x = x+ - x-), then slacks/surpluses, then artificials.
        let n = self.num_vars();
        let mut col_of = Vec::with_capacity(n);
        let mut structural = 0;
        for &f in &self.free {
            col_of.push(structural);
            structural += if f { 2 } else { 1 };
        }
        let m = self.constraints.len();
        let slack_count = self
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();

        // After flipping rows so that rhs >= 0, a row needs an artificial
        // unless it is a `<=` row (its slack is a starting basic variable).
        let mut rows: Vec<(Vec<f64>, Relation, f64)> = self
            .constraints
            .iter()
            .map(|c| {
                let mut coeffs = vec![0.0; structural];
                for (j, &a) in c.coeffs.iter().enumerate() {
                    coeffs[col_of[j]] = a;
                    if self.free[j] {
                        coeffs[col_of[j] + 1] = -a;
                    }
                }
                if c.rhs < 0.0 {
                    coeffs.iter_mut().for_each(|a| *a = -*a);
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (coeffs, rel, -c.rhs)
                } else {
                    (coeffs, c.relation, c.rhs)
                }
            })
            .collect();
        let art_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let art_start = structural + slack_count;
        let width = art_start + art_count;

        let mut t = Tableau {
            a: Vec::with_capacity(m),
            b: Vec::with_capacity(m),
            basis: Vec::with_capacity(m),
        };
        let (mut slack, mut art) = (structural, art_start);
        for (coeffs, rel, rhs) in rows.drain(..) {
            let mut row = vec![0.0; width];
            row[..structural].copy_from_slice(&coeffs);
            let basic = match rel {
                Relation::Le => {
                    row[slack] = 1.0;
                    slack += 1;
                    slack - 1
                }
                Relation::Ge => {
                    row[slack] = -1.0;
                    slack += 1;
                    row[art] = 1.0;
                    art += 1;
                    art - 1
                }
                Relation::Eq => {
                    row[art] = 1.0;
                    art += 1;
                    art - 1
                }
            };
            t.a.push(row);
            t.b.push(rhs);
            t.basis.push(basic);
        }

        let scale = 1.0 + t.b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if art_count > 0 {
            let mut cost = vec![0.0; width];
            cost[art_start..].iter_mut().for_each(|c| *c = -1.0);
            let phase1 = t.optimize(&cost, width).map_err(|_| LpError::Infeasible)?;
            if phase1 < -PIVOT_TOL * scale {
                return Err(LpError::Infeasible);
            }
            t.drive_out_artificials(art_start);
        }

        let mut cost = vec![0.0; width];
        for (j, &c) in self.objective.iter().enumerate() {
            cost[col_of[j]] = c;
            if self.free[j] {
                cost[col_of[j] + 1] = -c;
            }
        }
        let value = t.optimize(&cost, art_start)?;

        let mut y = vec![0.0; width];
        for (r, &bv) in t.basis.iter().enumerate() {
            y[bv] = t.b[r];
        }
        let x = (0..n)
            .map(|j| {
                if self.free[j] {
                    y[col_of[j]] - y[col_of[j] + 1]
                } else {
                    y[col_of[j]]
                }
            })
            .collect();
        Ok(Solution { value, x })
    }
}

struct Tableau {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    /// Maximizes `cost · y` over columns `< active`, starting from the
    /// current basic feasible solution. Returns the optimal value.
    fn optimize(&mut self, cost: &[f64], active: usize) -> Result<f64, LpError> {
        loop {
            // Reduced costs c_j - c_B B^-1 A_j; rows are kept in B^-1 A form.
            let entering = (0..active).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let z: f64 = self
                    .basis
                    .iter()
                    .enumerate()
                    .map(|(r, &bv)| cost[bv] * self.a[r][j])
                    .sum();
                cost[j] - z > PIVOT_TOL
            });
            let Some(j) = entering else {
                return Ok(self
                    .basis
                    .iter()
                    .enumerate()
                    .map(|(r, &bv)| cost[bv] * self.b[r])
                    .sum());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.a.len() {
                let coef = self.a[r][j];
                if coef > PIVOT_TOL {
                    let ratio = self.b[r] / coef;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - PIVOT_TOL
                                || (ratio <= lratio + PIVOT_TOL && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Err(LpError::Unbounded);
            };
            self.pivot(r, j);
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.a[r][j];
        self.a[r].iter_mut().for_each(|v| *v /= p);
        self.b[r] /= p;
        let pivot_row = self.a[r].clone();
        let pivot_b = self.b[r];
        for i in 0..self.a.len() {
            if i == r {
                continue;
            }
            let f = self.a[i][j];
            if f != 0.0 {
                for (v, pv) in self.a[i].iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                self.b[i] -= f * pivot_b;
                if self.b[i].abs() < PIVOT_TOL * 1e-3 {
                    self.b[i] = 0.0;
                }
            }
        }
        self.basis[r] = j;
    }

    /// After a successful phase one, pivots zero-level artificial variables
    /// out of the basis; rows that cannot be pivoted are redundant and go.
    fn drive_out_artificials(&mut self, art_start: usize) {
        let mut r = 0;
        while r < self.a.len() {
            if self.basis[r] < art_start {
                r += 1;
                continue;
            }
            let col = (0..art_start)
                .filter(|j| !self.basis.contains(j))
                .max_by(|&x, &y| self.a[r][x].abs().total_cmp(&self.a[r][y].abs()));
            match col {
                Some(j) if self.a[r][j].abs() > PIVOT_TOL => {
                    self.pivot(r, j);
                    r += 1;
                }
                _ => {
                    self.a.remove(r);
                    self.b.remove(r);
                    self.basis.remove(r);
                }
            }
        }
    }
}

/// `maximize objective · x` over free `x` subject to `equalities` (`A x =
/// b`) and `inequalities` (`A x <= b`).
pub fn lp_solve(
    objective: &[f64],
    equalities: &[(Vec<f64>, f64)],
    inequalities: &[(Vec<f64>, f64)],
) -> Result<Solution, LpError> {
    let mut lp = LinearProgram::new_free(objective.len()).maximize(objective.to_vec());
    for (a, b) in equalities {
        lp.add_eq(a.clone(), *b);
    }
    for (a, b) in inequalities {
        lp.add_le(a.clone(), *b);
    }
    lp.solve()
}
