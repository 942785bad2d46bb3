//! Brute-force oracles shared by the integration suites. None of them calls
//! into the solver or the factorization code they check.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use spooky_core::gpt::{Constraint, LinearProgram, Relation};

/// Half-width of the box every random program is confined to.
pub const BOX: f64 = 10.0;

/// A small random program with integer data, confined to `[-BOX, BOX]^n`.
#[derive(Debug, Clone)]
pub struct LpInstance {
    pub n: usize,
    pub free: bool,
    pub objective: Vec<f64>,
    pub rows: Vec<Constraint>,
}

impl LpInstance {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let n = rng.random_range(1..=4);
        let free = rng.random_bool(0.5);
        let m = rng.random_range(1..=8);
        let anchor: Vec<f64> = (0..n)
            .map(|_| f64::from(rng.random_range(if free { -3..=3 } else { 0..=3 })))
            .collect();
        // Half the instances keep a known interior-ish point feasible.
        let anchored = rng.random_bool(0.5);
        let rows = (0..m)
            .map(|_| {
                let coeffs: Vec<f64> = (0..n)
                    .map(|_| f64::from(rng.random_range(-3..=3)))
                    .collect();
                let relation = match rng.random_range(0..5) {
                    0 => Relation::Eq,
                    1 | 2 => Relation::Le,
                    _ => Relation::Ge,
                };
                let at_anchor: f64 = coeffs.iter().zip(&anchor).map(|(a, x)| a * x).sum();
                let rhs = if anchored {
                    match relation {
                        Relation::Eq => at_anchor,
                        Relation::Le => at_anchor + f64::from(rng.random_range(0..=2)),
                        Relation::Ge => at_anchor - f64::from(rng.random_range(0..=2)),
                    }
                } else {
                    f64::from(rng.random_range(-6..=6))
                };
                Constraint {
                    coeffs,
                    relation,
                    rhs,
                }
            })
            .collect();
        let objective = (0..n)
            .map(|_| f64::from(rng.random_range(-3..=3)))
            .collect();
        LpInstance {
            n,
            free,
            objective,
            rows,
        }
    }

    /// The instance handed to the simplex engine, box included.
    pub fn program(&self) -> LinearProgram {
        let mut lp = if self.free {
            LinearProgram::new_free(self.n)
        } else {
            LinearProgram::new(self.n)
        }
        .maximize(self.objective.clone());
        for r in &self.rows {
            lp.add(r.coeffs.clone(), r.relation, r.rhs);
        }
        for k in 0..self.n {
            let mut e = vec![0.0; self.n];
            e[k] = 1.0;
            lp.add_le(e.clone(), BOX);
            lp.add_ge(e, -BOX);
        }
        lp
    }

    /// Every constraint as `(a, relation, b)`, including sign and box rows.
    fn all_rows(&self) -> Vec<(Vec<f64>, Relation, f64)> {
        let mut rows: Vec<_> = self
            .rows
            .iter()
            .map(|r| (r.coeffs.clone(), r.relation, r.rhs))
            .collect();
        for k in 0..self.n {
            let mut e = vec![0.0; self.n];
            e[k] = 1.0;
            rows.push((e.clone(), Relation::Le, BOX));
            rows.push((e.clone(), Relation::Ge, if self.free { -BOX } else { 0.0 }));
        }
        rows
    }
}

/// Optimum over the vertices of the (bounded) feasible polytope, found by
/// solving every `n x n` subsystem of active constraints. `None` means
/// infeasible.
pub fn vertex_oracle(inst: &LpInstance) -> Option<f64> {
    let rows = inst.all_rows();
    let n = inst.n;
    let mut best: Option<f64> = None;
    for combo in combinations(rows.len(), n) {
        let a: Vec<Vec<f64>> = combo.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<f64> = combo.iter().map(|&i| rows[i].2).collect();
        let Some(x) = solve_square(a, b) else {
            continue;
        };
        let feasible = rows.iter().all(|(a, rel, rhs)| {
            let v: f64 = a.iter().zip(&x).map(|(p, q)| p * q).sum();
            let tol = 1e-7 * (1.0 + rhs.abs());
            match rel {
                Relation::Le => v <= rhs + tol,
                Relation::Ge => v >= rhs - tol,
                Relation::Eq => (v - rhs).abs() <= tol,
            }
        });
        if feasible {
            let val: f64 = inst.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
            best = Some(best.map_or(val, |b: f64| b.max(val)));
        }
    }
    best
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Gaussian elimination with partial pivoting; `None` if singular.
pub fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let (top, rest) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for (k, row) in rest.iter_mut().enumerate() {
            let f = row[col] / pivot_row[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            b[col + 1 + k] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Numerical rank of a 2x2 matrix by one step of full-pivot elimination:
/// pivot on the largest entry and inspect the single remaining entry.
pub fn rank_2x2(p: [[f64; 2]; 2], eps: f64) -> usize {
    let (mut r, mut c) = (0, 0);
    for i in 0..2 {
        for j in 0..2 {
            if p[i][j].abs() > p[r][c].abs() {
                (r, c) = (i, j);
            }
        }
    }
    let m = p[r][c];
    if m.abs() <= eps {
        return 0;
    }
    let (r2, c2) = (1 - r, 1 - c);
    let rest = p[r2][c2] - p[r2][c] * p[r][c2] / m;
    // |rest| * |m| equals |det|; compare on the same scale as the criterion.
    if (rest * m).abs() <= eps {
        1
    } else {
        2
    }
}

/// `|<u ⊗ v|ψ>|^2` summed by hand over amplitudes of a two-qubit ket.
pub fn amplitude_prob(psi: &[Complex64], u: &[Complex64], v: &[Complex64]) -> f64 {
    let mut amp = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            amp += (u[i] * v[j]).conj() * psi[2 * i + j];
        }
    }
    amp.norm_sqr()
}

/// The qubit vector orthogonal to `u`.
pub fn qubit_perp(u: &[Complex64]) -> Vec<Complex64> {
    vec![-u[1].conj(), u[0].conj()]
}

/// Table of rank-one tests `{u, u⊥}` and `{v, v⊥}` on a two-qubit ket,
/// from amplitudes only.
pub fn amplitude_table(psi: &[Complex64], u: &[Complex64], v: &[Complex64]) -> [[f64; 2]; 2] {
    let us = [u.to_vec(), qubit_perp(u)];
    let vs = [v.to_vec(), qubit_perp(v)];
    let mut p = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            p[i][j] = amplitude_prob(psi, &us[i], &vs[j]);
        }
    }
    p
}
