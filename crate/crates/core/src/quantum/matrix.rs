//! Small dense complex matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{validation, Result};

pub type C64 = Complex64;

/// A square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    /// Builds a matrix from separate real and imaginary row lists.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let n = re.len();
        if im.len() != n || re.iter().chain(im).any(|row| row.len() != n) {
            return Err(validation(format!("matrix parts must both be {n}x{n}")));
        }
        Ok(Self::from_fn(n, |i, j| C64::new(re[i][j], im[i][j])))
    }

    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self> {
        let zero: Vec<Vec<f64>> = rows.iter().map(|r| vec![0.0; r.len()]).collect();
        Self::from_parts(rows, &zero)
    }

    /// `|psi><psi|` (not normalized).
    pub fn outer(psi: &[C64]) -> Self {
        Self::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    pub fn real_parts(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).re).collect())
            .collect()
    }

    pub fn imag_parts(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).im).collect())
            .collect()
    }

    pub fn scale(&self, f: f64) -> Self {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * f).collect(),
        }
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `Re tr(self * other)`, the Born pairing for Hermitian arguments.
    pub fn pairing(&self, other: &CMatrix) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for k in 0..n {
                s += (self.data[i * n + k] * other.data[k * n + i]).re;
            }
        }
        s
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> Self {
        let (a, b) = (self.n, other.n);
        Self::from_fn(a * b, |r, c| {
            self.get(r / b, c / b) * other.get(r % b, c % b)
        })
    }

    /// Traces out the second factor of a `d_a * d_b` dimensional operator.
    pub fn partial_trace_b(&self, d_a: usize, d_b: usize) -> Result<Self> {
        self.check_bipartite(d_a, d_b)?;
        Ok(Self::from_fn(d_a, |i, j| {
            (0..d_b).map(|k| self.get(i * d_b + k, j * d_b + k)).sum()
        }))
    }

    /// Traces out the first factor of a `d_a * d_b` dimensional operator.
    pub fn partial_trace_a(&self, d_a: usize, d_b: usize) -> Result<Self> {
        self.check_bipartite(d_a, d_b)?;
        Ok(Self::from_fn(d_b, |i, j| {
            (0..d_a).map(|k| self.get(k * d_b + i, k * d_b + j)).sum()
        }))
    }

    fn check_bipartite(&self, d_a: usize, d_b: usize) -> Result<()> {
        if d_a * d_b != self.n {
            return Err(validation(format!(
                "operator of dimension {} is not {d_a}x{d_b} bipartite",
                self.n
            )));
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Eigen-decomposition of a Hermitian matrix: eigenvalues in ascending
    /// order with orthonormal eigenvectors.
    ///
    /// Works on the real symmetric embedding `[[A, -B], [B, A]]` of
    /// `A + iB`, whose spectrum is that of the input with every eigenvalue
    /// doubled.
    pub fn eigh(&self) -> (Vec<f64>, Vec<Vec<C64>>) {
        let n = self.n;
        let m = 2 * n;
        let mut a = vec![0.0; m * m];
        for i in 0..n {
            for j in 0..n {
                let z = self.get(i, j);
                a[i * m + j] = z.re;
                a[(i + n) * m + (j + n)] = z.re;
                a[i * m + (j + n)] = -z.im;
                a[(i + n) * m + j] = z.im;
            }
        }
        let (vals, vecs) = jacobi_symmetric(a, m);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&x, &y| vals[x].total_cmp(&vals[y]));

        // Eigenvalues come in pairs; each cluster of equal eigenvalues
        // contributes half its size of complex directions. Pick greedily the
        // candidate with the largest component outside what is collected.
        let spread = vals.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        let mut out_vals = Vec::with_capacity(n);
        let mut out_vecs: Vec<Vec<C64>> = Vec::with_capacity(n);
        let mut start = 0;
        while start < m {
            let mut end = start + 1;
            while end < m && vals[order[end]] - vals[order[end - 1]] <= 1e-10 * spread {
                end += 1;
            }
            let need = (end - start).div_ceil(2);
            let mut candidates: Vec<(f64, Vec<C64>)> = order[start..end]
                .iter()
                .map(|&k| {
                    let x = (0..n)
                        .map(|i| C64::new(vecs[i * m + k], vecs[(i + n) * m + k]))
                        .collect();
                    (vals[k], x)
                })
                .collect();
            for _ in 0..need {
                if out_vecs.len() == n {
                    break;
                }
                let best = candidates
                    .iter()
                    .enumerate()
                    .map(|(idx, (_, x))| {
                        let mut r = x.clone();
                        for u in &out_vecs {
                            let c = inner(u, &r);
                            for (ri, ui) in r.iter_mut().zip(u) {
                                *ri -= c * ui;
                            }
                        }
                        let norm = libm::sqrt(r.iter().map(|z| z.norm_sqr()).sum());
                        (idx, norm, r)
                    })
                    .max_by(|a, b| a.1.total_cmp(&b.1));
                let Some((idx, norm, mut r)) = best else {
                    break;
                };
                if norm < 1e-6 {
                    break;
                }
                r.iter_mut().for_each(|z| *z /= norm);
                out_vals.push(candidates[idx].0);
                out_vecs.push(r);
                candidates.swap_remove(idx);
            }
            start = end;
        }
        (out_vals, out_vecs)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigh().0
    }
}

/// `<u|v>`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn normalize(v: &[C64]) -> Vec<C64> {
    let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum());
    v.iter().map(|z| z / norm).collect()
}

pub fn kron_vec(u: &[C64], v: &[C64]) -> Vec<C64> {
    u.iter()
        .flat_map(|a| v.iter().map(move |b| a * b))
        .collect()
}

/// Cyclic Jacobi rotations on a dense symmetric `m x m` matrix. Returns
/// the eigenvalues and the eigenvectors as columns of a row-major matrix.
fn jacobi_symmetric(mut a: Vec<f64>, m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; m * m];
    for i in 0..m {
        v[i * m + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * m + j] * a[i * m + j])
            .sum();
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
                for k in 0..m {
                    let vkp = v[k * m + p];
                    let vkq = v[k * m + q];
                    v[k * m + p] = c * vkp - s * vkq;
                    v[k * m + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..m).map(|i| a[i * m + i]).collect(), v)
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n);
        CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n);
        CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        CMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.data[i * n + k] * rhs.data[k * n + j])
                .sum()
        })
    }
}
