//! Two classical bits: joint states are distributions over `(x, y)`,
//! binary tests are response functions `a0(x) in [0, 1]`.

use alloc::format;

use crate::error::{validation, Result};
use crate::tables::{JointTable, Purity};
use crate::{EPS, NORMALIZATION_TOL};

/// Table of the tests `{a0, 1 - a0}` on the first bit and `{b0, 1 - b0}`
/// on the second, for the joint distribution `state[x][y]`.
///
/// The state is declared pure exactly when it is a point mass, i.e. a
/// vertex of the joint simplex.
pub fn bit_pair_table(state: [[f64; 2]; 2], a0: [f64; 2], b0: [f64; 2]) -> Result<JointTable> {
    for v in state.iter().flatten() {
        if !(-EPS..=1.0 + EPS).contains(v) {
            return Err(validation(format!("state weight {v} outside [0, 1]")));
        }
    }
    let total: f64 = state.iter().flatten().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(validation(format!("state weights sum to {total}")));
    }
    for v in a0.iter().chain(&b0) {
        if !(-EPS..=1.0 + EPS).contains(v) {
            return Err(validation(format!("effect value {v} outside [0, 1]")));
        }
    }
    let a = [a0, [1.0 - a0[0], 1.0 - a0[1]]];
    let b = [b0, [1.0 - b0[0], 1.0 - b0[1]]];
    let mut p = [[0.0; 2]; 2];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            for x in 0..2 {
                for y in 0..2 {
                    p[i][j] += state[x][y] * ai[x] * bj[y];
                }
            }
        }
    }
    let pure = state.iter().flatten().any(|&w| (w - 1.0).abs() <= EPS);
    JointTable::new(p, Purity::from_pure(pure))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::{spooky_verdict, SpookyVerdict};

    #[test]
    fn correlated_mixture_is_inconclusive() {
        let t = bit_pair_table([[0.5, 0.0], [0.0, 0.5]], [1.0, 0.0], [1.0, 0.0]).unwrap();
        assert_eq!(t.determinant(), 0.25);
        assert_eq!(t.purity(), Purity::DeclaredMixed);
        assert_eq!(spooky_verdict(&t), SpookyVerdict::Inconclusive);
    }

    #[test]
    fn point_masses_factorize() {
        let t = bit_pair_table([[0.0, 1.0], [0.0, 0.0]], [0.3, 0.8], [0.1, 0.6]).unwrap();
        assert_eq!(t.purity(), Purity::DeclaredPure);
        assert!(t.determinant().abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(bit_pair_table([[0.5, 0.0], [0.0, 0.0]], [1.0, 0.0], [1.0, 0.0]).is_err());
        assert!(bit_pair_table([[1.0, 0.0], [0.0, 0.0]], [1.5, 0.0], [1.0, 0.0]).is_err());
    }
}
