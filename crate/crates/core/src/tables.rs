//! Binary joint tables, multi-test behaviors and the determinant criterion.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{validation, Result};
use crate::{EPS, NORMALIZATION_TOL, ROUNDING_SLACK};

/// Caller-declared provenance of the state a table was computed from.
///
/// A table by itself cannot tell whether the underlying joint state was
/// pure, so producers stamp this flag and [`spooky_verdict`] consumes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Purity {
    DeclaredPure,
    DeclaredMixed,
    #[default]
    Unknown,
}

impl Purity {
    pub fn from_pure(pure: bool) -> Self {
        if pure {
            Purity::DeclaredPure
        } else {
            Purity::DeclaredMixed
        }
    }
}

/// Joint outcome probabilities `p[i][j]` of a binary test on A (row `i`)
/// and a binary test on B (column `j`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointTable {
    p: [[f64; 2]; 2],
    purity: Purity,
}

impl JointTable {
    /// Validates and normalizes a table.
    ///
    /// Entries in `[-EPS, 0)` are clamped to zero, the sum must be within
    /// `NORMALIZATION_TOL` of one, and the table is then renormalized.
    pub fn new(p: [[f64; 2]; 2], purity: Purity) -> Result<Self> {
        let mut p = p;
        for (i, row) in p.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                if !v.is_finite() {
                    return Err(validation(format!("entry p{i}{j} is not finite")));
                }
                if *v < -EPS || *v > 1.0 + EPS {
                    return Err(validation(format!("entry p{i}{j} = {v} outside [0, 1]")));
                }
                if *v < 0.0 {
                    *v = 0.0;
                }
            }
        }
        let sum: f64 = p.iter().flatten().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(validation(format!("entries sum to {sum}, expected 1")));
        }
        if (sum - 1.0).abs() > ROUNDING_SLACK {
            for v in p.iter_mut().flatten() {
                *v /= sum;
            }
        }
        Ok(JointTable { p, purity })
    }

    /// The product table `p[i][j] = q[i] * r[j]`.
    pub fn from_product(q: [f64; 2], r: [f64; 2], purity: Purity) -> Result<Self> {
        Self::new(
            [[q[0] * r[0], q[0] * r[1]], [q[1] * r[0], q[1] * r[1]]],
            purity,
        )
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i][j]
    }

    pub fn purity(&self) -> Purity {
        self.purity
    }

    pub fn with_purity(mut self, purity: Purity) -> Self {
        self.purity = purity;
        self
    }

    /// Marginal distribution of A's outcomes, `q_i = sum_j p_ij`.
    pub fn row_marginals(&self) -> [f64; 2] {
        [self.p[0][0] + self.p[0][1], self.p[1][0] + self.p[1][1]]
    }

    /// Marginal distribution of B's outcomes, `r_j = sum_i p_ij`.
    pub fn col_marginals(&self) -> [f64; 2] {
        [self.p[0][0] + self.p[1][0], self.p[0][1] + self.p[1][1]]
    }

    pub fn transpose(&self) -> Self {
        let p = self.p;
        JointTable {
            p: [[p[0][0], p[1][0]], [p[0][1], p[1][1]]],
            purity: self.purity,
        }
    }

    /// Relabels B's outcomes `0 <-> 1`.
    pub fn swap_b_outcomes(&self) -> Self {
        let p = self.p;
        JointTable {
            p: [[p[0][1], p[0][0]], [p[1][1], p[1][0]]],
            purity: self.purity,
        }
    }

    /// Relabels A's outcomes `0 <-> 1`.
    pub fn swap_a_outcomes(&self) -> Self {
        let p = self.p;
        JointTable {
            p: [p[1], p[0]],
            purity: self.purity,
        }
    }

    pub fn determinant(&self) -> f64 {
        spooky_determinant(self)
    }

    /// The two-party, one-test-each behavior with this table as its law.
    pub fn to_behavior(&self) -> Behavior {
        let shape = BehaviorShape::binary_pair();
        let mut prob = BTreeMap::new();
        prob.insert(
            vec![0, 0],
            vec![self.p[0][0], self.p[0][1], self.p[1][0], self.p[1][1]],
        );
        Behavior { shape, prob }
    }

    /// Reads a table back from a single-test binary behavior.
    pub fn from_behavior(b: &Behavior, purity: Purity) -> Result<Self> {
        let s = b.shape();
        if s.num_parties() != 2
            || s.tests(0).len() != 1
            || s.tests(1).len() != 1
            || s.outcome_counts(0)[0] != 2
            || s.outcome_counts(1)[0] != 2
        {
            return Err(validation(
                "behavior is not a single binary test per party on two parties",
            ));
        }
        let d = b.distribution(&[0, 0]);
        Self::new([[d[0], d[1]], [d[2], d[3]]], purity)
    }
}

/// `p00 * p11 - p01 * p10`.
pub fn spooky_determinant(t: &JointTable) -> f64 {
    t.p[0][0] * t.p[1][1] - t.p[0][1] * t.p[1][0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpookyVerdict {
    /// Non-factorized table on a declared-pure state.
    Spooky,
    /// The table factorizes; no violation of outcome independence.
    NotSpookyWitnessed,
    /// Non-factorized, but the state is not known to be pure.
    Inconclusive,
}

pub fn spooky_verdict(t: &JointTable) -> SpookyVerdict {
    spooky_verdict_with_tol(t, EPS)
}

pub fn spooky_verdict_with_tol(t: &JointTable, eps: f64) -> SpookyVerdict {
    if spooky_determinant(t).abs() <= eps {
        SpookyVerdict::NotSpookyWitnessed
    } else if t.purity == Purity::DeclaredPure {
        SpookyVerdict::Spooky
    } else {
        SpookyVerdict::Inconclusive
    }
}

/// Marginals `(q, r)` with `p_ij = q_i r_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factorization {
    pub q: [f64; 2],
    pub r: [f64; 2],
}

pub fn factorize(t: &JointTable) -> Option<Factorization> {
    factorize_with_tol(t, EPS)
}

/// For a 2x2 table every entry satisfies `p_ij - q_i r_j = ±det`, so the
/// entrywise test and the determinant test coincide.
pub fn factorize_with_tol(t: &JointTable, eps: f64) -> Option<Factorization> {
    if spooky_determinant(t).abs() > eps {
        return None;
    }
    Some(Factorization {
        q: t.row_marginals(),
        r: t.col_marginals(),
    })
}

/// Party, test and outcome structure shared by a behavior and every
/// conditional of a hidden-variable model over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehaviorShape {
    parties: Vec<String>,
    tests: Vec<Vec<String>>,
    outcomes: Vec<Vec<usize>>,
}

impl BehaviorShape {
    pub fn new(
        parties: Vec<String>,
        tests: Vec<Vec<String>>,
        outcomes: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if parties.is_empty() {
            return Err(validation("behavior needs at least one party"));
        }
        if tests.len() != parties.len() || outcomes.len() != parties.len() {
            return Err(validation("tests/outcomes must be given for every party"));
        }
        for (k, party) in parties.iter().enumerate() {
            if parties[..k].contains(party) {
                return Err(validation(format!("duplicate party label {party:?}")));
            }
            if tests[k].is_empty() {
                return Err(validation(format!("party {party:?} has no tests")));
            }
            if outcomes[k].len() != tests[k].len() {
                return Err(validation(format!(
                    "party {party:?}: outcome counts do not match its tests"
                )));
            }
            for (x, test) in tests[k].iter().enumerate() {
                if tests[k][..x].contains(test) {
                    return Err(validation(format!("duplicate test label {test:?}")));
                }
                if outcomes[k][x] == 0 {
                    return Err(validation(format!("test {test:?} has no outcomes")));
                }
            }
        }
        Ok(BehaviorShape {
            parties,
            tests,
            outcomes,
        })
    }

    /// Parties `A`, `B` with one binary test each, labelled `a` and `b`.
    pub fn binary_pair() -> Self {
        BehaviorShape {
            parties: vec!["A".to_string(), "B".to_string()],
            tests: vec![vec!["a".to_string()], vec!["b".to_string()]],
            outcomes: vec![vec![2], vec![2]],
        }
    }

    pub fn num_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn parties(&self) -> &[String] {
        &self.parties
    }

    pub fn tests(&self, party: usize) -> &[String] {
        &self.tests[party]
    }

    pub fn outcome_counts(&self, party: usize) -> &[usize] {
        &self.outcomes[party]
    }

    pub fn party_index(&self, label: &str) -> Option<usize> {
        self.parties.iter().position(|p| p == label)
    }

    pub fn test_index(&self, party: usize, label: &str) -> Option<usize> {
        self.tests[party].iter().position(|t| t == label)
    }

    /// All test tuples in lexicographic order (last party varies fastest).
    pub fn test_tuples(&self) -> Vec<Vec<usize>> {
        let radices: Vec<usize> = self.tests.iter().map(Vec::len).collect();
        mixed_radix(&radices)
    }

    pub fn outcome_radices(&self, tests: &[usize]) -> Vec<usize> {
        tests
            .iter()
            .enumerate()
            .map(|(k, &x)| self.outcomes[k][x])
            .collect()
    }

    pub fn num_outcomes(&self, tests: &[usize]) -> usize {
        self.outcome_radices(tests).iter().product()
    }

    /// All outcome tuples for a test tuple, in the same order as the dense
    /// distribution returned by [`Behavior::distribution`].
    pub fn outcome_tuples(&self, tests: &[usize]) -> Vec<Vec<usize>> {
        mixed_radix(&self.outcome_radices(tests))
    }

    pub fn outcome_index(&self, tests: &[usize], outcomes: &[usize]) -> usize {
        let radices = self.outcome_radices(tests);
        outcomes
            .iter()
            .zip(&radices)
            .fold(0, |acc, (&o, &n)| acc * n + o)
    }

    fn is_valid_test_tuple(&self, tests: &[usize]) -> bool {
        tests.len() == self.parties.len()
            && tests
                .iter()
                .enumerate()
                .all(|(k, &x)| x < self.tests[k].len())
    }
}

pub(crate) fn mixed_radix(radices: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = radices.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0; radices.len()];
    for _ in 0..total {
        out.push(cur.clone());
        for k in (0..radices.len()).rev() {
            cur[k] += 1;
            if cur[k] < radices[k] {
                break;
            }
            cur[k] = 0;
        }
    }
    out
}

/// A conditional probability family `Pr[outcomes | tests]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    shape: BehaviorShape,
    prob: BTreeMap<Vec<usize>, Vec<f64>>,
}

impl Behavior {
    /// Validates and renormalizes per test tuple. Every test tuple of the
    /// shape must be present with a dense outcome distribution.
    pub fn new(shape: BehaviorShape, prob: BTreeMap<Vec<usize>, Vec<f64>>) -> Result<Self> {
        let mut prob = prob;
        for key in prob.keys() {
            if !shape.is_valid_test_tuple(key) {
                return Err(validation(format!("unknown test tuple {key:?}")));
            }
        }
        for tests in shape.test_tuples() {
            let n = shape.num_outcomes(&tests);
            let dist = prob
                .get_mut(&tests)
                .ok_or_else(|| validation(format!("missing test tuple {tests:?}")))?;
            if dist.len() != n {
                return Err(validation(format!(
                    "test tuple {tests:?}: expected {n} outcome probabilities, got {}",
                    dist.len()
                )));
            }
            normalize_distribution(dist)
                .map_err(|e| validation(format!("test tuple {tests:?}: {e}")))?;
        }
        Ok(Behavior { shape, prob })
    }

    /// Builds a behavior by evaluating `f(tests, outcomes)` everywhere.
    pub fn from_fn(
        shape: BehaviorShape,
        mut f: impl FnMut(&[usize], &[usize]) -> f64,
    ) -> Result<Self> {
        let mut prob = BTreeMap::new();
        for tests in shape.test_tuples() {
            let dist = shape
                .outcome_tuples(&tests)
                .iter()
                .map(|o| f(&tests, o))
                .collect();
            prob.insert(tests, dist);
        }
        Self::new(shape, prob)
    }

    /// Skips validation; callers guarantee every distribution is already a
    /// normalized convex combination of valid ones.
    pub(crate) fn from_parts(shape: BehaviorShape, prob: BTreeMap<Vec<usize>, Vec<f64>>) -> Self {
        Behavior { shape, prob }
    }

    pub fn shape(&self) -> &BehaviorShape {
        &self.shape
    }

    /// Dense outcome distribution for a test tuple.
    ///
    /// # Panics
    /// If `tests` is not a test tuple of the shape.
    pub fn distribution(&self, tests: &[usize]) -> &[f64] {
        &self.prob[tests]
    }

    pub fn prob(&self, tests: &[usize], outcomes: &[usize]) -> f64 {
        self.prob[tests][self.shape.outcome_index(tests, outcomes)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &Vec<f64>)> {
        self.prob.iter()
    }

    /// Marginal distribution of one party's outcomes under a test tuple.
    pub fn marginal(&self, party: usize, tests: &[usize]) -> Vec<f64> {
        let mut m = vec![0.0; self.shape.outcomes[party][tests[party]]];
        for (o, p) in self
            .shape
            .outcome_tuples(tests)
            .iter()
            .zip(&self.prob[tests])
        {
            m[o[party]] += p;
        }
        m
    }

    /// Largest entrywise difference to another behavior of the same shape.
    pub fn max_abs_diff(&self, other: &Behavior) -> Option<f64> {
        if self.shape != other.shape {
            return None;
        }
        let mut worst: f64 = 0.0;
        for (k, d) in &self.prob {
            for (a, b) in d.iter().zip(&other.prob[k]) {
                worst = worst.max((a - b).abs());
            }
        }
        Some(worst)
    }

    /// True if the outcome law is the same for every test tuple.
    pub fn is_test_independent(&self, eps: f64) -> bool {
        let mut it = self.prob.values();
        let Some(first) = it.next() else {
            return true;
        };
        it.all(|d| d.len() == first.len() && d.iter().zip(first).all(|(a, b)| (a - b).abs() <= eps))
    }
}

fn normalize_distribution(dist: &mut [f64]) -> core::result::Result<(), String> {
    for v in dist.iter_mut() {
        if !v.is_finite() {
            return Err("non-finite probability".into());
        }
        if *v < -EPS {
            return Err(format!("negative probability {v}"));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let sum: f64 = dist.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(format!("probabilities sum to {sum}"));
    }
    if (sum - 1.0).abs() > ROUNDING_SLACK {
        for v in dist.iter_mut() {
            *v /= sum;
        }
    }
    Ok(())
}

/// One party's marginal changes with another party's test choice.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalingViolation {
    pub party: usize,
    pub reference: Vec<usize>,
    pub tests: Vec<usize>,
    pub deviation: f64,
}

pub fn check_no_signaling(b: &Behavior) -> Vec<SignalingViolation> {
    check_no_signaling_with_tol(b, EPS)
}

/// Compares, for every party, its marginal under each test tuple with the
/// marginal under the first tuple that shares its own test.
pub fn check_no_signaling_with_tol(b: &Behavior, eps: f64) -> Vec<SignalingViolation> {
    let mut out = Vec::new();
    let tuples = b.shape.test_tuples();
    for party in 0..b.shape.num_parties() {
        let mut reference: BTreeMap<usize, (&Vec<usize>, Vec<f64>)> = BTreeMap::new();
        for tests in &tuples {
            let m = b.marginal(party, tests);
            match reference.get(&tests[party]) {
                None => {
                    reference.insert(tests[party], (tests, m));
                }
                Some((ref_tests, ref_m)) => {
                    let deviation = m
                        .iter()
                        .zip(ref_m)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    if deviation > eps {
                        out.push(SignalingViolation {
                            party,
                            reference: (*ref_tests).clone(),
                            tests: tests.clone(),
                            deviation,
                        });
                    }
                }
            }
        }
    }
    out
}

/// A point `(p00, p01, p10)` of the probability tetrahedron together with
/// its signed distance-like residual `p00 p11 - p01 p10`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParaboloidPoint {
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
    pub residual: f64,
}

impl ParaboloidPoint {
    pub fn new(p00: f64, p01: f64, p10: f64) -> Self {
        let p11 = 1.0 - p00 - p01 - p10;
        Self::with_p11(p00, p01, p10, p11)
    }

    fn with_p11(p00: f64, p01: f64, p10: f64, p11: f64) -> Self {
        ParaboloidPoint {
            p00,
            p01,
            p10,
            p11,
            residual: p00 * p11 - p01 * p10,
        }
    }

    pub fn in_tetrahedron(&self, eps: f64) -> bool {
        [self.p00, self.p01, self.p10, self.p11]
            .iter()
            .all(|&v| v >= -eps)
    }

    pub fn on_surface(&self, eps: f64) -> bool {
        self.residual.abs() <= eps
    }

    pub fn to_table(&self, purity: Purity) -> Result<JointTable> {
        JointTable::new([[self.p00, self.p01], [self.p10, self.p11]], purity)
    }
}

/// Samples the tetrahedron on the grid `(i, j, k) / grid_n`, `i + j + k <=
/// grid_n`, emitting every grid point with its residual. The centroid
/// `(1/4, 1/4, 1/4)` is appended when the grid misses it.
pub fn paraboloid_sample(grid_n: usize) -> Result<Vec<ParaboloidPoint>> {
    if grid_n < 2 {
        return Err(validation(format!(
            "grid size must be at least 2, got {grid_n}"
        )));
    }
    let n = grid_n as f64;
    let mut out = Vec::new();
    for i in 0..=grid_n {
        for j in 0..=grid_n - i {
            for k in 0..=grid_n - i - j {
                let l = grid_n - i - j - k;
                out.push(ParaboloidPoint::with_p11(
                    i as f64 / n,
                    j as f64 / n,
                    k as f64 / n,
                    l as f64 / n,
                ));
            }
        }
    }
    if !grid_n.is_multiple_of(4) {
        out.push(ParaboloidPoint::with_p11(0.25, 0.25, 0.25, 0.25));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(p: [[f64; 2]; 2]) -> JointTable {
        JointTable::new(p, Purity::Unknown).unwrap()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(table([[0.5, 0.0], [0.0, 0.5]]).determinant(), 0.25);
        assert!(table([[0.06, 0.14], [0.24, 0.56]]).determinant().abs() < 1e-15);
        assert_eq!(table([[0.5, 0.25], [0.0, 0.25]]).determinant(), 0.125);
    }

    #[test]
    fn verdicts() {
        let cat = [[0.5, 0.0], [0.0, 0.5]];
        let pure = JointTable::new(cat, Purity::DeclaredPure).unwrap();
        let mixed = JointTable::new(cat, Purity::DeclaredMixed).unwrap();
        assert_eq!(spooky_verdict(&pure), SpookyVerdict::Spooky);
        assert_eq!(spooky_verdict(&mixed), SpookyVerdict::Inconclusive);
        let product =
            JointTable::from_product([0.2, 0.8], [0.3, 0.7], Purity::DeclaredPure).unwrap();
        assert_eq!(spooky_verdict(&product), SpookyVerdict::NotSpookyWitnessed);
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(&table([[0.06, 0.14], [0.24, 0.56]])).unwrap();
        for (got, want) in f.q.iter().chain(&f.r).zip([0.2, 0.8, 0.3, 0.7]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(factorize(&table([[0.5, 0.0], [0.0, 0.5]])).is_none());
        let u = factorize(&table([[0.25; 2]; 2])).unwrap();
        assert_eq!(u.q, [0.5, 0.5]);
        assert_eq!(u.r, [0.5, 0.5]);
    }

    #[test]
    fn table_validation() {
        assert!(JointTable::new([[0.5, 0.5], [0.5, 0.0]], Purity::Unknown).is_err());
        assert!(JointTable::new([[-0.1, 0.6], [0.25, 0.25]], Purity::Unknown).is_err());
        assert!(JointTable::new([[f64::NAN, 0.5], [0.25, 0.25]], Purity::Unknown).is_err());
        let t = JointTable::new([[-5e-10, 0.5], [0.25, 0.25 + 5e-10]], Purity::Unknown).unwrap();
        assert_eq!(t.get(0, 0), 0.0);
        let s: f64 = t.entries().iter().flatten().sum();
        assert!((s - 1.0).abs() < 1e-15);
        // Within the input tolerance, renormalized.
        let t = JointTable::new([[0.5, 0.5], [1e-7, 0.0]], Purity::Unknown).unwrap();
        assert!((t.entries().iter().flatten().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn relabelings() {
        let t = table([[0.4, 0.1], [0.2, 0.3]]);
        assert_eq!(t.transpose().determinant(), t.determinant());
        assert_eq!(t.swap_b_outcomes().determinant(), -t.determinant());
        assert_eq!(t.swap_a_outcomes().determinant(), -t.determinant());
        let both = t.swap_a_outcomes().swap_b_outcomes();
        assert_eq!(both.determinant(), t.determinant());
    }

    fn pr_box() -> Behavior {
        let shape = BehaviorShape::new(
            vec!["A".into(), "B".into()],
            vec![
                vec!["x0".into(), "x1".into()],
                vec!["y0".into(), "y1".into()],
            ],
            vec![vec![2, 2], vec![2, 2]],
        )
        .unwrap();
        Behavior::from_fn(shape, |x, o| {
            if (o[0] ^ o[1]) == (x[0] & x[1]) {
                0.5
            } else {
                0.0
            }
        })
        .unwrap()
    }

    #[test]
    fn pr_box_is_no_signaling() {
        let b = pr_box();
        // Direct marginal sums: every marginal is uniform.
        for x in b.shape().test_tuples() {
            for party in 0..2 {
                assert_eq!(b.marginal(party, &x), vec![0.5, 0.5]);
            }
        }
        assert!(check_no_signaling(&b).is_empty());
    }

    #[test]
    fn constructed_signaling_is_reported() {
        let shape = BehaviorShape::new(
            vec!["A".into(), "B".into()],
            vec![vec!["a".into()], vec!["b0".into(), "b1".into()]],
            vec![vec![2], vec![2, 2]],
        )
        .unwrap();
        let b = Behavior::from_fn(shape, |x, o| {
            let a = if x[1] == 0 { [0.6, 0.4] } else { [0.5, 0.5] };
            a[o[0]] * 0.5
        })
        .unwrap();
        let v = check_no_signaling(&b);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].party, 0);
        assert!((v[0].deviation - 0.1).abs() < 1e-12);
    }

    #[test]
    fn behavior_validation() {
        let shape = BehaviorShape::binary_pair();
        let mut prob = BTreeMap::new();
        prob.insert(vec![0, 0], vec![0.5, 0.5, 0.5, 0.0]);
        assert!(Behavior::new(shape.clone(), prob).is_err());
        assert!(Behavior::new(shape.clone(), BTreeMap::new()).is_err());
        let mut prob = BTreeMap::new();
        prob.insert(vec![0, 0], vec![0.5, 0.5]);
        assert!(Behavior::new(shape, prob).is_err());
        assert!(BehaviorShape::new(
            vec!["A".into(), "A".into()],
            vec![vec!["a".into()], vec!["b".into()]],
            vec![vec![2], vec![2]],
        )
        .is_err());
    }

    #[test]
    fn table_behavior_round_trip() {
        let t = table([[0.1, 0.2], [0.3, 0.4]]);
        let b = t.to_behavior();
        assert_eq!(b.prob(&[0, 0], &[1, 0]), 0.3);
        assert_eq!(JointTable::from_behavior(&b, Purity::Unknown).unwrap(), t);
    }

    #[test]
    fn paraboloid_examples() {
        assert_eq!(ParaboloidPoint::new(1.0, 0.0, 0.0).residual, 0.0);
        assert_eq!(ParaboloidPoint::new(0.25, 0.25, 0.25).residual, 0.0);
        assert_eq!(ParaboloidPoint::new(0.5, 0.0, 0.0).residual, 0.25);
        assert!(paraboloid_sample(1).is_err());
    }

    #[test]
    fn paraboloid_grid_contains_vertices_and_center() {
        for n in [2, 4, 7, 50] {
            let pts = paraboloid_sample(n).unwrap();
            let count = (n + 1) * (n + 2) * (n + 3) / 6 + usize::from(n % 4 != 0);
            assert_eq!(pts.len(), count);
            let has = |a: f64, b: f64, c: f64| {
                pts.iter()
                    .any(|p| p.p00 == a && p.p01 == b && p.p10 == c && p.residual == 0.0)
            };
            assert!(has(1.0, 0.0, 0.0));
            assert!(has(0.0, 1.0, 0.0));
            assert!(has(0.0, 0.0, 1.0));
            assert!(has(0.0, 0.0, 0.0));
            assert!(has(0.25, 0.25, 0.25));
            assert!(pts.iter().all(|p| p.in_tetrahedron(0.0)));
        }
    }

    #[test]
    fn surface_points_are_not_spooky() {
        for p in paraboloid_sample(12).unwrap() {
            if p.on_surface(EPS) {
                let t = p.to_table(Purity::DeclaredPure).unwrap();
                assert_eq!(spooky_verdict(&t), SpookyVerdict::NotSpookyWitnessed);
            }
        }
    }
}
