//! Hidden-variable refinements of behaviors.
//!
//! A model assigns each hidden label `λ` a prior weight (possibly depending
//! on the chosen tests) and a conditional behavior. Its reconstruction is
//! the prior-weighted mixture of the conditionals.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{validation, Error, Result};
use crate::tables::{
    check_no_signaling_with_tol, mixed_radix, Behavior, BehaviorShape, JointTable,
};
use crate::{EPS, NORMALIZATION_TOL, ROUNDING_SLACK};

pub const MAX_LAMBDAS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Prior {
    /// One weight vector shared by every test tuple.
    Any(Vec<f64>),
    /// A weight vector per test tuple.
    PerTests(BTreeMap<Vec<usize>, Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HvtModel {
    lambdas: Vec<String>,
    prior: Prior,
    conditionals: Vec<Behavior>,
}

impl HvtModel {
    pub fn new(lambdas: Vec<String>, prior: Prior, conditionals: Vec<Behavior>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(validation("model needs at least one hidden label"));
        }
        if lambdas.len() > MAX_LAMBDAS {
            return Err(Error::Size {
                what: "hidden labels",
                got: lambdas.len(),
                limit: MAX_LAMBDAS,
            });
        }
        for (i, l) in lambdas.iter().enumerate() {
            if lambdas[..i].contains(l) {
                return Err(validation(format!("duplicate hidden label {l:?}")));
            }
        }
        if conditionals.len() != lambdas.len() {
            return Err(validation(format!(
                "{} hidden labels but {} conditionals",
                lambdas.len(),
                conditionals.len()
            )));
        }
        let shape = conditionals[0].shape();
        if conditionals.iter().any(|c| c.shape() != shape) {
            return Err(validation(
                "conditionals do not share one party/test/outcome structure",
            ));
        }
        let n = lambdas.len();
        let prior = match prior {
            Prior::Any(mut w) => {
                normalize_weights(&mut w, n).map_err(validation)?;
                Prior::Any(w)
            }
            Prior::PerTests(mut map) => {
                let tuples = shape.test_tuples();
                if let Some(k) = map.keys().find(|k| !tuples.contains(k)) {
                    return Err(validation(format!("prior for unknown test tuple {k:?}")));
                }
                for x in &tuples {
                    let w = map
                        .get_mut(x)
                        .ok_or_else(|| validation(format!("no prior for test tuple {x:?}")))?;
                    normalize_weights(w, n)
                        .map_err(|e| validation(format!("prior for {x:?}: {e}")))?;
                }
                Prior::PerTests(map)
            }
        };
        Ok(HvtModel {
            lambdas,
            prior,
            conditionals,
        })
    }

    pub fn lambdas(&self) -> &[String] {
        &self.lambdas
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn conditionals(&self) -> &[Behavior] {
        &self.conditionals
    }

    pub fn shape(&self) -> &BehaviorShape {
        self.conditionals[0].shape()
    }

    /// Prior weights for a test tuple.
    pub fn prior_for(&self, tests: &[usize]) -> &[f64] {
        match &self.prior {
            Prior::Any(w) => w,
            Prior::PerTests(map) => &map[tests],
        }
    }
}

fn normalize_weights(w: &mut [f64], n: usize) -> core::result::Result<(), String> {
    if w.len() != n {
        return Err(format!("expected {n} weights, got {}", w.len()));
    }
    for v in w.iter_mut() {
        if !v.is_finite() || *v < -EPS {
            return Err(format!("invalid weight {v}"));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let sum: f64 = w.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(format!("weights sum to {sum}"));
    }
    if (sum - 1.0).abs() > ROUNDING_SLACK {
        w.iter_mut().for_each(|v| *v /= sum);
    }
    Ok(())
}

/// The prior-weighted mixture of the conditionals, per test tuple.
pub fn reconstruct(m: &HvtModel) -> Behavior {
    let shape = m.shape().clone();
    let mut prob = BTreeMap::new();
    for x in shape.test_tuples() {
        let mut acc = vec![0.0; shape.num_outcomes(&x)];
        for (w, c) in m.prior_for(&x).iter().zip(&m.conditionals) {
            for (a, p) in acc.iter_mut().zip(c.distribution(&x)) {
                *a += w * p;
            }
        }
        prob.insert(x, acc);
    }
    Behavior::from_parts(shape, prob)
}

pub fn check_lambda_independence(m: &HvtModel) -> bool {
    check_lambda_independence_with_tol(m, EPS)
}

pub fn check_lambda_independence_with_tol(m: &HvtModel, eps: f64) -> bool {
    match &m.prior {
        Prior::Any(_) => true,
        Prior::PerTests(map) => {
            let mut it = map.values();
            let first = it.next().expect("validated prior is non-empty");
            it.all(|w| w.iter().zip(first).all(|(a, b)| (a - b).abs() <= eps))
        }
    }
}

pub fn check_parameter_independence(m: &HvtModel) -> bool {
    check_parameter_independence_with_tol(m, EPS)
}

pub fn check_parameter_independence_with_tol(m: &HvtModel, eps: f64) -> bool {
    m.conditionals
        .iter()
        .all(|c| check_no_signaling_with_tol(c, eps).is_empty())
}

/// Which formulation of outcome independence to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OiForm {
    /// The joint conditional equals the product of single-party marginals.
    Factorized,
    /// Conditioning one party on the others' outcomes leaves its marginal
    /// unchanged. Conditioning events of probability `<= eps` are skipped.
    Conditional,
}

pub fn check_outcome_independence(m: &HvtModel, form: OiForm) -> bool {
    check_outcome_independence_with_tol(m, form, EPS)
}

pub fn check_outcome_independence_with_tol(m: &HvtModel, form: OiForm, eps: f64) -> bool {
    m.conditionals.iter().all(|c| match form {
        OiForm::Factorized => behavior_factorizes(c, eps),
        OiForm::Conditional => behavior_conditionally_independent(c, eps),
    })
}

fn behavior_factorizes(b: &Behavior, eps: f64) -> bool {
    let shape = b.shape();
    let parties = shape.num_parties();
    shape.test_tuples().iter().all(|x| {
        let marginals: Vec<Vec<f64>> = (0..parties).map(|k| b.marginal(k, x)).collect();
        shape
            .outcome_tuples(x)
            .iter()
            .zip(b.distribution(x))
            .all(|(o, &p)| {
                let prod: f64 = o
                    .iter()
                    .enumerate()
                    .map(|(k, &ok)| marginals[k][ok])
                    .product();
                (p - prod).abs() <= eps
            })
    })
}

fn behavior_conditionally_independent(b: &Behavior, eps: f64) -> bool {
    let shape = b.shape();
    for x in shape.test_tuples() {
        let dist = b.distribution(&x);
        let radices = shape.outcome_radices(&x);
        for party in 0..shape.num_parties() {
            let marginal = b.marginal(party, &x);
            let mut others_radices = radices.clone();
            others_radices[party] = 1;
            for rest in mixed_radix(&others_radices) {
                let mut o = rest.clone();
                let mut joint = Vec::with_capacity(radices[party]);
                for v in 0..radices[party] {
                    o[party] = v;
                    joint.push(dist[shape.outcome_index(&x, &o)]);
                }
                let cond_prob: f64 = joint.iter().sum();
                if cond_prob <= eps {
                    continue;
                }
                if joint
                    .iter()
                    .zip(&marginal)
                    .any(|(p, m)| (p / cond_prob - m).abs() > eps)
                {
                    return false;
                }
            }
        }
    }
    true
}

/// Two hidden labels whose conditionals differ on an event that has
/// non-negligible probability under the first one.
#[derive(Debug, Clone, PartialEq)]
pub struct SignificanceWitness {
    pub lambda_a: usize,
    pub lambda_b: usize,
    pub tests: Vec<usize>,
    pub outcomes: Vec<usize>,
    pub value_a: f64,
    pub value_b: f64,
}

pub fn is_descriptively_significant(m: &HvtModel) -> Result<Option<SignificanceWitness>> {
    is_descriptively_significant_with_tol(m, EPS)
}

/// Exhaustive search over label pairs, test tuples and outcome tuples.
/// Requires lambda independence and parameter independence.
pub fn is_descriptively_significant_with_tol(
    m: &HvtModel,
    eps: f64,
) -> Result<Option<SignificanceWitness>> {
    if !check_lambda_independence_with_tol(m, eps) {
        return Err(Error::NotApplicable(
            "prior depends on the chosen tests".into(),
        ));
    }
    if !check_parameter_independence_with_tol(m, eps) {
        return Err(Error::NotApplicable("some conditional is signaling".into()));
    }
    let shape = m.shape();
    let n = m.lambdas.len();
    for x in shape.test_tuples() {
        let outcomes = shape.outcome_tuples(&x);
        for a in 0..n {
            let da = m.conditionals[a].distribution(&x);
            for b in (0..n).filter(|&b| b != a) {
                let db = m.conditionals[b].distribution(&x);
                for (idx, o) in outcomes.iter().enumerate() {
                    if da[idx] > eps && (da[idx] - db[idx]).abs() > eps {
                        return Ok(Some(SignificanceWitness {
                            lambda_a: a,
                            lambda_b: b,
                            tests: x,
                            outcomes: o.clone(),
                            value_a: da[idx],
                            value_b: db[idx],
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// The one-label model whose only conditional is `b` itself.
pub fn single_valued(b: &Behavior) -> HvtModel {
    HvtModel {
        lambdas: vec![String::from("λ0")],
        prior: Prior::Any(vec![1.0]),
        conditionals: vec![b.clone()],
    }
}

fn deterministic_pair(i: usize, j: usize) -> Behavior {
    let mut d = vec![0.0; 4];
    d[2 * i + j] = 1.0;
    let mut prob = BTreeMap::new();
    prob.insert(vec![0, 0], d);
    Behavior::from_parts(BehaviorShape::binary_pair(), prob)
}

/// Decomposes a single-test table into its deterministic product vertices
/// weighted by `p_ij`. Zero-weight vertices are dropped.
pub fn deterministic_local_model(t: &JointTable) -> HvtModel {
    let mut lambdas = Vec::new();
    let mut weights = Vec::new();
    let mut conditionals = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let p = t.get(i, j);
            if p > 0.0 {
                lambdas.push(format!("({i},{j})"));
                weights.push(p);
                conditionals.push(deterministic_pair(i, j));
            }
        }
    }
    HvtModel {
        lambdas,
        prior: Prior::Any(weights),
        conditionals,
    }
}

/// One hidden label per outcome tuple, each conditional deterministic,
/// with the behavior's own outcome law as a test-dependent prior.
///
/// Outcome tuples out of range for some test tuple (when outcome counts
/// differ between tests) are clamped to the last outcome there; their
/// prior weight under those tests is zero.
pub fn build_deterministic_signaling(b: &Behavior) -> HvtModel {
    let shape = b.shape().clone();
    let parties = shape.num_parties();
    let max_outcomes: Vec<usize> = (0..parties)
        .map(|k| shape.outcome_counts(k).iter().copied().max().unwrap_or(1))
        .collect();
    let tuples = shape.test_tuples();

    let mut lambdas = Vec::new();
    let mut conditionals = Vec::new();
    let mut prior: BTreeMap<Vec<usize>, Vec<f64>> =
        tuples.iter().map(|x| (x.clone(), Vec::new())).collect();

    for lam in mixed_radix(&max_outcomes) {
        let valid_in = |x: &[usize]| {
            lam.iter()
                .enumerate()
                .all(|(k, &o)| o < shape.outcome_counts(k)[x[k]])
        };
        let weights: Vec<f64> = tuples
            .iter()
            .map(|x| if valid_in(x) { b.prob(x, &lam) } else { 0.0 })
            .collect();
        if weights.iter().all(|&w| w == 0.0) {
            continue;
        }
        let mut cond = BTreeMap::new();
        for x in &tuples {
            let clamped: Vec<usize> = lam
                .iter()
                .enumerate()
                .map(|(k, &o)| o.min(shape.outcome_counts(k)[x[k]] - 1))
                .collect();
            let mut d = vec![0.0; shape.num_outcomes(x)];
            d[shape.outcome_index(x, &clamped)] = 1.0;
            cond.insert(x.clone(), d);
        }
        for (x, w) in tuples.iter().zip(weights) {
            prior.get_mut(x).expect("tuple present").push(w);
        }
        let label: Vec<String> = lam.iter().map(|o| format!("{o}")).collect();
        lambdas.push(format!("({})", label.join(",")));
        conditionals.push(Behavior::from_parts(shape.clone(), cond));
    }
    HvtModel {
        lambdas,
        prior: Prior::PerTests(prior),
        conditionals,
    }
}
