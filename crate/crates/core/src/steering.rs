//! Assemblages, ensembles and the two directions of the equivalence between
//! steering a non-trivial two-state ensemble and a non-vanishing table
//! determinant.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{precondition, validation, Error, Result};
use crate::gpt::{ConvexStateSpace, EffectVector, StateVector};
use crate::quantum::{self, CMatrix, Povm, QuantumScenario, QuantumSystem};
use crate::random::{self, SweepRng};
use crate::space::StateSpace;
use crate::tables::{spooky_verdict_with_tol, JointTable, Purity, SpookyVerdict};
use crate::EPS;

/// Tolerance of the identity `<a0|α0> - <a0|α1> = det / (n0 n1)`.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Below this `|det|` the division by `n0 n1` is flagged as ill conditioned.
pub const NEAR_DEGENERATE: f64 = 1e-6;

/// Subnormalized states indexed by the remote outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Assemblage<S> {
    elements: Vec<S>,
}

impl<S: Clone> Assemblage<S> {
    pub fn new<T: StateSpace<State = S>>(space: &T, elements: Vec<S>) -> Result<Self> {
        if elements.is_empty() {
            return Err(validation("assemblage needs at least one element"));
        }
        let mut total = 0.0;
        for (i, s) in elements.iter().enumerate() {
            let n = space.normalization(s);
            if !(-EPS..=1.0 + EPS).contains(&n) {
                return Err(validation(format!("element {i} has normalization {n}")));
            }
            total += n;
        }
        if (total - 1.0).abs() > EPS {
            return Err(validation(format!("normalizations sum to {total}")));
        }
        Ok(Assemblage { elements })
    }

    pub fn elements(&self) -> &[S] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Weighted deterministic states.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble<S> {
    entries: Vec<(f64, S)>,
}

impl<S: Clone> Ensemble<S> {
    pub fn new<T: StateSpace<State = S>>(space: &T, entries: Vec<(f64, S)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(validation("ensemble needs at least one entry"));
        }
        let mut total = 0.0;
        for (i, (w, s)) in entries.iter().enumerate() {
            if !(0.0..=1.0).contains(w) {
                return Err(validation(format!("entry {i} has weight {w}")));
            }
            let n = space.normalization(s);
            if (n - 1.0).abs() > EPS {
                return Err(validation(format!(
                    "entry {i} is not deterministic: <e|s> = {n}"
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > EPS {
            return Err(validation(format!("weights sum to {total}")));
        }
        Ok(Ensemble { entries })
    }

    pub fn entries(&self) -> &[(f64, S)] {
        &self.entries
    }

    pub fn weights(&self) -> Vec<f64> {
        self.entries.iter().map(|(w, _)| *w).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Result of normalizing an assemblage. `kept[k]` is the assemblage index
/// of ensemble entry `k`; `dropped` lists elements with vanishing weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized<S> {
    pub ensemble: Ensemble<S>,
    pub kept: Vec<usize>,
    pub dropped: Vec<usize>,
}

/// Splits each element as `α̃_i = <e|α̃_i> α_i`.
pub fn normalize_assemblage<T: StateSpace>(
    space: &T,
    a: &Assemblage<T::State>,
) -> Result<Normalized<T::State>> {
    let mut entries = Vec::new();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (i, s) in a.elements().iter().enumerate() {
        let n = space.normalization(s);
        if n <= EPS {
            dropped.push(i);
        } else {
            entries.push((n, space.scale(s, 1.0 / n)));
            kept.push(i);
        }
    }
    if entries.is_empty() {
        return Err(Error::DegenerateAssemblage);
    }
    // Dropped mass is at most a few EPS; fold it back in.
    let total: f64 = entries.iter().map(|(w, _)| w).sum();
    for e in &mut entries {
        e.0 /= total;
    }
    Ok(Normalized {
        ensemble: Ensemble { entries },
        kept,
        dropped,
    })
}

/// At least two weights strictly inside `(ε, 1 - ε)` and some pair of
/// those states separated by more than `ε`.
pub fn is_nontrivial<T: StateSpace>(space: &T, e: &Ensemble<T::State>) -> bool {
    let inner: Vec<&T::State> = e
        .entries()
        .iter()
        .filter(|(w, _)| *w > EPS && *w < 1.0 - EPS)
        .map(|(_, s)| s)
        .collect();
    if inner.len() < 2 {
        return false;
    }
    inner
        .iter()
        .enumerate()
        .any(|(i, s)| inner[i + 1..].iter().any(|t| space.separation(s, t) > EPS))
}

/// Witness that a two-state ensemble and a binary test produce a table
/// off the factorization surface.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringCertificate<S, E> {
    /// The effect whose values on the two states differ.
    pub a0: E,
    /// `<a0|α0> - <a0|α1>`, evaluated directly.
    pub w: f64,
    /// `(p0, p1)`, the probabilities of the remote outcomes.
    pub weights: [f64; 2],
    pub steered_states: [S; 2],
    pub source_table: JointTable,
    pub det: f64,
    /// `det / (p0 p1)`, the second route to `w`.
    pub difference: f64,
    /// `|det|` below [`NEAR_DEGENERATE`].
    pub near_degenerate: bool,
}

/// Forward direction: from an ensemble `{p0 α0, p1 α1}` and a binary test
/// `{a0, a1}` build the table `p_ij = p_j <a_i|α_j>`, whose determinant is
/// `p0 p1 w`.
pub fn steering_to_table<T: StateSpace>(
    space: &T,
    e: &Ensemble<T::State>,
    test: &[T::Effect; 2],
) -> Result<SteeringCertificate<T::State, T::Effect>> {
    steering_to_table_with_tol(space, e, test, EPS)
}

pub fn steering_to_table_with_tol<T: StateSpace>(
    space: &T,
    e: &Ensemble<T::State>,
    test: &[T::Effect; 2],
    eps: f64,
) -> Result<SteeringCertificate<T::State, T::Effect>> {
    if e.len() != 2 {
        return Err(precondition(format!(
            "need an ensemble of exactly two states, got {}",
            e.len()
        )));
    }
    if !space.is_complete_pair(&test[0], &test[1]) {
        return Err(validation("test is not a complete binary test"));
    }
    let [(p0, s0), (p1, s1)] = [&e.entries()[0], &e.entries()[1]];
    if !(*p0 > eps && *p1 > eps) {
        return Err(precondition(
            "ensemble weights must lie strictly inside (0, 1)",
        ));
    }
    let w = space.eval(&test[0], s0) - space.eval(&test[0], s1);
    if w.abs() <= eps {
        return Err(Error::NoWitness);
    }
    let states = [s0, s1];
    let weights = [*p0, *p1];
    let mut p = [[0.0; 2]; 2];
    for (i, a) in test.iter().enumerate() {
        for j in 0..2 {
            p[i][j] = weights[j] * space.eval(a, states[j]);
        }
    }
    let table = JointTable::new(p, Purity::Unknown)?;
    let det = table.determinant();
    if (det - p0 * p1 * w).abs() > IDENTITY_TOL {
        return Err(Error::Internal(format!(
            "det {det} differs from p0 p1 w = {}",
            p0 * p1 * w
        )));
    }
    Ok(SteeringCertificate {
        a0: test[0].clone(),
        w,
        weights,
        steered_states: [s0.clone(), s1.clone()],
        source_table: table,
        det,
        difference: det / (p0 * p1),
        near_degenerate: det.abs() < NEAR_DEGENERATE,
    })
}

/// Backward direction: given a table with non-vanishing determinant and the
/// assemblage `{α̃0, α̃1}` that produced it under `test`, normalize and show
/// that `a0` separates the two steered states.
pub fn table_to_steering<T: StateSpace>(
    space: &T,
    t: &JointTable,
    assemblage: &Assemblage<T::State>,
    test: &[T::Effect; 2],
) -> Result<SteeringCertificate<T::State, T::Effect>> {
    table_to_steering_with_tol(space, t, assemblage, test, EPS)
}

pub fn table_to_steering_with_tol<T: StateSpace>(
    space: &T,
    t: &JointTable,
    assemblage: &Assemblage<T::State>,
    test: &[T::Effect; 2],
    eps: f64,
) -> Result<SteeringCertificate<T::State, T::Effect>> {
    let det = t.determinant();
    if det.abs() <= eps {
        return Err(Error::NotSpooky { det });
    }
    if assemblage.len() != 2 {
        return Err(validation("need a two-element assemblage"));
    }
    if !space.is_complete_pair(&test[0], &test[1]) {
        return Err(validation("test is not a complete binary test"));
    }
    let el = assemblage.elements();
    for (i, a) in test.iter().enumerate() {
        for (j, s) in el.iter().enumerate() {
            let v = space.eval(a, s);
            if (v - t.get(i, j)).abs() > IDENTITY_TOL {
                return Err(validation(format!(
                    "assemblage gives p[{i}][{j}] = {v}, table has {}",
                    t.get(i, j)
                )));
            }
        }
    }
    let n = [space.normalization(&el[0]), space.normalization(&el[1])];
    if n.iter().any(|&x| x <= eps) {
        return Err(Error::Internal(format!(
            "zero normalization {n:?} with |det| = {:e}",
            det.abs()
        )));
    }
    let states = [
        space.scale(&el[0], 1.0 / n[0]),
        space.scale(&el[1], 1.0 / n[1]),
    ];
    let w = space.eval(&test[0], &states[0]) - space.eval(&test[0], &states[1]);
    let difference = det / (n[0] * n[1]);
    if (w - difference).abs() > IDENTITY_TOL {
        return Err(Error::Internal(format!(
            "<a0|α0> - <a0|α1> = {w} but det / (n0 n1) = {difference}"
        )));
    }
    Ok(SteeringCertificate {
        a0: test[0].clone(),
        w,
        weights: n,
        steered_states: states,
        source_table: *t,
        det,
        difference,
        near_degenerate: det.abs() < NEAR_DEGENERATE,
    })
}

/// The table's columns as subnormalized states of a classical bit, read by
/// the indicator effects.
pub fn tabular_assemblage(t: &JointTable) -> Result<Assemblage<StateVector>> {
    let p = t.entries();
    let cols = (0..2)
        .map(|j| StateVector::new([p[0][j], p[1][j]].to_vec()))
        .collect();
    Assemblage::new(&ConvexStateSpace::classical(2), cols)
}

pub fn tabular_test() -> [EffectVector; 2] {
    let c = ConvexStateSpace::classical(2);
    [c.indicator(0), c.indicator(1)]
}

/// Backward direction with no underlying theory: the columns of `t` are the
/// steered states.
pub fn table_to_steering_tabular(
    t: &JointTable,
) -> Result<SteeringCertificate<StateVector, EffectVector>> {
    table_to_steering_tabular_with_tol(t, EPS)
}

pub fn table_to_steering_tabular_with_tol(
    t: &JointTable,
    eps: f64,
) -> Result<SteeringCertificate<StateVector, EffectVector>> {
    let det = t.determinant();
    if det.abs() <= eps {
        return Err(Error::NotSpooky { det });
    }
    let space = ConvexStateSpace::classical(2);
    table_to_steering_with_tol(&space, t, &tabular_assemblage(t)?, &tabular_test(), eps)
}

fn binary_effects(povm: &Povm) -> Result<[CMatrix; 2]> {
    match povm.effects() {
        [a0, a1] => Ok([a0.clone(), a1.clone()]),
        _ => Err(validation("need a binary measurement")),
    }
}

/// Backward direction for a quantum scenario: the steered states come from
/// partial application of B's effects to the joint state.
pub fn table_to_steering_quantum(
    s: &QuantumScenario,
) -> Result<SteeringCertificate<CMatrix, CMatrix>> {
    table_to_steering_quantum_with_tol(s, EPS)
}

pub fn table_to_steering_quantum_with_tol(
    s: &QuantumScenario,
    eps: f64,
) -> Result<SteeringCertificate<CMatrix, CMatrix>> {
    let t = quantum::born_table(s)?;
    let det = t.determinant();
    if det.abs() <= eps {
        return Err(Error::NotSpooky { det });
    }
    let space = QuantumSystem::new(s.dims().0);
    let assemblage = quantum::steer(s)?;
    table_to_steering_with_tol(&space, &t, &assemblage, &binary_effects(s.povm_a())?, eps)
}

/// Outcome of chaining conclusive discrimination with the forward
/// direction.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminationCheck<S, E> {
    /// Effect vanishing on `α0` and its value on `α1`.
    pub discrimination: Option<(E, f64)>,
    pub perfect: bool,
    pub certificate: Option<SteeringCertificate<S, E>>,
    /// Verdict on the certificate's table under the given purity.
    pub verdict: Option<SpookyVerdict>,
}

/// If `α1` is conclusively discriminable from `α0` by `a`, the test
/// `{e - a, a}` separates the two states and so yields a certificate.
pub fn discriminable_steering_check<T: StateSpace>(
    space: &T,
    e: &Ensemble<T::State>,
    purity: Purity,
) -> Result<DiscriminationCheck<T::State, T::Effect>> {
    if e.len() != 2 {
        return Err(precondition("need an ensemble of exactly two states"));
    }
    let (s0, s1) = (&e.entries()[0].1, &e.entries()[1].1);
    let Some((a, value)) = space.conclusive_discrimination(s0, s1) else {
        return Ok(DiscriminationCheck {
            discrimination: None,
            perfect: false,
            certificate: None,
            verdict: None,
        });
    };
    let test = [space.complement(&a), a.clone()];
    let cert = steering_to_table(space, e, &test)?;
    let table = cert.source_table.with_purity(purity);
    Ok(DiscriminationCheck {
        perfect: crate::gpt::is_perfect(value),
        discrimination: Some((a, value)),
        verdict: Some(spooky_verdict_with_tol(&table, EPS)),
        certificate: Some(cert),
    })
}

/// Random B-tests tried per scenario on top of the scenario's own.
pub const SWEEP_EXTRA_B_TESTS: usize = 2;

/// Which random two-qubit states an equivalence sweep draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamily {
    /// Uniformly random pure states.
    Haar,
    /// Products of random pure states.
    Product,
    /// A maximally entangled state with conjugate-aligned tests.
    MaxEntangledAligned,
    /// Cycles through the three families by sample index.
    Mixed,
}

/// Per-scenario evaluation of the three conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioVerdicts {
    pub index: u64,
    /// Some table is declared pure and spooky.
    pub spooky: bool,
    /// Some B-test steers a non-trivial ensemble separated by A's test.
    pub steers: bool,
    /// Some table from a pure state has `|det| > ε`.
    pub determinant: bool,
    /// Largest `|det|` seen over the sampled B-tests.
    pub max_abs_det: f64,
}

impl ScenarioVerdicts {
    pub fn agree(&self) -> bool {
        self.spooky == self.steers && self.steers == self.determinant
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub samples: u64,
    pub seed: u64,
    pub family: SweepFamily,
    pub b_tests: usize,
    /// How many scenarios satisfy each condition.
    pub counts: [u64; 3],
    pub divergences: Vec<ScenarioVerdicts>,
}

/// Draws scenario `index` of a sweep.
pub fn sweep_scenario(seed: u64, index: u64, family: SweepFamily) -> (QuantumScenario, SweepRng) {
    let mut rng = random::stream(seed, index);
    let family = match family {
        SweepFamily::Mixed => [
            SweepFamily::Haar,
            SweepFamily::Product,
            SweepFamily::MaxEntangledAligned,
        ][(index % 3) as usize],
        f => f,
    };
    let s = match family {
        SweepFamily::Product => random::random_product_scenario(&mut rng),
        SweepFamily::MaxEntangledAligned => random::max_entangled_aligned_scenario(&mut rng),
        _ => random::random_pure_scenario(&mut rng),
    };
    (s, rng)
}

/// Evaluates the three conditions for one scenario, over its own B-test
/// followed by `extra_b_tests` random ones.
pub fn evaluate_scenario(
    seed: u64,
    index: u64,
    family: SweepFamily,
    extra_b_tests: usize,
) -> Result<ScenarioVerdicts> {
    let (s, mut rng) = sweep_scenario(seed, index, family);
    let pure = quantum::is_pure(s.joint());
    let space = QuantumSystem::new(2);
    let a_test = binary_effects(s.povm_a())?;
    let mut v = ScenarioVerdicts {
        index,
        spooky: false,
        steers: false,
        determinant: false,
        max_abs_det: 0.0,
    };
    for k in 0..=extra_b_tests {
        let sk = if k == 0 {
            s.clone()
        } else {
            s.with_povm_b(random::random_projective_test(&mut rng, 2))?
        };
        let t = quantum::born_table(&sk)?;
        let det = t.determinant();
        v.max_abs_det = v.max_abs_det.max(det.abs());
        v.spooky |= spooky_verdict_with_tol(&t, EPS) == SpookyVerdict::Spooky;
        v.determinant |= pure && det.abs() > EPS;
        let normalized = normalize_assemblage(&space, &quantum::steer(&sk)?)?;
        if normalized.ensemble.len() == 2 && is_nontrivial(&space, &normalized.ensemble) {
            v.steers |= steering_to_table(&space, &normalized.ensemble, &a_test).is_ok();
        }
    }
    Ok(v)
}

/// Collects per-scenario verdicts into a report.
pub fn summarize_sweep(
    seed: u64,
    family: SweepFamily,
    b_tests: usize,
    verdicts: impl IntoIterator<Item = ScenarioVerdicts>,
) -> SweepReport {
    let mut report = SweepReport {
        samples: 0,
        seed,
        family,
        b_tests,
        counts: [0; 3],
        divergences: Vec::new(),
    };
    for v in verdicts {
        report.samples += 1;
        for (c, flag) in report
            .counts
            .iter_mut()
            .zip([v.spooky, v.steers, v.determinant])
        {
            *c += u64::from(flag);
        }
        if !v.agree() {
            report.divergences.push(v);
        }
    }
    report
}

/// Checks on `n` random pure two-qubit scenarios that spookiness, steering
/// of a non-trivial ensemble and a non-vanishing determinant coincide.
pub fn equivalence_sweep(n: u64, seed: u64, family: SweepFamily) -> Result<SweepReport> {
    if n == 0 {
        return Err(validation("sample count must be positive"));
    }
    let verdicts = (0..n)
        .map(|i| evaluate_scenario(seed, i, family, SWEEP_EXTRA_B_TESTS))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize_sweep(
        seed,
        family,
        SWEEP_EXTRA_B_TESTS + 1,
        verdicts,
    ))
}
