//! Seeded samplers for randomized checks. Every sweep derives one stream
//! per task from a single seed, so results do not depend on scheduling.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hvt::{HvtModel, Prior};
use crate::quantum::{
    kron_vec, normalize, CMatrix, DensityMatrix, Povm, QuantumScenario, ScenarioLabels, C64,
};
use crate::tables::{Behavior, BehaviorShape, JointTable, Purity};

pub type SweepRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SweepRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> SweepRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// Uniform in `(0, 1]`.
fn open_unit<R: Rng>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Standard normal sample (Box-Muller).
pub fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u = open_unit(rng);
    let v: f64 = rng.random();
    libm::sqrt(-2.0 * libm::log(u)) * libm::cos(core::f64::consts::TAU * v)
}

/// Uniformly random unit vector in `C^d`.
pub fn random_ket<R: Rng>(rng: &mut R, d: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d)
            .map(|_| C64::new(gaussian(rng), gaussian(rng)))
            .collect();
        if v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-12 {
            return normalize(&v);
        }
    }
}

/// `{|v><v|, I - |v><v|}` for a random unit vector `v`.
pub fn random_projective_test<R: Rng>(rng: &mut R, d: usize) -> Povm {
    Povm::projective_pair(&random_ket(rng, d)).expect("rank-one projector pair")
}

fn two_qubit(psi: &[C64], a: Povm, b: Povm) -> QuantumScenario {
    let joint = DensityMatrix::from_ket(psi).expect("unit vector");
    QuantumScenario::new((2, 2), joint, a, b, ScenarioLabels::default())
        .expect("two-qubit dimensions")
}

/// Random pure two-qubit state with random rank-one tests on each side.
pub fn random_pure_scenario<R: Rng>(rng: &mut R) -> QuantumScenario {
    let psi = random_ket(rng, 4);
    let a = random_projective_test(rng, 2);
    let b = random_projective_test(rng, 2);
    two_qubit(&psi, a, b)
}

/// Random product of two random pure qubit states, random tests.
pub fn random_product_scenario<R: Rng>(rng: &mut R) -> QuantumScenario {
    let psi = kron_vec(&random_ket(rng, 2), &random_ket(rng, 2));
    let a = random_projective_test(rng, 2);
    let b = random_projective_test(rng, 2);
    two_qubit(&psi, a, b)
}

/// `(|00> + |11>) / √2` measured in a random basis `{v, v⊥}` on A and in
/// the conjugate basis on B, which gives the table `diag(1/2, 1/2)`.
pub fn max_entangled_aligned_scenario<R: Rng>(rng: &mut R) -> QuantumScenario {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let zero = C64::new(0.0, 0.0);
    let psi = [C64::new(h, 0.0), zero, zero, C64::new(h, 0.0)];
    let v = random_ket(rng, 2);
    let conj: Vec<C64> = v.iter().map(|z| z.conj()).collect();
    let a = Povm::projective_pair(&v).expect("unit vector");
    let b = Povm::projective_pair(&conj).expect("unit vector");
    two_qubit(&psi, a, b)
}

/// Random dense `d x d` Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng>(rng: &mut R, d: usize) -> CMatrix {
    let g = CMatrix::from_fn(d, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    (&g + &g.dagger()).scale(0.5)
}

/// Flat Dirichlet sample of length `n`.
pub fn dirichlet<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let x: Vec<f64> = (0..n).map(|_| -libm::log(open_unit(rng))).collect();
    let s: f64 = x.iter().sum();
    x.into_iter().map(|v| v / s).collect()
}

/// Uniform point of the probability tetrahedron.
pub fn random_table<R: Rng>(rng: &mut R) -> JointTable {
    let d = dirichlet(rng, 4);
    JointTable::new([[d[0], d[1]], [d[2], d[3]]], Purity::Unknown).expect("valid simplex point")
}

/// Random table with exactly product structure `q ⊗ r`.
pub fn random_product_table<R: Rng>(rng: &mut R) -> JointTable {
    let q: f64 = rng.random();
    let r: f64 = rng.random();
    JointTable::from_product([q, 1.0 - q], [r, 1.0 - r], Purity::Unknown).expect("valid product")
}

/// Independent Dirichlet distribution for every test tuple of `shape`.
pub fn random_behavior<R: Rng>(rng: &mut R, shape: &BehaviorShape) -> Behavior {
    let prob = shape
        .test_tuples()
        .into_iter()
        .map(|x| {
            let n = shape.num_outcomes(&x);
            (x, dirichlet(rng, n))
        })
        .collect::<BTreeMap<_, _>>();
    Behavior::new(shape.clone(), prob).expect("valid distributions")
}

/// Random hidden-variable model whose prior and conditionals are all
/// strictly positive. Each conditional factorizes over parties when
/// `factorized` is set.
pub fn random_positive_hvt<R: Rng>(
    rng: &mut R,
    shape: &BehaviorShape,
    n_lambdas: usize,
    factorized: bool,
) -> HvtModel {
    const FLOOR: f64 = 0.01;
    let smooth = |v: Vec<f64>| -> Vec<f64> {
        let n = v.len() as f64;
        v.into_iter()
            .map(|x| (x + FLOOR) / (1.0 + n * FLOOR))
            .collect()
    };
    let lambdas = (0..n_lambdas).map(|i| format!("l{i}")).collect();
    let prior = Prior::Any(smooth(dirichlet(rng, n_lambdas)));
    let conditionals = (0..n_lambdas)
        .map(|_| {
            if factorized {
                product_behavior(rng, shape, &smooth)
            } else {
                let b = random_behavior(rng, shape);
                let prob = b
                    .iter()
                    .map(|(x, d)| (x.clone(), smooth(d.clone())))
                    .collect();
                Behavior::new(shape.clone(), prob).expect("valid distributions")
            }
        })
        .collect();
    HvtModel::new(lambdas, prior, conditionals).expect("valid model")
}

/// Behavior whose outcome distributions are products of per-party,
/// per-test marginals (so it is parameter and outcome independent).
fn product_behavior<R: Rng>(
    rng: &mut R,
    shape: &BehaviorShape,
    smooth: &dyn Fn(Vec<f64>) -> Vec<f64>,
) -> Behavior {
    let marginals: Vec<Vec<Vec<f64>>> = (0..shape.num_parties())
        .map(|p| {
            shape
                .outcome_counts(p)
                .iter()
                .map(|&n| smooth(dirichlet(rng, n)))
                .collect()
        })
        .collect();
    Behavior::from_fn(shape.clone(), |tests, outcomes| {
        tests
            .iter()
            .zip(outcomes)
            .enumerate()
            .map(|(p, (&t, &o))| marginals[p][t][o])
            .product()
    })
    .expect("valid product behavior")
}
