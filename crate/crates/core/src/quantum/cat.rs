//! The three built-in cat scenarios. The cat is system A with basis
//! `|alive> = |0>`, `|dead> = |1>`; the electron is system B with
//! `|up> = |0>`, `|down> = |1>`. Joint kets are ordered cat ⊗ electron.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{
    kron_vec, quantum_are_complementary, DensityMatrix, Povm, QuantumScenario, ScenarioLabels, C64,
};
use crate::error::Result;

const H: f64 = core::f64::consts::FRAC_1_SQRT_2;

fn ket(a: f64, b: f64) -> Vec<C64> {
    vec![C64::new(a, 0.0), C64::new(b, 0.0)]
}

pub fn alive() -> Vec<C64> {
    ket(1.0, 0.0)
}

pub fn dead() -> Vec<C64> {
    ket(0.0, 1.0)
}

/// `(|dead> + |alive>) / √2`.
pub fn psi_plus() -> Vec<C64> {
    ket(H, H)
}

/// `(|dead> - |alive>) / √2`.
pub fn psi_minus() -> Vec<C64> {
    ket(-H, H)
}

pub fn up() -> Vec<C64> {
    ket(1.0, 0.0)
}

pub fn down() -> Vec<C64> {
    ket(0.0, 1.0)
}

fn basis_test(v0: &[C64], v1: &[C64]) -> Povm {
    Povm::basis(&[v0.to_vec(), v1.to_vec()]).expect("orthonormal basis")
}

/// `{|alive><alive|, |dead><dead|}`.
pub fn life_test() -> Povm {
    basis_test(&alive(), &dead())
}

/// `{|Ψ+><Ψ+|, |Ψ-><Ψ-|}`.
pub fn superposition_test() -> Povm {
    basis_test(&psi_plus(), &psi_minus())
}

/// `{|up><up|, |down><down|}`.
pub fn spin_z_test() -> Povm {
    basis_test(&up(), &down())
}

/// A single-system pair of tests offered as complementary.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplementarityRecord {
    pub state: Vec<C64>,
    pub tests: [Povm; 2],
    pub labels: [[String; 2]; 2],
}

impl ComplementarityRecord {
    pub fn is_complementary(&self) -> Result<bool> {
        quantum_are_complementary(&self.tests[0], &self.tests[1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatScenarios {
    /// A cat in the superposition `|Ψ+>`, with no partner system.
    pub v1: ComplementarityRecord,
    /// `(|alive, up> + |dead, down>) / √2`.
    pub v2: QuantumScenario,
    /// `(|alive, up> + |Ψ+, down>) / √2`.
    pub v3: QuantumScenario,
}

fn joint(terms: &[(Vec<C64>, Vec<C64>)]) -> DensityMatrix {
    let mut psi = vec![C64::new(0.0, 0.0); 4];
    for (cat, electron) in terms {
        for (acc, x) in psi.iter_mut().zip(kron_vec(cat, electron)) {
            *acc += x * H;
        }
    }
    DensityMatrix::from_ket(&psi).expect("unit vector")
}

fn labels() -> ScenarioLabels {
    ScenarioLabels {
        a: vec!["alive".into(), "dead".into()],
        b: vec!["up".into(), "down".into()],
    }
}

pub fn cat_scenarios() -> CatScenarios {
    let v1 = ComplementarityRecord {
        state: psi_plus(),
        tests: [life_test(), superposition_test()],
        labels: [
            ["alive".into(), "dead".into()],
            ["psi+".into(), "psi-".into()],
        ],
    };
    let scenario = |rho| {
        QuantumScenario::new((2, 2), rho, life_test(), spin_z_test(), labels())
            .expect("built-in scenario is valid")
    };
    CatScenarios {
        v1,
        v2: scenario(joint(&[(alive(), up()), (dead(), down())])),
        v3: scenario(joint(&[(alive(), up()), (psi_plus(), down())])),
    }
}
