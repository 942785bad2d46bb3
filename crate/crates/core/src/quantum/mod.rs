//! The quantum instance: density matrices, POVMs, Born-rule tables and
//! steering by partial application of a remote effect.

pub mod cat;
mod matrix;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub use matrix::{inner, kron_vec, normalize, CMatrix, C64};

use crate::error::{validation, Error, Result};
use crate::space::StateSpace;
use crate::steering::Assemblage;
use crate::tables::{Behavior, BehaviorShape, JointTable, Purity};
use crate::EPS;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;
pub const PURITY_TOL: f64 = 1e-9;
pub const MAX_LOCAL_DIM: usize = 4;

/// A valid quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let dev = m.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(validation(format!(
                "state is not Hermitian (deviation {dev:e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(validation(format!("state has trace {tr}, expected 1")));
        }
        let min = m.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(validation(format!("state has negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix(m))
    }

    /// The projector onto a normalized copy of `psi`.
    pub fn from_ket(psi: &[C64]) -> Result<Self> {
        let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm_sqr <= 0.0 || !norm_sqr.is_finite() {
            return Err(validation("zero or non-finite state vector"));
        }
        Self::new(CMatrix::outer(&normalize(psi)))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix(CMatrix::identity(d).scale(1.0 / d as f64))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn purity_value(&self) -> f64 {
        self.0.pairing(&self.0)
    }
}

/// True iff `tr(ρ²) = 1` within tolerance.
pub fn is_pure(rho: &DensityMatrix) -> bool {
    (rho.purity_value() - 1.0).abs() <= PURITY_TOL
}

/// A list of effects summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<CMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = effects.first() else {
            return Err(validation("POVM needs at least one effect"));
        };
        let d = first.dim();
        let mut sum = CMatrix::zeros(d);
        for (i, e) in effects.iter().enumerate() {
            if e.dim() != d {
                return Err(validation(format!("effect {i} has the wrong dimension")));
            }
            if e.hermitian_deviation() > HERMITIAN_TOL {
                return Err(validation(format!("effect {i} is not Hermitian")));
            }
            let min = e.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
            if min < -PSD_TOL {
                return Err(validation(format!("effect {i} is not positive ({min:e})")));
            }
            sum = &sum + e;
        }
        let dev = sum.max_abs_diff(&CMatrix::identity(d));
        if dev > TRACE_TOL {
            return Err(validation(format!(
                "effects do not sum to the identity ({dev:e})"
            )));
        }
        Ok(Povm { effects })
    }

    /// `{|v><v|, I - |v><v|}` for a normalized copy of `v`.
    pub fn projective_pair(v: &[C64]) -> Result<Self> {
        let p = CMatrix::outer(&normalize(v));
        let q = &CMatrix::identity(v.len()) - &p;
        Self::new(vec![p, q])
    }

    /// The measurement in an orthonormal basis.
    pub fn basis(vectors: &[Vec<C64>]) -> Result<Self> {
        Self::new(vectors.iter().map(|v| CMatrix::outer(v)).collect())
    }

    pub fn effects(&self) -> &[CMatrix] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn is_projective(&self) -> bool {
        self.effects
            .iter()
            .all(|e| (e * e).max_abs_diff(e) <= PSD_TOL)
    }
}

/// Outcome labels for the two sides of a scenario.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScenarioLabels {
    pub a: Vec<String>,
    pub b: Vec<String>,
}

/// A joint state on `A ⊗ B` with one measurement on each side.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumScenario {
    dims: (usize, usize),
    joint: DensityMatrix,
    povm_a: Povm,
    povm_b: Povm,
    pub labels: ScenarioLabels,
}

impl QuantumScenario {
    pub fn new(
        dims: (usize, usize),
        joint: DensityMatrix,
        povm_a: Povm,
        povm_b: Povm,
        labels: ScenarioLabels,
    ) -> Result<Self> {
        let (da, db) = dims;
        if da == 0 || db == 0 || da > MAX_LOCAL_DIM || db > MAX_LOCAL_DIM {
            return Err(validation(format!(
                "local dimensions must be in 1..={MAX_LOCAL_DIM}, got {da}x{db}"
            )));
        }
        if joint.dim() != da * db {
            return Err(validation(format!(
                "joint state has dimension {}, expected {}",
                joint.dim(),
                da * db
            )));
        }
        if povm_a.dim() != da || povm_b.dim() != db {
            return Err(validation("POVM dimensions do not match the local systems"));
        }
        for (side, labels, povm) in [("A", &labels.a, &povm_a), ("B", &labels.b, &povm_b)] {
            if !labels.is_empty() && labels.len() != povm.len() {
                return Err(validation(format!(
                    "side {side}: {} labels for {} outcomes",
                    labels.len(),
                    povm.len()
                )));
            }
        }
        Ok(QuantumScenario {
            dims,
            joint,
            povm_a,
            povm_b,
            labels,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn joint(&self) -> &DensityMatrix {
        &self.joint
    }

    pub fn povm_a(&self) -> &Povm {
        &self.povm_a
    }

    pub fn povm_b(&self) -> &Povm {
        &self.povm_b
    }

    /// The same state and A-measurement with another B-measurement.
    pub fn with_povm_b(&self, povm_b: Povm) -> Result<Self> {
        Self::new(
            self.dims,
            self.joint.clone(),
            self.povm_a.clone(),
            povm_b,
            ScenarioLabels::default(),
        )
    }

    pub fn with_povm_a(&self, povm_a: Povm) -> Result<Self> {
        Self::new(
            self.dims,
            self.joint.clone(),
            povm_a,
            self.povm_b.clone(),
            ScenarioLabels::default(),
        )
    }

    /// Reduced state of A.
    pub fn reduced_a(&self) -> CMatrix {
        let (da, db) = self.dims;
        self.joint
            .matrix()
            .partial_trace_b(da, db)
            .expect("dimensions checked at construction")
    }
}

/// `p_ij = tr[(A_i ⊗ B_j) ρ]`, clamped and stamped with the purity of ρ.
pub fn born_table(s: &QuantumScenario) -> Result<JointTable> {
    if s.povm_a.len() != 2 || s.povm_b.len() != 2 {
        return Err(validation(
            "born_table needs binary measurements on both sides",
        ));
    }
    let rho = s.joint.matrix();
    let mut p = [[0.0; 2]; 2];
    for (i, a) in s.povm_a.effects().iter().enumerate() {
        for (j, b) in s.povm_b.effects().iter().enumerate() {
            p[i][j] = a.kron(b).pairing(rho);
        }
    }
    JointTable::new(p, Purity::from_pure(is_pure(&s.joint)))
}

/// Born-rule behavior of a joint state for several tests on each side.
pub fn born_behavior(
    joint: &DensityMatrix,
    dims: (usize, usize),
    tests_a: &[Povm],
    tests_b: &[Povm],
) -> Result<Behavior> {
    let (da, db) = dims;
    if joint.dim() != da * db {
        return Err(validation("joint state dimension does not match dims"));
    }
    if tests_a.iter().any(|t| t.dim() != da) || tests_b.iter().any(|t| t.dim() != db) {
        return Err(validation("test dimension does not match its system"));
    }
    let names = |prefix: &str, n: usize| -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    };
    let shape = BehaviorShape::new(
        vec!["A".into(), "B".into()],
        vec![names("a", tests_a.len()), names("b", tests_b.len())],
        vec![
            tests_a.iter().map(Povm::len).collect(),
            tests_b.iter().map(Povm::len).collect(),
        ],
    )?;
    let rho = joint.matrix();
    let mut prob = BTreeMap::new();
    for x in shape.test_tuples() {
        let (ta, tb) = (&tests_a[x[0]], &tests_b[x[1]]);
        let mut d = Vec::with_capacity(ta.len() * tb.len());
        for a in ta.effects() {
            for b in tb.effects() {
                d.push(a.kron(b).pairing(rho));
            }
        }
        prob.insert(x, d);
    }
    Behavior::new(shape, prob)
}

/// The subnormalized states of A prepared by each outcome of B's test:
/// `α̃_j = tr_B[(I ⊗ B_j) ρ]`.
pub fn steer(s: &QuantumScenario) -> Result<Assemblage<CMatrix>> {
    let (da, db) = s.dims;
    let id = CMatrix::identity(da);
    let elements = s
        .povm_b
        .effects()
        .iter()
        .map(|b| (&id.kron(b) * s.joint.matrix()).partial_trace_b(da, db))
        .collect::<Result<Vec<_>>>()?;
    Assemblage::new(&QuantumSystem::new(da), elements)
}

/// A subspace given by an orthonormal basis, with its projector.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    pub basis: Vec<Vec<C64>>,
    pub projector: CMatrix,
}

impl Subspace {
    /// Range of a (numerically) projective operator.
    pub fn range_of(p: &CMatrix) -> Self {
        let (vals, vecs) = p.eigh();
        let basis: Vec<Vec<C64>> = vals
            .iter()
            .zip(vecs)
            .filter(|(v, _)| **v > 0.5)
            .map(|(_, x)| x)
            .collect();
        Self::from_basis(p.dim(), basis)
    }

    fn from_basis(d: usize, basis: Vec<Vec<C64>>) -> Self {
        let mut projector = CMatrix::zeros(d);
        for v in &basis {
            projector = &projector + &CMatrix::outer(v);
        }
        Subspace { basis, projector }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// A state is supported inside the subspace iff `tr(P ρ) = 1`.
    pub fn supports(&self, rho: &CMatrix) -> bool {
        (self.projector.pairing(rho) - rho.trace().re).abs() <= EPS
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let d = self.projector.dim();
        let sandwich = &(&self.projector * &other.projector) * &self.projector;
        let (vals, vecs) = sandwich.eigh();
        let basis = vals
            .iter()
            .zip(vecs)
            .filter(|(v, _)| (**v - 1.0).abs() <= PSD_TOL)
            .map(|(_, x)| x)
            .collect();
        Self::from_basis(d, basis)
    }
}

/// The two support subspaces of a projective binary test. A state is sharp
/// for the test iff its support lies inside one of them.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpSupports {
    pub supports: [Subspace; 2],
}

impl SharpSupports {
    pub fn is_sharp(&self, rho: &CMatrix) -> bool {
        self.supports.iter().any(|s| s.supports(rho))
    }

    /// Both supports non-trivial, i.e. the test is a proposition.
    pub fn is_proposition(&self) -> bool {
        self.supports.iter().all(|s| s.rank() > 0)
    }
}

pub fn quantum_sharp_states(prop: &Povm) -> Result<SharpSupports> {
    if prop.len() != 2 {
        return Err(validation("sharpness analysis needs a binary test"));
    }
    if !prop.is_projective() {
        return Err(validation(
            "non-projective test: unsupported for sharpness analysis",
        ));
    }
    let [p, q] = [&prop.effects()[0], &prop.effects()[1]];
    Ok(SharpSupports {
        supports: [Subspace::range_of(p), Subspace::range_of(q)],
    })
}

/// A pure state sharp for every test of the family, if one exists. Sharp
/// states of several tests can be taken pure: any vector in the support of
/// a common sharp state is itself one.
pub fn quantum_common_sharp_state(props: &[Povm]) -> Result<Option<Vec<C64>>> {
    if props.len() > crate::gpt::MAX_PROPOSITIONS {
        return Err(Error::Size {
            what: "propositions",
            got: props.len(),
            limit: crate::gpt::MAX_PROPOSITIONS,
        });
    }
    let supports = props
        .iter()
        .map(quantum_sharp_states)
        .collect::<Result<Vec<_>>>()?;
    let Some(d) = props.first().map(Povm::dim) else {
        return Ok(None);
    };
    for mask in 0u32..(1 << props.len()) {
        let mut cur = Subspace::from_basis(d, identity_basis(d));
        for (i, s) in supports.iter().enumerate() {
            cur = cur.intersect(&s.supports[((mask >> i) & 1) as usize]);
            if cur.rank() == 0 {
                break;
            }
        }
        if let Some(v) = cur.basis.into_iter().next() {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

fn identity_basis(d: usize) -> Vec<Vec<C64>> {
    (0..d)
        .map(|i| {
            let mut v = vec![C64::new(0.0, 0.0); d];
            v[i] = C64::new(1.0, 0.0);
            v
        })
        .collect()
}

/// Complementarity of two projective propositions via support
/// intersections.
pub fn quantum_are_complementary(a: &Povm, b: &Povm) -> Result<bool> {
    for (name, p) in [("first", a), ("second", b)] {
        if !quantum_sharp_states(p)?.is_proposition() {
            return Err(validation(format!("{name} test is not a proposition")));
        }
    }
    Ok(quantum_common_sharp_state(&[a.clone(), b.clone()])?.is_none())
}

/// A `d`-level quantum system as a [`StateSpace`]; states and effects are
/// Hermitian matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantumSystem {
    dim: usize,
}

/// The two-level case.
pub const QUBIT: QuantumSystem = QuantumSystem { dim: 2 };

impl QuantumSystem {
    pub fn new(dim: usize) -> Self {
        QuantumSystem { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl StateSpace for QuantumSystem {
    type State = CMatrix;
    type Effect = CMatrix;

    fn unit_effect(&self) -> CMatrix {
        CMatrix::identity(self.dim)
    }

    fn eval(&self, effect: &CMatrix, state: &CMatrix) -> f64 {
        effect.pairing(state)
    }

    fn normalization(&self, state: &CMatrix) -> f64 {
        state.trace().re
    }

    fn scale(&self, state: &CMatrix, factor: f64) -> CMatrix {
        state.scale(factor)
    }

    fn complement(&self, effect: &CMatrix) -> CMatrix {
        &CMatrix::identity(self.dim) - effect
    }

    fn is_complete_pair(&self, a0: &CMatrix, a1: &CMatrix) -> bool {
        Povm::new(vec![a0.clone(), a1.clone()]).is_ok()
    }

    /// Sum of the positive eigenvalues of `s - t`; the trace distance for
    /// normalized states.
    fn separation(&self, s: &CMatrix, t: &CMatrix) -> f64 {
        (s - t).eigenvalues().iter().filter(|&&v| v > 0.0).sum()
    }

    /// Every valid effect vanishing on `α0` lives under the projector onto
    /// its kernel, so that projector is optimal.
    fn conclusive_discrimination(
        &self,
        alpha0: &CMatrix,
        alpha1: &CMatrix,
    ) -> Option<(CMatrix, f64)> {
        let (vals, vecs) = alpha0.eigh();
        let mut kernel = CMatrix::zeros(self.dim);
        for (v, x) in vals.iter().zip(&vecs) {
            if v.abs() <= PSD_TOL {
                kernel = &kernel + &CMatrix::outer(x);
            }
        }
        let value = kernel.pairing(alpha1);
        (value > EPS).then_some((kernel, value))
    }
}
