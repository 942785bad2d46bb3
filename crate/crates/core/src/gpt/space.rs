use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::lp::{LinearProgram, Relation};
use crate::error::{validation, Result};
use crate::space::StateSpace;
use crate::EPS;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub coords: Vec<f64>,
}

impl StateVector {
    pub fn new(coords: Vec<f64>) -> Self {
        StateVector { coords }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffectVector {
    pub coords: Vec<f64>,
}

impl EffectVector {
    pub fn new(coords: Vec<f64>) -> Self {
        EffectVector { coords }
    }

    pub fn scaled(&self, f: f64) -> Self {
        EffectVector::new(self.coords.iter().map(|c| c * f).collect())
    }

    pub fn plus(&self, other: &EffectVector) -> Self {
        EffectVector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A polytopal state space: the convex hull of deterministic pure states,
/// with effects ranging over every dual vector that is valid on it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexStateSpace {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    unit_effect: Vec<f64>,
    eps: f64,
}

impl ConvexStateSpace {
    pub fn new(vertices: Vec<Vec<f64>>, unit_effect: Vec<f64>) -> Result<Self> {
        let dim = unit_effect.len();
        if dim == 0 {
            return Err(validation("state space dimension must be positive"));
        }
        if vertices.is_empty() {
            return Err(validation("state space needs at least one vertex"));
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.len() != dim {
                return Err(validation(format!(
                    "vertex {i} has {} coordinates, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|c| !c.is_finite()) {
                return Err(validation(format!("vertex {i} is not finite")));
            }
            let norm = dot(&unit_effect, v);
            if (norm - 1.0).abs() > EPS {
                return Err(validation(format!(
                    "vertex {i} is not deterministic: <e|v> = {norm}"
                )));
            }
            for (k, w) in vertices[..i].iter().enumerate() {
                if v.iter().zip(w).all(|(a, b)| (a - b).abs() <= EPS) {
                    return Err(validation(format!("vertices {k} and {i} coincide")));
                }
            }
        }
        Ok(ConvexStateSpace {
            dim,
            vertices,
            unit_effect,
            eps: EPS,
        })
    }

    /// Overrides the comparison tolerance used for effect values.
    pub fn with_tolerance(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    /// The classical simplex on `n` outcomes: standard basis vertices,
    /// unit effect `(1, ..., 1)`.
    pub fn classical(n: usize) -> Self {
        let vertices = (0..n)
            .map(|i| {
                let mut v = vec![0.0; n];
                v[i] = 1.0;
                v
            })
            .collect();
        ConvexStateSpace {
            dim: n,
            vertices,
            unit_effect: vec![1.0; n],
            eps: EPS,
        }
    }

    /// The square state space, coordinates `(1, x, y)` with `x, y = ±1`.
    pub fn square() -> Self {
        let vertices = [(1.0, 1.0), (1.0, -1.0), (-1.0, -1.0), (-1.0, 1.0)]
            .iter()
            .map(|&(x, y)| vec![1.0, x, y])
            .collect();
        ConvexStateSpace {
            dim: 3,
            vertices,
            unit_effect: vec![1.0, 0.0, 0.0],
            eps: EPS,
        }
    }

    /// The octahedron inscribed in the Bloch ball, coordinates `(1, x, y,
    /// z)` with vertices at the six poles. Approximates the qubit.
    pub fn bloch_octahedron() -> Self {
        let mut vertices = Vec::new();
        for axis in 1..4 {
            for sign in [1.0, -1.0] {
                let mut v = vec![1.0, 0.0, 0.0, 0.0];
                v[axis] = sign;
                vertices.push(v);
            }
        }
        ConvexStateSpace {
            dim: 4,
            vertices,
            unit_effect: vec![1.0, 0.0, 0.0, 0.0],
            eps: EPS,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn tolerance(&self) -> f64 {
        self.eps
    }

    pub fn unit(&self) -> EffectVector {
        EffectVector::new(self.unit_effect.clone())
    }

    pub fn vertex(&self, i: usize) -> StateVector {
        StateVector::new(self.vertices[i].clone())
    }

    /// Indicator effect of coordinate `i` (meaningful on classical spaces).
    pub fn indicator(&self, i: usize) -> EffectVector {
        let mut c = vec![0.0; self.dim];
        c[i] = 1.0;
        EffectVector::new(c)
    }

    pub fn mixture(&self, weights: &[f64]) -> StateVector {
        let mut c = vec![0.0; self.dim];
        for (w, v) in weights.iter().zip(&self.vertices) {
            for (a, b) in c.iter_mut().zip(v) {
                *a += w * b;
            }
        }
        StateVector::new(c)
    }

    pub fn effect_value(&self, a: &EffectVector, s: &StateVector) -> f64 {
        dot(&a.coords, &s.coords)
    }

    pub fn state_normalization(&self, s: &StateVector) -> f64 {
        dot(&self.unit_effect, &s.coords)
    }

    pub fn is_valid_effect(&self, a: &EffectVector) -> bool {
        a.coords.len() == self.dim
            && self.vertices.iter().all(|v| {
                let x = dot(&a.coords, v);
                x >= -self.eps && x <= 1.0 + self.eps
            })
    }

    /// True if `s / <e|s>` lies in the hull of the vertices.
    pub fn contains(&self, s: &StateVector) -> bool {
        if s.coords.len() != self.dim {
            return false;
        }
        let norm = self.state_normalization(s);
        if norm <= self.eps {
            return false;
        }
        let target: Vec<f64> = s.coords.iter().map(|c| c / norm).collect();
        let mut lp = LinearProgram::new(self.vertices.len());
        lp.add_eq(vec![1.0; self.vertices.len()], 1.0);
        for k in 0..self.dim {
            lp.add_eq(self.vertices.iter().map(|v| v[k]).collect(), target[k]);
        }
        lp.solve().is_ok()
    }

    /// Finds a deterministic state satisfying `<a|state> rel rhs` for each
    /// listed condition, or `None` if there is none.
    pub fn find_state(&self, conditions: &[(&EffectVector, Relation, f64)]) -> Option<StateVector> {
        let n = self.vertices.len();
        let mut lp = LinearProgram::new(n);
        lp.add_eq(vec![1.0; n], 1.0);
        for (a, rel, rhs) in conditions {
            lp.add(
                self.vertices.iter().map(|v| dot(&a.coords, v)).collect(),
                *rel,
                *rhs,
            );
        }
        let sol = lp.solve().ok()?;
        Some(self.mixture(&sol.x))
    }

    /// An LP over free effect coordinates constrained to be valid.
    pub(crate) fn effect_lp(&self) -> LinearProgram {
        let mut lp = LinearProgram::new_free(self.dim);
        for v in &self.vertices {
            lp.add_ge(v.clone(), 0.0);
            lp.add_le(v.clone(), 1.0);
        }
        lp
    }
}

impl StateSpace for ConvexStateSpace {
    type State = StateVector;
    type Effect = EffectVector;

    fn unit_effect(&self) -> EffectVector {
        self.unit()
    }

    fn eval(&self, effect: &EffectVector, state: &StateVector) -> f64 {
        self.effect_value(effect, state)
    }

    fn scale(&self, state: &StateVector, factor: f64) -> StateVector {
        StateVector::new(state.coords.iter().map(|c| c * factor).collect())
    }

    fn complement(&self, effect: &EffectVector) -> EffectVector {
        EffectVector::new(
            self.unit_effect
                .iter()
                .zip(&effect.coords)
                .map(|(e, a)| e - a)
                .collect(),
        )
    }

    fn is_complete_pair(&self, a0: &EffectVector, a1: &EffectVector) -> bool {
        super::is_complete_test(self, &[a0.clone(), a1.clone()])
    }

    fn separation(&self, s: &StateVector, t: &StateVector) -> f64 {
        let diff: Vec<f64> = s.coords.iter().zip(&t.coords).map(|(a, b)| a - b).collect();
        match self.effect_lp().maximize(diff).solve() {
            Ok(sol) => sol.value,
            Err(_) => 0.0,
        }
    }

    fn conclusive_discrimination(
        &self,
        alpha0: &StateVector,
        alpha1: &StateVector,
    ) -> Option<(EffectVector, f64)> {
        super::conclusive_discrimination(self, alpha0, alpha1)
    }
}
