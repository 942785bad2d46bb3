//! Polytopal theories: state spaces, effects, propositions and
//! complementarity, all decided through small linear programs.

pub mod classical;
pub mod lp;
mod space;

use alloc::format;
use alloc::vec::Vec;

pub use lp::{lp_solve, Constraint, LinearProgram, LpError, Relation, Solution};
pub use space::{ConvexStateSpace, EffectVector, StateVector};

use crate::error::{precondition, validation, Error, Result};

/// Largest proposition family the sharp-state search will enumerate.
pub const MAX_PROPOSITIONS: usize = 12;

/// A finite list of effects meant to form a test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestSpec {
    pub effects: Vec<EffectVector>,
}

/// True iff the effects sum to the unit effect componentwise.
pub fn is_complete_test(space: &ConvexStateSpace, effects: &[EffectVector]) -> bool {
    if effects.is_empty() || effects.iter().any(|a| a.coords.len() != space.dim()) {
        return false;
    }
    let unit = space.unit();
    (0..space.dim()).all(|k| {
        let s: f64 = effects.iter().map(|a| a.coords[k]).sum();
        (s - unit.coords[k]).abs() <= space.tolerance()
    })
}

/// A binary complete test, optionally with states on which it is
/// deterministic with each truth value.
#[derive(Debug, Clone, PartialEq)]
pub struct Proposition {
    test: [EffectVector; 2],
    witnesses: Option<(StateVector, StateVector)>,
}

impl Proposition {
    pub fn new(a0: EffectVector, a1: EffectVector) -> Self {
        Proposition {
            test: [a0, a1],
            witnesses: None,
        }
    }

    /// The test `{a0, e - a0}`.
    pub fn from_first(space: &ConvexStateSpace, a0: EffectVector) -> Self {
        let a1 = crate::space::StateSpace::complement(space, &a0);
        Self::new(a0, a1)
    }

    /// Attaches witnesses if the test is a proposition.
    pub fn certify(self, space: &ConvexStateSpace) -> Result<Option<Self>> {
        Ok(is_proposition(space, &self.test)?.map(|w| Proposition {
            test: self.test,
            witnesses: Some(w),
        }))
    }

    pub fn a0(&self) -> &EffectVector {
        &self.test[0]
    }

    pub fn a1(&self) -> &EffectVector {
        &self.test[1]
    }

    pub fn effects(&self) -> &[EffectVector; 2] {
        &self.test
    }

    pub fn witnesses(&self) -> Option<&(StateVector, StateVector)> {
        self.witnesses.as_ref()
    }

    /// Swaps the two outcomes.
    pub fn relabeled(&self) -> Self {
        let [a0, a1] = self.test.clone();
        Proposition {
            test: [a1, a0],
            witnesses: self.witnesses.clone().map(|(w0, w1)| (w1, w0)),
        }
    }
}

fn check_binary_test(space: &ConvexStateSpace, test: &[EffectVector; 2]) -> Result<()> {
    for (i, a) in test.iter().enumerate() {
        if !space.is_valid_effect(a) {
            return Err(validation(format!(
                "effect a{i} is not valid on the state space"
            )));
        }
    }
    if !is_complete_test(space, test) {
        return Err(validation("effects do not sum to the unit effect"));
    }
    Ok(())
}

/// Witness states `(α0, α1)` with `<a_i|α_j> = δ_ij`, if they exist.
pub fn is_proposition(
    space: &ConvexStateSpace,
    test: &[EffectVector; 2],
) -> Result<Option<(StateVector, StateVector)>> {
    check_binary_test(space, test)?;
    let [a0, a1] = test;
    let alpha0 = space.find_state(&[(a0, Relation::Eq, 1.0), (a1, Relation::Eq, 0.0)]);
    let alpha1 = space.find_state(&[(a0, Relation::Eq, 0.0), (a1, Relation::Eq, 1.0)]);
    Ok(alpha0.zip(alpha1))
}

/// True iff every effect of every proposition is 0 or 1 on the state.
pub fn is_sharp_state(
    space: &ConvexStateSpace,
    state: &StateVector,
    props: &[Proposition],
) -> Result<bool> {
    let norm = space.state_normalization(state);
    if (norm - 1.0).abs() > space.tolerance() {
        return Err(validation(format!(
            "sharpness needs a deterministic state, got normalization {norm}"
        )));
    }
    let eps = space.tolerance();
    Ok(props.iter().flat_map(|p| p.effects()).all(|a| {
        let v = space.effect_value(a, state);
        v.abs() <= eps || (v - 1.0).abs() <= eps
    }))
}

/// A state sharp for every proposition of a family; `truth[i]` is the value
/// of `a^(i)_0` on it.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpWitness {
    pub state: StateVector,
    pub truth: Vec<bool>,
}

/// Tries every truth assignment in lexicographic order, `true` before
/// `false` and earlier propositions first, so the all-true assignment is
/// tried first.
pub fn find_common_sharp_state(
    space: &ConvexStateSpace,
    props: &[Proposition],
) -> Result<Option<SharpWitness>> {
    if props.len() > MAX_PROPOSITIONS {
        return Err(Error::Size {
            what: "propositions",
            got: props.len(),
            limit: MAX_PROPOSITIONS,
        });
    }
    for p in props {
        check_binary_test(space, p.effects())?;
    }
    for mask in 0u32..(1 << props.len()) {
        let truth = truth_assignment(mask, props.len());
        let conditions: Vec<_> = props
            .iter()
            .zip(&truth)
            .map(|(p, &t)| (p.a0(), Relation::Eq, if t { 1.0 } else { 0.0 }))
            .collect();
        if let Some(state) = space.find_state(&conditions) {
            return Ok(Some(SharpWitness { state, truth }));
        }
    }
    Ok(None)
}

/// Assignment number `mask` in the enumeration order: proposition `i` is
/// false iff bit `n - 1 - i` is set.
fn truth_assignment(mask: u32, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask & (1 << (n - 1 - i)) == 0).collect()
}

/// True iff both tests are propositions with no common sharp state.
pub fn are_complementary(
    space: &ConvexStateSpace,
    a: &Proposition,
    b: &Proposition,
) -> Result<bool> {
    for (name, p) in [("first", a), ("second", b)] {
        if is_proposition(space, p.effects())?.is_none() {
            return Err(validation(format!("{name} test is not a proposition")));
        }
    }
    Ok(find_common_sharp_state(space, &[a.clone(), b.clone()])?.is_none())
}

/// Result of reducing a family without common sharp state to a pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    /// Average of the (possibly relabeled) propositions in `phi`.
    pub averaged: Proposition,
    /// `props[l]`.
    pub other: Proposition,
    /// A largest subfamily admitting a common sharp state.
    pub phi: Vec<usize>,
    /// `|phi|`.
    pub k: usize,
    pub l: usize,
    /// Members of `phi` whose outcomes were swapped before averaging.
    pub relabeled: Vec<usize>,
}

/// Reduces a family of propositions with no common sharp state to two
/// complementary propositions by averaging a largest jointly sharp
/// subfamily.
///
/// The plain average of a jointly sharp subfamily is only a proposition if
/// some state gives all its members truth value 1 and another gives them
/// all 0. Members are therefore relabeled so that a common sharp state
/// makes every `a0` true, and each feasible relabeling of each maximal
/// subfamily is tried until the average certifies.
pub fn reduce_to_two(space: &ConvexStateSpace, props: &[Proposition]) -> Result<Reduction> {
    let n = props.len();
    if n < 2 {
        return Err(precondition("need at least two propositions"));
    }
    if n > MAX_PROPOSITIONS {
        return Err(Error::Size {
            what: "propositions",
            got: n,
            limit: MAX_PROPOSITIONS,
        });
    }
    if find_common_sharp_state(space, props)?.is_some() {
        return Err(precondition("the family has a common sharp state"));
    }

    for k in (1..n).rev() {
        let mut found_any = false;
        for mask in 1u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let phi: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let sub: Vec<Proposition> = phi.iter().map(|&i| props[i].clone()).collect();
            for truth_mask in 0u32..(1 << k) {
                let truth = truth_assignment(truth_mask, k);
                let conditions: Vec<_> = sub
                    .iter()
                    .zip(&truth)
                    .map(|(p, &t)| (p.a0(), Relation::Eq, if t { 1.0 } else { 0.0 }))
                    .collect();
                if space.find_state(&conditions).is_none() {
                    continue;
                }
                found_any = true;
                let relabeled: Vec<usize> = (0..k).filter(|&i| !truth[i]).map(|i| phi[i]).collect();
                let scale = 1.0 / k as f64;
                let mut sum0 = EffectVector::new(alloc::vec![0.0; space.dim()]);
                let mut sum1 = sum0.clone();
                for &i in &phi {
                    let p = if relabeled.contains(&i) {
                        props[i].relabeled()
                    } else {
                        props[i].clone()
                    };
                    sum0 = sum0.plus(p.a0());
                    sum1 = sum1.plus(p.a1());
                }
                let Some(averaged) =
                    Proposition::new(sum0.scaled(scale), sum1.scaled(scale)).certify(space)?
                else {
                    continue;
                };
                for l in (0..n).filter(|l| !phi.contains(l)) {
                    let Some(other) = props[l].clone().certify(space)? else {
                        return Err(validation(format!("test {l} is not a proposition")));
                    };
                    if are_complementary(space, &averaged, &other)? {
                        return Ok(Reduction {
                            averaged,
                            other,
                            phi,
                            k,
                            l,
                            relabeled,
                        });
                    }
                }
            }
        }
        if found_any {
            return Err(precondition(format!(
                "no relabeled average of a maximal jointly sharp subfamily (size {k}) \
                 is a proposition complementary to a remaining member"
            )));
        }
    }
    Err(precondition(
        "no proposition of the family has a sharp state",
    ))
}

/// Maximizes `<a|α1>` over valid effects with `<a|α0> = 0`.
///
/// Returns the optimal effect and value when the value exceeds the space
/// tolerance. A value of 1 means the states are perfectly discriminable.
pub fn conclusive_discrimination(
    space: &ConvexStateSpace,
    alpha0: &StateVector,
    alpha1: &StateVector,
) -> Option<(EffectVector, f64)> {
    let mut lp = space.effect_lp().maximize(alpha1.coords.clone());
    lp.add_eq(alpha0.coords.clone(), 0.0);
    let sol = lp.solve().ok()?;
    if sol.value <= space.tolerance() {
        return None;
    }
    Some((EffectVector::new(sol.x), sol.value))
}

/// True when a discrimination value certifies perfect discriminability.
pub fn is_perfect(value: f64) -> bool {
    (value - 1.0).abs() <= crate::EPS
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::StateSpace;
    use alloc::vec;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9)
    }

    fn bit() -> ConvexStateSpace {
        ConvexStateSpace::classical(2)
    }

    fn bit_prop() -> Proposition {
        let c = bit();
        Proposition::new(c.indicator(0), c.indicator(1))
    }

    fn axis_prop(space: &ConvexStateSpace, axis: usize) -> Proposition {
        let mut a0 = vec![0.0; space.dim()];
        a0[0] = 0.5;
        a0[axis] = 0.5;
        Proposition::from_first(space, EffectVector::new(a0))
    }

    #[test]
    fn complete_tests() {
        let c = bit();
        assert!(is_complete_test(&c, &[c.indicator(0), c.indicator(1)]));
        assert!(!is_complete_test(&c, &[c.unit(), c.unit()]));
    }

    #[test]
    fn propositions() {
        let c = bit();
        let (w0, w1) = is_proposition(&c, bit_prop().effects()).unwrap().unwrap();
        assert!(close(&w0.coords, &[1.0, 0.0]));
        assert!(close(&w1.coords, &[0.0, 1.0]));
        let half = c.unit().scaled(0.5);
        assert_eq!(is_proposition(&c, &[half.clone(), half]).unwrap(), None);

        let oct = ConvexStateSpace::bloch_octahedron();
        let z = axis_prop(&oct, 3);
        let (n, s) = is_proposition(&oct, z.effects()).unwrap().unwrap();
        assert!(close(&n.coords, &[1.0, 0.0, 0.0, 1.0]));
        assert!(close(&s.coords, &[1.0, 0.0, 0.0, -1.0]));
        // Not a test at all.
        assert!(is_proposition(&c, &[c.indicator(0), c.indicator(0)]).is_err());
    }

    #[test]
    fn sharp_states() {
        let c = bit();
        assert!(is_sharp_state(&c, &c.vertex(0), &[bit_prop()]).unwrap());
        let mid = c.mixture(&[0.5, 0.5]);
        assert!(!is_sharp_state(&c, &mid, &[bit_prop()]).unwrap());
        let sub = StateVector::new(vec![0.5, 0.0]);
        assert!(is_sharp_state(&c, &sub, &[bit_prop()]).is_err());
    }

    #[test]
    fn common_sharp_state_examples() {
        let c = bit();
        let w = find_common_sharp_state(&c, &[bit_prop(), bit_prop()])
            .unwrap()
            .unwrap();
        assert!(close(&w.state.coords, &[1.0, 0.0]));
        assert_eq!(w.truth, vec![true, true]);

        let w = find_common_sharp_state(&c, &[bit_prop(), bit_prop().relabeled()])
            .unwrap()
            .unwrap();
        assert!(close(&w.state.coords, &[1.0, 0.0]));
        assert_eq!(w.truth, vec![true, false]);

        let sq = ConvexStateSpace::square();
        let w = find_common_sharp_state(&sq, &[axis_prop(&sq, 1), axis_prop(&sq, 2)])
            .unwrap()
            .unwrap();
        assert!(sq.vertices().iter().any(|v| close(v, &w.state.coords)));

        let many = vec![bit_prop(); 13];
        assert!(matches!(
            find_common_sharp_state(&c, &many),
            Err(Error::Size { .. })
        ));
    }

    #[test]
    fn complementarity() {
        let oct = ConvexStateSpace::bloch_octahedron();
        let x = axis_prop(&oct, 1);
        let z = axis_prop(&oct, 3);
        assert!(are_complementary(&oct, &x, &z).unwrap());
        assert!(!are_complementary(&oct, &z, &z).unwrap());
        let c = bit();
        assert!(!are_complementary(&c, &bit_prop(), &bit_prop().relabeled()).unwrap());
        let half = Proposition::new(c.unit().scaled(0.5), c.unit().scaled(0.5));
        assert!(are_complementary(&c, &bit_prop(), &half).is_err());
    }

    #[test]
    fn reduce_qubit_triple() {
        let oct = ConvexStateSpace::bloch_octahedron();
        let props: Vec<_> = (1..4).map(|a| axis_prop(&oct, a)).collect();
        let r = reduce_to_two(&oct, &props).unwrap();
        assert_eq!(r.k, 1);
        assert!(are_complementary(&oct, &r.averaged, &r.other).unwrap());
    }

    #[test]
    fn reduce_pair_is_identity() {
        let oct = ConvexStateSpace::bloch_octahedron();
        let props = vec![axis_prop(&oct, 1), axis_prop(&oct, 3)];
        let r = reduce_to_two(&oct, &props).unwrap();
        assert_eq!((r.k, r.phi.clone(), r.l), (1, vec![0], 1));
        assert_eq!(r.averaged.effects(), props[0].effects());
        assert_eq!(r.other.effects(), props[1].effects());
    }

    #[test]
    fn reduce_square_family() {
        let sq = ConvexStateSpace::square();
        let x = axis_prop(&sq, 1);
        let diag = Proposition::from_first(&sq, EffectVector::new(vec![0.5, 0.25, 0.25]));
        let anti = Proposition::from_first(&sq, EffectVector::new(vec![0.5, 0.25, -0.25]));
        let props = vec![x.clone(), diag.clone(), anti];
        let r = reduce_to_two(&sq, &props).unwrap();
        assert_eq!((r.k, r.phi.clone(), r.l), (2, vec![0, 1], 2));
        let avg = x.a0().plus(diag.a0()).scaled(0.5);
        assert!(close(&r.averaged.a0().coords, &avg.coords));
        assert!(are_complementary(&sq, &r.averaged, &r.other).unwrap());
    }

    #[test]
    fn reduce_needs_relabeling() {
        // z and its relabeling are jointly sharp only with opposite truth
        // values, so their plain average is {e/2, e/2}.
        let oct = ConvexStateSpace::bloch_octahedron();
        let z = axis_prop(&oct, 3);
        let props = vec![z.clone(), z.relabeled(), axis_prop(&oct, 1)];
        assert!(find_common_sharp_state(&oct, &props).unwrap().is_none());
        let r = reduce_to_two(&oct, &props).unwrap();
        assert_eq!(
            (r.k, r.phi.clone(), r.relabeled.clone(), r.l),
            (2, vec![0, 1], vec![1], 2)
        );
        assert!(close(&r.averaged.a0().coords, &z.a0().coords));
        assert!(are_complementary(&oct, &r.averaged, &r.other).unwrap());
    }

    #[test]
    fn reduce_rejects_jointly_sharp_family() {
        let c = bit();
        assert!(matches!(
            reduce_to_two(&c, &[bit_prop(), bit_prop()]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn discrimination() {
        let c = bit();
        let (a, v) = conclusive_discrimination(&c, &c.vertex(0), &c.vertex(1)).unwrap();
        assert!(is_perfect(v));
        assert!((c.eval(&a, &c.vertex(1)) - 1.0).abs() < 1e-12);
        assert!(c.eval(&a, &c.vertex(0)).abs() < 1e-12);
        assert!(conclusive_discrimination(&c, &c.vertex(0), &c.vertex(0)).is_none());

        // The perfect discriminator's complement discriminates the other way.
        let comp = c.complement(&a);
        assert!((c.eval(&comp, &c.vertex(0)) - 1.0).abs() < 1e-12);
        assert!(c.eval(&comp, &c.vertex(1)).abs() < 1e-12);
    }
}
