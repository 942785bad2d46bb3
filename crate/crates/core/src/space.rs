//! The operations steering needs from a theory's local system.

use core::fmt::Debug;

/// A local system: its states, its effects and the probability pairing.
///
/// Implemented by polytopal theories ([`crate::gpt::ConvexStateSpace`]) and
/// by quantum systems ([`crate::quantum::QuantumSystem`]).
pub trait StateSpace {
    type State: Clone + Debug + PartialEq;
    type Effect: Clone + Debug + PartialEq;

    /// The unique deterministic effect.
    fn unit_effect(&self) -> Self::Effect;

    /// Probability of `effect` on `state`.
    fn eval(&self, effect: &Self::Effect, state: &Self::State) -> f64;

    /// Preparation probability `<e|state>`.
    fn normalization(&self, state: &Self::State) -> f64 {
        self.eval(&self.unit_effect(), state)
    }

    fn scale(&self, state: &Self::State, factor: f64) -> Self::State;

    /// `e - effect`.
    fn complement(&self, effect: &Self::Effect) -> Self::Effect;

    /// True if `{a0, a1}` is a complete binary test.
    fn is_complete_pair(&self, a0: &Self::Effect, a1: &Self::Effect) -> bool;

    /// Largest difference `<a|s> - <a|t>` over all effects `a`.
    fn separation(&self, s: &Self::State, t: &Self::State) -> f64;

    /// An effect vanishing on `alpha0` with the largest value on `alpha1`,
    /// or `None` when that value is negligible.
    fn conclusive_discrimination(
        &self,
        alpha0: &Self::State,
        alpha1: &Self::State,
    ) -> Option<(Self::Effect, f64)>;
}
