use proptest::prelude::*;
use spooky_core::gpt::{
    are_complementary, conclusive_discrimination, find_common_sharp_state, is_perfect,
    is_sharp_state, reduce_to_two, ConvexStateSpace, EffectVector, Proposition,
};
use spooky_core::space::StateSpace;

fn axis(space: &ConvexStateSpace, k: usize, weight: f64) -> Proposition {
    let mut a0 = vec![0.0; space.dim()];
    a0[0] = 0.5;
    a0[k] = weight;
    Proposition::from_first(space, EffectVector::new(a0))
}

/// Propositions of each built-in space that admit both witnesses.
fn generated_propositions(space: &ConvexStateSpace) -> Vec<Proposition> {
    let mut candidates = Vec::new();
    if space.unit().coords.iter().all(|&c| c == 1.0) {
        // Classical: indicator of every proper non-empty subset.
        let n = space.dim();
        for mask in 1u32..(1 << n) - 1 {
            let a0 = (0..n).map(|i| f64::from((mask >> i) & 1)).collect();
            candidates.push(Proposition::from_first(space, EffectVector::new(a0)));
        }
        // Plus a grid of unsharp candidates that must fail certification.
        for i in 0..=4 {
            let mut a0 = vec![0.0; n];
            a0[0] = f64::from(i) / 4.0;
            candidates.push(Proposition::from_first(space, EffectVector::new(a0)));
        }
    } else {
        for k in 1..space.dim() {
            for w in [0.5, -0.5, 0.25] {
                candidates.push(axis(space, k, w));
            }
        }
        if space.dim() == 3 {
            for v in [[0.5, 0.25, 0.25], [0.5, 0.25, -0.25]] {
                candidates.push(Proposition::from_first(
                    space,
                    EffectVector::new(v.to_vec()),
                ));
            }
        }
    }
    let mut out: Vec<Proposition> = Vec::new();
    for p in candidates {
        if let Some(p) = p.certify(space).unwrap() {
            if out.iter().all(|q| q.a0() != p.a0()) {
                out.push(p);
            }
        }
    }
    out
}

fn spaces() -> Vec<ConvexStateSpace> {
    vec![
        ConvexStateSpace::classical(2),
        ConvexStateSpace::classical(3),
        ConvexStateSpace::square(),
        ConvexStateSpace::bloch_octahedron(),
    ]
}

#[test]
fn sharpness_on_vertices_matches_direct_evaluation() {
    for space in spaces() {
        let props = generated_propositions(&space);
        assert!(!props.is_empty());
        for p in &props {
            for i in 0..space.vertices().len() {
                let v = space.vertex(i);
                let direct = p.effects().iter().all(|a| {
                    let x: f64 = a.coords.iter().zip(&v.coords).map(|(c, s)| c * s).sum();
                    x.abs() <= 1e-9 || (x - 1.0).abs() <= 1e-9
                });
                assert_eq!(
                    is_sharp_state(&space, &v, std::slice::from_ref(p)).unwrap(),
                    direct
                );
            }
        }
    }
}

#[test]
fn complementarity_is_irreflexive() {
    for space in spaces() {
        for p in generated_propositions(&space) {
            assert!(!are_complementary(&space, &p, &p).unwrap());
        }
    }
}

#[test]
fn classical_spaces_have_no_complementary_pair() {
    for n in [2, 3] {
        let space = ConvexStateSpace::classical(n);
        let props = generated_propositions(&space);
        assert_eq!(props.len(), (1 << n) - 2);
        for a in &props {
            for b in &props {
                assert!(!are_complementary(&space, a, b).unwrap());
            }
        }
    }
}

#[test]
fn reductions_are_complementary() {
    let mut checked = 0;
    for space in [
        ConvexStateSpace::square(),
        ConvexStateSpace::bloch_octahedron(),
    ] {
        let props = generated_propositions(&space);
        let n = props.len();
        for mask in 1u32..(1 << n) {
            let count = mask.count_ones() as usize;
            if !(2..=4).contains(&count) {
                continue;
            }
            let family: Vec<Proposition> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| props[i].clone())
                .collect();
            if find_common_sharp_state(&space, &family).unwrap().is_some() {
                assert!(reduce_to_two(&space, &family).is_err());
                continue;
            }
            let r = reduce_to_two(&space, &family).unwrap();
            assert!(are_complementary(&space, &r.averaged, &r.other).unwrap());
            checked += 1;
        }
    }
    assert!(checked > 20, "only {checked} families");
}

#[test]
fn perfect_discrimination_complement_is_perfect_the_other_way() {
    for space in spaces() {
        for i in 0..space.vertices().len() {
            for j in 0..space.vertices().len() {
                let (s, t) = (space.vertex(i), space.vertex(j));
                match conclusive_discrimination(&space, &s, &t) {
                    Some((a, v)) if is_perfect(v) => {
                        let c = space.complement(&a);
                        assert!((space.eval(&c, &s) - 1.0).abs() < 1e-9);
                        assert!(space.eval(&c, &t).abs() < 1e-9);
                    }
                    Some(_) => {}
                    None => assert_eq!(i, j),
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn discrimination_effect_is_valid_and_vanishes(w in proptest::collection::vec(0.01f64..1.0, 12)) {
        let oct = ConvexStateSpace::bloch_octahedron();
        let norm = |w: &[f64]| { let s: f64 = w.iter().sum(); w.iter().map(|x| x / s).collect::<Vec<_>>() };
        let s = oct.mixture(&norm(&w[..6]));
        let t = oct.mixture(&norm(&w[6..]));
        // Interior points: no effect vanishes on s except multiples of zero.
        prop_assert!(conclusive_discrimination(&oct, &s, &t).is_none());
        let edge = oct.mixture(&norm(&[w[0], 0.0, w[1], 0.0, w[2], 0.0]));
        if let Some((a, v)) = conclusive_discrimination(&oct, &edge, &t) {
            prop_assert!(oct.is_valid_effect(&a));
            prop_assert!(oct.eval(&a, &edge).abs() <= 1e-9);
            prop_assert!((oct.eval(&a, &t) - v).abs() <= 1e-9);
        }
    }
}
