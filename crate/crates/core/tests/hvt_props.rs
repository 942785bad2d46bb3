use proptest::prelude::*;
use spooky_core::hvt::{
    build_deterministic_signaling, check_lambda_independence, check_outcome_independence,
    check_parameter_independence, deterministic_local_model, is_descriptively_significant,
    reconstruct, single_valued, HvtModel, OiForm, Prior,
};
use spooky_core::random::{random_behavior, random_positive_hvt, random_table, rng};
use spooky_core::tables::BehaviorShape;

fn two_by_two_tests() -> BehaviorShape {
    BehaviorShape::new(
        vec!["A".into(), "B".into()],
        vec![
            vec!["x0".into(), "x1".into()],
            vec!["y0".into(), "y1".into()],
        ],
        vec![vec![2, 2], vec![2, 3]],
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn local_model_is_exact_and_independent(seed in any::<u64>()) {
        let t = random_table(&mut rng(seed));
        let m = deterministic_local_model(&t);
        let back = reconstruct(&m);
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((back.prob(&[0, 0], &[i, j]) - t.get(i, j)).abs() <= 1e-12);
            }
        }
        prop_assert!(check_lambda_independence(&m));
        prop_assert!(check_parameter_independence(&m));
        prop_assert!(check_outcome_independence(&m, OiForm::Factorized));
        prop_assert!(check_outcome_independence(&m, OiForm::Conditional));
    }

    #[test]
    fn reconstruct_is_linear_in_the_prior(seed in any::<u64>(), mix in 0.0f64..1.0) {
        let mut r = rng(seed);
        let shape = two_by_two_tests();
        let m = random_positive_hvt(&mut r, &shape, 3, false);
        let Prior::Any(p) = m.prior().clone() else { unreachable!() };
        let other: Vec<f64> = vec![0.2, 0.5, 0.3];
        let mixed: Vec<f64> = p.iter().zip(&other).map(|(a, b)| mix * a + (1.0 - mix) * b).collect();
        let with = |prior: Vec<f64>| {
            reconstruct(&HvtModel::new(m.lambdas().to_vec(), Prior::Any(prior), m.conditionals().to_vec()).unwrap())
        };
        let (b1, b2, bm) = (with(p.clone()), with(other.clone()), with(mixed));
        for (x, d) in bm.iter() {
            for (k, v) in d.iter().enumerate() {
                let lin = mix * b1.distribution(x)[k] + (1.0 - mix) * b2.distribution(x)[k];
                prop_assert!((v - lin).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn single_valued_is_never_significant(seed in any::<u64>()) {
        let b = random_behavior(&mut rng(seed), &two_by_two_tests());
        let m = single_valued(&b);
        match is_descriptively_significant(&m) {
            Ok(w) => prop_assert!(w.is_none()),
            // Signaling behaviors fail parameter independence.
            Err(e) => prop_assert!(matches!(e, spooky_core::Error::NotApplicable(_))),
        }
    }

    #[test]
    fn signaling_construction_is_exact(seed in any::<u64>()) {
        let b = random_behavior(&mut rng(seed), &two_by_two_tests());
        let m = build_deterministic_signaling(&b);
        prop_assert!(reconstruct(&m).max_abs_diff(&b).unwrap() <= 1e-12);
        prop_assert_eq!(check_lambda_independence(&m), b.is_test_independent(1e-9));
    }
}

#[test]
fn outcome_independence_forms_agree_on_positive_models() {
    let shapes = [BehaviorShape::binary_pair(), two_by_two_tests()];
    let mut r = rng(99);
    let mut counts = [0usize; 2];
    for k in 0..600 {
        let shape = &shapes[k % 2];
        let factorized = k % 3 == 0;
        let m = random_positive_hvt(&mut r, shape, 1 + k % 4, factorized);
        let f = check_outcome_independence(&m, OiForm::Factorized);
        let c = check_outcome_independence(&m, OiForm::Conditional);
        assert_eq!(f, c, "model {k}");
        counts[usize::from(f)] += 1;
    }
    assert!(counts[0] > 0 && counts[1] > 0, "{counts:?}");
}
