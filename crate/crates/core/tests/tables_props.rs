mod common;

use common::rank_2x2;
use proptest::prelude::*;
use spooky_core::quantum::born_behavior;
use spooky_core::random::{random_ket, random_product_table, random_projective_test, rng};
use spooky_core::tables::{
    check_no_signaling, factorize, paraboloid_sample, spooky_verdict, JointTable, Purity,
    SpookyVerdict,
};
use spooky_core::{quantum::DensityMatrix, EPS};

fn table_strategy() -> impl Strategy<Value = JointTable> {
    prop_oneof![
        3 => proptest::array::uniform4(0.0f64..1.0).prop_filter_map("zero mass", |w| {
            let s: f64 = w.iter().sum();
            (s > 1e-6).then(|| {
                JointTable::new([[w[0] / s, w[1] / s], [w[2] / s, w[3] / s]], Purity::Unknown).unwrap()
            })
        }),
        1 => any::<u64>().prop_map(|seed| random_product_table(&mut rng(seed))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn factorize_iff_small_det_iff_rank_one(t in table_strategy()) {
        let by_det = t.determinant().abs() <= EPS;
        let by_factor = factorize(&t).is_some();
        let by_rank = rank_2x2(t.entries(), EPS) <= 1;
        prop_assert_eq!(by_det, by_factor);
        prop_assert_eq!(by_det, by_rank);
        if let Some(f) = factorize(&t) {
            for i in 0..2 {
                for j in 0..2 {
                    prop_assert!((f.q[i] * f.r[j] - t.get(i, j)).abs() <= 1e-8);
                }
            }
        }
    }

    #[test]
    fn determinant_relabeling_rules(t in table_strategy()) {
        let d = t.determinant();
        prop_assert_eq!(t.transpose().determinant(), d);
        prop_assert_eq!(t.swap_a_outcomes().swap_b_outcomes().determinant(), d);
        prop_assert_eq!(t.swap_b_outcomes().determinant(), -d);
        prop_assert_eq!(t.swap_a_outcomes().determinant(), -d);
    }
}

#[test]
fn surface_grid_points_are_witnessed_not_spooky() {
    for n in [3, 8, 20] {
        for p in paraboloid_sample(n).unwrap() {
            if p.residual.abs() <= EPS {
                let t = p.to_table(Purity::DeclaredPure).unwrap();
                assert_eq!(spooky_verdict(&t), SpookyVerdict::NotSpookyWitnessed);
            }
        }
    }
}

#[test]
fn quantum_behaviors_never_signal() {
    let mut r = rng(11);
    for _ in 0..120 {
        let psi = random_ket(&mut r, 4);
        let rho = DensityMatrix::from_ket(&psi).unwrap();
        let ta = [
            random_projective_test(&mut r, 2),
            random_projective_test(&mut r, 2),
        ];
        let tb = [
            random_projective_test(&mut r, 2),
            random_projective_test(&mut r, 2),
            random_projective_test(&mut r, 2),
        ];
        let b = born_behavior(&rho, (2, 2), &ta, &tb).unwrap();
        assert!(check_no_signaling(&b).is_empty());
    }
}
