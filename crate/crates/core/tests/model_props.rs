mod common;

use common::*;
use premeasure_core::generate::{model_family, random_ket, random_observable, ModelKind};
use premeasure_core::{
    build_canonical_model, check_calibration, check_dynamical, evolve_branch, premeasure, Tolerance64,
};
use proptest::prelude::*;

fn tol() -> Tolerance64 {
    Tolerance64::default()
}

#[test]
fn calibration_and_dynamical_verdicts_agree() {
    let family = model_family::<f64, _>(&mut rng(1), 160, 6);
    let mut failures = 0;
    for (i, (kind, model)) in family.iter().enumerate() {
        let cal = check_calibration(model, tol());
        let dyn_ = check_dynamical(model, tol());
        assert_eq!(cal.passed, dyn_.passed, "model {i} ({kind:?}): cal {:e} dyn {:e}", cal.max_residual, dyn_.max_residual);
        if !cal.passed {
            failures += 1;
            assert_eq!(*kind, ModelKind::Perturbed);
            // a broken model is broken by a wide margin
            assert!(cal.max_residual > 1e-3 && dyn_.max_residual > 1e-3);
        } else {
            assert!(cal.max_residual <= 1e-10 && dyn_.max_residual <= 1e-10);
        }
    }
    assert!(failures >= 20, "only {failures} negative models generated");
}

#[test]
fn builder_contract() {
    let mut r = rng(2);
    for dim in 2..=6 {
        for outcomes in 1..=dim {
            let obs = random_observable::<f64, _>(&mut r, dim, outcomes);
            let m = build_canonical_model(&obs, tol()).unwrap();
            assert_eq!(m.dim_b(), outcomes);
            assert!(m.unitary().unitarity_residual() <= 1e-10);
            assert!(check_calibration(&m, tol()).max_residual <= 1e-10);
            assert!(check_dynamical(&m, tol()).max_residual <= 1e-10);
        }
    }
}

#[test]
fn annihilated_branches_vanish_on_both_sides() {
    let mut r = rng(3);
    for (_, model) in model_family::<f64, _>(&mut r, 40, 5) {
        if !check_dynamical(&model, tol()).passed {
            continue;
        }
        for k in 0..model.outcome_count() {
            // a state inside range(E^j), j ≠ k, has E^k φ = 0
            for j in (0..model.outcome_count()).filter(|&j| j != k) {
                let basis = model.observable().range_basis(j, tol()).unwrap();
                let phi = basis[0].normalized().unwrap();
                let fin = premeasure(&model, &phi).unwrap();
                let lhs = model.apply_pointer(k, &fin).unwrap();
                let rhs = evolve_branch(&model, &phi, k).unwrap();
                assert!(lhs.norm() <= 1e-9);
                assert!(rhs.norm() <= 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn premeasure_matches_dense_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (_, model) = model_family::<f64, _>(&mut r, 3, 5).pop().unwrap();
        let phi = random_ket::<f64, _>(&mut r, model.dim_a());
        let out = premeasure(&model, &phi).unwrap();
        let joint = kron_vec(&ket_vec(&phi), &ket_vec(model.instrument_state()));
        let oracle = matvec(&dense(model.unitary()), &joint);
        prop_assert!(dist(&ket_vec(&out), &oracle) <= 1e-12);
        prop_assert!((out.norm() - 1.0).abs() <= 1e-12);
    }
}
