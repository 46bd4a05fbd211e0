use abssep::bipartite::{kron_vec, partial_transpose_raw};
use abssep::matcore::*;
use abssep::posmaps::*;
use abssep::random::{ginibre, haar_state, random_product_state, stream};
use proptest::prelude::*;

fn maps() -> Vec<MapSpec> {
    vec![
        MapSpec::identity(3).unwrap(),
        MapSpec::transpose(3).unwrap(),
        MapSpec::reduction(3).unwrap(),
        MapSpec::choi(),
        MapSpec::generalized_choi(0.5, 1.3).unwrap(),
        MapSpec::breuer_hall(4).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dual_identity(seed in any::<u64>()) {
        // Tr(Phi(X)^dagger Y) = Tr(X^dagger Phi^dagger(Y))
        for phi in maps() {
            let n = phi.in_dim();
            let mut rng = stream(seed, n as u64);
            let x = ginibre(n, n, &mut rng);
            let y = ginibre(n, n, &mut rng);
            let lhs = phi.apply(&x).unwrap().hs_inner(&y);
            let rhs = x.hs_inner(&phi.dual().apply(&y).unwrap());
            prop_assert!((lhs - rhs).norm() < 1e-10, "{}", phi.name());
        }
    }

    #[test]
    fn id_tensor_is_linear_and_hermiticity_preserving(seed in any::<u64>()) {
        for phi in maps() {
            let n = phi.in_dim();
            let mut rng = stream(seed, 7);
            let a = HermitianMatrix::hermitian_part(&ginibre(2 * n, 2 * n, &mut rng));
            let b = HermitianMatrix::hermitian_part(&ginibre(2 * n, 2 * n, &mut rng));
            let fa = phi.apply_id_tensor_raw(&a, 2).unwrap();
            let fb = phi.apply_id_tensor_raw(&b, 2).unwrap();
            let fab = phi.apply_id_tensor_raw(&(&a.scale(2.0) + &b).into_matrix(), 2).unwrap();
            prop_assert!((&fab - &(&fa.scale(2.0) + &fb)).max_abs() < 1e-10);
            prop_assert!(fa.hermitian_defect() < 1e-12);
        }
    }

    #[test]
    fn choi_map_is_phi_1_0(seed in any::<u64>()) {
        let x = ginibre(3, 3, &mut stream(seed, 8));
        let a = MapSpec::choi().apply(&x).unwrap();
        let b = MapSpec::generalized_choi(1.0, 0.0).unwrap().apply(&x).unwrap();
        prop_assert!((&a - &b).max_abs() == 0.0);
    }

    #[test]
    fn transpose_tensor_is_partial_transpose(seed in any::<u64>()) {
        let x = ginibre(6, 6, &mut stream(seed, 9));
        let t = MapSpec::transpose(3).unwrap().apply_id_tensor_raw(&x, 2).unwrap();
        prop_assert!((&t - &partial_transpose_raw(&x, 2, 3)).max_abs() == 0.0);
    }

    #[test]
    fn map_witnesses_are_nonnegative_on_product_states(seed in any::<u64>(), b in 0.0f64..1.5, c in 0.0f64..1.5) {
        prop_assume!(is_positive_bc(b, c));
        let phi = MapSpec::generalized_choi(b, c).unwrap();
        let mut rng = stream(seed, 10);
        let v = haar_state(9, &mut rng).unwrap();
        let w = witness_from_map(&phi, &v, 3).unwrap();
        for _ in 0..30 {
            let sigma = random_product_state(3, 3, &mut rng).unwrap();
            prop_assert!(w.trace_product(&sigma) >= -1e-9);
        }
    }
}

#[test]
fn witness_property_on_thousand_product_states() {
    for phi in [MapSpec::choi(), MapSpec::reduction(3).unwrap(), MapSpec::breuer_hall(4).unwrap()] {
        let n = phi.in_dim();
        let mut rng = stream(77, n as u64);
        let v = haar_state(n * n, &mut rng).unwrap();
        let w = witness_from_map(&phi, &v, n).unwrap();
        for _ in 0..1000 {
            let a = haar_state(n, &mut rng).unwrap();
            let b = haar_state(n, &mut rng).unwrap();
            let p = HermitianMatrix::projector(&kron_vec(&a, &b));
            assert!(w.trace_product(&p) >= -1e-9, "{}", phi.name());
        }
    }
}
