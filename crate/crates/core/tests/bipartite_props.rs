use abssep::bipartite::*;
use abssep::matcore::*;
use abssep::random::{haar_unitary, random_density, stream};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_transpose_involution(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
        let rho = random_density(m * n, &mut stream(seed, 0)).unwrap();
        let x = BipartiteOperator::new(m, n, rho).unwrap();
        let pt = x.partial_transpose();
        prop_assert!((pt.matrix().trace() - x.matrix().trace()).abs() < 1e-12);
        prop_assert!((pt.matrix().frobenius_norm() - x.matrix().frobenius_norm()).abs() < 1e-12);
        prop_assert!((pt.partial_transpose().matrix().as_matrix() - x.matrix().as_matrix()).max_abs() == 0.0);
    }

    #[test]
    fn realignment_is_an_isometry(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
        let rho = random_density(m * n, &mut stream(seed, 1)).unwrap();
        let r = realign_raw(&rho, m, n);
        prop_assert_eq!((r.rows(), r.cols()), (m * m, n * n));
        prop_assert!((r.frobenius_norm() - rho.frobenius_norm()).abs() < 1e-12);
        if m == n {
            prop_assert!((&realign_raw(&r, m, n) - rho.as_matrix()).max_abs() == 0.0);
        }
    }

    #[test]
    fn realignment_norm_is_local_unitary_invariant(seed in any::<u64>(), m in 2usize..4, n in 2usize..4) {
        let mut rng = stream(seed, 2);
        let rho = random_density(m * n, &mut rng).unwrap();
        let u = haar_unitary(m, &mut rng).unwrap().kron(&haar_unitary(n, &mut rng).unwrap());
        let a = schatten_norm(&realign_raw(&rho, m, n), Norm::Trace).unwrap();
        let b = schatten_norm(&realign_raw(&rho.conjugate_by(&u).unwrap(), m, n), Norm::Trace).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn orbit_values_respect_overlap_bound(seed in any::<u64>(), d in 2usize..7) {
        let mut rng = stream(seed, 3);
        let a = random_density(d, &mut rng).unwrap();
        let b = random_density(d, &mut rng).unwrap();
        let sa = eigvalsh(&a).unwrap();
        let sb = eigvalsh(&b).unwrap();
        let lo = min_unitary_overlap(&sa, &sb).unwrap();
        for _ in 0..10 {
            let u = haar_unitary(d, &mut rng).unwrap();
            prop_assert!(a.trace_product(&b.conjugate_by(&u).unwrap()) >= lo - 1e-12);
        }
    }

    #[test]
    fn schmidt_product_of_top_two_is_at_most_half(seed in any::<u64>(), m in 2usize..5, n in 2usize..5) {
        let v = haar_state(m * n, &mut stream(seed, 4)).unwrap();
        let s = vector_schmidt(&v, m, n).unwrap();
        let g2 = s.values.get(1).copied().unwrap_or(0.0);
        prop_assert!(s.values[0] * g2 <= 0.5 + 1e-12);
        let total: f64 = s.values.iter().map(|g| g * g).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn operator_schmidt_reconstructs(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
        let rho = random_density(m * n, &mut stream(seed, 5)).unwrap();
        let os = operator_schmidt_raw(&rho, m, n).unwrap();
        prop_assert!((&os.reconstruct() - rho.as_matrix()).max_abs() < 1e-10);
    }
}
