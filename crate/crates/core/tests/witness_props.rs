use abssep::absppt::sample_abs_ppt_spectrum;
use abssep::matcore::*;
use abssep::random::{haar_unitary, stream};
use abssep::sdpsolve::{min_witness_solution, LmiMode};
use abssep::witness::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn f_is_monotone_and_bounded(x in -0.5f64..0.0, dx in 0.0f64..0.5) {
        let y = (x + dx).min(0.0);
        let (fx, fy) = (f_lemma2(x).unwrap(), f_lemma2(y).unwrap());
        prop_assert!(fx <= fy + 1e-15);
        prop_assert!((0.5..=1.0).contains(&fx));
    }
}

#[test]
fn f_branch_points() {
    let sq2 = std::f64::consts::SQRT_2;
    let j = ell_jump();
    let left = f_lemma2(j - 1e-12).unwrap();
    assert!((left - (1.0 + sq2) / 4.0).abs() < 1e-9);
    assert!((f_lemma2(j).unwrap() - (2.0 + sq2) / 4.0).abs() < 1e-12);
    assert!((f_lemma2(ell_flat_start()).unwrap() - (1.0 + sq2) / 4.0).abs() < 1e-12);
    assert!((f_lemma2(ell_flat_start() - 1e-12).unwrap() - (1.0 + sq2) / 4.0).abs() < 1e-9);
}

#[test]
fn guaranteed_witnesses_are_nonnegative_on_abs_ppt_orbits() {
    let mut checked = 0;
    for (w_idx, ell) in [-0.5, -0.4, -0.3, -0.2, -0.1, 0.0].into_iter().enumerate() {
        let mu = extremal_witness_spectrum(ell, f_lemma2(ell).unwrap(), 9).unwrap();
        let ws = summarize_spectrum(&mu).unwrap();
        assert_eq!(cannot_detect_abs_ppt(&ws), Detectability::Guaranteed);
        let uw = haar_unitary(9, &mut stream(31, w_idx as u64)).unwrap();
        let w = HermitianMatrix::diag(&mu).conjugate_by(&uw).unwrap();
        for k in 0..200u64 {
            let s = sample_abs_ppt_spectrum(3, 3, &mut stream(32, k)).unwrap();
            let d = HermitianMatrix::diag(s.values());
            for i in 0..20u64 {
                let u = haar_unitary(9, &mut stream(33 + k, i)).unwrap();
                assert!(w.trace_product(&d.conjugate_by(&u).unwrap()) >= -1e-8);
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 6 * 200 * 20);
}

#[test]
fn certificates_agree_with_solver() {
    for ell in [-0.5, -0.45, -0.38, -0.3, -0.25, -0.2, -0.1, -0.02] {
        let cert = build_lemma2_certificate(ell, f_lemma2(ell).unwrap(), 9).unwrap();
        let chk = cert.verify();
        assert!(chk.ok, "{ell}: {chk:?}");
        let sol = min_witness_solution(&cert.witness_spectrum, 3, 3, LmiMode::Submatrix2x2).unwrap();
        // the certificate bounds the relaxed optimum from below
        assert!(sol.primal_value >= chk.bound - 1e-9, "{ell}: {} < {}", sol.primal_value, chk.bound);
        assert!(sol.dual_value <= sol.primal_value + 1e-12);
    }
}

#[test]
fn certificates_reject_values_above_f() {
    let ell = -0.4;
    assert!(build_lemma2_certificate(ell, f_lemma2(ell).unwrap() + 0.02, 9).is_err());
}
