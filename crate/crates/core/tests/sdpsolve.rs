use abssep::posmaps::MapSpec;
use abssep::sdpsolve::*;
use abssep::witness::{extremal_witness_spectrum, f_lemma2};
use abssep::Error;

#[test]
fn choi_certificates() {
    let phi = MapSpec::choi();
    let d = check_diamond_certificate(&phi, &choi_diamond_cert()).unwrap();
    assert!((d.value - 4.0 / 3.0).abs() < 1e-12, "{d:?}");
    let e = check_eig_certificate(&phi, &choi_eig_cert()).unwrap();
    assert!((e.value - 2.0 / 3.0).abs() < 1e-12, "{e:?}");
    assert!((min_eig_lb_from_diamond(d.value).unwrap() + 1.0 / 6.0).abs() < 1e-12);
}

#[test]
fn gen_choi_diamond_grid() {
    for i in 0..=12 {
        for k in 0..=12 {
            let (b, c) = (i as f64 * 0.25, k as f64 * 0.25);
            if b + c > 3.0 {
                continue;
            }
            let phi = MapSpec::generalized_choi(b, c).unwrap();
            let v = diamond_norm_ub(&phi, Some(&gen_choi_diamond_cert(b, c))).unwrap();
            assert!((v - (3.0 + b + c) / 3.0).abs() < 1e-10, "({b},{c}) -> {v}");
        }
    }
}

#[test]
fn breuer_hall_certificates() {
    for n in [4usize, 6] {
        let phi = MapSpec::breuer_hall(n).unwrap();
        let nf = n as f64;
        let d = check_diamond_certificate(&phi, &breuer_hall_diamond_cert(&phi).unwrap()).unwrap();
        assert!((d.value - (nf + 2.0) / nf).abs() < 1e-12, "{n}: {d:?}");
        let e = check_eig_certificate(&phi, &breuer_hall_eig_cert(&phi).unwrap()).unwrap();
        assert!((e.value - 1.0 / (nf - 2.0)).abs() < 1e-12, "{n}: {e:?}");
    }
}

#[test]
fn psd_breaking_perturbation_is_rejected() {
    let phi = MapSpec::choi();
    let mut cert = choi_diamond_cert();
    let y = cert.get_mut("Y0").unwrap();
    let mut m = y.as_matrix().clone();
    m[(2, 3)] += 1e-3;
    m[(3, 2)] += 1e-3;
    *y = abssep::matcore::HermitianMatrix::new(m).unwrap();
    assert!(matches!(check_diamond_certificate(&phi, &cert), Err(Error::CertificateRejected(_))));

    // raising a diagonal entry keeps Y >= 0 but no longer certifies 2/3
    let mut cert = choi_eig_cert();
    let y = cert.get_mut("Y").unwrap();
    let mut m = y.as_matrix().clone();
    m[(3, 3)] = abssep::matcore::c64(5.0 / 6.0, 0.0);
    *y = abssep::matcore::HermitianMatrix::new(m).unwrap();
    let chk = check_eig_certificate(&phi, &cert).unwrap();
    assert!(!chk.matches_claim(1e-10), "{chk:?}");
}

#[test]
fn solver_diamond_choi() {
    let br = diamond_bracket(&MapSpec::choi()).unwrap();
    assert!(br.lower <= br.upper + 1e-12);
    assert!((br.upper - 4.0 / 3.0).abs() < 1e-6, "{br:?}");
    assert!((br.lower - 4.0 / 3.0).abs() < 1e-6, "{br:?}");
}

#[test]
fn solver_max_eig_choi() {
    let br = max_eig_bracket(&MapSpec::choi()).unwrap();
    assert!(br.lower <= br.upper + 1e-7, "{br:?}");
    assert!((br.upper - 2.0 / 3.0).abs() < 1e-6, "{br:?}");
}

#[test]
fn min_witness_examples() {
    let u = vec![1.0 / 9.0; 9];
    let v = min_witness_over_abs_ppt(&u, 3, 3, LmiMode::Full).unwrap();
    assert!((v - 1.0 / 9.0).abs() < 1e-6, "{v}");

    let mut mu = vec![0.0; 9];
    mu[0] = 0.6;
    mu[1] = 0.6;
    mu[2] = 0.2;
    mu[8] = -0.4;
    for mode in [LmiMode::Full, LmiMode::Submatrix2x2] {
        let v = min_witness_over_abs_ppt(&mu, 3, 3, mode).unwrap();
        assert!(v.abs() < 1e-6, "{mode:?}: {v}");
    }

    let ell = -0.4;
    let mu = extremal_witness_spectrum(ell, f_lemma2(ell).unwrap() + 0.02, 9).unwrap();
    let v = min_witness_over_abs_ppt(&mu, 3, 3, LmiMode::Full).unwrap();
    assert!(v < 0.0, "{v}");
    let v2 = min_witness_over_abs_ppt(&mu, 3, 3, LmiMode::Submatrix2x2).unwrap();
    assert!(v2 <= v + 1e-7);

    assert!(matches!(
        min_witness_over_abs_ppt(&vec![1.0 / 16.0; 16], 4, 4, LmiMode::Full),
        Err(Error::Unsupported(_))
    ));
}
