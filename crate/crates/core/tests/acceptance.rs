//! Acceptance criteria 1-10. Each test prints one `criterion N: PASS|FAIL`
//! line (run with `--nocapture` to see them) and fails on FAIL.

use std::f64::consts::SQRT_2;

use abssep::absppt::{
    is_abs_ppt, necessary_2x2, sample_abs_ppt_spectrum, AbsPptVerdict, Spectrum, LMI_TOL,
};
use abssep::bipartite::{kron_vec, max_entangled, BipartiteOperator};
use abssep::families::*;
use abssep::matcore::{c64, eigvalsh, ComplexMatrix, HermitianMatrix};
use abssep::par::Execution;
use abssep::posmaps::{is_completely_positive_bc, witness_from_schmidt, MapSpec};
use abssep::random::{dirichlet_sorted, haar_state, haar_unitary, random_density, stream};
use abssep::scan::{orbit_scan, ScanCriterion};
use abssep::sdpsolve::*;
use abssep::witness::*;
use abssep::Error;
use num_complex::Complex64;
use rand::Rng;

const EXACT_TOL: f64 = 1e-12;
const CERT_TOL: f64 = 1e-10;
const SAMPLE_TOL: f64 = 1e-8;
const EXTREMAL_TOL: f64 = 1e-9;
const SOLVER_TOL: f64 = 1e-6;
const WEAK_DUALITY_FLOOR: f64 = -1e-9;
const SHARPNESS_MARGIN: f64 = -1e-4;
const ISO_WINDOW: f64 = 1e-6;
const SEED: u64 = 20140917;

fn verdict(n: u32, ok: bool, detail: String) {
    println!("criterion {n}: {} - {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn eigs_of_dual_output(phi: &MapSpec, v: &[Complex64], dim_a: usize) -> Vec<f64> {
    let p = HermitianMatrix::projector(v);
    let out = phi.dual().apply_id_tensor_raw(&p, dim_a).unwrap();
    eigvalsh(&HermitianMatrix::hermitian_part(&out)).unwrap()
}

fn basis(n: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![c64(0.0, 0.0); n];
    v[k] = c64(1.0, 0.0);
    v
}

#[test]
fn criterion_01_f_special_values() {
    let cases = [
        (-0.5, 0.5),
        (-0.4, 0.6),
        (-0.2, 0.9),
        ((1.0 - SQRT_2) / 2.0, (2.0 + SQRT_2) / 4.0),
        (-1.0 / 6.0, (10.0 + SQRT_2) / 12.0),
    ];
    let worst = cases
        .iter()
        .map(|&(x, want)| (f_lemma2(x).unwrap() - want).abs())
        .fold(0.0, f64::max);
    verdict(1, worst <= EXACT_TOL, format!("max |f - expected| = {worst:.3e}"));
}

#[test]
fn criterion_02_witness_dual_certificates() {
    let (a0, a1) = (-0.5, ell_flat_start());
    let (b0, b1) = (ell_flat_start(), ell_jump());
    let (c0, c1) = (ell_jump(), 0.0);
    let mut worst_res = 0.0f64;
    let mut worst_sq = 0.0f64;
    let mut worst_primal = f64::INFINITY;
    let mut worst_lower = f64::INFINITY;
    let mut failures = Vec::new();
    for (want, lo, hi) in [(Lemma2Case::A, a0, a1), (Lemma2Case::B, b0, b1), (Lemma2Case::C, c0, c1)] {
        for k in 0..50 {
            // interior points plus the closed ends of each case
            let ell = lo + (hi - lo) * k as f64 / 49.0;
            let ell = if want == Lemma2Case::B { ell.clamp(lo + 1e-9, hi - 1e-9) } else { ell };
            let ell = if want == Lemma2Case::A { ell.min(hi) } else { ell };
            let mu1 = f_lemma2(ell).unwrap();
            let cert = build_lemma2_certificate(ell, mu1, 9).unwrap();
            let chk = cert.verify();
            worst_res = worst_res.max(chk.residual);
            worst_sq = worst_sq.max((cert.bb * cert.bb - cert.aa * cert.cc).abs());
            if !chk.ok || chk.bound < -EXACT_TOL {
                failures.push(format!("ell={ell}: {chk:?}"));
            }
            let sol = min_witness_solution(&cert.witness_spectrum, 3, 3, LmiMode::Full).unwrap();
            worst_primal = worst_primal.min(sol.primal_value);
            worst_lower = worst_lower.min(sol.dual_value);
        }
    }
    let ok = failures.is_empty()
        && worst_res <= CERT_TOL
        && worst_sq <= EXACT_TOL
        && worst_primal >= WEAK_DUALITY_FLOOR
        && worst_lower >= -SOLVER_TOL;
    verdict(
        2,
        ok,
        format!(
            "150 certificates, max residual {worst_res:.2e}, max |bb^2-aa*cc| {worst_sq:.2e}, \
             min solver value {worst_primal:.2e} (lower bound {worst_lower:.2e}); {failures:?}"
        ),
    );
}

#[test]
fn criterion_03_witness_bound_sharpness() {
    let ell = -0.4;
    let mu = extremal_witness_spectrum(ell, 0.6 + 0.02, 9).unwrap();
    let v = min_witness_over_abs_ppt(&mu, 3, 3, LmiMode::Full).unwrap();
    verdict(3, v < SHARPNESS_MARGIN, format!("min Tr(W rho) over absolutely PPT = {v:.6e}"));
}

#[test]
fn criterion_04_choi_bounds() {
    let phi = MapSpec::choi();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..1000u64 {
        let v = haar_state(9, &mut stream(SEED, i)).unwrap();
        let e = eigs_of_dual_output(&phi, &v, 3);
        hi = hi.max(e[0]);
        lo = lo.min(e[8]);
    }
    let in_range = lo >= -1.0 / 6.0 - SAMPLE_TOL && hi <= 2.0 / 3.0 + SAMPLE_TOL;

    let psi = max_entangled(3).unwrap();
    let at_psi = eigs_of_dual_output(&phi, &psi, 3)[8];
    let s3 = 1.0 / 3f64.sqrt();
    let dual_max_vec = kron_vec(&basis(3, 0), &[c64(s3, 0.0), c64(0.0, 0.0), c64(SQRT_2 * s3, 0.0)]);
    let at_max = eigs_of_dual_output(&phi, &dual_max_vec, 3)[0];
    // the vector as written in the literature attains 2/3 under Phi_C itself
    let literal = kron_vec(&basis(3, 0), &[c64(s3, 0.0), c64(SQRT_2 * s3, 0.0), c64(0.0, 0.0)]);
    let lit_out = phi.apply_id_tensor_raw(&HermitianMatrix::projector(&literal), 3).unwrap();
    let at_literal = eigvalsh(&HermitianMatrix::hermitian_part(&lit_out)).unwrap()[0];
    let extremal = (at_psi + 1.0 / 6.0).abs() <= EXTREMAL_TOL
        && (at_max - 2.0 / 3.0).abs() <= EXTREMAL_TOL
        && (at_literal - 2.0 / 3.0).abs() <= EXTREMAL_TOL;

    let d = check_diamond_certificate(&phi, &choi_diamond_cert()).unwrap().value;
    let e = check_eig_certificate(&phi, &choi_eig_cert()).unwrap().value;
    let certs = (d - 4.0 / 3.0).abs() <= EXACT_TOL && (e - 2.0 / 3.0).abs() <= EXACT_TOL;
    verdict(
        4,
        in_range && extremal && certs,
        format!(
            "sampled eigenvalues in [{lo:.6}, {hi:.6}]; psi+ -> {at_psi:.12}, maximiser -> {at_max:.12} \
             (literal vector under Phi_C -> {at_literal:.12}); certificates {d:.15}, {e:.15}"
        ),
    );
}

#[test]
fn criterion_05_generalized_choi() {
    let mut diamond_worst = 0.0f64;
    let mut claim_failures = Vec::new();
    let mut infeasible = 0;
    let mut identity_worst = 0.0f64;
    let mut product_refutes = 0;
    for i in 0..=20 {
        for k in 0..=20 {
            let (b, c) = (4.0 / 3.0 * i as f64 / 20.0, 4.0 / 3.0 * k as f64 / 20.0);
            let phi = MapSpec::generalized_choi(b, c).unwrap();
            let d = diamond_norm_ub(&phi, Some(&gen_choi_diamond_cert(b, c))).unwrap();
            diamond_worst = diamond_worst.max((d - (3.0 + b + c) / 3.0).abs());
            match check_eig_certificate(&phi, &gen_choi_eig_cert(b, c)) {
                Err(_) => infeasible += 1,
                Ok(chk) => {
                    if !chk.matches_claim(CERT_TOL) {
                        // the closed form is below an eigenvalue attained at |00>
                        let e00 = kron_vec(&basis(3, 0), &basis(3, 0));
                        if eigs_of_dual_output(&phi, &e00, 3)[0] > chk.claimed + CERT_TOL {
                            product_refutes += 1;
                        }
                        claim_failures.push((b, c, chk.claimed, chk.value));
                    }
                }
            }
            if gen_choi_case(b, c) == GenChoiCase::Small {
                let (x, y) = gen_choi_xy(b, c);
                let rhs = 2.0 - b - c - (2.0 * (x * y).sqrt() - 1.0);
                identity_worst = identity_worst.max((b + 2.0 * x - (c + 2.0 * y)).abs());
                identity_worst = identity_worst.max((b + 2.0 * x - rhs).abs());
            }
        }
    }

    // the four hull vertices
    let r = 3.0 * (SQRT_2 - 1.0);
    let mut points_ok = true;
    let mut point_notes = Vec::new();
    for (b, c) in [(0.0, 0.0), (0.0, r), (1.2, 1.2), (r, 0.0)] {
        let phi = MapSpec::generalized_choi(b, c).unwrap();
        let ell = min_eig_lb_from_diamond(diamond_norm_ub(&phi, Some(&gen_choi_diamond_cert(b, c))).unwrap()).unwrap();
        let mu1 = if is_completely_positive_bc(b, c) {
            // CP: the output is a unit-trace PSD operator
            1.0
        } else {
            max_eig_ub(&phi, Some(&gen_choi_eig_cert(b, c))).unwrap()
        };
        let ws = WitnessSummary { mu1, ell, neg_count: usize::from(ell < 0.0), trace: 1.0 };
        points_ok &= cannot_detect_abs_ppt(&ws) == Detectability::Guaranteed;
        point_notes.push(format!("({b:.4},{c:.4}): ell>={ell:.6}, mu1<={mu1:.6}"));
    }
    let (b, c) = (0.0, r);
    let mu1_b = max_eig_ub(&MapSpec::generalized_choi(b, c).unwrap(), Some(&gen_choi_eig_cert(b, c))).unwrap();
    points_ok &= (mu1_b - (9.0 - 3.0 * SQRT_2) / 7.0).abs() <= EXACT_TOL;
    points_ok &= (mu1_b) <= f_lemma2(ell_jump()).unwrap();
    let mu1_c = max_eig_ub(&MapSpec::generalized_choi(1.2, 1.2).unwrap(), Some(&gen_choi_eig_cert(1.2, 1.2))).unwrap();
    points_ok &= (mu1_c - 0.6).abs() <= EXACT_TOL;

    let ok = diamond_worst <= CERT_TOL
        && infeasible == 0
        && claim_failures.is_empty()
        && identity_worst <= EXACT_TOL
        && points_ok;
    let shown: Vec<_> = claim_failures.iter().take(4).collect();
    verdict(
        5,
        ok,
        format!(
            "diamond max error {diamond_worst:.2e}; eigenvalue certificates infeasible at {infeasible} cells; \
             closed-form eigenvalue bound not certified at {} of 441 cells ({} of them beaten by |00>), e.g. \
             (b, c, claimed, certified) {shown:?}; identity max error {identity_worst:.2e}; \
             hull vertices ok = {points_ok} {point_notes:?}",
            claim_failures.len(),
            product_refutes
        ),
    );
}

#[test]
fn criterion_06_breuer_hall() {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [4usize, 6] {
        let nf = n as f64;
        let phi = MapSpec::breuer_hall(n).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..1000u64 {
            let v = haar_state(n * n, &mut stream(SEED + n as u64, i)).unwrap();
            let e = eigs_of_dual_output(&phi, &v, n);
            hi = hi.max(e[0]);
            lo = lo.min(*e.last().unwrap());
        }
        ok &= lo >= -1.0 / nf - SAMPLE_TOL && hi <= 1.0 / (nf - 2.0) + SAMPLE_TOL;
        let d = check_diamond_certificate(&phi, &breuer_hall_diamond_cert(&phi).unwrap()).unwrap().value;
        let e = check_eig_certificate(&phi, &breuer_hall_eig_cert(&phi).unwrap()).unwrap().value;
        ok &= (d - (nf + 2.0) / nf).abs() <= EXACT_TOL && (e - 1.0 / (nf - 2.0)).abs() <= EXACT_TOL;
        notes.push(format!("n={n}: samples in [{lo:.6}, {hi:.6}], certificates {d:.14}, {e:.14}"));
    }
    let f = f_lemma2(-0.25).unwrap();
    ok &= (f - (1.0 + SQRT_2) / 4.0).abs() <= EXACT_TOL && f >= 0.5;
    notes.push(format!("f(-1/4) = {f:.12}"));
    verdict(6, ok, notes.join("; "));
}

#[test]
fn criterion_07_realignment() {
    let mut worst_norm = 0.0f64;
    for k in 0..200u64 {
        let s = sample_abs_ppt_spectrum(3, 3, &mut stream(SEED, 10_000 + k)).unwrap();
        let rep = orbit_scan(&s, &ScanCriterion::Realignment, 20, SEED + k, SAMPLE_TOL, Execution::Parallel).unwrap();
        worst_norm = worst_norm.max(rep.worst);
    }

    let (ell_lo, mu_hi) = realignment_witness_bounds(3, 3).unwrap();
    let (mut min_ell, mut max_mu) = (0.0f64, f64::NEG_INFINITY);
    for i in 0..1000u64 {
        let rho = random_density(9, &mut stream(SEED + 1, i)).unwrap();
        let os = BipartiteOperator::new(3, 3, rho).unwrap().operator_schmidt().unwrap();
        let ws = summarize(&witness_from_schmidt(&os, None).unwrap()).unwrap();
        min_ell = min_ell.min(ws.ell);
        max_mu = max_mu.max(ws.mu1);
    }

    let mut max_tr = 0.0f64;
    for i in 0..1000u64 {
        let mut rng = stream(SEED + 2, i);
        let ua = haar_unitary(9, &mut rng).unwrap();
        let ub = haar_unitary(9, &mut rng).unwrap();
        let k = rng.random_range(1..=9);
        let ops = |u: &ComplexMatrix| -> Vec<ComplexMatrix> {
            (0..k).map(|j| ComplexMatrix::from_fn(3, 3, |r, c| u[(r * 3 + c, j)])).collect()
        };
        max_tr = max_tr.max(schmidt_trace_bound_check(&ops(&ua), &ops(&ub)).unwrap());
    }
    let ok = worst_norm <= 1.0 + SAMPLE_TOL
        && min_ell >= ell_lo - EXTREMAL_TOL
        && max_mu <= mu_hi + EXTREMAL_TOL
        && max_tr <= 3.0 + EXACT_TOL;
    verdict(
        7,
        ok,
        format!(
            "max ||R||_tr over 4000 orbit points {worst_norm:.12}; witness ell >= {min_ell:.6} (bound {ell_lo:.6}), \
             mu1 <= {max_mu:.6} (bound {mu_hi:.6}); max |Tr sum A(x)B| = {max_tr:.6} (bound 3)"
        ),
    );
}

#[test]
fn criterion_08_family_thresholds() {
    let mut werner_worst = 0.0f64;
    for n in 2..=6usize {
        for k in 0..=40 {
            let alpha = -1.0 + 2.0 * k as f64 / 40.0;
            let w = WernerParams::new(n, alpha).unwrap();
            let (c1, c2) = werner_lmi_min_eigs(w);
            let (n1, n2) = werner_lmi_min_eigs_numeric(w).unwrap();
            werner_worst = werner_worst.max((c1 - n1).abs()).max((c2 - n2).abs());
        }
        // the displayed closed forms in their own regimes
        let nf = n as f64;
        let w = WernerParams::new(n, 1.0 / nf + 0.1).unwrap();
        werner_worst = werner_worst.max((werner_lmi_min_eigs_numeric(w).unwrap().0 - (2.0 - 2.0 * nf * w.alpha)).abs());
        // for n = 2 that regime lies outside [-1, 1]
        if let Ok(w) = WernerParams::new(n, -1.0 / (nf - 1.0) - 0.01) {
            let num = werner_lmi_min_eigs_numeric(w).unwrap().1;
            werner_worst = werner_worst.max((num - (2.0 + 2.0 * (nf - 1.0) * w.alpha)).abs());
        }
    }

    let mut iso_ok = true;
    for n in [2usize, 3] {
        let t = isotropic_threshold(n);
        for (alpha, want) in [(t - ISO_WINDOW, AbsPptVerdict::Yes), (t + ISO_WINDOW, AbsPptVerdict::No)] {
            let s = Spectrum::new(n, n, isotropic_eigenvalues(IsotropicParams::new(n, alpha).unwrap())).unwrap();
            iso_ok &= is_abs_ppt(&s, LMI_TOL).unwrap().verdict == want;
        }
    }

    // bisection on the numerically computed smallest eigenvalue of the UPB LMI
    let lmi_min = |p: f64| *eigvalsh(&upb_lmi(p)).unwrap().last().unwrap();
    let (mut lo, mut hi) = (0.5, 0.8);
    assert!(lmi_min(lo) < 0.0 && lmi_min(hi) > 0.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if lmi_min(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let upb_gap = (hi - upb_abs_ppt_threshold()).abs();
    let p = upb_abs_sep_threshold();
    let rho = upb_state(&UpbMixtureParams::tiles(p).unwrap()).unwrap();
    let x = rho.matrix().scale(8.0);
    let defect = (x.as_matrix() - &ComplexMatrix::identity(9)).frobenius_norm().powi(2);
    let ok = werner_worst <= EXACT_TOL && iso_ok && upb_gap <= CERT_TOL && (defect - 1.0).abs() <= CERT_TOL;
    verdict(
        8,
        ok,
        format!(
            "Werner closed vs numeric max error {werner_worst:.2e}; isotropic transitions ok = {iso_ok}; \
             UPB LMI boundary {hi:.15} vs {:.15}; ||8 rho_p - I||_F^2 = {defect:.15}",
            upb_abs_ppt_threshold()
        ),
    );
}

#[test]
fn criterion_09_rank_deficient_logic() {
    let mut checked = 0;
    let mut passing = 0;
    let mut worst = 0.0f64;
    for (m, n) in [(2usize, 2usize), (2, 3), (3, 3), (3, 4), (4, 4)] {
        let p = m * n;
        for i in 0..400u64 {
            let mut rng = stream(SEED + 9, (p as u64) << 20 | i);
            let mut v = if i % 2 == 0 {
                dirichlet_sorted(p - 1, &mut rng)
            } else {
                // nearly flat on the first p - 1 entries
                let scale = 10f64.powf(rng.random_range(-14.0..-6.0));
                let mut v: Vec<f64> = (0..p - 1).map(|_| 1.0 + scale * rng.random_range(-1.0..1.0)).collect();
                let s: f64 = v.iter().sum();
                v.iter_mut().for_each(|x| *x /= s);
                v
            };
            v.push(0.0);
            let s = Spectrum::normalized(m, n, v).unwrap();
            checked += 1;
            if necessary_2x2(&s) {
                passing += 1;
                worst = worst.max(s.lambda(1) - s.lambda(p - 1));
            }
        }
    }
    verdict(
        9,
        passing > 0 && worst <= CERT_TOL,
        format!("{checked} spectra with a zero eigenvalue, {passing} pass the 2x2 test, max lambda_1 - lambda_(mn-1) = {worst:.2e}"),
    );
}

#[test]
fn criterion_10_headline_question_not_decided() {
    // the artifact must not claim a decision it cannot make
    let s44 = Spectrum::uniform(4, 4).unwrap();
    let undecided = is_abs_ppt(&s44, LMI_TOL).unwrap().verdict == AbsPptVerdict::NecessaryPassedOnly;
    let unsupported = matches!(
        min_witness_over_abs_ppt(s44.values(), 4, 4, LmiMode::Full),
        Err(Error::Unsupported(_))
    );
    let mu1 = f_lemma2(-0.4).unwrap() + 0.02;
    let ws = WitnessSummary { mu1, ell: -0.4, neg_count: 1, trace: 1.0 };
    let inconclusive = cannot_detect_abs_ppt(&ws) == Detectability::Inconclusive;
    verdict(
        10,
        undecided && unsupported && inconclusive,
        format!(
            "min(m,n)=4 membership reported as NecessaryPassedOnly: {undecided}; full SDP refused: {unsupported}; \
             witnesses beyond f(ell) reported Inconclusive rather than detecting: {inconclusive}"
        ),
    );
}
