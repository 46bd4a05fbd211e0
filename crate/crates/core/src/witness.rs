//! Spectral test for witnesses that cannot detect absolutely PPT
//! entanglement, with explicit dual certificates for the 2x2 relaxation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{eigvalsh, ComplexMatrix, HermitianMatrix};

/// Slack in `mu1 <= f(ell)`.
pub const DETECT_SLACK: f64 = 1e-12;
/// Required closeness of `Tr(W)` to one.
pub const TRACE_TOL: f64 = 1e-9;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Left end of the flat branch, `-1 / (2 sqrt 2)`.
pub fn ell_flat_start() -> f64 {
    -1.0 / (2.0 * SQRT2)
}

/// Jump point `(1 - sqrt 2) / 2`.
pub fn ell_jump() -> f64 {
    (1.0 - SQRT2) / 2.0
}

/// Largest admissible top eigenvalue as a function of the negative mass.
pub fn f_lemma2(x: f64) -> Result<f64> {
    if !(-0.5..=0.0).contains(&x) {
        return Err(Error::DomainError(format!("f is defined on [-1/2, 0], got {x}")));
    }
    Ok(if x <= ell_flat_start() {
        ((1.0 - 4.0 * x * x).max(0.0).sqrt() - 2.0 * x + 1.0) / 4.0
    } else if x < ell_jump() {
        (1.0 + SQRT2) / 4.0
    } else {
        ((1.0 + 4.0 * x - 4.0 * x * x).max(0.0).sqrt() - 2.0 * x + 3.0) / 4.0
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessSummary {
    pub mu1: f64,
    /// Sum of the negative eigenvalues.
    pub ell: f64,
    pub neg_count: usize,
    pub trace: f64,
}

/// Summary of a unit-trace witness from its eigenvalues.
pub fn summarize(w: &HermitianMatrix) -> Result<WitnessSummary> {
    let tr = w.trace();
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::Unnormalized(tr));
    }
    summarize_spectrum(&eigvalsh(w)?)
}

pub fn summarize_spectrum(values: &[f64]) -> Result<WitnessSummary> {
    if values.is_empty() {
        return Err(Error::InvalidMatrix("empty spectrum".into()));
    }
    let trace: f64 = values.iter().sum();
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::Unnormalized(trace));
    }
    let mu1 = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ell = values.iter().filter(|&&v| v < 0.0).sum();
    let neg_count = values.iter().filter(|&&v| v < -1e-12).count();
    Ok(WitnessSummary { mu1, ell, neg_count, trace })
}

/// `(1 - ||W||_tr) / 2`, the trace-norm form of `ell`.
pub fn ell_from_trace_norm(values: &[f64]) -> f64 {
    (1.0 - values.iter().map(|v| v.abs()).sum::<f64>()) / 2.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Detectability {
    /// `Tr(W rho) >= 0` for every absolutely PPT `rho`.
    Guaranteed,
    Inconclusive,
}

pub fn cannot_detect_abs_ppt(ws: &WitnessSummary) -> Detectability {
    match f_lemma2(ws.ell.min(0.0)) {
        Ok(f) if ws.ell >= -0.5 && ws.mu1 <= f + DETECT_SLACK => Detectability::Guaranteed,
        _ => Detectability::Inconclusive,
    }
}

/// Worst-case witness spectrum for given `(ell, mu1)`, descending:
/// `(mu1, min(mu1, 1 - mu1 - ell), max(0, 1 - 2 mu1 - ell), 0, ..., 0, ell)`.
pub fn extremal_witness_spectrum(ell: f64, mu1: f64, mn: usize) -> Result<Vec<f64>> {
    if mn < 4 {
        return Err(Error::InvalidDim(format!("need mn >= 4, got {mn}")));
    }
    if ell > 0.0 || ell < -0.5 {
        return Err(Error::DomainError(format!("ell = {ell} outside [-1/2, 0]")));
    }
    let mu2 = mu1.min(1.0 - mu1 - ell);
    let mu3 = (1.0 - 2.0 * mu1 - ell).max(0.0);
    if mu3 > mu2 + 1e-12 || mu2 < -1e-12 {
        return Err(Error::DomainError(format!(
            "no descending spectrum with mu1 = {mu1}, ell = {ell}"
        )));
    }
    let mut v = vec![0.0; mn];
    v[0] = mu1;
    v[1] = mu2;
    v[2] = mu3;
    v[mn - 1] = ell;
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lemma2Case {
    A,
    B,
    C,
}

pub fn lemma2_case(ell: f64) -> Result<Lemma2Case> {
    f_lemma2(ell)?;
    Ok(if ell <= ell_flat_start() {
        Lemma2Case::A
    } else if ell < ell_jump() {
        Lemma2Case::B
    } else {
        Lemma2Case::C
    })
}

/// Dual point `(t, [[aa, bb], [bb, cc]], y)` for the relaxed problem
/// `min sum_j lambda_j mu_{mn-j+1}` subject to the 2x2 block, ordering and
/// unit trace; `witness_spectrum` is the spectrum it certifies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma2Certificate {
    pub case: Lemma2Case,
    pub ell: f64,
    pub mu1: f64,
    pub t: f64,
    pub aa: f64,
    pub bb: f64,
    pub cc: f64,
    /// `y[i - 1]` multiplies `lambda_i - lambda_{i+1} >= 0`.
    pub y: Vec<f64>,
    pub witness_spectrum: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma2Check {
    pub ok: bool,
    /// Largest violation among the equality constraints.
    pub residual: f64,
    /// `lambda_min([[aa, bb], [bb, cc]])`.
    pub block_min_eig: f64,
    pub min_y: f64,
    /// Slack of the inequality attached to `lambda_mn >= 0`.
    pub last_slack: f64,
    /// Dual objective, a lower bound on the relaxed optimum.
    pub bound: f64,
}

impl Lemma2Certificate {
    /// Checks dual feasibility against `witness_spectrum`.
    pub fn verify(&self) -> Lemma2Check {
        verify_dual(self.t, self.aa, self.bb, self.cc, &self.y, &self.witness_spectrum)
    }
}

/// Dual feasibility for an arbitrary descending witness spectrum `mu`.
///
/// With `y_0 = y_p = 0`, stationarity reads
/// `mu_{p-j+1} = t + y_j - y_{j-1} + L*(Z)_j` for `j < p` and
/// `mu_1 >= t - y_{p-1} + 2 aa`, where `L*(Z)` puts `-2bb` on `lambda_1`,
/// `2cc` on `lambda_{p-2}` and `2bb` on `lambda_{p-1}`.
pub fn verify_dual(t: f64, aa: f64, bb: f64, cc: f64, y: &[f64], mu: &[f64]) -> Lemma2Check {
    let p = mu.len();
    assert!(p >= 4 && y.len() == p - 1, "need mn >= 4 and mn - 1 multipliers");
    let yy = |i: usize| if i == 0 || i == p { 0.0 } else { y[i - 1] };
    let lstar = |j: usize| {
        let mut s = 0.0;
        if j == 1 {
            s -= 2.0 * bb;
        }
        if j == p - 2 {
            s += 2.0 * cc;
        }
        if j == p - 1 {
            s += 2.0 * bb;
        }
        if j == p {
            s += 2.0 * aa;
        }
        s
    };
    let coeff = |j: usize| mu[p - j];
    let mut residual: f64 = 0.0;
    for j in 1..p {
        let r = coeff(j) - (t + yy(j) - yy(j - 1) + lstar(j));
        residual = residual.max(r.abs());
    }
    let last_slack = coeff(p) - (t - yy(p - 1) + lstar(p));
    let tr = aa + cc;
    let det = aa * cc - bb * bb;
    let block_min_eig = tr / 2.0 - ((aa - cc).powi(2) / 4.0 + bb * bb).sqrt();
    let min_y = y.iter().copied().fold(f64::INFINITY, f64::min);
    let ok = residual <= 1e-10
        && last_slack >= -1e-10
        && min_y >= -1e-12
        && aa >= -1e-10
        && cc >= -1e-10
        && (block_min_eig >= -1e-10 || det >= -1e-12);
    Lemma2Check {
        ok,
        residual,
        block_min_eig,
        min_y,
        last_slack,
        bound: t,
    }
}

/// Closed-form dual point with `t = 0` for the worst-case witness at `ell`.
///
/// Any `mu1 <= f(ell)` is accepted; the certificate is built for the
/// extremal spectrum at `mu1 = f(ell)`, which dominates the others.
pub fn build_lemma2_certificate(ell: f64, mu1: f64, mn: usize) -> Result<Lemma2Certificate> {
    let f = f_lemma2(ell)?;
    if mu1 > f + DETECT_SLACK {
        return Err(Error::InvalidParams(format!(
            "mu1 = {mu1} exceeds f({ell}) = {f}; no certificate exists"
        )));
    }
    if mn < 4 {
        return Err(Error::InvalidDim(format!("need mn >= 4, got {mn}")));
    }
    let case = lemma2_case(ell)?;
    let mu1 = f;
    let p = mn;
    let (aa, bb, cc, y) = match case {
        Lemma2Case::A | Lemma2Case::B => {
            let l0 = if case == Lemma2Case::A { ell } else { ell_flat_start() };
            let mut y = vec![0.0; p - 1];
            y[p - 2] = mu1 + l0;
            // case B: the extra negative mass ell - l0 moves between
            // lambda_1 and lambda_{p-2} through y_1..y_{p-3}
            let shift = ell - l0;
            for yi in y.iter_mut().take(p - 3) {
                *yi += shift;
            }
            ((l0 + 2.0 * mu1) / 2.0, -l0 / 2.0, (1.0 - 2.0 * mu1 - l0) / 2.0, y)
        }
        Lemma2Case::C => {
            let mut y = vec![0.0; p - 1];
            for yi in y.iter_mut().take(p - 3) {
                *yi = 1.0 - mu1;
            }
            (mu1 / 2.0, (1.0 - mu1 - ell) / 2.0, (1.0 - mu1) / 2.0, y)
        }
    };
    Ok(Lemma2Certificate {
        case,
        ell,
        mu1,
        t: 0.0,
        aa,
        bb,
        cc,
        y,
        witness_spectrum: extremal_witness_spectrum(ell, mu1, mn)?,
    })
}

/// `(ell_lower, mu1_upper)` for unit-trace realignment witnesses on
/// `C^m (x) C^n`.
pub fn realignment_witness_bounds(m: usize, n: usize) -> Result<(f64, f64)> {
    if m < 2 || n < 2 {
        return Err(Error::InvalidDim(format!("need m, n >= 2, got ({m}, {n})")));
    }
    let d = (m * n) as f64;
    let r = d.sqrt();
    let ell = (1.0 - (2.0 * r / (r - 1.0)).sqrt()) / 2.0;
    let mu1 = (2.0 / (d - r)).sqrt();
    Ok((ell, mu1))
}

/// `|Tr(sum_i A_i (x) B_i)| = |sum_i Tr(A_i) Tr(B_i)|` for HS-orthonormal
/// families; bounded by `sqrt(mn)`.
pub fn schmidt_trace_bound_check(a_list: &[ComplexMatrix], b_list: &[ComplexMatrix]) -> Result<f64> {
    if a_list.len() != b_list.len() || a_list.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "{} left and {} right operators",
            a_list.len(),
            b_list.len()
        )));
    }
    for list in [a_list, b_list] {
        for (i, x) in list.iter().enumerate() {
            for (j, z) in list.iter().enumerate().skip(i) {
                let g = x.hs_inner(z);
                let want = if i == j { 1.0 } else { 0.0 };
                if (g.re - want).abs() > 1e-8 || g.im.abs() > 1e-8 {
                    return Err(Error::InvalidParams(format!(
                        "operators {i} and {j} are not orthonormal (<A_i, A_j> = {g})"
                    )));
                }
            }
        }
    }
    let s: num_complex::Complex64 = a_list.iter().zip(b_list).map(|(a, b)| a.trace() * b.trace()).sum();
    Ok(s.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_named_values() {
        let cases = [
            (-0.5, 0.5),
            (-0.4, 0.6),
            (-0.2, 0.9),
            (ell_jump(), (2.0 + SQRT2) / 4.0),
            (-1.0 / 6.0, (10.0 + SQRT2) / 12.0),
            (0.0, 1.0),
        ];
        for (x, want) in cases {
            assert!((f_lemma2(x).unwrap() - want).abs() <= 1e-12, "f({x})");
        }
        assert!(matches!(f_lemma2(0.1), Err(Error::DomainError(_))));
        assert!(f_lemma2(-0.51).is_err());
    }

    #[test]
    fn f_continuity_and_jump() {
        let c = (1.0 + SQRT2) / 4.0;
        assert!((f_lemma2(ell_flat_start()).unwrap() - c).abs() < 1e-12);
        assert!((f_lemma2(ell_jump() - 1e-13).unwrap() - c).abs() < 1e-12);
        assert!((f_lemma2(ell_jump()).unwrap() - (2.0 + SQRT2) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn summary_of_identity() {
        let w = HermitianMatrix::identity(9).scale(1.0 / 9.0);
        let s = summarize(&w).unwrap();
        assert!((s.mu1 - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(s.ell, 0.0);
        assert_eq!(s.neg_count, 0);
        assert_eq!(cannot_detect_abs_ppt(&s), Detectability::Guaranteed);
        assert!(matches!(
            summarize(&HermitianMatrix::identity(2)),
            Err(Error::Unnormalized(_))
        ));
    }

    #[test]
    fn named_detectability_points() {
        let pts = [
            (-1.0 / 6.0, 2.0 / 3.0),
            (-0.25, 0.5),
            ((1.0 - 3f64.sqrt()) / 2.0, 1.0 / 3f64.sqrt()),
            (-0.4, 0.6),
        ];
        for (ell, mu1) in pts {
            let ws = WitnessSummary { mu1, ell, neg_count: 1, trace: 1.0 };
            assert_eq!(cannot_detect_abs_ppt(&ws), Detectability::Guaranteed, "{ell}");
        }
        let ws = WitnessSummary { mu1: 0.62, ell: -0.4, neg_count: 1, trace: 1.0 };
        assert_eq!(cannot_detect_abs_ppt(&ws), Detectability::Inconclusive);
        let ws = WitnessSummary { mu1: 0.5, ell: -0.6, neg_count: 2, trace: 1.0 };
        assert_eq!(cannot_detect_abs_ppt(&ws), Detectability::Inconclusive);
    }

    #[test]
    fn boundary_witness_spectrum() {
        let v = extremal_witness_spectrum(-0.4, 0.6, 9).unwrap();
        let want = [0.6, 0.6, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0, -0.4];
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn certificates_for_each_case() {
        for (ell, case) in [(-0.5, Lemma2Case::A), (-0.3, Lemma2Case::B), (-1.0 / 6.0, Lemma2Case::C)] {
            for mn in [4, 6, 9, 16] {
                let cert = build_lemma2_certificate(ell, f_lemma2(ell).unwrap(), mn).unwrap();
                assert_eq!(cert.case, case);
                let chk = cert.verify();
                assert!(chk.ok, "{ell} {mn}: {chk:?}");
                assert!((cert.bb * cert.bb - cert.aa * cert.cc).abs() < 1e-12);
            }
        }
        assert!(build_lemma2_certificate(-0.4, 0.7, 9).is_err());
    }

    #[test]
    fn case_c_matches_displayed_assignment() {
        let ell = -1.0 / 6.0;
        let mu1 = f_lemma2(ell).unwrap();
        let cert = build_lemma2_certificate(ell, mu1, 9).unwrap();
        assert!(cert.y[..6].iter().all(|&y| (y - (1.0 - mu1)).abs() < 1e-15));
        assert_eq!(&cert.y[6..], &[0.0, 0.0]);
    }

    #[test]
    fn perturbed_certificate_fails() {
        let mut cert = build_lemma2_certificate(-0.45, f_lemma2(-0.45).unwrap(), 9).unwrap();
        cert.bb += 1e-3;
        assert!(!cert.verify().ok);
    }

    #[test]
    fn realignment_bounds_at_three() {
        let (ell, mu1) = realignment_witness_bounds(3, 3).unwrap();
        assert!((ell - (1.0 - 3f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((mu1 - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let (_, far) = realignment_witness_bounds(100, 100).unwrap();
        assert!(far < 0.02);
    }

    #[test]
    fn schmidt_trace_saturation() {
        let n = 3;
        let a = ComplexMatrix::identity(n).scale(1.0 / (n as f64).sqrt());
        let v = schmidt_trace_bound_check(&[a.clone()], &[a]).unwrap();
        // (Tr(I)/sqrt n)^2 = n = sqrt(mn)
        assert!((v - 3.0).abs() < 1e-12);
        let mut z = ComplexMatrix::zeros(2, 2);
        z[(0, 0)] = crate::matcore::c64(1.0 / 2f64.sqrt(), 0.0);
        z[(1, 1)] = crate::matcore::c64(-1.0 / 2f64.sqrt(), 0.0);
        assert!(schmidt_trace_bound_check(&[z.clone()], &[z]).unwrap() < 1e-15);
    }
}
