//! Werner, isotropic and UPB-mixture states with their closed-form
//! absolute separability / absolute PPT thresholds.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::absppt::{is_abs_ppt, AbsPptVerdict, Spectrum, LMI_TOL};
use crate::bipartite::{kron_vec, max_entangled_projector, swap_operator, vector_schmidt, BipartiteOperator};
use crate::error::{Error, Result};
use crate::matcore::{c64, eigvalsh, ComplexMatrix, HermitianMatrix};

/// Slack used when comparing a parameter with a threshold.
pub const THRESHOLD_SLACK: f64 = 1e-12;
/// Orthogonality / product-ness tolerance for UPB vectors.
pub const UPB_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WernerParams {
    pub n: usize,
    pub alpha: f64,
}

impl WernerParams {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDim(format!("Werner states need n >= 2, got {n}")));
        }
        if !(-1.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParams(format!("Werner alpha must lie in [-1, 1], got {alpha}")));
        }
        Ok(Self { n, alpha })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotropicParams {
    pub n: usize,
    pub alpha: f64,
}

impl IsotropicParams {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDim(format!("isotropic states need n >= 2, got {n}")));
        }
        let lo = -1.0 / ((n * n) as f64 - 1.0);
        if !(alpha >= lo - THRESHOLD_SLACK && alpha <= 1.0) {
            return Err(Error::InvalidParams(format!("isotropic alpha must lie in [{lo}, 1], got {alpha}")));
        }
        Ok(Self { n, alpha })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpbMixtureParams {
    pub p: f64,
    pub upb: Vec<Vec<Complex64>>,
}

impl UpbMixtureParams {
    pub fn new(p: f64, upb: Vec<Vec<Complex64>>) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParams(format!("mixing weight must lie in (0, 1), got {p}")));
        }
        if upb.len() != 5 || upb.iter().any(|v| v.len() != 9) {
            return Err(Error::InvalidParams("a UPB in C^3 (x) C^3 has five vectors of length 9".into()));
        }
        for (i, v) in upb.iter().enumerate() {
            let s = vector_schmidt(v, 3, 3)?;
            if s.values.get(1).copied().unwrap_or(0.0) > UPB_TOL {
                return Err(Error::InvalidParams(format!("vector {i} is not a product vector")));
            }
            if ((s.values[0] * s.values[0]) - 1.0).abs() > UPB_TOL {
                return Err(Error::InvalidParams(format!("vector {i} is not normalized")));
            }
            for (k, w) in upb.iter().enumerate().skip(i + 1) {
                let ip: Complex64 = v.iter().zip(w).map(|(a, b)| a.conj() * b).sum();
                if ip.norm() > UPB_TOL {
                    return Err(Error::InvalidParams(format!("vectors {i} and {k} overlap by {}", ip.norm())));
                }
            }
        }
        Ok(Self { p, upb })
    }

    pub fn tiles(p: f64) -> Result<Self> {
        Self::new(p, tiles_upb())
    }
}

/// The Tiles UPB in `C^3 (x) C^3`.
pub fn tiles_upb() -> Vec<Vec<Complex64>> {
    let e = |k: usize| {
        let mut v = vec![c64(0.0, 0.0); 3];
        v[k] = c64(1.0, 0.0);
        v
    };
    let comb = |coef: &[(usize, f64)], s: f64| {
        let mut v = vec![c64(0.0, 0.0); 3];
        for &(k, w) in coef {
            v[k] += c64(w * s, 0.0);
        }
        v
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let t = 1.0 / 3f64.sqrt();
    vec![
        kron_vec(&e(0), &comb(&[(0, 1.0), (1, -1.0)], h)),
        kron_vec(&e(2), &comb(&[(1, 1.0), (2, -1.0)], h)),
        kron_vec(&comb(&[(0, 1.0), (1, -1.0)], h), &e(2)),
        kron_vec(&comb(&[(1, 1.0), (2, -1.0)], h), &e(0)),
        kron_vec(&comb(&[(0, 1.0), (1, 1.0), (2, 1.0)], t), &comb(&[(0, 1.0), (1, 1.0), (2, 1.0)], t)),
    ]
}

/// `(I - alpha S) / (n^2 - n alpha)`.
pub fn werner_state(w: WernerParams) -> Result<BipartiteOperator> {
    let n = w.n;
    let s = swap_operator(n)?;
    let x = &ComplexMatrix::identity(n * n) - &s.scale(w.alpha);
    let rho = x.scale(1.0 / ((n * n) as f64 - n as f64 * w.alpha));
    BipartiteOperator::new(n, n, HermitianMatrix::hermitian_part(&rho))
}

/// Closed-form Werner spectrum, descending.
pub fn werner_eigenvalues(w: WernerParams) -> Vec<f64> {
    let n = w.n as f64;
    let norm = n * n - n * w.alpha;
    let sym = ((1.0 - w.alpha) / norm, w.n * (w.n + 1) / 2);
    let anti = ((1.0 + w.alpha) / norm, w.n * (w.n - 1) / 2);
    let (hi, lo) = if w.alpha >= 0.0 { (anti, sym) } else { (sym, anti) };
    let mut v = vec![hi.0; hi.1];
    v.extend(std::iter::repeat_n(lo.0, lo.1));
    v
}

/// `(1 - alpha)/n^2 I + alpha |psi+><psi+|`.
pub fn isotropic_state(i: IsotropicParams) -> Result<BipartiteOperator> {
    let n = i.n;
    let d = n * n;
    let rho = &ComplexMatrix::identity(d).scale((1.0 - i.alpha) / d as f64)
        + &max_entangled_projector(n)?.scale(i.alpha);
    BipartiteOperator::new(n, n, HermitianMatrix::hermitian_part(&rho))
}

pub fn isotropic_eigenvalues(i: IsotropicParams) -> Vec<f64> {
    let d = (i.n * i.n) as f64;
    let base = (1.0 - i.alpha) / d;
    let mut v = vec![base; i.n * i.n];
    v[0] = i.alpha + base;
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// The UPB state `(I - sum |v><v|) / (9 - |S|)`.
pub fn upb_base_state(upb: &[Vec<Complex64>]) -> Result<HermitianMatrix> {
    let mut x = ComplexMatrix::identity(9);
    for v in upb {
        x = &x - HermitianMatrix::projector(v).as_matrix();
    }
    Ok(HermitianMatrix::hermitian_part(&x.scale(1.0 / (9.0 - upb.len() as f64))))
}

/// `p I / 9 + (1 - p) rho_UPB`.
pub fn upb_state(u: &UpbMixtureParams) -> Result<BipartiteOperator> {
    let base = upb_base_state(&u.upb)?;
    let rho = &ComplexMatrix::identity(9).scale(u.p / 9.0) + &base.scale(1.0 - u.p);
    BipartiteOperator::new(3, 3, HermitianMatrix::hermitian_part(&rho))
}

/// `p/9` five times and `(9 - 5p)/36` four times, descending.
pub fn upb_eigenvalues(p: f64) -> Vec<f64> {
    let (a, b) = (p / 9.0, (9.0 - 5.0 * p) / 36.0);
    let mut v = vec![a; 5];
    v.extend([b; 4]);
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WernerClass {
    AbsSep,
    NotAbsPpt,
    Unknown,
}

pub fn werner_classify(w: WernerParams) -> WernerClass {
    let n = w.n as f64;
    if w.alpha > 1.0 / n + THRESHOLD_SLACK || w.alpha < -1.0 / (n - 1.0) - THRESHOLD_SLACK {
        WernerClass::NotAbsPpt
    } else if w.alpha >= -1.0 / n - THRESHOLD_SLACK {
        WernerClass::AbsSep
    } else {
        WernerClass::Unknown
    }
}

/// Runs the exact absolute-PPT test on the Werner spectrum (only `n <= 3`).
pub fn werner_deep_check(w: WernerParams) -> Result<AbsPptVerdict> {
    if w.n > 3 {
        return Err(Error::Unsupported(format!("exact absolute-PPT test needs n <= 3, got {}", w.n)));
    }
    Ok(is_abs_ppt(&Spectrum::new(w.n, w.n, werner_eigenvalues(w))?, LMI_TOL)?.verdict)
}

/// The two special-form LMI matrices for `I - alpha S` (size `n`):
/// `2I - 2 alpha J` and `diag(2I + 2 alpha J_{n-1}, 2 - 2 alpha)`.
pub fn werner_lmi_matrices(w: WernerParams) -> (HermitianMatrix, HermitianMatrix) {
    let n = w.n;
    let a = w.alpha;
    let case1 = ComplexMatrix::from_fn(n, n, |i, j| c64(if i == j { 2.0 - 2.0 * a } else { -2.0 * a }, 0.0));
    let case2 = ComplexMatrix::from_fn(n, n, |i, j| {
        let v = if i == n - 1 || j == n - 1 {
            if i == j {
                2.0 - 2.0 * a
            } else {
                0.0
            }
        } else if i == j {
            2.0 + 2.0 * a
        } else {
            2.0 * a
        };
        c64(v, 0.0)
    });
    (HermitianMatrix::hermitian_part(&case1), HermitianMatrix::hermitian_part(&case2))
}

/// Closed-form minimum eigenvalues of the two Werner LMI matrices
/// (`2 - 2 n alpha` for `alpha > 0`, `2 + 2 (n - 1) alpha` for `alpha < 0`;
/// otherwise the other eigenvalue of each matrix is the smaller one).
pub fn werner_lmi_min_eigs(w: WernerParams) -> (f64, f64) {
    let n = w.n as f64;
    let a = w.alpha;
    let case1 = (2.0 - 2.0 * n * a).min(2.0);
    let case2 = (2.0 + 2.0 * (n - 1.0) * a).min(2.0).min(2.0 - 2.0 * a);
    (case1, case2)
}

pub fn werner_lmi_min_eigs_numeric(w: WernerParams) -> Result<(f64, f64)> {
    let (l1, l2) = werner_lmi_matrices(w);
    let last = |m: &HermitianMatrix| -> Result<f64> { Ok(*eigvalsh(m)?.last().expect("nonempty")) };
    Ok((last(&l1)?, last(&l2)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsotropicClass {
    AbsSep,
    NotAbsPpt,
}

pub fn isotropic_threshold(n: usize) -> f64 {
    2.0 / (2.0 + (n * n) as f64)
}

pub fn isotropic_classify(i: IsotropicParams) -> IsotropicClass {
    if i.alpha <= isotropic_threshold(i.n) + THRESHOLD_SLACK {
        IsotropicClass::AbsSep
    } else {
        IsotropicClass::NotAbsPpt
    }
}

/// Minimum eigenvalue of `(1/n^2)[[2-2a, -n^2 a], [-n^2 a, 2-2a]] (+) (2-2a)/n^2 I`.
pub fn isotropic_lmi_min_eig(i: IsotropicParams) -> f64 {
    let d = (i.n * i.n) as f64;
    ((2.0 - 2.0 * i.alpha) - d * i.alpha.abs()) / d
}

/// Separability test for `c I + |v><v|` with `c = (1 - alpha)/(n^2 alpha)`:
/// holds iff `c >= gamma_1 gamma_2` (two largest Schmidt coefficients of `v`).
pub fn identity_plus_pure_separable(alpha: f64, n: usize, v: &[Complex64]) -> Result<bool> {
    if !(alpha > 0.0) {
        return Ok(true);
    }
    let s = vector_schmidt(v, n, n)?;
    let g1 = s.values.first().copied().unwrap_or(0.0);
    let g2 = s.values.get(1).copied().unwrap_or(0.0);
    Ok((1.0 - alpha) / ((n * n) as f64 * alpha) >= g1 * g2 - THRESHOLD_SLACK)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UpbClass {
    AbsPptAndAbsSep,
    AbsPptOnlyKnown,
    NotAbsPpt,
}

/// `9 (10 - sqrt 17) / 83`, where the UPB mixture becomes absolutely PPT.
pub fn upb_abs_ppt_threshold() -> f64 {
    9.0 * (10.0 - 17f64.sqrt()) / 83.0
}

/// `1 - 1/sqrt 10`, from which the UPB mixture is absolutely separable.
pub fn upb_abs_sep_threshold() -> f64 {
    1.0 - 1.0 / 10f64.sqrt()
}

pub fn upb_classify_p(p: f64) -> UpbClass {
    if p < upb_abs_ppt_threshold() - THRESHOLD_SLACK {
        UpbClass::NotAbsPpt
    } else if p >= upb_abs_sep_threshold() - THRESHOLD_SLACK {
        UpbClass::AbsPptAndAbsSep
    } else {
        UpbClass::AbsPptOnlyKnown
    }
}

pub fn upb_classify(u: &UpbMixtureParams) -> UpbClass {
    upb_classify_p(u.p)
}

/// `(1/36) [[8p, 9p-9, 9p-9], [., 8p, 9p-9], [., ., 18-10p]]`.
pub fn upb_lmi(p: f64) -> HermitianMatrix {
    let o = 9.0 * p - 9.0;
    let m = [8.0 * p, o, o, o, 8.0 * p, o, o, o, 18.0 - 10.0 * p];
    let scaled: Vec<f64> = m.iter().map(|v| v / 36.0).collect();
    HermitianMatrix::from_real(3, &scaled).expect("symmetric")
}

/// Smallest eigenvalue of [`upb_lmi`] in closed form: `(1, -1, 0)` gives
/// `8p - o`, the rest is the 2x2 block on `{(1, 1, 0)/sqrt 2, (0, 0, 1)}`.
pub fn upb_lmi_min_eig(p: f64) -> f64 {
    let o = 9.0 * p - 9.0;
    let (a, d, off) = (8.0 * p + o, 18.0 - 10.0 * p, 2f64.sqrt() * o);
    let block = 0.5 * (a + d - ((a - d) * (a - d) + 4.0 * off * off).sqrt());
    (8.0 * p - o).min(block) / 36.0
}

/// `||8 rho_p - I||_F^2` from the closed-form spectrum.
pub fn upb_frobenius_defect(p: f64) -> f64 {
    upb_eigenvalues(p).iter().map(|l| (8.0 * l - 1.0).powi(2)).sum()
}
