use serde::{Deserialize, Serialize};

use super::eigh::{eigh, eigvalsh};
use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Relative tolerance used by [`is_psd_default`].
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    Trace,
    Frobenius,
    Operator,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdReport {
    pub psd: bool,
    pub min_eigenvalue: f64,
}

/// Thin SVD `X = sum_k values[k] u_k v_k^dagger`, keeping only singular
/// values above the cutoff passed to [`thin_svd`].
#[derive(Clone, Debug)]
pub struct SvdTriple {
    pub values: Vec<f64>,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
}

/// `[[0, X], [X^dagger, 0]]`, whose spectrum is `{+-sigma_k}` plus zeros.
fn dilation(x: &ComplexMatrix) -> HermitianMatrix {
    let (r, c) = (x.rows(), x.cols());
    let mut d = ComplexMatrix::zeros(r + c, r + c);
    for i in 0..r {
        for j in 0..c {
            d[(i, r + j)] = x[(i, j)];
            d[(r + j, i)] = x[(i, j)].conj();
        }
    }
    HermitianMatrix::hermitian_part(&d)
}

/// Singular values in descending order, `min(rows, cols)` of them.
///
/// Computed from the Hermitian dilation rather than `X^dagger X` so that
/// small singular values keep full absolute accuracy.
pub fn singular_values(x: &ComplexMatrix) -> Result<Vec<f64>> {
    if !x.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    let k = x.rows().min(x.cols());
    if k == 0 {
        return Ok(Vec::new());
    }
    let ev = eigvalsh(&dilation(x))?;
    Ok(ev.into_iter().take(k).map(|s| s.max(0.0)).collect())
}

/// Thin SVD restricted to singular values `> cutoff`.
pub fn thin_svd(x: &ComplexMatrix, cutoff: f64) -> Result<SvdTriple> {
    if !x.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    let (r, c) = (x.rows(), x.cols());
    let k = r.min(c);
    let dec = eigh(&dilation(x))?;
    let keep: Vec<usize> = (0..k).filter(|&i| dec.values[i] > cutoff).collect();
    let s2 = std::f64::consts::SQRT_2;
    let u = ComplexMatrix::from_fn(r, keep.len(), |i, j| dec.vectors[(i, keep[j])] * s2);
    let v = ComplexMatrix::from_fn(c, keep.len(), |i, j| dec.vectors[(r + i, keep[j])] * s2);
    Ok(SvdTriple {
        values: keep.iter().map(|&i| dec.values[i]).collect(),
        u,
        v,
    })
}

pub fn schatten_norm(x: &ComplexMatrix, p: Norm) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    Ok(match p {
        Norm::Frobenius => x.frobenius_norm(),
        Norm::Trace => singular_values(x)?.iter().sum(),
        Norm::Operator => singular_values(x)?.first().copied().unwrap_or(0.0),
    })
}

/// `lambda_min(A) >= -tol * max(1, ||A||_op)`.
pub fn is_psd(a: &HermitianMatrix, tol: f64) -> Result<PsdReport> {
    let ev = eigvalsh(a)?;
    let (max, min) = match (ev.first(), ev.last()) {
        (Some(&hi), Some(&lo)) => (hi, lo),
        _ => {
            return Ok(PsdReport {
                psd: true,
                min_eigenvalue: 0.0,
            })
        }
    };
    let op = max.abs().max(min.abs());
    Ok(PsdReport {
        psd: min >= -tol * op.max(1.0),
        min_eigenvalue: min,
    })
}

pub fn is_psd_default(a: &HermitianMatrix) -> Result<PsdReport> {
    is_psd(a, DEFAULT_PSD_TOL)
}
