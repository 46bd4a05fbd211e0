//! Hermitian eigensolver: complex Householder reduction to a real symmetric
//! tridiagonal matrix followed by the implicit-shift QL iteration.

use num_complex::Complex64;

use super::matrix::{c64, ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Eigenvalues in descending order with matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.col(k)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `V diag(values) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eigh(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let (values, vectors) = decompose(a, true)?;
    Ok(EigenDecomposition {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

/// Eigenvalues only, descending.
pub fn eigvalsh(a: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(decompose(a, false)?.0)
}

fn decompose(a: &HermitianMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    if !a.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    let n = a.dim();
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(|| ComplexMatrix::zeros(0, 0))));
    }

    let mut h = a.as_matrix().clone();
    let mut q = want_vectors.then(|| ComplexMatrix::identity(n));
    tridiagonalize(&mut h, q.as_mut());

    // Rotate the complex subdiagonal to |e_k| with a diagonal unitary D,
    // so that A = (Q D) T_r (Q D)^dagger with T_r real symmetric.
    let mut diag: Vec<f64> = (0..n).map(|i| h[(i, i)].re).collect();
    let mut off = vec![0.0; n];
    let mut phase = c64(1.0, 0.0);
    let mut phases = vec![phase; n];
    for k in 0..n - 1 {
        let e = h[(k + 1, k)];
        let r = e.norm();
        off[k] = r;
        if r > 0.0 {
            phase *= e / r;
        }
        phases[k + 1] = phase;
    }
    if let Some(q) = q.as_mut() {
        for i in 0..n {
            for j in 0..n {
                q[(i, j)] *= phases[j];
            }
        }
    }

    ql_implicit(&mut diag, &mut off, q.as_mut())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = q.map(|q| ComplexMatrix::from_fn(n, n, |i, k| q[(i, order[k])]));
    Ok((values, vectors))
}

/// Householder reduction `H <- P^dagger H P` in place; `q` accumulates `P`.
fn tridiagonalize(h: &mut ComplexMatrix, mut q: Option<&mut ComplexMatrix>) {
    let n = h.rows();
    let mut v = vec![c64(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let tail: f64 = ((k + 2)..n).map(|i| h[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let xnorm = (tail + x0.norm_sqr()).sqrt();
        let unit = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            c64(1.0, 0.0)
        };
        let alpha = -unit * xnorm;

        v.iter_mut().for_each(|z| *z = c64(0.0, 0.0));
        for i in (k + 1)..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] -= alpha;
        let vv: f64 = v[(k + 1)..].iter().map(|z| z.norm_sqr()).sum();
        if vv == 0.0 {
            continue;
        }
        let beta = 2.0 / vv;

        // Left: H <- H - beta v (v^dagger H)
        for j in 0..n {
            let s: Complex64 = ((k + 1)..n).map(|i| v[i].conj() * h[(i, j)]).sum();
            if s.norm_sqr() == 0.0 {
                continue;
            }
            let s = s * beta;
            for i in (k + 1)..n {
                h[(i, j)] -= v[i] * s;
            }
        }
        // Right: H <- H - beta (H v) v^dagger
        for i in 0..n {
            let s: Complex64 = ((k + 1)..n).map(|j| h[(i, j)] * v[j]).sum();
            if s.norm_sqr() == 0.0 {
                continue;
            }
            let s = s * beta;
            for j in (k + 1)..n {
                h[(i, j)] -= s * v[j].conj();
            }
        }
        if let Some(q) = q.as_deref_mut() {
            for i in 0..n {
                let s: Complex64 = ((k + 1)..n).map(|j| q[(i, j)] * v[j]).sum();
                let s = s * beta;
                for j in (k + 1)..n {
                    q[(i, j)] -= s * v[j].conj();
                }
            }
        }
        // Exact zeros below the subdiagonal.
        h[(k + 1, k)] = alpha;
        h[(k, k + 1)] = alpha.conj();
        for i in (k + 2)..n {
            h[(i, k)] = c64(0.0, 0.0);
            h[(k, i)] = c64(0.0, 0.0);
        }
    }
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix (diagonal `d`,
/// subdiagonal `e[0..n-1]`). Rotations are applied to the columns of `z`.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut ComplexMatrix>) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut shift_acc = 0.0;
    let mut tst1: f64 = 0.0;
    let max_iter = 64 * n.max(4);

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        let m = m.min(n - 1);

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > max_iter {
                    return Err(Error::InvalidMatrix(
                        "QL iteration failed to converge".into(),
                    ));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                shift_acc += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let zi1 = z[(k, i + 1)];
                            let zi = z[(k, i)];
                            z[(k, i + 1)] = zi * s + zi1 * c;
                            z[(k, i)] = zi * c - zi1 * s;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += shift_acc;
        e[l] = 0.0;
    }
    Ok(())
}
