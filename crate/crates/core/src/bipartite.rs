//! Tensor-product structure on `M_m (x) M_n`. Row `(i, k)` of a bipartite
//! matrix is stored at index `i * n + k`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{c64, singular_values, thin_svd, ComplexMatrix, HermitianMatrix};

pub use crate::random::{haar_state, haar_unitary, haar_unitary_seeded};

/// Operators whose HS norm relative to the largest one falls below this are
/// dropped from an operator-Schmidt decomposition.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteOperator {
    dim_a: usize,
    dim_b: usize,
    matrix: HermitianMatrix,
}

impl BipartiteOperator {
    pub fn new(dim_a: usize, dim_b: usize, matrix: HermitianMatrix) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::InvalidDim("factor dimensions must be positive".into()));
        }
        if dim_a * dim_b != matrix.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{dim_a} x {dim_b} does not match matrix dimension {}",
                matrix.dim()
            )));
        }
        Ok(Self { dim_a, dim_b, matrix })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.matrix
    }

    pub fn partial_transpose(&self) -> Self {
        let pt = partial_transpose_raw(&self.matrix, self.dim_a, self.dim_b);
        Self {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            matrix: HermitianMatrix::hermitian_part(&pt),
        }
    }

    pub fn partial_trace(&self, which: Subsystem) -> ComplexMatrix {
        partial_trace_raw(&self.matrix, self.dim_a, self.dim_b, which)
    }

    pub fn realign(&self) -> ComplexMatrix {
        realign_raw(&self.matrix, self.dim_a, self.dim_b)
    }

    pub fn operator_schmidt(&self) -> Result<OperatorSchmidt> {
        operator_schmidt_raw(&self.matrix, self.dim_a, self.dim_b)
    }

    /// `U self U^dagger` for a global unitary.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        Ok(Self {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            matrix: self.matrix.conjugate_by(u)?,
        })
    }
}

fn check_dims(x: &ComplexMatrix, m: usize, n: usize) {
    assert!(
        x.rows() == m * n && x.cols() == m * n,
        "matrix is {}x{}, expected {m}*{n} square",
        x.rows(),
        x.cols()
    );
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Transpose on the second factor: `X^G[(i,k),(j,l)] = X[(i,l),(j,k)]`.
pub fn partial_transpose_raw(x: &ComplexMatrix, m: usize, n: usize) -> ComplexMatrix {
    check_dims(x, m, n);
    let mut out = ComplexMatrix::zeros(m * n, m * n);
    for i in 0..m {
        for j in 0..m {
            for k in 0..n {
                for l in 0..n {
                    out[(i * n + k, j * n + l)] = x[(i * n + l, j * n + k)];
                }
            }
        }
    }
    out
}

pub fn partial_trace_raw(x: &ComplexMatrix, m: usize, n: usize, which: Subsystem) -> ComplexMatrix {
    check_dims(x, m, n);
    match which {
        Subsystem::Second => ComplexMatrix::from_fn(m, m, |i, j| {
            (0..n).map(|k| x[(i * n + k, j * n + k)]).sum()
        }),
        Subsystem::First => ComplexMatrix::from_fn(n, n, |k, l| {
            (0..m).map(|i| x[(i * n + k, i * n + l)]).sum()
        }),
    }
}

/// Realignment `R(|i><j| (x) |k><l|) = |i><k| (x) |j><l|`, as an
/// `m^2 x n^2` matrix with rows `(i, j)` and columns `(k, l)`.
pub fn realign_raw(x: &ComplexMatrix, m: usize, n: usize) -> ComplexMatrix {
    check_dims(x, m, n);
    let mut out = ComplexMatrix::zeros(m * m, n * n);
    for i in 0..m {
        for j in 0..m {
            for k in 0..n {
                for l in 0..n {
                    out[(i * m + j, k * n + l)] = x[(i * n + k, j * n + l)];
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct OperatorSchmidt {
    pub coefficients: Vec<f64>,
    pub left_ops: Vec<ComplexMatrix>,
    pub right_ops: Vec<ComplexMatrix>,
}

impl OperatorSchmidt {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `sum_i lambda_i A_i (x) B_i`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.left_ops[0].rows(), self.right_ops[0].rows());
        let mut acc = ComplexMatrix::zeros(m * n, m * n);
        for ((c, a), b) in self.coefficients.iter().zip(&self.left_ops).zip(&self.right_ops) {
            acc = &acc + &a.kron(b).scale(*c);
        }
        acc
    }
}

/// Operator-Schmidt decomposition via the SVD of the realigned matrix.
pub fn operator_schmidt_raw(x: &ComplexMatrix, m: usize, n: usize) -> Result<OperatorSchmidt> {
    let r = realign_raw(x, m, n);
    let top = singular_values(&r)?.first().copied().unwrap_or(0.0);
    let svd = thin_svd(&r, SCHMIDT_CUTOFF * top.max(f64::MIN_POSITIVE))?;
    let k = svd.values.len();
    let mut left_ops = Vec::with_capacity(k);
    let mut right_ops = Vec::with_capacity(k);
    for s in 0..k {
        left_ops.push(ComplexMatrix::from_fn(m, m, |i, j| svd.u[(i * m + j, s)]));
        right_ops.push(ComplexMatrix::from_fn(n, n, |i, j| svd.v[(i * n + j, s)].conj()));
    }
    Ok(OperatorSchmidt {
        coefficients: svd.values,
        left_ops,
        right_ops,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtCoefficients {
    pub values: Vec<f64>,
}

/// Schmidt coefficients of a unit vector in `C^m (x) C^n`; exact zeros are
/// dropped.
pub fn vector_schmidt(v: &[Complex64], m: usize, n: usize) -> Result<SchmidtCoefficients> {
    if v.len() != m * n {
        return Err(Error::InvalidVector(format!(
            "length {} is not {m}*{n}",
            v.len()
        )));
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidVector(format!("norm {norm} is not 1")));
    }
    let mat = ComplexMatrix::from_vec(m, n, v.to_vec())?;
    let values = singular_values(&mat)?
        .into_iter()
        .filter(|&s| s > 1e-12)
        .collect();
    Ok(SchmidtCoefficients { values })
}

/// `|psi+> = n^{-1/2} sum_i |i>|i>`.
pub fn max_entangled(n: usize) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(Error::InvalidDim("n must be at least 1".into()));
    }
    let s = 1.0 / (n as f64).sqrt();
    let mut v = vec![c64(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = c64(s, 0.0);
    }
    Ok(v)
}

/// `|psi+><psi+|`.
pub fn max_entangled_projector(n: usize) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::projector(&max_entangled(n)?))
}

/// Swap `S(|a>|b>) = |b>|a>` on `C^n (x) C^n`.
pub fn swap_operator(n: usize) -> Result<HermitianMatrix> {
    if n == 0 {
        return Err(Error::InvalidDim("n must be at least 1".into()));
    }
    let mut s = ComplexMatrix::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            s[(b * n + a, a * n + b)] = c64(1.0, 0.0);
        }
    }
    Ok(HermitianMatrix::hermitian_part(&s))
}

/// Orbit lower bound `min_U Tr(A U B U^dagger) = sum_j lambda_j mu_{n-j+1}`.
pub fn min_unitary_overlap(spec_a: &[f64], spec_b: &[f64]) -> Result<f64> {
    if spec_a.len() != spec_b.len() {
        return Err(Error::DimensionMismatch(format!(
            "spectra have lengths {} and {}",
            spec_a.len(),
            spec_b.len()
        )));
    }
    let mut a = spec_a.to_vec();
    let mut b = spec_b.to_vec();
    a.sort_by(|x, y| y.total_cmp(x));
    b.sort_by(|x, y| x.total_cmp(y));
    Ok(a.iter().zip(&b).map(|(x, y)| x * y).sum())
}

/// Product vector `a (x) b`.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}
