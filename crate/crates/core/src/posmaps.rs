//! Positive maps on `M_n` given by closed-form actions, with Choi matrices,
//! duals, `id (x) Phi` application and the witnesses built from them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bipartite::{BipartiteOperator, OperatorSchmidt};
use crate::error::{Error, Result};
use crate::matcore::{c64, ComplexMatrix, HermitianMatrix};

/// Slack on the curve `bc = (b + c - 1)^2` when testing exposedness.
pub const EXPOSED_TOL: f64 = 1e-9;
/// Witness traces below this magnitude cannot be normalized.
pub const DEGENERATE_TRACE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum MapKind {
    Identity,
    Transpose,
    /// `(Tr(X) I - X) / (n - 1)`.
    Reduction,
    /// `Phi_{b,c}` on `M_3`, with `a = 2 - b - c`.
    GeneralizedChoi { b: f64, c: f64 },
    /// `(Tr(X) I - X - V X^T V^dagger) / (n - 2)`.
    BreuerHall { v: ComplexMatrix },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapSpec {
    kind: MapKind,
    dim: usize,
}

impl MapSpec {
    pub fn identity(n: usize) -> Result<Self> {
        check_dim(n, 1)?;
        Ok(Self { kind: MapKind::Identity, dim: n })
    }

    pub fn transpose(n: usize) -> Result<Self> {
        check_dim(n, 1)?;
        Ok(Self { kind: MapKind::Transpose, dim: n })
    }

    pub fn reduction(n: usize) -> Result<Self> {
        check_dim(n, 2)?;
        Ok(Self { kind: MapKind::Reduction, dim: n })
    }

    pub fn generalized_choi(b: f64, c: f64) -> Result<Self> {
        if !(b >= 0.0 && c >= 0.0 && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "generalized Choi needs finite b, c >= 0, got ({b}, {c})"
            )));
        }
        Ok(Self { kind: MapKind::GeneralizedChoi { b, c }, dim: 3 })
    }

    /// The Choi map, `Phi_{1,0}`.
    pub fn choi() -> Self {
        Self { kind: MapKind::GeneralizedChoi { b: 1.0, c: 0.0 }, dim: 3 }
    }

    pub fn breuer_hall(n: usize) -> Result<Self> {
        Self::breuer_hall_with(default_bh_unitary(n)?)
    }

    pub fn breuer_hall_with(v: ComplexMatrix) -> Result<Self> {
        let n = v.rows();
        if !v.is_square() || n < 4 || n % 2 != 0 {
            return Err(Error::InvalidParams(format!(
                "Breuer-Hall needs an even n >= 4, got {}x{}",
                v.rows(),
                v.cols()
            )));
        }
        let skew = (&v.transpose() + &v).frobenius_norm();
        let unit = (&v.adjoint().matmul(&v)? - &ComplexMatrix::identity(n)).frobenius_norm();
        if skew > 1e-10 || unit > 1e-10 {
            return Err(Error::InvalidParams(format!(
                "V must be a skew-symmetric unitary (||V^T + V|| = {skew:e}, ||V^dagger V - I|| = {unit:e})"
            )));
        }
        Ok(Self { kind: MapKind::BreuerHall { v }, dim: n })
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn in_dim(&self) -> usize {
        self.dim
    }

    pub fn out_dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> String {
        match &self.kind {
            MapKind::Identity => "identity".into(),
            MapKind::Transpose => "transpose".into(),
            MapKind::Reduction => "reduction".into(),
            MapKind::GeneralizedChoi { b, c } => format!("generalized_choi({b},{c})"),
            MapKind::BreuerHall { .. } => format!("breuer_hall({})", self.dim),
        }
    }

    /// Adjoint with respect to the Hilbert-Schmidt inner product.
    pub fn dual(&self) -> Self {
        let kind = match &self.kind {
            MapKind::GeneralizedChoi { b, c } => MapKind::GeneralizedChoi { b: *c, c: *b },
            MapKind::BreuerHall { v } => MapKind::BreuerHall { v: v.transpose() },
            k => k.clone(),
        };
        Self { kind, dim: self.dim }
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.dim;
        if x.rows() != n || x.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} acts on {n}x{n}, got {}x{}",
                self.name(),
                x.rows(),
                x.cols()
            )));
        }
        Ok(match &self.kind {
            MapKind::Identity => x.clone(),
            MapKind::Transpose => x.transpose(),
            MapKind::Reduction => {
                let tr = x.trace();
                let mut out = x.scale(-1.0);
                for i in 0..n {
                    out[(i, i)] += tr;
                }
                out.scale(1.0 / (n as f64 - 1.0))
            }
            MapKind::GeneralizedChoi { b, c } => {
                let a = 2.0 - b - c;
                // row k of the diagonal weights x_11, x_22, x_33 by a cyclic shift of (a, b, c)
                let w = [[a, *b, *c], [*c, a, *b], [*b, *c, a]];
                ComplexMatrix::from_fn(3, 3, |i, j| {
                    if i == j {
                        (0..3).map(|k| x[(k, k)] * w[i][k]).sum::<Complex64>() * 0.5
                    } else {
                        -x[(i, j)] * 0.5
                    }
                })
            }
            MapKind::BreuerHall { v } => {
                let tr = x.trace();
                let vxv = v.matmul(&x.transpose())?.matmul(&v.adjoint())?;
                let mut out = &x.scale(-1.0) - &vxv;
                for i in 0..n {
                    out[(i, i)] += tr;
                }
                out.scale(1.0 / (n as f64 - 2.0))
            }
        })
    }

    /// `J(Phi) = sum_ij |i><j| (x) Phi(|i><j|)`.
    pub fn choi_matrix(&self) -> Result<BipartiteOperator> {
        let n = self.dim;
        let mut j = ComplexMatrix::zeros(n * n, n * n);
        for a in 0..n {
            for b in 0..n {
                let mut e = ComplexMatrix::zeros(n, n);
                e[(a, b)] = c64(1.0, 0.0);
                let img = self.apply(&e)?;
                for k in 0..n {
                    for l in 0..n {
                        j[(a * n + k, b * n + l)] = img[(k, l)];
                    }
                }
            }
        }
        BipartiteOperator::new(n, n, HermitianMatrix::new(j)?)
    }

    /// `(id_m (x) Phi)(X)` for `X` on `C^m (x) C^n`, block by block.
    pub fn apply_id_tensor_raw(&self, x: &ComplexMatrix, dim_a: usize) -> Result<ComplexMatrix> {
        let n = self.dim;
        if x.rows() != dim_a * n || x.cols() != dim_a * n {
            return Err(Error::DimensionMismatch(format!(
                "expected a {0}x{0} operator, got {1}x{2}",
                dim_a * n,
                x.rows(),
                x.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(dim_a * n, dim_a * n);
        for i in 0..dim_a {
            for j in 0..dim_a {
                let block = ComplexMatrix::from_fn(n, n, |k, l| x[(i * n + k, j * n + l)]);
                let img = self.apply(&block)?;
                for k in 0..n {
                    for l in 0..n {
                        out[(i * n + k, j * n + l)] = img[(k, l)];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply_id_tensor(&self, x: &BipartiteOperator) -> Result<BipartiteOperator> {
        if x.dim_b() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "second factor has dimension {}, map acts on {}",
                x.dim_b(),
                self.dim
            )));
        }
        let out = self.apply_id_tensor_raw(x.matrix(), x.dim_a())?;
        BipartiteOperator::new(x.dim_a(), x.dim_b(), HermitianMatrix::hermitian_part(&out))
    }
}

fn check_dim(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidDim(format!("dimension {n} is below {min}")));
    }
    Ok(())
}

/// Anti-diagonal skew-symmetric unitary: `+1` in the upper half, `-1` below.
pub fn default_bh_unitary(n: usize) -> Result<ComplexMatrix> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidParams(format!("Breuer-Hall needs an even n >= 4, got {n}")));
    }
    let mut v = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        v[(i, n - 1 - i)] = c64(if i < n / 2 { 1.0 } else { -1.0 }, 0.0);
    }
    Ok(v)
}

/// `W = (id_m (x) Phi^dagger)(|v><v|)`, the witness associated with a
/// detection `<v|(id (x) Phi)(rho)|v> < 0`.
pub fn witness_from_map(phi: &MapSpec, v: &[Complex64], dim_a: usize) -> Result<HermitianMatrix> {
    if v.len() != dim_a * phi.in_dim() {
        return Err(Error::InvalidVector(format!(
            "length {} is not {dim_a}*{}",
            v.len(),
            phi.in_dim()
        )));
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidVector(format!("norm {norm} is not 1")));
    }
    let p = ComplexMatrix::outer(v, v);
    let w = phi.dual().apply_id_tensor_raw(&p, dim_a)?;
    Ok(HermitianMatrix::hermitian_part(&w))
}

/// Unit-trace witness `I - sum_{i<k} (A_i (x) B_i)^dagger`, Hermitized and
/// normalized. With `k` the full Schmidt rank of `rho`,
/// `Tr(W rho) = (1 - ||R(rho)||_tr) / Tr(W~)`.
pub fn witness_from_schmidt(os: &OperatorSchmidt, k: Option<usize>) -> Result<HermitianMatrix> {
    if os.is_empty() {
        return Err(Error::InvalidParams("empty operator-Schmidt decomposition".into()));
    }
    let k = k.unwrap_or(os.len());
    if k > os.len() {
        return Err(Error::InvalidParams(format!(
            "requested {k} terms, decomposition has {}",
            os.len()
        )));
    }
    let (m, n) = (os.left_ops[0].rows(), os.right_ops[0].rows());
    let mut w = ComplexMatrix::identity(m * n);
    for (a, b) in os.left_ops.iter().zip(&os.right_ops).take(k) {
        w = &w - &a.kron(b).adjoint();
    }
    let w = HermitianMatrix::hermitian_part(&w);
    let tr = w.trace();
    if tr.abs() < DEGENERATE_TRACE {
        return Err(Error::DegenerateWitness(tr));
    }
    Ok(w.scale(1.0 / tr))
}

/// `Phi_{b,c}` is positive: `b + c <= 1` or `bc >= (b + c - 1)^2`.
pub fn is_positive_bc(b: f64, c: f64) -> bool {
    b >= 0.0 && c >= 0.0 && (b + c <= 1.0 || b * c >= (b + c - 1.0).powi(2))
}

/// Only `Phi_{0,0}` is completely positive in the family.
pub fn is_completely_positive_bc(b: f64, c: f64) -> bool {
    b == 0.0 && c == 0.0
}

/// Positive but not completely positive, i.e. able to detect some entanglement.
pub fn is_positive_not_cp_bc(b: f64, c: f64) -> bool {
    is_positive_bc(b, c) && !is_completely_positive_bc(b, c)
}

pub fn is_indecomposable_bc(b: f64, c: f64) -> bool {
    is_positive_not_cp_bc(b, c) && b != c
}

pub fn is_exposed_bc(b: f64, c: f64) -> bool {
    b != c && b + c > 1.0 && (b * c - (b + c - 1.0).powi(2)).abs() <= EXPOSED_TOL
}

/// Vertices (counter-clockwise) of the quadrilateral of `(b, c)` whose maps
/// provably cannot detect absolutely PPT entanglement.
pub fn cannot_detect_hull() -> [(f64, f64); 4] {
    let r = 3.0 * (std::f64::consts::SQRT_2 - 1.0);
    [(0.0, 0.0), (r, 0.0), (1.2, 1.2), (0.0, r)]
}

/// Closed-hull membership with a `1e-12` edge slack.
pub fn in_cannot_detect_hull(b: f64, c: f64) -> bool {
    let v = cannot_detect_hull();
    (0..4).all(|i| {
        let (x0, y0) = v[i];
        let (x1, y1) = v[(i + 1) % 4];
        (x1 - x0) * (c - y0) - (y1 - y0) * (b - x0) >= -1e-12
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BcClass {
    pub positive: bool,
    pub positive_not_cp: bool,
    pub indecomposable: bool,
    pub exposed: bool,
}

pub fn classify_bc(b: f64, c: f64) -> BcClass {
    BcClass {
        positive: is_positive_bc(b, c),
        positive_not_cp: is_positive_not_cp_bc(b, c),
        indecomposable: is_indecomposable_bc(b, c),
        exposed: is_exposed_bc(b, c),
    }
}
