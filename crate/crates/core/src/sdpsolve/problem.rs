//! Problem representation: affine symmetric blocks `F0 + sum_i x_i F_i >= 0`
//! over a real variable vector, plus a builder for Hermitian-valued pieces.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{c64, ComplexMatrix, HermitianMatrix};

/// Real symmetric affine block. Entries are row-major and list both triangles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdBlock {
    pub dim: usize,
    pub constant: Vec<f64>,
    /// `(variable, [(row, col, value)])`.
    pub terms: Vec<(usize, Vec<(usize, usize, f64)>)>,
}

impl PsdBlock {
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut f = self.constant.clone();
        for (var, entries) in &self.terms {
            let xv = x[*var];
            if xv == 0.0 {
                continue;
            }
            for &(r, c, v) in entries {
                f[r * self.dim + c] += xv * v;
            }
        }
        f
    }

    /// `1x1` block `rhs + sum coeffs . x >= 0`.
    pub fn scalar(rhs: f64, coeffs: &[(usize, f64)]) -> Self {
        Self {
            dim: 1,
            constant: vec![rhs],
            terms: coeffs.iter().map(|&(i, v)| (i, vec![(0, 0, v)])).collect(),
        }
    }
}

/// `sum coeffs . x = rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// Minimize `objective . x` subject to every block PSD and the equalities.
/// Inequalities `a . x <= rhs` are folded into 1x1 blocks when solving.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpProblem {
    pub variable_dim: usize,
    pub objective: Vec<f64>,
    pub psd_blocks: Vec<PsdBlock>,
    pub linear_eq: Vec<LinearConstraint>,
    pub linear_ineq: Vec<LinearConstraint>,
    /// A strictly feasible point (equalities may be violated; they are
    /// restored by projection before the barrier starts).
    pub initial_point: Vec<f64>,
}

impl SdpProblem {
    pub fn new(variable_dim: usize, objective: Vec<f64>) -> Self {
        Self {
            variable_dim,
            objective,
            psd_blocks: Vec::new(),
            linear_eq: Vec::new(),
            linear_ineq: Vec::new(),
            initial_point: vec![0.0; variable_dim],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nv = self.variable_dim;
        let bad = |what: String| Err(Error::DimensionMismatch(what));
        if self.objective.len() != nv || self.initial_point.len() != nv {
            return bad(format!("objective/initial point length must be {nv}"));
        }
        for (k, b) in self.psd_blocks.iter().enumerate() {
            if b.constant.len() != b.dim * b.dim {
                return bad(format!("block {k}: constant is not {0}x{0}", b.dim));
            }
            for (var, entries) in &b.terms {
                if *var >= nv || entries.iter().any(|&(r, c, _)| r >= b.dim || c >= b.dim) {
                    return bad(format!("block {k}: term out of range"));
                }
            }
        }
        for c in self.linear_eq.iter().chain(&self.linear_ineq) {
            if c.coeffs.iter().any(|&(i, _)| i >= nv) {
                return bad("linear constraint references a missing variable".into());
            }
        }
        Ok(())
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("problem serializes")
    }
}

/// Hermitian-matrix-valued affine function `C + sum_i x_i M_i` of real variables.
#[derive(Clone, Debug)]
pub struct AffineHermitian {
    pub dim: usize,
    pub constant: ComplexMatrix,
    pub terms: Vec<(usize, ComplexMatrix)>,
}

impl AffineHermitian {
    pub fn constant(c: ComplexMatrix) -> Self {
        Self { dim: c.rows(), constant: c, terms: Vec::new() }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::constant(ComplexMatrix::zeros(dim, dim))
    }

    pub fn add(mut self, other: &Self) -> Self {
        self.constant = &self.constant + &other.constant;
        self.terms.extend(other.terms.iter().cloned());
        self
    }

    pub fn scale(mut self, s: f64) -> Self {
        self.constant = self.constant.scale(s);
        for (_, m) in &mut self.terms {
            *m = m.scale(s);
        }
        self
    }

    /// Applies a linear map to every coefficient.
    pub fn map(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let constant = f(&self.constant);
        Self {
            dim: constant.rows(),
            constant,
            terms: self.terms.iter().map(|(i, m)| (*i, f(m))).collect(),
        }
    }

    /// Places this (Hermitian) piece on the diagonal of a larger matrix.
    pub fn embed(&self, size: usize, offset: usize) -> Self {
        self.map(|m| {
            let mut out = ComplexMatrix::zeros(size, size);
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    out[(offset + r, offset + c)] = m[(r, c)];
                }
            }
            out
        })
    }

    pub fn eval(&self, x: &[f64]) -> ComplexMatrix {
        let mut out = self.constant.clone();
        for (i, m) in &self.terms {
            out = &out + &m.scale(x[*i]);
        }
        out
    }

    /// Real block: the matrix itself when all coefficients are real,
    /// otherwise the embedding `[[Re, -Im], [Im, Re]]`.
    pub fn to_block(&self) -> PsdBlock {
        let all = std::iter::once(&self.constant).chain(self.terms.iter().map(|(_, m)| m));
        let complex = all.into_iter().any(|m| m.data().iter().any(|z| z.im != 0.0));
        let d = self.dim;
        let dim = if complex { 2 * d } else { d };
        let sparse = |m: &ComplexMatrix| {
            let mut out = Vec::new();
            for r in 0..d {
                for c in 0..d {
                    let z = m[(r, c)];
                    if z.re != 0.0 {
                        out.push((r, c, z.re));
                        if complex {
                            out.push((r + d, c + d, z.re));
                        }
                    }
                    if complex && z.im != 0.0 {
                        out.push((r, c + d, -z.im));
                        out.push((r + d, c, z.im));
                    }
                }
            }
            out
        };
        let mut constant = vec![0.0; dim * dim];
        for (r, c, v) in sparse(&self.constant) {
            constant[r * dim + c] = v;
        }
        let mut terms: Vec<(usize, Vec<(usize, usize, f64)>)> = Vec::new();
        for (i, m) in &self.terms {
            let e = sparse(m);
            if e.is_empty() {
                continue;
            }
            match terms.iter_mut().find(|(j, _)| j == i) {
                Some((_, existing)) => existing.extend(e),
                None => terms.push((*i, e)),
            }
        }
        // merge duplicate coordinates so the Hessian sees one entry each
        for (_, e) in &mut terms {
            e.sort_by_key(|&(r, c, _)| (r, c));
            e.dedup_by(|b, a| {
                if a.0 == b.0 && a.1 == b.1 {
                    a.2 += b.2;
                    true
                } else {
                    false
                }
            });
            e.retain(|&(_, _, v)| v != 0.0);
        }
        PsdBlock { dim, constant, terms }
    }
}

/// A Hermitian `dim x dim` matrix variable occupying `dim^2` real slots:
/// diagonal entries first, then `(re, im)` pairs for each `i < j`.
#[derive(Clone, Copy, Debug)]
pub struct HermVar {
    pub offset: usize,
    pub dim: usize,
}

impl HermVar {
    pub fn len(&self) -> usize {
        self.dim * self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.dim == 0
    }

    fn slots(&self) -> Vec<(usize, usize, bool)> {
        let mut s: Vec<_> = (0..self.dim).map(|i| (i, i, false)).collect();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                s.push((i, j, false));
                s.push((i, j, true));
            }
        }
        s
    }

    pub fn affine(&self) -> AffineHermitian {
        let d = self.dim;
        let terms = self
            .slots()
            .into_iter()
            .enumerate()
            .map(|(k, (i, j, imag))| {
                let mut m = ComplexMatrix::zeros(d, d);
                if i == j {
                    m[(i, i)] = c64(1.0, 0.0);
                } else if imag {
                    m[(i, j)] = c64(0.0, 1.0);
                    m[(j, i)] = c64(0.0, -1.0);
                } else {
                    m[(i, j)] = c64(1.0, 0.0);
                    m[(j, i)] = c64(1.0, 0.0);
                }
                (self.offset + k, m)
            })
            .collect();
        AffineHermitian { dim: d, constant: ComplexMatrix::zeros(d, d), terms }
    }

    pub fn write(&self, x: &mut [f64], value: &ComplexMatrix) {
        for (k, (i, j, imag)) in self.slots().into_iter().enumerate() {
            let z: Complex64 = value[(i, j)];
            x[self.offset + k] = if imag { z.im } else { z.re };
        }
    }

    pub fn read(&self, x: &[f64]) -> HermitianMatrix {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for (k, (i, j, imag)) in self.slots().into_iter().enumerate() {
            let v = x[self.offset + k];
            if i == j {
                m[(i, i)] = c64(v, 0.0);
            } else if imag {
                m[(i, j)] += c64(0.0, v);
                m[(j, i)] += c64(0.0, -v);
            } else {
                m[(i, j)] += c64(v, 0.0);
                m[(j, i)] += c64(v, 0.0);
            }
        }
        HermitianMatrix::hermitian_part(&m)
    }
}
