//! Closed-form dual feasible points and their verifiers.

use serde::{Deserialize, Serialize};

use super::shapes::{diamond_bracket, max_eig_bracket};
use crate::bipartite::{max_entangled, partial_trace_raw, partial_transpose_raw, Subsystem};
use crate::error::{Error, Result};
use crate::matcore::{c64, eigvalsh, ComplexMatrix, HermitianMatrix};
use crate::posmaps::{MapKind, MapSpec};

/// Absolute slack on the minimum eigenvalue of every dual PSD block.
pub const CERT_PSD_TOL: f64 = 1e-10;

/// Named dual matrices plus the objective value they are claimed to certify.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualCertificate {
    pub label: String,
    pub dual_values: Vec<(String, HermitianMatrix)>,
    pub objective_value: f64,
    /// Filled in by verification: `max(0, -lambda_min)` over the PSD blocks.
    pub feasibility_residual: f64,
}

impl DualCertificate {
    fn new(label: &str, dual_values: Vec<(&str, HermitianMatrix)>, objective_value: f64) -> Self {
        Self {
            label: label.to_string(),
            dual_values: dual_values.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            objective_value,
            feasibility_residual: 0.0,
        }
    }

    pub fn get(&self, name: &str) -> Result<&HermitianMatrix> {
        self.dual_values
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v)
            .ok_or_else(|| Error::CertificateRejected(format!("{}: missing dual value {name}", self.label)))
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut HermitianMatrix> {
        self.dual_values.iter_mut().find(|(k, _)| k == name).map(|(_, v)| v)
    }
}

/// Outcome of checking a certificate against its map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub value: f64,
    pub claimed: f64,
    pub feasibility_residual: f64,
}

impl CertificateCheck {
    pub fn matches_claim(&self, tol: f64) -> bool {
        (self.value - self.claimed).abs() <= tol
    }
}

fn sym(n: usize, entries: &[(usize, usize, f64)]) -> HermitianMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for &(r, c, v) in entries {
        m[(r, c)] = c64(v, 0.0);
        m[(c, r)] = c64(v, 0.0);
    }
    HermitianMatrix::hermitian_part(&m)
}

fn psd_residual(m: &ComplexMatrix) -> Result<f64> {
    let vals = eigvalsh(&HermitianMatrix::hermitian_part(m))?;
    Ok((-vals[vals.len() - 1]).max(0.0))
}

fn lambda_max(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigvalsh(&HermitianMatrix::hermitian_part(m))?[0])
}

fn check_dim(label: &str, y: &HermitianMatrix, d: usize) -> Result<()> {
    if y.dim() != d {
        return Err(Error::DimensionMismatch(format!("{label}: expected {d}x{d}, got {0}x{0}", y.dim())));
    }
    Ok(())
}

fn reject_if(label: &str, residual: f64) -> Result<()> {
    if residual > CERT_PSD_TOL {
        return Err(Error::CertificateRejected(format!("{label}: PSD violated by {residual:e}")));
    }
    Ok(())
}

/// Choi-map diamond certificate: `Y0 = Y1` with entries 5, 3, -1 over 6.
pub fn choi_diamond_cert() -> DualCertificate {
    let y = sym(
        9,
        &[
            (0, 0, 5.0 / 6.0),
            (1, 1, 3.0 / 6.0),
            (4, 4, 5.0 / 6.0),
            (5, 5, 3.0 / 6.0),
            (6, 6, 3.0 / 6.0),
            (8, 8, 5.0 / 6.0),
            (0, 4, -1.0 / 6.0),
            (0, 8, -1.0 / 6.0),
            (4, 8, -1.0 / 6.0),
        ],
    );
    DualCertificate::new("choi-diamond", vec![("Y0", y.clone()), ("Y1", y)], 4.0 / 3.0)
}

/// Choi-map eigenvalue certificate: entries 1, 2, 4 over 6.
pub fn choi_eig_cert() -> DualCertificate {
    let y = sym(
        9,
        &[
            (1, 1, 1.0 / 6.0),
            (1, 3, 2.0 / 6.0),
            (3, 3, 4.0 / 6.0),
            (2, 2, 4.0 / 6.0),
            (2, 6, 2.0 / 6.0),
            (6, 6, 1.0 / 6.0),
            (5, 5, 1.0 / 6.0),
            (5, 7, 2.0 / 6.0),
            (7, 7, 4.0 / 6.0),
        ],
    );
    DualCertificate::new("choi-eig", vec![("Y", y)], 2.0 / 3.0)
}

/// Generalized Choi diamond certificate, value `(3 + b + c) / 3`.
pub fn gen_choi_diamond_cert(b: f64, c: f64) -> DualCertificate {
    let a = 6.0 - b - c;
    let o = 2.0 * b + 2.0 * c - 3.0;
    let y = sym(
        9,
        &[
            (0, 0, a / 6.0),
            (1, 1, 3.0 * b / 6.0),
            (2, 2, 3.0 * c / 6.0),
            (3, 3, 3.0 * c / 6.0),
            (4, 4, a / 6.0),
            (5, 5, 3.0 * b / 6.0),
            (6, 6, 3.0 * b / 6.0),
            (7, 7, 3.0 * c / 6.0),
            (8, 8, a / 6.0),
            (0, 4, o / 6.0),
            (0, 8, o / 6.0),
            (4, 8, o / 6.0),
        ],
    );
    DualCertificate::new("gen-choi-diamond", vec![("Y0", y.clone()), ("Y1", y)], (3.0 + b + c) / 3.0)
}

/// Which branch of the generalized-Choi eigenvalue bound applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenChoiCase {
    /// `2b + c >= 3` or `b + 2c >= 3`: `Y = 0`, bound `max(b, c) / 2`.
    Large,
    /// Otherwise: the `(x, y)` certificate.
    Small,
}

pub fn gen_choi_case(b: f64, c: f64) -> GenChoiCase {
    if 2.0 * b + c >= 3.0 || b + 2.0 * c >= 3.0 {
        GenChoiCase::Large
    } else {
        GenChoiCase::Small
    }
}

/// `(x, y)` parameters of the small-case certificate.
pub fn gen_choi_xy(b: f64, c: f64) -> (f64, f64) {
    let a = 2.0 - b - c;
    ((3.0 - 2.0 * b - c).powi(2) / (6.0 * a), (3.0 - b - 2.0 * c).powi(2) / (6.0 * a))
}

/// Closed-form eigenvalue upper bound claimed for `Phi_{b,c}^dagger`.
pub fn gen_choi_claimed_bound(b: f64, c: f64) -> f64 {
    match gen_choi_case(b, c) {
        GenChoiCase::Large => b.max(c) / 2.0,
        GenChoiCase::Small => (b * b + c * c - 6.0 * (b + c) + b * c + 9.0) / (6.0 * (2.0 - b - c)),
    }
}

/// The small-case closed form is the certificate's value only while
/// `4xy <= 1`; beyond that the `|psi+>` direction dominates.
pub fn gen_choi_claim_attained(b: f64, c: f64) -> bool {
    match gen_choi_case(b, c) {
        GenChoiCase::Large => true,
        GenChoiCase::Small => {
            let (x, y) = gen_choi_xy(b, c);
            4.0 * x * y <= 1.0 + 1e-12
        }
    }
}

pub fn gen_choi_eig_cert(b: f64, c: f64) -> DualCertificate {
    let y = match gen_choi_case(b, c) {
        GenChoiCase::Large => HermitianMatrix::zeros(9),
        GenChoiCase::Small => {
            let (x, y) = gen_choi_xy(b, c);
            let r = (x * y).sqrt();
            sym(
                9,
                &[
                    (1, 1, x),
                    (1, 3, r),
                    (3, 3, y),
                    (2, 2, y),
                    (2, 6, r),
                    (6, 6, x),
                    (5, 5, x),
                    (5, 7, r),
                    (7, 7, y),
                ],
            )
        }
    };
    DualCertificate::new("gen-choi-eig", vec![("Y", y)], gen_choi_claimed_bound(b, c))
}

fn bh_parts(phi: &MapSpec) -> Result<(usize, ComplexMatrix)> {
    match phi.kind() {
        MapKind::BreuerHall { v } => Ok((phi.in_dim(), v.clone())),
        _ => Err(Error::InvalidParams(format!("{} is not a Breuer-Hall map", phi.name()))),
    }
}

/// `Y0 = Y1 = J(Phi_BH^dagger) + 2 |psi+><psi+|`, value `(n + 2) / n`.
pub fn breuer_hall_diamond_cert(phi: &MapSpec) -> Result<DualCertificate> {
    let (n, _) = bh_parts(phi)?;
    let j = phi.dual().choi_matrix()?.into_matrix();
    let psi = HermitianMatrix::projector(&max_entangled(n)?).scale(2.0);
    let y = &j + &psi;
    let y = HermitianMatrix::hermitian_part(&y);
    Ok(DualCertificate::new(
        "breuer-hall-diamond",
        vec![("Y0", y.clone()), ("Y1", y)],
        (n as f64 + 2.0) / n as f64,
    ))
}

/// `Y = n/(n-2) (I (x) V)|psi+><psi+|(I (x) V^dagger)`, value `1 / (n - 2)`.
pub fn breuer_hall_eig_cert(phi: &MapSpec) -> Result<DualCertificate> {
    let (n, v) = bh_parts(phi)?;
    let iv = ComplexMatrix::identity(n).kron(&v);
    let w = iv.mul_vec(&max_entangled(n)?)?;
    let y = HermitianMatrix::projector(&w).scale(n as f64 / (n as f64 - 2.0));
    Ok(DualCertificate::new("breuer-hall-eig", vec![("Y", y)], 1.0 / (n as f64 - 2.0)))
}

/// Verifies a diamond certificate for `||Phi^dagger||_diamond`.
pub fn check_diamond_certificate(phi: &MapSpec, cert: &DualCertificate) -> Result<CertificateCheck> {
    let n = phi.in_dim();
    let d = n * n;
    let j = phi.dual().choi_matrix()?.into_matrix().into_matrix();
    let (y0, y1) = (cert.get("Y0")?, cert.get("Y1")?);
    check_dim(&cert.label, y0, d)?;
    check_dim(&cert.label, y1, d)?;
    let mut block = ComplexMatrix::zeros(2 * d, 2 * d);
    for r in 0..d {
        for c in 0..d {
            block[(r, c)] = y0[(r, c)];
            block[(d + r, d + c)] = y1[(r, c)];
            block[(r, d + c)] = -j[(r, c)];
            block[(d + c, r)] = -j[(r, c)].conj();
        }
    }
    let residual = psd_residual(&block)?.max(psd_residual(y0)?).max(psd_residual(y1)?);
    reject_if(&cert.label, residual)?;
    let t0 = lambda_max(&partial_trace_raw(y0, n, n, Subsystem::Second))?;
    let t1 = lambda_max(&partial_trace_raw(y1, n, n, Subsystem::Second))?;
    Ok(CertificateCheck {
        value: 0.5 * t0 + 0.5 * t1,
        claimed: cert.objective_value,
        feasibility_residual: residual,
    })
}

/// Verifies an eigenvalue certificate: `Y >= 0`, value
/// `lambda_max((id (x) T)(Y) + J(Phi^dagger))`.
pub fn check_eig_certificate(phi: &MapSpec, cert: &DualCertificate) -> Result<CertificateCheck> {
    let n = phi.in_dim();
    let y = cert.get("Y")?;
    check_dim(&cert.label, y, n * n)?;
    let residual = psd_residual(y)?;
    reject_if(&cert.label, residual)?;
    let j = phi.dual().choi_matrix()?.into_matrix().into_matrix();
    let value = lambda_max(&(&partial_transpose_raw(y, n, n) + &j))?;
    Ok(CertificateCheck { value, claimed: cert.objective_value, feasibility_residual: residual })
}

/// Upper bound on `||Phi^dagger||_diamond`: from the certificate if given,
/// else from the barrier solver.
pub fn diamond_norm_ub(phi: &MapSpec, cert: Option<&DualCertificate>) -> Result<f64> {
    match cert {
        Some(c) => Ok(check_diamond_certificate(phi, c)?.value),
        None => Ok(diamond_bracket(phi)?.upper),
    }
}

/// Upper bound on the eigenvalues of `(id (x) Phi^dagger)(|v><v|)` over unit `v`.
pub fn max_eig_ub(phi: &MapSpec, cert: Option<&DualCertificate>) -> Result<f64> {
    match cert {
        Some(c) => Ok(check_eig_certificate(phi, c)?.value),
        None => Ok(max_eig_bracket(phi)?.upper),
    }
}

/// Lower bound on the eigenvalues implied by a diamond-norm bound.
pub fn min_eig_lb_from_diamond(diamond_ub: f64) -> Result<f64> {
    if !(diamond_ub >= 1.0 - 1e-12) {
        return Err(Error::DomainError(format!("diamond norm bound must be >= 1, got {diamond_ub}")));
    }
    Ok((1.0 - diamond_ub) / 2.0)
}
