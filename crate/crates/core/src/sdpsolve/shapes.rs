//! The concrete problems: minimum witness value over absolutely PPT spectra,
//! the diamond-norm SDP and the PPT relaxation for eigenvalue upper bounds.

use serde::{Deserialize, Serialize};

use super::problem::{AffineHermitian, HermVar, LinearConstraint, PsdBlock, SdpProblem};
use super::solver::{solve, SdpSolution, DEFAULT_GAP};
use crate::absppt::{build_lmis, submatrix_2x2, LmiMatrix, LmiSet};
use crate::bipartite::{partial_trace_raw, partial_transpose_raw, Subsystem};
use crate::error::{Error, Result};
use crate::matcore::{eigvalsh, ComplexMatrix, HermitianMatrix};
use crate::posmaps::MapSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LmiMode {
    Full,
    Submatrix2x2,
}

fn lmi_block(l: &LmiMatrix) -> PsdBlock {
    let k = l.size();
    let mut terms: Vec<(usize, Vec<(usize, usize, f64)>)> = Vec::new();
    for r in 0..k {
        for c in 0..k {
            for (var, w) in l.entries[r][c].coefficients() {
                match terms.iter_mut().find(|(v, _)| *v == var) {
                    Some((_, e)) => e.push((r, c, w)),
                    None => terms.push((var, vec![(r, c, w)])),
                }
            }
        }
    }
    PsdBlock { dim: k, constant: vec![0.0; k * k], terms }
}

/// `min sum_j lambda_j mu_{mn-j+1}` over descending spectra obeying the
/// selected absolute-PPT constraints.
pub fn min_witness_problem(mu: &[f64], m: usize, n: usize, mode: LmiMode) -> Result<SdpProblem> {
    let p = m * n;
    if m == 0 || n == 0 {
        return Err(Error::InvalidDim("m and n must be positive".into()));
    }
    if mu.len() != p {
        return Err(Error::DimensionMismatch(format!("witness spectrum has {} values, expected {p}", mu.len())));
    }
    if mu.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParams("witness spectrum must be finite".into()));
    }
    let mut mu = mu.to_vec();
    mu.sort_by(|a, b| b.total_cmp(a));

    let lmis: Vec<LmiMatrix> = match (mode, build_lmis(m, n)?) {
        (LmiMode::Full, LmiSet::Exact(v)) => v,
        (LmiMode::Full, LmiSet::NecessaryOnly(_)) => {
            return Err(Error::Unsupported(format!(
                "full absolute-PPT constraints are not available for min(m, n) = {}",
                m.min(n)
            )))
        }
        (LmiMode::Submatrix2x2, LmiSet::Exact(v)) if v.is_empty() => v,
        (LmiMode::Submatrix2x2, _) => vec![submatrix_2x2(p)],
    };

    let objective: Vec<f64> = (0..p).map(|j| mu[p - 1 - j]).collect();
    let mut prob = SdpProblem::new(p, objective);
    prob.linear_eq.push(LinearConstraint { coeffs: (0..p).map(|j| (j, 1.0)).collect(), rhs: 1.0 });
    for j in 0..p.saturating_sub(1) {
        prob.psd_blocks.push(PsdBlock::scalar(0.0, &[(j, 1.0), (j + 1, -1.0)]));
    }
    prob.psd_blocks.push(PsdBlock::scalar(0.0, &[(p - 1, 1.0)]));
    prob.psd_blocks.extend(lmis.iter().map(lmi_block));
    // strictly decreasing, close to uniform
    let eps = 0.1;
    let pf = p as f64;
    prob.initial_point = (1..=p).map(|j| (1.0 + eps * (pf + 1.0 - 2.0 * j as f64) / pf) / pf).collect();
    Ok(prob)
}

pub fn min_witness_solution(mu: &[f64], m: usize, n: usize, mode: LmiMode) -> Result<SdpSolution> {
    solve(&min_witness_problem(mu, m, n, mode)?, DEFAULT_GAP)
}

/// Attained minimum (an upper bound within the solver gap).
pub fn min_witness_over_abs_ppt(mu: &[f64], m: usize, n: usize, mode: LmiMode) -> Result<f64> {
    Ok(min_witness_solution(mu, m, n, mode)?.primal_value)
}

fn dual_choi(phi: &MapSpec) -> Result<ComplexMatrix> {
    Ok(phi.dual().choi_matrix()?.into_matrix().into_matrix())
}

fn lambda_max(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigvalsh(&HermitianMatrix::hermitian_part(m))?[0])
}

/// SDP for `||Phi^dagger||_diamond`: minimize `(s0 + s1) / 2` with
/// `[[Y0, -J], [-J^dagger, Y1]] >= 0`, `s_k I - Tr_2 Y_k >= 0`, `J = J(Phi^dagger)`.
pub fn diamond_problem(phi: &MapSpec) -> Result<SdpProblem> {
    let n = phi.in_dim();
    let d = n * n;
    let j = dual_choi(phi)?;
    let y0 = HermVar { offset: 0, dim: d };
    let y1 = HermVar { offset: d * d, dim: d };
    let (s0, s1) = (2 * d * d, 2 * d * d + 1);
    let nv = 2 * d * d + 2;
    let mut objective = vec![0.0; nv];
    objective[s0] = 0.5;
    objective[s1] = 0.5;
    let mut prob = SdpProblem::new(nv, objective);

    let mut off = ComplexMatrix::zeros(2 * d, 2 * d);
    for r in 0..d {
        for c in 0..d {
            off[(r, d + c)] = -j[(r, c)];
            off[(d + c, r)] = -j[(r, c)].conj();
        }
    }
    let big = AffineHermitian::constant(off)
        .add(&y0.affine().embed(2 * d, 0))
        .add(&y1.affine().embed(2 * d, d));
    prob.psd_blocks.push(big.to_block());
    for (y, s) in [(y0, s0), (y1, s1)] {
        let mut sl = AffineHermitian::zeros(n);
        sl.terms.push((s, ComplexMatrix::identity(n)));
        let tr = y.affine().map(|m| partial_trace_raw(m, n, n, Subsystem::Second)).scale(-1.0);
        prob.psd_blocks.push(sl.add(&tr).to_block());
    }

    let kappa = crate::matcore::schatten_norm(&j, crate::matcore::Norm::Operator)? + 1.0;
    let mut x = vec![0.0; nv];
    let ki = ComplexMatrix::identity(d).scale(kappa);
    y0.write(&mut x, &ki);
    y1.write(&mut x, &ki);
    x[s0] = kappa * n as f64 + 1.0;
    x[s1] = kappa * n as f64 + 1.0;
    prob.initial_point = x;
    Ok(prob)
}

/// Dual of the PPT relaxation: minimize `s` with `Y >= 0`,
/// `s I - ((id (x) T)(Y) + J(Phi^dagger)) >= 0`.
pub fn max_eig_dual_problem(phi: &MapSpec) -> Result<SdpProblem> {
    let n = phi.in_dim();
    let d = n * n;
    let j = dual_choi(phi)?;
    let y = HermVar { offset: 0, dim: d };
    let s = d * d;
    let mut objective = vec![0.0; d * d + 1];
    objective[s] = 1.0;
    let mut prob = SdpProblem::new(d * d + 1, objective);
    prob.psd_blocks.push(y.affine().to_block());
    let mut top = AffineHermitian::constant(j.scale(-1.0));
    top.terms.push((s, ComplexMatrix::identity(d)));
    let yg = y.affine().map(|m| partial_transpose_raw(m, n, n)).scale(-1.0);
    prob.psd_blocks.push(top.add(&yg).to_block());

    let mut x = vec![0.0; d * d + 1];
    y.write(&mut x, &ComplexMatrix::identity(d));
    x[s] = lambda_max(&(&ComplexMatrix::identity(d) + &j))? + 1.0;
    prob.initial_point = x;
    Ok(prob)
}

/// PPT relaxation: maximize `Tr(J(Phi^dagger) rho)` over `rho >= 0`,
/// `rho^Gamma >= 0`, `Tr rho <= 1` (posed as a minimization of the negative).
pub fn max_eig_primal_problem(phi: &MapSpec) -> Result<SdpProblem> {
    let n = phi.in_dim();
    let d = n * n;
    let j = dual_choi(phi)?;
    let rho = HermVar { offset: 0, dim: d };
    let aff = rho.affine();
    let objective: Vec<f64> = aff.terms.iter().map(|(_, m)| -j.hs_inner(m).re).collect();
    let mut prob = SdpProblem::new(d * d, objective);
    prob.psd_blocks.push(aff.to_block());
    prob.psd_blocks.push(aff.map(|m| partial_transpose_raw(m, n, n)).to_block());
    prob.linear_ineq.push(LinearConstraint { coeffs: (0..d).map(|i| (i, 1.0)).collect(), rhs: 1.0 });
    let mut x = vec![0.0; d * d];
    rho.write(&mut x, &ComplexMatrix::identity(d).scale(0.5 / d as f64));
    prob.initial_point = x;
    Ok(prob)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

/// Bracket on `||Phi^dagger||_diamond` from the barrier run on SDP (diamond).
pub fn diamond_bracket(phi: &MapSpec) -> Result<Bracket> {
    let s = solve(&diamond_problem(phi)?, DEFAULT_GAP)?;
    Ok(Bracket { lower: s.dual_value, upper: s.primal_value })
}

/// Bracket on the PPT-relaxed maximum eigenvalue: the primal run gives an
/// attained lower value, the dual run an attained upper value.
pub fn max_eig_bracket(phi: &MapSpec) -> Result<Bracket> {
    let primal = solve(&max_eig_primal_problem(phi)?, DEFAULT_GAP)?;
    let dual = solve(&max_eig_dual_problem(phi)?, DEFAULT_GAP)?;
    Ok(Bracket { lower: -primal.primal_value, upper: dual.primal_value })
}
