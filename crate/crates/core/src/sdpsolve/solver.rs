//! Log-det barrier path following with feasible Newton centering.

use serde::{Deserialize, Serialize};

use super::dense::{chol_inverse, chol_logdet, chol_solve, cholesky, lu_solve};
use super::problem::{PsdBlock, SdpProblem};
use crate::error::{Error, Result};

/// Default stopping gap (`theta / t`).
pub const DEFAULT_GAP: f64 = 1e-7;
/// Barrier weight multiplier per outer step (`mu`-reduction 0.2).
const T_GROWTH: f64 = 5.0;
const MAX_OUTER: usize = 200;
const MAX_NEWTON: usize = 200;
const NEWTON_TOL: f64 = 1e-10;
/// Newton decrement below which the undamped step is taken.
const QUADRATIC_REGION: f64 = 0.25;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpSolution {
    /// Objective at the returned (feasible) point: an upper bound on the minimum.
    pub primal_value: f64,
    /// `primal_value - theta / t`: a lower bound on the minimum.
    pub dual_value: f64,
    pub primal_point: Vec<f64>,
    pub newton_steps: usize,
}

struct Work<'a> {
    p: &'a SdpProblem,
    blocks: Vec<PsdBlock>,
}

impl Work<'_> {
    /// `Some(sum log det F_k(x))` when every block is PD.
    fn logdet(&self, x: &[f64]) -> Option<f64> {
        let mut s = 0.0;
        for b in &self.blocks {
            let l = cholesky(&b.eval(x), b.dim)?;
            s += chol_logdet(&l, b.dim);
        }
        Some(s)
    }

    /// Gradient and Hessian of `t c.x - sum log det F_k(x)`.
    fn derivatives(&self, x: &[f64], t: f64) -> Option<(Vec<f64>, Vec<f64>)> {
        let nv = self.p.variable_dim;
        let mut g: Vec<f64> = self.p.objective.iter().map(|c| t * c).collect();
        let mut h = vec![0.0; nv * nv];
        for b in &self.blocks {
            let d = b.dim;
            let l = cholesky(&b.eval(x), d)?;
            let inv = chol_inverse(&l, d);
            // M_i = F^{-1} F_i F^{-1}
            let ms: Vec<Vec<f64>> = b
                .terms
                .iter()
                .map(|(_, e)| {
                    let mut m = vec![0.0; d * d];
                    for &(r, c, v) in e {
                        for a in 0..d {
                            let left = inv[a * d + r] * v;
                            if left == 0.0 {
                                continue;
                            }
                            let row = &mut m[a * d..(a + 1) * d];
                            for (out, w) in row.iter_mut().zip(&inv[c * d..(c + 1) * d]) {
                                *out += left * w;
                            }
                        }
                    }
                    m
                })
                .collect();
            for (ti, (vi, ei)) in b.terms.iter().enumerate() {
                g[*vi] -= ei.iter().map(|&(r, c, v)| v * inv[c * d + r]).sum::<f64>();
                for (vj, ej) in &b.terms[ti..] {
                    let s: f64 = ej.iter().map(|&(r, c, w)| w * ms[ti][c * d + r]).sum();
                    h[vi * nv + vj] += s;
                    if vi != vj {
                        h[vj * nv + vi] += s;
                    }
                }
            }
        }
        Some((g, h))
    }
}

/// Minimizes `objective . x` over the problem's constraints.
pub fn solve(p: &SdpProblem, gap: f64) -> Result<SdpSolution> {
    p.validate()?;
    if !(gap > 0.0) {
        return Err(Error::InvalidParams(format!("gap tolerance must be positive, got {gap}")));
    }
    let nv = p.variable_dim;
    let mut blocks = p.psd_blocks.clone();
    for c in &p.linear_ineq {
        let neg: Vec<_> = c.coeffs.iter().map(|&(i, v)| (i, -v)).collect();
        blocks.push(PsdBlock::scalar(c.rhs, &neg));
    }
    let work = Work { p, blocks };
    let theta: f64 = work.blocks.iter().map(|b| b.dim as f64).sum();

    let neq = p.linear_eq.len();
    let mut a = vec![0.0; neq * nv];
    for (r, c) in p.linear_eq.iter().enumerate() {
        for &(i, v) in &c.coeffs {
            a[r * nv + i] += v;
        }
    }
    let mut x = p.initial_point.clone();
    if neq > 0 {
        project_onto_equalities(&mut x, &a, p, nv)?;
    }
    let z = null_space(&a, neq, nv);
    let mut phi_logdet = work
        .logdet(&x)
        .ok_or_else(|| Error::NoInteriorPoint("initial point is not strictly feasible".into()))?;

    if theta == 0.0 {
        let v = p.objective_at(&x);
        return Ok(SdpSolution { primal_value: v, dual_value: v, primal_point: x, newton_steps: 0 });
    }

    let mut t = 1.0;
    let mut steps = 0;
    for _ in 0..MAX_OUTER {
        let mut centered = false;
        for _ in 0..MAX_NEWTON {
            let (g, h) = work
                .derivatives(&x, t)
                .ok_or_else(|| Error::NoInteriorPoint("iterate left the interior".into()))?;
            let dx = newton_direction(&g, &h, &z, nv)?;
            let slope: f64 = g.iter().zip(&dx).map(|(a, b)| a * b).sum();
            steps += 1;
            if -slope / 2.0 <= NEWTON_TOL {
                centered = true;
                break;
            }
            // Inside the quadratic region a full step stays interior and decreases the
            // barrier; the Armijo test there only measures rounding noise once t is large.
            if -slope < QUADRATIC_REGION * QUADRATIC_REGION {
                let trial: Vec<f64> = x.iter().zip(&dx).map(|(xi, di)| xi + di).collect();
                if let Some(ld) = work.logdet(&trial) {
                    x = trial;
                    phi_logdet = ld;
                    continue;
                }
            }
            let f0 = t * p.objective_at(&x) - phi_logdet;
            let mut alpha = 1.0;
            let mut moved = false;
            while alpha > 1e-16 {
                let trial: Vec<f64> = x.iter().zip(&dx).map(|(xi, di)| xi + alpha * di).collect();
                if let Some(ld) = work.logdet(&trial) {
                    let f1 = t * p.objective_at(&trial) - ld;
                    if f1 <= f0 + 0.25 * alpha * slope {
                        x = trial;
                        phi_logdet = ld;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !moved {
                // numerically centered as far as double precision allows
                centered = true;
                break;
            }
        }
        if !centered {
            return Err(Error::MaxIterations(format!("centering did not converge at t = {t:e}")));
        }
        if theta / t <= gap {
            let v = p.objective_at(&x);
            return Ok(SdpSolution {
                primal_value: v,
                dual_value: v - theta / t,
                primal_point: x,
                newton_steps: steps,
            });
        }
        t *= T_GROWTH;
    }
    Err(Error::MaxIterations(format!("gap still {:e} after {MAX_OUTER} outer steps", theta / t)))
}

fn project_onto_equalities(x: &mut [f64], a: &[f64], p: &SdpProblem, nv: usize) -> Result<()> {
    let neq = p.linear_eq.len();
    let resid: Vec<f64> = (0..neq)
        .map(|r| p.linear_eq[r].rhs - (0..nv).map(|i| a[r * nv + i] * x[i]).sum::<f64>())
        .collect();
    let mut aat = vec![0.0; neq * neq];
    for r in 0..neq {
        for s in 0..neq {
            aat[r * neq + s] = (0..nv).map(|i| a[r * nv + i] * a[s * nv + i]).sum();
        }
    }
    let y = lu_solve(&aat, neq, &resid)
        .ok_or_else(|| Error::InvalidParams("equality constraints are linearly dependent".into()))?;
    for i in 0..nv {
        x[i] += (0..neq).map(|r| a[r * nv + i] * y[r]).sum::<f64>();
    }
    Ok(())
}

/// Orthonormal basis of `{v : A v = 0}` as column-major vectors.
fn null_space(a: &[f64], neq: usize, nv: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let push = |mut v: Vec<f64>, basis: &mut Vec<Vec<f64>>| {
        for _ in 0..2 {
            for q in basis.iter() {
                let d: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= d * qi);
            }
        }
        let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 1e-10 {
            v.iter_mut().for_each(|x| *x /= nrm);
            basis.push(v);
            true
        } else {
            false
        }
    };
    for r in 0..neq {
        push(a[r * nv..(r + 1) * nv].to_vec(), &mut basis);
    }
    let rank = basis.len();
    for i in 0..nv {
        let mut e = vec![0.0; nv];
        e[i] = 1.0;
        push(e, &mut basis);
    }
    basis.split_off(rank)
}

/// Newton step restricted to the null space `Z`: `(Z^T H Z) dz = -Z^T g`.
fn newton_direction(g: &[f64], h: &[f64], z: &[Vec<f64>], nv: usize) -> Result<Vec<f64>> {
    let k = z.len();
    let hz: Vec<Vec<f64>> = z
        .iter()
        .map(|col| (0..nv).map(|i| h[i * nv..(i + 1) * nv].iter().zip(col).map(|(a, b)| a * b).sum()).collect())
        .collect();
    let mut red = vec![0.0; k * k];
    for a in 0..k {
        for b in a..k {
            let v: f64 = z[a].iter().zip(&hz[b]).map(|(x, y)| x * y).sum();
            red[a * k + b] = v;
            red[b * k + a] = v;
        }
    }
    let rhs: Vec<f64> = z.iter().map(|col| -col.iter().zip(g).map(|(a, b)| a * b).sum::<f64>()).collect();
    let dz = match cholesky(&red, k) {
        Some(l) => chol_solve(&l, k, &rhs),
        None => {
            // a direction the barrier does not see; regularize lightly
            let ridge = 1e-12 * (0..k).map(|i| red[i * k + i].abs()).fold(1.0, f64::max);
            for i in 0..k {
                red[i * k + i] += ridge;
            }
            lu_solve(&red, k, &rhs).ok_or_else(|| Error::InvalidParams("singular Newton system".into()))?
        }
    };
    let mut dx = vec![0.0; nv];
    for (col, w) in z.iter().zip(&dz) {
        dx.iter_mut().zip(col).for_each(|(d, c)| *d += w * c);
    }
    Ok(dx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdpsolve::problem::LinearConstraint;

    #[test]
    fn smallest_largest_entry_of_a_sorted_distribution() {
        // min l1 s.t. sum = 1, l1 >= l2 >= l3 >= l4 >= 0
        let mut p = SdpProblem::new(4, vec![1.0, 0.0, 0.0, 0.0]);
        p.linear_eq.push(LinearConstraint { coeffs: (0..4).map(|i| (i, 1.0)).collect(), rhs: 1.0 });
        for j in 0..3 {
            p.psd_blocks.push(PsdBlock::scalar(0.0, &[(j, 1.0), (j + 1, -1.0)]));
        }
        p.psd_blocks.push(PsdBlock::scalar(0.0, &[(3, 1.0)]));
        p.initial_point = vec![0.4, 0.3, 0.2, 0.1];
        let s = solve(&p, 1e-9).unwrap();
        assert!((s.primal_value - 0.25).abs() < 1e-7, "{s:?}");
        assert!(s.dual_value <= 0.25 + 1e-12 && s.dual_value >= 0.25 - 1e-8);
    }

    #[test]
    fn infeasible_start_is_reported() {
        let mut p = SdpProblem::new(1, vec![1.0]);
        p.psd_blocks.push(PsdBlock::scalar(0.0, &[(0, 1.0)]));
        p.initial_point = vec![-1.0];
        assert!(matches!(solve(&p, 1e-7), Err(Error::NoInteriorPoint(_))));
    }

    #[test]
    fn inequality_rows_are_respected() {
        // max x s.t. x <= 2, x >= 0
        let mut p = SdpProblem::new(1, vec![-1.0]);
        p.linear_ineq.push(LinearConstraint { coeffs: vec![(0, 1.0)], rhs: 2.0 });
        p.psd_blocks.push(PsdBlock::scalar(0.0, &[(0, 1.0)]));
        p.initial_point = vec![1.0];
        let s = solve(&p, 1e-9).unwrap();
        assert!((s.primal_value + 2.0).abs() < 1e-8);
    }
}
