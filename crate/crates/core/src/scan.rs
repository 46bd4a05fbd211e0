//! Haar orbit scans: conjugate a fixed spectrum by random unitaries and
//! evaluate a separability criterion on every sample.

use serde::{Deserialize, Serialize};

use crate::absppt::Spectrum;
use crate::bipartite::{partial_transpose_raw, realign_raw};
use crate::error::{Error, Result};
use crate::matcore::{eigvalsh, schatten_norm, ComplexMatrix, HermitianMatrix, Norm};
use crate::par::{map_indexed, Execution};
use crate::posmaps::MapSpec;
use crate::random::{haar_unitary, stream};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum ScanCriterion {
    /// Trace norm of the realigned matrix; flagged above 1.
    Realignment,
    /// `lambda_min((id (x) Phi_C)(rho))`; flagged below 0.
    Choi,
    GenChoi { b: f64, c: f64 },
    BreuerHall,
    /// `lambda_min(rho^Gamma)`.
    Ppt,
}

impl ScanCriterion {
    fn map(&self, n: usize) -> Result<Option<MapSpec>> {
        let need3 = || {
            if n != 3 {
                return Err(Error::DimensionMismatch(format!("this criterion acts on C^3, second factor is {n}")));
            }
            Ok(())
        };
        Ok(match self {
            ScanCriterion::Choi => {
                need3()?;
                Some(MapSpec::choi())
            }
            ScanCriterion::GenChoi { b, c } => {
                need3()?;
                Some(MapSpec::generalized_choi(*b, *c)?)
            }
            ScanCriterion::BreuerHall => Some(MapSpec::breuer_hall(n)?),
            _ => None,
        })
    }

    pub fn label(&self) -> String {
        match self {
            ScanCriterion::Realignment => "realignment".into(),
            ScanCriterion::Choi => "choi".into(),
            ScanCriterion::GenChoi { b, c } => format!("gen_choi({b},{c})"),
            ScanCriterion::BreuerHall => "breuer_hall".into(),
            ScanCriterion::Ppt => "ppt".into(),
        }
    }

    /// Whether larger statistic values are worse.
    pub fn upper_limit(&self) -> bool {
        matches!(self, ScanCriterion::Realignment)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSample {
    pub index: usize,
    pub statistic: f64,
    pub ppt_min_eigenvalue: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitScanReport {
    pub criterion: String,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Largest realignment norm, or smallest eigenvalue for map criteria.
    pub worst: f64,
    pub worst_index: usize,
    pub violations: usize,
    pub ppt_min_eigenvalue: f64,
    pub ppt_violations: usize,
}

impl OrbitScanReport {
    pub fn violation_found(&self) -> bool {
        self.violations > 0
    }
}

/// `U diag(lambda) U^dagger` for the `index`-th unitary of the seeded stream.
pub fn orbit_state(s: &Spectrum, seed: u64, index: usize) -> Result<HermitianMatrix> {
    let mut rng = stream(seed, index as u64);
    let u = haar_unitary(s.len(), &mut rng)?;
    HermitianMatrix::diag(s.values()).conjugate_by(&u)
}

fn lambda_min(m: &ComplexMatrix) -> Result<f64> {
    Ok(*eigvalsh(&HermitianMatrix::hermitian_part(m))?.last().expect("nonempty"))
}

pub fn orbit_samples(
    s: &Spectrum,
    criterion: &ScanCriterion,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<OrbitSample>> {
    let (m, n) = s.dims();
    let map = criterion.map(n)?;
    let results = map_indexed(samples, exec, |index| -> Result<OrbitSample> {
        let rho = orbit_state(s, seed, index)?;
        let ppt = lambda_min(&partial_transpose_raw(&rho, m, n))?;
        let statistic = match (criterion, &map) {
            (ScanCriterion::Realignment, _) => schatten_norm(&realign_raw(&rho, m, n), Norm::Trace)?,
            (ScanCriterion::Ppt, _) => ppt,
            (_, Some(phi)) => lambda_min(&phi.apply_id_tensor_raw(&rho, m)?)?,
            (_, None) => unreachable!("map criteria carry a map"),
        };
        Ok(OrbitSample { index, statistic, ppt_min_eigenvalue: ppt })
    });
    results.into_iter().collect()
}

pub fn orbit_scan(
    s: &Spectrum,
    criterion: &ScanCriterion,
    samples: usize,
    seed: u64,
    tol: f64,
    exec: Execution,
) -> Result<OrbitScanReport> {
    if samples == 0 {
        return Err(Error::InvalidParams("need at least one sample".into()));
    }
    let all = orbit_samples(s, criterion, samples, seed, exec)?;
    OrbitScanReport::from_samples(criterion, seed, tol, &all)
}

impl OrbitScanReport {
    /// Aggregates already computed samples; `tol` is the violation slack.
    pub fn from_samples(criterion: &ScanCriterion, seed: u64, tol: f64, all: &[OrbitSample]) -> Result<Self> {
        let upper = criterion.upper_limit();
        let bad = |v: f64| if upper { v > 1.0 + tol } else { v < -tol };
        let worst = all
            .iter()
            .copied()
            .reduce(|a, b| {
                let b_worse = if upper { b.statistic > a.statistic } else { b.statistic < a.statistic };
                if b_worse {
                    b
                } else {
                    a
                }
            })
            .ok_or_else(|| Error::InvalidParams("need at least one sample".into()))?;
        Ok(OrbitScanReport {
            criterion: criterion.label(),
            samples: all.len(),
            seed,
            tolerance: tol,
            worst: worst.statistic,
            worst_index: worst.index,
            violations: all.iter().filter(|x| bad(x.statistic)).count(),
            ppt_min_eigenvalue: all.iter().map(|x| x.ppt_min_eigenvalue).fold(f64::INFINITY, f64::min),
            ppt_violations: all.iter().filter(|x| x.ppt_min_eigenvalue < -tol).count(),
        })
    }
}
