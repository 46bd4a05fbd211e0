//! Absolute PPT: spectra, the spectral LMIs (exact when `min(m, n) <= 3`),
//! the universal 2x2 necessary condition and the Gurvits-Barnum ball.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{eigvalsh, HermitianMatrix};
use crate::random::dirichlet_sorted;

/// Absolute tolerance on `lambda_min(L_i)`; LMI entries are O(1).
pub const LMI_TOL: f64 = 1e-10;
/// Entries above `-SPECTRUM_CLAMP` are clamped to zero.
pub const SPECTRUM_CLAMP: f64 = 1e-12;
/// Largest eigenvalue regarded as zero when asking for rank deficiency.
pub const ZERO_EIGENVALUE: f64 = 1e-12;

/// Descending, nonnegative eigenvalues of a unit-trace state on `C^m (x) C^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumJson", into = "SpectrumJson")]
pub struct Spectrum {
    m: usize,
    n: usize,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumJson {
    m: usize,
    n: usize,
    values: Vec<f64>,
}

impl TryFrom<SpectrumJson> for Spectrum {
    type Error = Error;
    fn try_from(j: SpectrumJson) -> Result<Self> {
        Spectrum::new(j.m, j.n, j.values)
    }
}

impl From<Spectrum> for SpectrumJson {
    fn from(s: Spectrum) -> Self {
        Self { m: s.m, n: s.n, values: s.values }
    }
}

impl Spectrum {
    /// Validates, sorts descending and clamps round-off negatives.
    pub fn new(m: usize, n: usize, mut values: Vec<f64>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidDim("m and n must be positive".into()));
        }
        if values.len() != m * n {
            return Err(Error::InvalidState(format!(
                "{} eigenvalues for a {m}x{n} system",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < -SPECTRUM_CLAMP) {
            return Err(Error::InvalidState(format!("eigenvalue {bad} is negative")));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("eigenvalues sum to {sum}, not 1")));
        }
        values.iter_mut().for_each(|v| *v = v.max(0.0));
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { m, n, values })
    }

    /// Rescales a nonnegative list to unit sum first.
    pub fn normalized(m: usize, n: usize, values: Vec<f64>) -> Result<Self> {
        let sum: f64 = values.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::InvalidState(format!("eigenvalues sum to {sum}")));
        }
        Self::new(m, n, values.into_iter().map(|v| v / sum).collect())
    }

    pub fn uniform(m: usize, n: usize) -> Result<Self> {
        let p = m * n;
        Self::new(m, n, vec![1.0 / p as f64; p])
    }

    /// Spectrum of a state given as a matrix (trace-normalized).
    pub fn of_state(m: usize, n: usize, rho: &HermitianMatrix) -> Result<Self> {
        if rho.dim() != m * n {
            return Err(Error::DimensionMismatch(format!(
                "state has dimension {}, expected {}",
                rho.dim(),
                m * n
            )));
        }
        let ev = eigvalsh(rho)?;
        let tr: f64 = ev.iter().sum();
        if !(tr > 0.0) {
            return Err(Error::InvalidState(format!("trace {tr} is not positive")));
        }
        Self::new(m, n, ev.into_iter().map(|v| v / tr).collect())
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// One-based access, `lambda(1)` is the largest eigenvalue.
    pub fn lambda(&self, j: usize) -> f64 {
        self.values[j - 1]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain numbers always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// One entry of an LMI matrix: `2 lambda_j` on the diagonal or
/// `lambda_j - lambda_k` off it (indices one-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LmiEntry {
    Twice(usize),
    Diff(usize, usize),
}

impl LmiEntry {
    pub fn eval(&self, lambda: &[f64]) -> f64 {
        match *self {
            LmiEntry::Twice(j) => 2.0 * lambda[j - 1],
            LmiEntry::Diff(j, k) => lambda[j - 1] - lambda[k - 1],
        }
    }

    /// Linear coefficients as `(zero-based index, weight)` pairs.
    pub fn coefficients(&self) -> Vec<(usize, f64)> {
        match *self {
            LmiEntry::Twice(j) => vec![(j - 1, 2.0)],
            LmiEntry::Diff(j, k) => vec![(j - 1, 1.0), (k - 1, -1.0)],
        }
    }
}

/// Symmetric matrix template; `entries[r][c]` for `r <= c` is authoritative.
#[derive(Clone, Debug, PartialEq)]
pub struct LmiMatrix {
    pub entries: Vec<Vec<LmiEntry>>,
}

impl LmiMatrix {
    fn from_upper(upper: &[&[LmiEntry]]) -> Self {
        let k = upper.len();
        let mut entries = vec![vec![LmiEntry::Twice(1); k]; k];
        for r in 0..k {
            for (off, e) in upper[r].iter().enumerate() {
                let c = r + off;
                entries[r][c] = *e;
                entries[c][r] = *e;
            }
        }
        Self { entries }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Row-major real matrix at the given (descending) eigenvalues.
    pub fn eval(&self, lambda: &[f64]) -> Vec<f64> {
        self.entries.iter().flatten().map(|e| e.eval(lambda)).collect()
    }

    pub fn min_eigenvalue(&self, lambda: &[f64]) -> f64 {
        let k = self.size();
        let h = HermitianMatrix::from_real(k, &self.eval(lambda)).expect("symmetric by construction");
        *eigvalsh(&h).expect("finite entries").last().expect("nonempty")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LmiSet {
    /// Joint PSD-ness of these matrices characterizes absolute PPT.
    Exact(Vec<LmiMatrix>),
    /// Only the top-left 2x2 block of `L_1` is available (necessary only).
    NecessaryOnly(LmiMatrix),
}

impl LmiSet {
    pub fn matrices(&self) -> Vec<&LmiMatrix> {
        match self {
            LmiSet::Exact(v) => v.iter().collect(),
            LmiSet::NecessaryOnly(m) => vec![m],
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, LmiSet::Exact(_))
    }
}

/// Top-left 2x2 block of `L_1`: `[[2 l_p, l_{p-1} - l_1], [., 2 l_{p-2}]]`.
pub fn submatrix_2x2(p: usize) -> LmiMatrix {
    use LmiEntry::*;
    LmiMatrix::from_upper(&[&[Twice(p), Diff(p - 1, 1)], &[Twice(p - 2)]])
}

pub fn build_lmis(m: usize, n: usize) -> Result<LmiSet> {
    use LmiEntry::*;
    if m == 0 || n == 0 {
        return Err(Error::InvalidDim("m and n must be positive".into()));
    }
    let p = m * n;
    Ok(match m.min(n) {
        1 => LmiSet::Exact(Vec::new()),
        2 => LmiSet::Exact(vec![submatrix_2x2(p)]),
        3 => LmiSet::Exact(vec![
            LmiMatrix::from_upper(&[
                &[Twice(p), Diff(p - 1, 1), Diff(p - 3, 2)],
                &[Twice(p - 2), Diff(p - 4, 3)],
                &[Twice(p - 5)],
            ]),
            LmiMatrix::from_upper(&[
                &[Twice(p), Diff(p - 1, 1), Diff(p - 2, 2)],
                &[Twice(p - 3), Diff(p - 4, 3)],
                &[Twice(p - 5)],
            ]),
        ]),
        _ => LmiSet::NecessaryOnly(submatrix_2x2(p)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbsPptVerdict {
    Yes,
    No,
    NecessaryPassedOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsPptReport {
    pub verdict: AbsPptVerdict,
    /// `lambda_min` of each evaluated LMI matrix, in order.
    pub lmi_min_eigenvalues: Vec<f64>,
}

impl AbsPptReport {
    pub fn worst(&self) -> Option<f64> {
        self.lmi_min_eigenvalues.iter().copied().reduce(f64::min)
    }
}

/// Absolute-PPT membership of a spectrum; `tol` is absolute on `lambda_min`.
pub fn is_abs_ppt(s: &Spectrum, tol: f64) -> Result<AbsPptReport> {
    let (m, n) = s.dims();
    let set = build_lmis(m, n)?;
    let mins: Vec<f64> = set.matrices().iter().map(|l| l.min_eigenvalue(s.values())).collect();
    let ok = mins.iter().all(|&v| v >= -tol);
    let verdict = match (ok, set.is_exact()) {
        (false, _) => AbsPptVerdict::No,
        (true, true) => AbsPptVerdict::Yes,
        (true, false) => AbsPptVerdict::NecessaryPassedOnly,
    };
    Ok(AbsPptReport { verdict, lmi_min_eigenvalues: mins })
}

/// PSD test of `[[2 l_p, l_{p-1} - l_1], [., 2 l_{p-2}]]` via its determinant.
///
/// With `l_p = 0` acceptance forces `|l_{p-1} - l_1| <= 1e-10`.
pub fn necessary_2x2(s: &Spectrum) -> bool {
    let p = s.len();
    if p < 3 {
        return true;
    }
    let a = 2.0 * s.lambda(p);
    let c = 2.0 * s.lambda(p - 2);
    let d = s.lambda(p - 1) - s.lambda(1);
    let (d2, ac) = (d * d, a * c);
    d2 <= ac + 1e-20 + 1e-12 * d2.max(ac)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GurvitsBarnumReport {
    pub accepted: bool,
    /// `min_s ||I - s X||_F^2`.
    pub distance_sq: f64,
    pub scale: f64,
}

/// Gurvits-Barnum ball test with the optimal scaling: `X` is absolutely
/// separable if `s X = I - Y` with `||Y||_F <= 1` for some `s > 0`.
pub fn gurvits_barnum(x: &HermitianMatrix) -> Result<GurvitsBarnumReport> {
    let tr = x.trace();
    if !(tr > 0.0) {
        return Err(Error::InvalidState(format!("trace {tr} is not positive")));
    }
    let fro2 = x.frobenius_norm().powi(2);
    let d = x.dim() as f64;
    let scale = tr / fro2;
    let distance_sq = (d - tr * tr / fro2).max(0.0);
    Ok(GurvitsBarnumReport {
        accepted: distance_sq <= 1.0 + 1e-12,
        distance_sq,
        scale,
    })
}

pub fn gurvits_barnum_abs_sep(x: &HermitianMatrix) -> Result<bool> {
    Ok(gurvits_barnum(x)?.accepted)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankClass {
    /// Rank-deficient and absolutely PPT: proportional to `I - |v><v|`.
    AbsolutelySeparable,
    /// Full rank: an absolutely PPT but entangled state would have to be here.
    FullRankRequired,
    /// Rank-deficient and failing the 2x2 condition.
    NotAbsPpt,
}

pub fn rank_deficient_classification(s: &Spectrum) -> RankClass {
    let p = s.len();
    if s.lambda(p) > ZERO_EIGENVALUE {
        RankClass::FullRankRequired
    } else if necessary_2x2(s) {
        RankClass::AbsolutelySeparable
    } else {
        RankClass::NotAbsPpt
    }
}

fn mix(uniform: f64, draw: &[f64], beta: f64) -> Vec<f64> {
    draw.iter().map(|d| (1.0 - beta) * uniform + beta * d).collect()
}

fn lmis_pass(set: &LmiSet, values: &[f64]) -> bool {
    set.matrices().iter().all(|l| l.min_eigenvalue(values) >= 0.0)
}

/// Random absolutely PPT spectrum: a flat Dirichlet draw pulled toward the
/// uniform spectrum, at a uniform fraction of the largest admissible weight.
pub fn sample_abs_ppt_spectrum<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Result<Spectrum> {
    let set = build_lmis(m, n)?;
    if !set.is_exact() {
        return Err(Error::Unsupported(format!(
            "exact LMIs are only available for min(m, n) <= 3, got ({m}, {n})"
        )));
    }
    let p = m * n;
    let u = 1.0 / p as f64;
    let draw = dirichlet_sorted(p, rng);
    let beta_max = if lmis_pass(&set, &draw) {
        1.0
    } else {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if lmis_pass(&set, &mix(u, &draw, mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    let beta = rng.random::<f64>() * beta_max;
    Spectrum::normalized(m, n, mix(u, &draw, beta))
}
