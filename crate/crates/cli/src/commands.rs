use std::f64::consts::SQRT_2;
use std::path::Path;
use std::str::FromStr;

use abssep::absppt::{is_abs_ppt, necessary_2x2, AbsPptVerdict, Spectrum};
use abssep::bipartite::{kron_vec, max_entangled};
use abssep::families::*;
use abssep::matcore::{c64, eigvalsh, ComplexMatrix, HermitianMatrix, MatrixJson};
use abssep::par::Execution;
use abssep::posmaps::{classify_bc, in_cannot_detect_hull, witness_from_map, MapSpec};
use abssep::scan::{orbit_samples, OrbitScanReport, ScanCriterion};
use abssep::sdpsolve::*;
use abssep::witness::*;
use abssep::Error;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Cell, Report, Table};

/// A report plus whether it is verdict-negative (exit status 2).
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub negative: bool,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self { report, negative: false }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn verdict_name(v: AbsPptVerdict) -> &'static str {
    match v {
        AbsPptVerdict::Yes => "Yes",
        AbsPptVerdict::No => "No",
        AbsPptVerdict::NecessaryPassedOnly => "NecessaryPassedOnly",
    }
}

pub fn cmd_check_spectrum(path: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let s = Spectrum::from_json(&read(path)?)?;
    let r = is_abs_ppt(&s, cfg.tol("lmi"))?;
    let (m, n) = s.dims();
    let failing: Vec<usize> = r
        .lmi_min_eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < -cfg.tol("lmi"))
        .map(|(i, _)| i)
        .collect();
    let summary = json!({
        "m": m,
        "n": n,
        "verdict": verdict_name(r.verdict),
        "lmi_min_eigenvalues": r.lmi_min_eigenvalues,
        "worst_lmi_min_eigenvalue": r.worst(),
        "failing_lmis": failing,
        "necessary_2x2": necessary_2x2(&s),
        "tolerance": cfg.tol("lmi"),
    });
    Ok(Outcome { report: Report::summary(summary), negative: r.verdict == AbsPptVerdict::No })
}

/// Where the witness comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum WitnessSource<'a> {
    File { path: &'a Path, normalize: bool },
    /// `(id (x) Phi^dagger)(|psi+><psi+|)`, unit trace.
    Map(MapSpec),
}

pub fn cmd_witness_analyze(src: WitnessSource<'_>) -> Result<Outcome, CliError> {
    let (w, origin) = match src {
        WitnessSource::File { path, normalize } => {
            let w = MatrixJson::parse(&read(path)?)?;
            let mut h = HermitianMatrix::new(w)?;
            if normalize {
                let tr = h.trace();
                if tr.abs() < abssep::posmaps::DEGENERATE_TRACE {
                    return Err(Error::DegenerateWitness(tr).into());
                }
                h = h.scale(1.0 / tr);
            }
            (h, path.display().to_string())
        }
        WitnessSource::Map(phi) => {
            let n = phi.in_dim();
            (witness_from_map(&phi, &max_entangled(n)?, n)?, format!("{} at |psi+>", phi.name()))
        }
    };
    let ws = summarize(&w)?;
    let f = if (-0.5..=0.0).contains(&ws.ell) { Some(f_lemma2(ws.ell)?) } else { None };
    let verdict = cannot_detect_abs_ppt(&ws);
    let summary = json!({
        "source": origin,
        "dim": w.dim(),
        "mu1": ws.mu1,
        "ell": ws.ell,
        "negative_eigenvalues": ws.neg_count,
        "f_ell": f,
        "verdict": match verdict {
            Detectability::Guaranteed => "Guaranteed",
            Detectability::Inconclusive => "Inconclusive",
        },
    });
    Ok(Outcome::ok(Report::summary(summary)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub breuer_hall_dims: Vec<usize>,
    pub perturb: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { breuer_hall_dims: vec![4, 6], perturb: false }
    }
}

const STATUS_OK: &str = "ok";
const STATUS_REJECTED: &str = "rejected";
const STATUS_MISMATCH: &str = "mismatch";
/// The certificate is valid but its value exceeds the closed form, and a
/// product vector shows the closed form itself is not an upper bound.
const STATUS_REFUTED: &str = "claim_refuted";

struct CertRow {
    name: &'static str,
    params: String,
    value: Option<f64>,
    claimed: f64,
    residual: Option<f64>,
    status: &'static str,
    note: String,
}

fn grid(count: usize, lo: f64, hi: f64) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count).map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64).collect()
}

fn fmt_params(pairs: &[(&str, f64)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k}={}", crate::output::fmt_g(*v))).collect::<Vec<_>>().join(";")
}

fn check_row(
    name: &'static str,
    params: String,
    claimed: f64,
    result: abssep::Result<CertificateCheck>,
    tol: f64,
) -> Result<CertRow, CliError> {
    Ok(match result {
        Ok(chk) => CertRow {
            name,
            params,
            value: Some(chk.value),
            claimed,
            residual: Some(chk.feasibility_residual),
            status: if chk.matches_claim(tol) { STATUS_OK } else { STATUS_MISMATCH },
            note: String::new(),
        },
        Err(Error::CertificateRejected(msg)) => CertRow {
            name,
            params,
            value: None,
            claimed,
            residual: None,
            status: STATUS_REJECTED,
            note: msg,
        },
        Err(e) => return Err(e.into()),
    })
}

/// Largest eigenvalue of `(id (x) Phi^dagger)(|v><v|)`.
fn dual_output_top(phi: &MapSpec, v: &[abssep::matcore::Complex64]) -> abssep::Result<f64> {
    let out = phi.dual().apply_id_tensor_raw(&ComplexMatrix::outer(v, v), phi.in_dim())?;
    Ok(eigvalsh(&HermitianMatrix::hermitian_part(&out))?[0])
}

fn perturb_entry(cert: &mut DualCertificate, name: &str, i: usize, j: usize, v: f64, add: bool) {
    let y = cert.get_mut(name).expect("named block exists");
    let mut m = y.as_matrix().clone();
    if add {
        m[(i, j)] += c64(v, 0.0);
        if i != j {
            m[(j, i)] += c64(v, 0.0);
        }
    } else {
        m[(i, j)] = c64(v, 0.0);
        m[(j, i)] = c64(v, 0.0);
    }
    *y = HermitianMatrix::new(m).expect("symmetric edit");
}

pub fn cmd_verify_certificates(opts: &VerifyOptions, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let tol = cfg.tol("cert");
    let mut rows = Vec::new();

    // witness-spectrum duals, all three branches of f
    let cases = [
        (-0.5, ell_flat_start()),
        (ell_flat_start() + 1e-9, ell_jump() - 1e-9),
        (ell_jump(), 0.0),
    ];
    for (lo, hi) in cases {
        for ell in grid(cfg.count("witness_duals"), lo, hi) {
            let cert = build_lemma2_certificate(ell, f_lemma2(ell)?, 9)?;
            let chk = cert.verify();
            let ok = chk.ok && chk.residual <= tol && chk.bound >= -tol;
            rows.push(CertRow {
                name: "witness_dual",
                params: fmt_params(&[("ell", ell)]),
                value: Some(chk.bound),
                claimed: 0.0,
                residual: Some(chk.residual),
                status: if ok { STATUS_OK } else { STATUS_REJECTED },
                note: format!("case {:?}", cert.case),
            });
        }
    }

    let choi = MapSpec::choi();
    let mut d = choi_diamond_cert();
    let mut e = choi_eig_cert();
    if opts.perturb {
        perturb_entry(&mut d, "Y0", 2, 3, 1e-3, true);
        perturb_entry(&mut e, "Y", 3, 3, 5.0 / 6.0, false);
    }
    rows.push(check_row("choi_diamond", String::new(), 4.0 / 3.0, check_diamond_certificate(&choi, &d), tol)?);
    rows.push(check_row("choi_eig", String::new(), 2.0 / 3.0, check_eig_certificate(&choi, &e), tol)?);

    let axis = grid(cfg.count("grid"), 0.0, 4.0 / 3.0);
    let e00 = kron_vec(&basis3(0), &basis3(0));
    for &b in &axis {
        for &c in &axis {
            let phi = MapSpec::generalized_choi(b, c)?;
            let params = fmt_params(&[("b", b), ("c", c)]);
            rows.push(check_row(
                "gen_choi_diamond",
                params.clone(),
                (3.0 + b + c) / 3.0,
                check_diamond_certificate(&phi, &gen_choi_diamond_cert(b, c)),
                tol,
            )?);
            let claimed = gen_choi_claimed_bound(b, c);
            let mut row = check_row("gen_choi_eig", params, claimed, check_eig_certificate(&phi, &gen_choi_eig_cert(b, c)), tol)?;
            if row.status == STATUS_MISMATCH && !gen_choi_claim_attained(b, c) {
                let top = dual_output_top(&phi, &e00)?;
                if top > claimed + tol {
                    row.status = STATUS_REFUTED;
                    row.note = format!("|00> attains {}", crate::output::fmt_g(top));
                }
            }
            rows.push(row);
        }
    }

    for &n in &opts.breuer_hall_dims {
        let phi = MapSpec::breuer_hall(n)?;
        let nf = n as f64;
        let params = format!("n={n}");
        rows.push(check_row(
            "breuer_hall_diamond",
            params.clone(),
            (nf + 2.0) / nf,
            breuer_hall_diamond_cert(&phi).and_then(|c| check_diamond_certificate(&phi, &c)),
            tol,
        )?);
        rows.push(check_row(
            "breuer_hall_eig",
            params,
            1.0 / (nf - 2.0),
            breuer_hall_eig_cert(&phi).and_then(|c| check_eig_certificate(&phi, &c)),
            tol,
        )?);
    }

    let mut t = Table::new(&["certificate", "params", "value", "claimed", "residual", "status", "note"]);
    let count = |s: &str| rows.iter().filter(|r| r.status == s).count();
    let summary = json!({
        "certificates": rows.len(),
        "ok": count(STATUS_OK),
        "rejected": count(STATUS_REJECTED),
        "mismatch": count(STATUS_MISMATCH),
        "claim_refuted": count(STATUS_REFUTED),
        "tolerance": tol,
        "perturbed": opts.perturb,
    });
    let negative = count(STATUS_REJECTED) + count(STATUS_MISMATCH) > 0;
    for r in rows {
        t.push(vec![
            r.name.into(),
            r.params.into(),
            r.value.into(),
            r.claimed.into(),
            r.residual.into(),
            r.status.into(),
            r.note.into(),
        ]);
    }
    Ok(Outcome { report: Report::table(summary, t), negative })
}

fn basis3(i: usize) -> Vec<abssep::matcore::Complex64> {
    (0..3).map(|k| c64(if k == i { 1.0 } else { 0.0 }, 0.0)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Figure {
    FCurve,
    PhiBcRegion,
    GenChoiUb,
    UpbInterval,
}

pub fn cmd_fig_data(fig: Figure, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let table = match fig {
        Figure::FCurve => {
            let mut t = Table::new(&["ell", "f", "label"]);
            for ell in grid(cfg.count("curve"), -0.5, 0.0) {
                t.push(vec![ell.into(), f_lemma2(ell)?.into(), Cell::Empty]);
            }
            let (j, s) = (ell_jump(), ell_flat_start());
            let labeled = [
                ("i", -0.5, f_lemma2(-0.5)?),
                ("ii", -0.4, f_lemma2(-0.4)?),
                ("iii", s, f_lemma2(s)?),
                // left limit at the jump
                ("iv", j, (1.0 + SQRT_2) / 4.0),
                ("v", j, f_lemma2(j)?),
                ("vi", -0.2, f_lemma2(-0.2)?),
                ("vii", 0.0, f_lemma2(0.0)?),
            ];
            for (label, ell, f) in labeled {
                t.push(vec![ell.into(), f.into(), label.into()]);
            }
            t
        }
        Figure::PhiBcRegion => {
            let mut t = Table::new(&["b", "c", "positive", "positive_not_cp", "indecomposable", "exposed", "in_hull"]);
            let axis = grid(cfg.count("grid"), 0.0, 4.0 / 3.0);
            for &b in &axis {
                for &c in &axis {
                    let k = classify_bc(b, c);
                    t.push(vec![
                        b.into(),
                        c.into(),
                        k.positive.into(),
                        k.positive_not_cp.into(),
                        k.indecomposable.into(),
                        k.exposed.into(),
                        in_cannot_detect_hull(b, c).into(),
                    ]);
                }
            }
            t
        }
        Figure::GenChoiUb => {
            let mut t =
                Table::new(&["b", "c", "positive", "case", "claimed_bound", "certified_bound", "claim_attained"]);
            let axis = grid(cfg.count("grid"), 0.0, 4.0 / 3.0);
            for &b in &axis {
                for &c in &axis {
                    let phi = MapSpec::generalized_choi(b, c)?;
                    let certified = match check_eig_certificate(&phi, &gen_choi_eig_cert(b, c)) {
                        Ok(chk) => Some(chk.value),
                        Err(Error::CertificateRejected(_)) => None,
                        Err(e) => return Err(e.into()),
                    };
                    let case = match gen_choi_case(b, c) {
                        GenChoiCase::Large => "large",
                        GenChoiCase::Small => "small",
                    };
                    t.push(vec![
                        b.into(),
                        c.into(),
                        abssep::posmaps::is_positive_bc(b, c).into(),
                        case.into(),
                        gen_choi_claimed_bound(b, c).into(),
                        certified.into(),
                        gen_choi_claim_attained(b, c).into(),
                    ]);
                }
            }
            t
        }
        Figure::UpbInterval => {
            let mut t = Table::new(&["p", "lmi_min_eig", "frobenius_defect", "class", "label"]);
            let mut ps: Vec<(f64, &str)> = grid(cfg.count("sweep"), 0.5, 0.8).into_iter().map(|p| (p, "")).collect();
            ps.push((upb_abs_ppt_threshold(), "abs_ppt_threshold"));
            ps.push((upb_abs_sep_threshold(), "abs_sep_threshold"));
            ps.sort_by(|a, b| a.0.total_cmp(&b.0));
            for (p, label) in ps {
                t.push(vec![
                    p.into(),
                    upb_lmi_min_eig(p).into(),
                    upb_frobenius_defect(p).into(),
                    upb_class_name(upb_classify_p(p)).into(),
                    label.into(),
                ]);
            }
            t
        }
    };
    Ok(Outcome::ok(Report::table(serde_json::Value::Null, table)))
}

fn upb_class_name(c: UpbClass) -> &'static str {
    match c {
        UpbClass::AbsPptAndAbsSep => "abs_ppt_and_abs_sep",
        UpbClass::AbsPptOnlyKnown => "abs_ppt_only_known",
        UpbClass::NotAbsPpt => "not_abs_ppt",
    }
}

/// `realignment`, `choi`, `gen_choi:b,c`, `breuer_hall` or `ppt`.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionArg(pub ScanCriterion);

impl FromStr for CriterionArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let c = match s {
            "realignment" => ScanCriterion::Realignment,
            "choi" => ScanCriterion::Choi,
            "breuer_hall" => ScanCriterion::BreuerHall,
            "ppt" => ScanCriterion::Ppt,
            _ => {
                let rest = s
                    .strip_prefix("gen_choi:")
                    .ok_or_else(|| format!("unknown criterion '{s}' (realignment, choi, gen_choi:b,c, breuer_hall, ppt)"))?;
                let (b, c) = rest.split_once(',').ok_or_else(|| format!("expected gen_choi:b,c, got '{s}'"))?;
                let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("bad number '{x}': {e}"));
                ScanCriterion::GenChoi { b: num(b)?, c: num(c)? }
            }
        };
        Ok(CriterionArg(c))
    }
}

pub fn cmd_orbit_scan(
    path: &Path,
    criterion: &ScanCriterion,
    samples: usize,
    exec: Execution,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    if samples == 0 {
        return Err(CliError::Input("need at least one sample".into()));
    }
    let s = Spectrum::from_json(&read(path)?)?;
    let all = orbit_samples(&s, criterion, samples, cfg.seed, exec)?;
    let rep = OrbitScanReport::from_samples(criterion, cfg.seed, cfg.tol("scan"), &all)?;
    let negative = rep.violations > 0 || rep.ppt_violations > 0;
    let mut summary = serde_json::to_value(&rep).map_err(Error::from)?;
    summary["violation_found"] = json!(negative);
    let mut t = Table::new(&["index", "statistic", "ppt_min_eigenvalue"]);
    for x in &all {
        t.push(vec![x.index.into(), x.statistic.into(), x.ppt_min_eigenvalue.into()]);
    }
    let report = Report { rows_in_json: false, ..Report::table(summary, t) };
    Ok(Outcome { report, negative })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FamilyQuery {
    Werner { n: usize, alpha: Option<f64> },
    Isotropic { n: usize, alpha: Option<f64> },
    Upb { p: Option<f64> },
}

fn werner_class_name(c: WernerClass) -> &'static str {
    match c {
        WernerClass::AbsSep => "abs_sep",
        WernerClass::NotAbsPpt => "not_abs_ppt",
        WernerClass::Unknown => "unknown",
    }
}

fn isotropic_class_name(c: IsotropicClass) -> &'static str {
    match c {
        IsotropicClass::AbsSep => "abs_sep",
        IsotropicClass::NotAbsPpt => "not_abs_ppt",
    }
}

pub fn cmd_family(q: FamilyQuery, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sweep = cfg.count("sweep");
    match q {
        FamilyQuery::Werner { n, alpha: Some(a) } => {
            let w = WernerParams::new(n, a)?;
            let class = werner_classify(w);
            let (l1, l2) = werner_lmi_min_eigs(w);
            let exact = if n <= 3 { Some(verdict_name(werner_deep_check(w)?)) } else { None };
            let summary = json!({
                "family": "werner", "n": n, "alpha": a,
                "class": werner_class_name(class),
                "lmi_min_eigenvalues": [l1, l2],
                "exact_abs_ppt": exact,
                "eigenvalues": werner_eigenvalues(w),
            });
            Ok(Outcome { report: Report::summary(summary), negative: class == WernerClass::NotAbsPpt })
        }
        FamilyQuery::Werner { n, alpha: None } => {
            let mut t = Table::new(&["alpha", "class", "lmi_case1", "lmi_case2"]);
            for a in grid(sweep, -1.0, 1.0) {
                let w = WernerParams::new(n, a)?;
                let (l1, l2) = werner_lmi_min_eigs(w);
                t.push(vec![a.into(), werner_class_name(werner_classify(w)).into(), l1.into(), l2.into()]);
            }
            let summary = json!({
                "family": "werner", "n": n,
                "abs_sep_interval": [-1.0 / n as f64, 1.0 / n as f64],
                "not_abs_ppt_below": -1.0 / (n as f64 - 1.0),
                "not_abs_ppt_above": 1.0 / n as f64,
            });
            Ok(Outcome::ok(Report::table(summary, t)))
        }
        FamilyQuery::Isotropic { n, alpha: Some(a) } => {
            let i = IsotropicParams::new(n, a)?;
            let class = isotropic_classify(i);
            let summary = json!({
                "family": "isotropic", "n": n, "alpha": a,
                "class": isotropic_class_name(class),
                "threshold": isotropic_threshold(n),
                "lmi_min_eigenvalue": isotropic_lmi_min_eig(i),
                "eigenvalues": isotropic_eigenvalues(i),
            });
            Ok(Outcome { report: Report::summary(summary), negative: class == IsotropicClass::NotAbsPpt })
        }
        FamilyQuery::Isotropic { n, alpha: None } => {
            if n < 2 {
                return Err(Error::InvalidDim(format!("isotropic states need n >= 2, got {n}")).into());
            }
            let lo = -1.0 / ((n * n - 1) as f64);
            let mut t = Table::new(&["alpha", "class", "lmi_min_eig"]);
            for a in grid(sweep, lo, 1.0) {
                let i = IsotropicParams::new(n, a)?;
                t.push(vec![a.into(), isotropic_class_name(isotropic_classify(i)).into(), isotropic_lmi_min_eig(i).into()]);
            }
            let summary = json!({ "family": "isotropic", "n": n, "threshold": isotropic_threshold(n) });
            Ok(Outcome::ok(Report::table(summary, t)))
        }
        FamilyQuery::Upb { p: Some(p) } => {
            let u = UpbMixtureParams::tiles(p)?;
            let class = upb_classify(&u);
            let summary = json!({
                "family": "upb", "p": p,
                "class": upb_class_name(class),
                "abs_ppt_threshold": upb_abs_ppt_threshold(),
                "abs_sep_threshold": upb_abs_sep_threshold(),
                "lmi_min_eigenvalue": upb_lmi_min_eig(p),
                "frobenius_defect": upb_frobenius_defect(p),
                "eigenvalues": upb_eigenvalues(p),
            });
            Ok(Outcome { report: Report::summary(summary), negative: class == UpbClass::NotAbsPpt })
        }
        FamilyQuery::Upb { p: None } => {
            let mut t = Table::new(&["p", "class", "lmi_min_eig", "frobenius_defect"]);
            for k in 1..=sweep {
                let p = k as f64 / (sweep + 1) as f64;
                t.push(vec![
                    p.into(),
                    upb_class_name(upb_classify_p(p)).into(),
                    upb_lmi_min_eig(p).into(),
                    upb_frobenius_defect(p).into(),
                ]);
            }
            let summary = json!({
                "family": "upb",
                "abs_ppt_threshold": upb_abs_ppt_threshold(),
                "abs_sep_threshold": upb_abs_sep_threshold(),
            });
            Ok(Outcome::ok(Report::table(summary, t)))
        }
    }
}
