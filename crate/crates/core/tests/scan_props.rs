use abssep::absppt::Spectrum;
use abssep::par::Execution;
use abssep::scan::*;

#[test]
fn sequential_and_parallel_scans_agree_bitwise() {
    let s = Spectrum::new(3, 3, vec![0.3, 0.2, 0.15, 0.1, 0.08, 0.07, 0.05, 0.03, 0.02]).unwrap();
    for crit in [ScanCriterion::Realignment, ScanCriterion::Choi, ScanCriterion::Ppt] {
        let a = orbit_samples(&s, &crit, 64, 42, Execution::Sequential).unwrap();
        let b = orbit_samples(&s, &crit, 64, 42, Execution::Parallel).unwrap();
        assert_eq!(a, b, "{}", crit.label());
        let ra = orbit_scan(&s, &crit, 64, 42, 1e-9, Execution::Sequential).unwrap();
        let rb = orbit_scan(&s, &crit, 64, 42, 1e-9, Execution::Parallel).unwrap();
        assert_eq!(ra, rb);
    }
}

#[test]
fn scans_are_reproducible_per_index() {
    let s = Spectrum::uniform(2, 3).unwrap();
    let all = orbit_samples(&s, &ScanCriterion::Realignment, 10, 7, Execution::Sequential).unwrap();
    let head = orbit_samples(&s, &ScanCriterion::Realignment, 4, 7, Execution::Sequential).unwrap();
    assert_eq!(&all[..4], &head[..]);
}

#[test]
fn map_criteria_need_a_qutrit_factor() {
    let s = Spectrum::uniform(2, 2).unwrap();
    assert!(orbit_scan(&s, &ScanCriterion::Choi, 4, 1, 1e-9, Execution::Sequential).is_err());
    assert!(orbit_scan(&s, &ScanCriterion::Realignment, 0, 1, 1e-9, Execution::Sequential).is_err());
}
