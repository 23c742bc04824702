use spin9::clifford::spin9_system;
use spin9::suite::{run_suite, run_suite_with, Status, SuiteOptions, TolProfile};

#[test]
fn loose_profile_passes_and_is_reproducible() {
    let a = run_suite(7, TolProfile::Loose).unwrap();
    for c in a.failures() {
        eprintln!("failed: {c:?}");
    }
    eprintln!("{}", serde_json::to_string(&a.conventions).unwrap());
    eprintln!("{:?}", a.timings);
    assert!(a.passed);
    let b = run_suite(7, TolProfile::Loose).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn flipped_generator_entry_fails_the_clifford_check() {
    let sys = spin9_system().with_flipped_entry(2, 0, 10);
    let r = run_suite_with(&SuiteOptions { seed: 1, profile: TolProfile::Loose, system: Some(sys), mc_samples: None }).unwrap();
    assert!(!r.passed);
    let first = r.checks.iter().find(|c| c.status != Status::Pass).unwrap();
    assert_eq!(first.criterion, 1);
    assert!(first.name.starts_with("clifford.spin9"));
    assert!(!r.criterion_passed(1));
    assert!(r.criterion_passed(2));
    assert!(r.checks.iter().filter(|c| c.criterion >= 3).all(|c| c.status == Status::Skipped));
}

#[test]
fn profile_names() {
    assert_eq!("loose".parse::<TolProfile>().unwrap(), TolProfile::Loose);
    assert!("strict".parse::<TolProfile>().is_err());
}
