//! Runs the full default-profile suite and prints one PASS/FAIL line per criterion.

use spin9::canonical_form::{phi_l0, CanonicalForm, Normalization};
use spin9::suite::{run_suite, TolProfile, CRITERIA};

const SEED: u64 = 42;

/// Wall-time limits for the exact criteria, in seconds.
fn time_limit(criterion: u8) -> Option<f64> {
    match criterion {
        1 | 2 => Some(1.0),
        3 => Some(300.0),
        _ => None,
    }
}

#[test]
fn acceptance() {
    let first = run_suite(SEED, TolProfile::Default).unwrap();
    let second = run_suite(SEED, TolProfile::Default).unwrap();
    let reproducible = first.to_json() == second.to_json();

    let path = std::env::temp_dir().join(format!("spin9-acceptance-{}.form", std::process::id()));
    let phi = phi_l0().unwrap();
    std::fs::write(&path, phi.export()).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let _ = std::fs::remove_file(&path);
    let back = CanonicalForm::import(&text, Some(Normalization::L0)).unwrap();
    let file_round_trip = back.form == phi.form && back.export() == text;

    let mut all = true;
    for (i, name) in CRITERIA.iter().enumerate() {
        let c = (i + 1) as u8;
        let t = first.timing(c).unwrap_or(f64::NAN);
        let mut ok = first.criterion_passed(c) && time_limit(c).is_none_or(|lim| t < lim);
        if c == 9 {
            ok &= reproducible && file_round_trip;
        }
        all &= ok;
        println!("{} criterion {c} ({name}) [{t:.2}s]", if ok { "PASS" } else { "FAIL" });
        for k in first.checks.iter().filter(|k| k.criterion == c) {
            println!("    {:?} {} = {:e} ({:?} {:e})", k.status, k.name, k.value, k.bound, k.tolerance);
        }
    }
    println!("conventions: {}", serde_json::to_string(&first.conventions).unwrap());
    assert!(all, "acceptance failures: {:?}", first.failures());
}
