use spin9::lcp::{cone_flatness_check, dphi_proportionality, weyl_check, weyl_check_scaled};

#[test]
fn dphi_is_four_theta_wedge_phi() {
    let rep = dphi_proportionality(12, 7).unwrap();
    eprintln!("{rep:?}");
    assert!((rep.c - 4.0).abs() <= 1e-9);
    assert!(rep.max_relative_deviation <= 1e-9);
    assert_eq!(rep.unmatched, 0.0);
    assert_ne!(rep.c, rep.printed_c);
}

#[test]
fn weyl_structure() {
    let rep = weyl_check(50, 11, 1e-4).unwrap();
    assert!(rep.torsion <= 1e-12);
    assert!(rep.weyl_condition <= 1e-9);
    assert!(rep.weyl_condition_fd <= 1e-6, "{rep:?}");
    let coarse = weyl_check(50, 11, 1e-3).unwrap();
    let ratio = coarse.weyl_condition_fd / rep.weyl_condition_fd;
    assert!((50.0..200.0).contains(&ratio), "ratio {ratio}");
    assert!(weyl_check_scaled(50, 11, 1e-4, 0.0).unwrap().weyl_condition > 1e-3);
}

#[test]
fn cone_over_round_sphere_is_flat() {
    let rep = cone_flatness_check(2, 5, 1e-4).unwrap();
    eprintln!("{rep:?}");
    assert!(rep.max_curvature <= 1e-5);
    assert!((rep.kappa - 1.0).abs() <= 1e-5);
    assert!((rep.implied_constant - 1.0).abs() <= 1e-5);
    assert!(rep.chart_residual <= 1e-7);
    assert_ne!(rep.implied_constant.round(), rep.printed_constant);
}
