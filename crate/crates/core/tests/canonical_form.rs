use nalgebra::DMatrix;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spin9::canonical_form::{
    berger_l0_coefficient, berger_phi_exact, finite_invariance, phi_l0, spin9_generators, stabilizer_dim,
    CanonicalForm, Normalization, Provenance, SignedPermutation,
};
use spin9::clifford::spin9_system;
use spin9::exterior::MultiIndex;
use spin9::linalg::expm;
use spin9::{Error, Rational};

#[test]
fn solver_finds_a_single_invariant() {
    let phi = phi_l0().unwrap();
    let Provenance::Solver(stats) = &phi.provenance else { panic!("solver provenance expected") };
    eprintln!("{stats:?}, nnz = {}", phi.nnz());
    assert_eq!(stats.nullspace_dim, 1);
    assert_eq!(phi.l0_coefficient(), Rational::one());
    assert!(!phi.form.is_zero());
    for s in spin9_generators() {
        assert!(phi.form.infinitesimal_action(&s.map(|x| <Rational as spin9::Scalar>::from_i64(x))).unwrap().is_zero());
    }
}

#[test]
fn volume_coefficients_of_both_slots_agree() {
    let phi = phi_l0().unwrap();
    assert_eq!(phi.form.coefficient(&MultiIndex::from_mask(0xff00)), Rational::one());
}

#[test]
fn support_is_stable_under_i1() {
    let phi = phi_l0().unwrap();
    let i1 = spin9_system().generator(0).clone();
    let pulled = phi.form.pullback(&i1.map(|x| <Rational as spin9::Scalar>::from_i64(x))).unwrap();
    assert_eq!(pulled.nnz(), phi.nnz());
    assert_eq!(pulled, phi.form);
    let p = SignedPermutation::from_matrix(&i1).unwrap();
    for (idx, _) in phi.form.terms() {
        let (img, _) = p.act(idx.mask());
        assert!(!phi.form.coefficient(&MultiIndex::from_mask(img)).is_zero());
    }
}

#[test]
fn stabilizer_is_spin9() {
    let phi = phi_l0().unwrap();
    let report = stabilizer_dim(&phi.form);
    assert_eq!(report.dim, 36);
    assert!(report.basis_annihilates);
    assert!(report.contains_generators);
}

#[test]
fn berger_integral_is_a_multiple_of_the_solver_output() {
    let phi = phi_l0().unwrap();
    let exact = berger_phi_exact().unwrap();
    assert_eq!(exact, phi.form.scale(&berger_l0_coefficient()));
    assert_eq!(exact, phi.renormalized(Normalization::Berger).form);
}

#[test]
fn finite_invariance_of_generated_rotations() {
    let phi = phi_l0().unwrap().to_f64();
    assert_eq!(finite_invariance(&phi, &DMatrix::identity(16, 16)).unwrap(), 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    let sys = spin9_system();
    for (a, b) in [(0, 1), (2, 7), (4, 8)] {
        let t: f64 = rng.random_range(-3.0..3.0);
        let g = expm(&(sys.product(a, b).map(|x| x as f64) * t));
        let r = finite_invariance(&phi, &g).unwrap();
        assert!(r <= 1e-8, "({a},{b}) t={t}: {r}");
    }
    // a composite: exp of a random element of the algebra
    let mut s = DMatrix::<f64>::zeros(16, 16);
    for g in spin9_generators() {
        s += g.map(|x| x as f64) * rng.random_range(-0.5..0.5);
    }
    assert!(finite_invariance(&phi, &expm(&s)).unwrap() <= 1e-8);
}

#[test]
fn finite_invariance_negative_control() {
    let phi = phi_l0().unwrap().to_f64();
    let (c, s) = (std::f64::consts::FRAC_PI_4.cos(), std::f64::consts::FRAC_PI_4.sin());
    let mut g = DMatrix::<f64>::identity(16, 16);
    g[(0, 0)] = c;
    g[(8, 8)] = c;
    g[(0, 8)] = -s;
    g[(8, 0)] = s;
    assert!(finite_invariance(&phi, &g).unwrap() > 1e-3);
    // its generator is outside the annihilator
    let mut e = DMatrix::from_element(16, 16, Rational::zero());
    e[(0, 8)] = -Rational::one();
    e[(8, 0)] = Rational::one();
    assert!(!phi_l0().unwrap().form.infinitesimal_action(&e).unwrap().is_zero());
}

#[test]
fn export_import_round_trip() {
    let phi = phi_l0().unwrap();
    let text = phi.export();
    let back = CanonicalForm::import(&text, Some(Normalization::L0)).unwrap();
    assert_eq!(back.form, phi.form);
    assert!(matches!(
        CanonicalForm::import(&text, Some(Normalization::Berger)),
        Err(Error::NormalizationMismatch { .. })
    ));
}

#[test]
fn monte_carlo_errors_shrink_like_inverse_square_root() {
    let se = |n: usize| {
        let e = spin9::canonical_form::berger_phi_mc(n, 5).unwrap();
        e.std_err.iter().sum::<f64>() / e.std_err.len() as f64
    };
    let (a, b, c) = (se(10_000), se(40_000), se(160_000));
    for (r, what) in [(a / b, "10k/40k"), (b / c, "40k/160k")] {
        assert!((r - 2.0).abs() < 0.1, "{what}: ratio {r}");
    }
}
