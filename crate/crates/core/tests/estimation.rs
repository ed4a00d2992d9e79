use qfisher::estimation::{cramer_rao_check, mle_estimate, sample_outcomes, EstimationExperiment};
use qfisher::qubit::optimal_qubit;
use qfisher::SpinSystem;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_8};

#[test]
fn counts_pass_chi_square() {
    let s = {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        qfisher::Scenario::new(
            qfisher::sampling::random_state(5, &mut rng),
            qfisher::sampling::random_hermitian(5, 1.0, &mut rng),
            qfisher::sampling::random_basis(5, &mut rng),
        )
        .unwrap()
    };
    let p = s.probabilities(0.4);
    let n = 1_000_000u64;
    let counts = sample_outcomes(&p, n, &mut ChaCha8Rng::seed_from_u64(3));
    assert_eq!(counts.iter().sum::<u64>(), n);
    let chi2: f64 = counts
        .iter()
        .zip(&p)
        .map(|(&c, &p)| (c as f64 - n as f64 * p).powi(2) / (n as f64 * p))
        .sum();
    // 4 degrees of freedom: the 0.999 quantile is 18.47.
    assert!(chi2 < 18.47, "chi2 = {chi2}");
}

#[test]
fn qubit_optimum_meets_the_bound() {
    let s = optimal_qubit(0.5, -0.5, 0.0).unwrap().scenario();
    let r = cramer_rao_check(&EstimationExperiment::new(s, FRAC_PI_2, 10_000, 200, 42).unwrap()).unwrap();
    assert!((r.j_true - 1.0).abs() < 1e-12);
    assert!(r.passed, "ratio {}", r.ratio);
    assert!(r.empirical_variance >= 0.5e-4 && r.empirical_variance <= 1.3e-4);
}

#[test]
fn noon_meets_the_bound() {
    let spin = SpinSystem::from_j(2.0).unwrap();
    let s = spin.scenario(spin.noon_state(0.0), spin.jz_basis());
    let r = cramer_rao_check(&EstimationExperiment::new(s, FRAC_PI_8, 10_000, 200, 42).unwrap()).unwrap();
    assert!((r.j_true - 16.0).abs() < 1e-9);
    assert!(r.passed, "ratio {}", r.ratio);
}

#[test]
fn doubling_samples_halves_variance() {
    let s = optimal_qubit(0.5, -0.5, 0.0).unwrap().scenario();
    let v = |n| {
        cramer_rao_check(&EstimationExperiment::new(s.clone(), FRAC_PI_2, n, 2000, 7).unwrap())
            .unwrap()
            .empirical_variance
    };
    let ratio = v(2000) / v(4000);
    assert!((ratio - 2.0).abs() < 0.4, "{ratio}");
}

#[test]
fn fixed_seed_is_deterministic() {
    let s = optimal_qubit(0.5, -0.5, 0.0).unwrap().scenario();
    let exp = EstimationExperiment::new(s, FRAC_PI_2, 1000, 50, 9).unwrap();
    let a = cramer_rao_check(&exp).unwrap();
    let b = cramer_rao_check(&exp).unwrap();
    assert_eq!(a, b);
}

#[test]
fn exact_counts_on_noon_recover_truth() {
    let spin = SpinSystem::from_j(2.0).unwrap();
    let s = spin.scenario(spin.noon_state(0.0), spin.jz_basis());
    let truth = 0.41;
    let counts: Vec<u64> = s.probabilities(truth).iter().map(|p| (p * 1e12).round() as u64).collect();
    let est = mle_estimate(&s, &counts, (truth - 0.2, truth + 0.2)).unwrap();
    assert!((est.theta_hat - truth).abs() < 1e-5);
}
