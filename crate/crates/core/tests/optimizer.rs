mod common;

use qfisher::fisher::{complement_coefficients, fisher_report};
use qfisher::optimize::{
    optimize_measurement, optimize_probe_and_measurement, seminorm, stationarity_residual,
    variance_bound, OptimizerConfig,
};
use qfisher::sampling::{random_basis, random_hermitian, random_state};
use qfisher::{AmplitudeDecomposition, HermitianOperator, PureState, Scenario, SpinSystem, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(seed: u64) -> OptimizerConfig {
    OptimizerConfig { seed, ..OptimizerConfig::default() }
}

#[test]
fn beats_every_sampled_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let h = random_hermitian(3, 1.0, &mut rng);
    let psi = random_state(3, &mut rng);
    let theta = 0.6;
    let best = optimize_measurement(&psi, &h, theta, &config(1)).unwrap();
    let mut sampled: f64 = 0.0;
    for _ in 0..500 {
        let s = Scenario::new(psi.clone(), h.clone(), random_basis(3, &mut rng)).unwrap();
        sampled = sampled.max(fisher_report(&s, theta).unwrap().fisher_info);
    }
    assert!(best.j_achieved >= sampled - 1e-9);
    // For a fixed probe the maximum over bases is 4Δ²Ĥ.
    assert!((best.j_achieved - best.variance_bound).abs() < 1e-6 * best.variance_bound);
}

#[test]
fn bound_chain_and_stationarity_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for i in 0..20u64 {
        let dim = 2 + (i % 5) as usize;
        let h = random_hermitian(dim, 1.0, &mut rng);
        let psi = random_state(dim, &mut rng);
        let r = optimize_measurement(&psi, &h, 0.2 * i as f64, &config(i)).unwrap();
        assert!(r.j_achieved >= 0.0);
        assert!(r.j_achieved <= r.variance_bound + 1e-6);
        assert!(r.variance_bound <= r.seminorm_bound + 1e-6);
        if let Some(res) = r.stationarity_residual {
            assert!(res < 1e-4, "dim {dim}: residual {res}");
        }
        assert!(r.converged);
        assert!(r.complement_trace.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn raw_gauge_ratio_settles_at_minus_mean_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let h = random_hermitian(4, 1.0, &mut rng).shifted(2.0);
    let psi = random_state(4, &mut rng);
    let r = optimize_measurement(&psi, &h, 0.0, &config(0)).unwrap();
    let tol = Tolerances::default();
    let d = AmplitudeDecomposition::from_coordinates(&r.best_basis.coordinates(psi.amplitudes()), &tol);
    let h_kl = r.best_basis.represent(&h);
    let a = complement_coefficients(&d, &h_kl);
    let mean = h.expectation(&psi);
    // A_k = r_k⟨Ĥ⟩ at the optimum, hence |A_p − r_p B_p| = 2|⟨Ĥ⟩| r_p.
    for k in 0..4 {
        assert!((a[k] - d.radii[k] * mean).abs() < 1e-6);
    }
    let max_r = d.radii.iter().cloned().fold(0.0, f64::max);
    let raw = stationarity_residual(&d, &h_kl, &a, 1e-12).unwrap();
    assert!((raw - 2.0 * mean.abs() * max_r).abs() < 1e-5);
}

#[test]
fn free_probe_closes_seminorm_gap() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..10u64 {
        let dim = 2 + (i % 5) as usize;
        let h = random_hermitian(dim, 1.0, &mut rng);
        let r = optimize_probe_and_measurement(&h, 0.1, &config(i)).unwrap();
        let s2 = seminorm(&h).powi(2);
        assert!((s2 - r.j_achieved) / s2 < 1e-6, "dim {dim}: {} vs {s2}", r.j_achieved);
        assert!(r.extremal_overlap.unwrap() > 1.0 - 1e-6);
        assert!(!r.degenerate_extremes);
    }
}

#[test]
fn spin_two_generator_reaches_sixteen() {
    let s = SpinSystem::from_j(2.0).unwrap();
    let r = optimize_probe_and_measurement(s.jy(), 0.0, &config(3)).unwrap();
    assert!((r.j_achieved - 16.0).abs() < 16.0 * 1e-6);
}

#[test]
fn shift_invariance_of_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let h = random_hermitian(3, 1.0, &mut rng);
    let psi = random_state(3, &mut rng);
    let a = optimize_measurement(&psi, &h, 0.5, &config(0)).unwrap();
    let b = optimize_measurement(&psi, &h.shifted(7.5), 0.5, &config(0)).unwrap();
    assert!((a.j_achieved - b.j_achieved).abs() < 1e-6 * a.j_achieved);
}

#[test]
fn seminorm_bounds_sampled_variances() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let h = random_hermitian(5, 1.0, &mut rng);
    let s2 = seminorm(&h).powi(2);
    let mut best: f64 = 0.0;
    for _ in 0..5000 {
        let v = variance_bound(&random_state(5, &mut rng), &h).unwrap();
        assert!(v <= s2 + 1e-12);
        best = best.max(v);
    }
    // Random states come nowhere near the extremal superposition.
    assert!(best < s2);
    let spec = h.spectrum();
    let max_var = PureState::normalized(spec.eigenvector(0) + spec.eigenvector(4)).unwrap();
    assert!((variance_bound(&max_var, &h).unwrap() - s2).abs() < 1e-10);
}

#[test]
fn degenerate_extremes_are_flagged() {
    let h = HermitianOperator::from_real_diagonal(&[0.0, 0.0, 2.0]).unwrap();
    let r = optimize_probe_and_measurement(&h, 0.0, &config(0)).unwrap();
    assert!(r.degenerate_extremes);
    assert!((r.j_achieved - 4.0).abs() < 4e-6);
    assert!(r.extremal_overlap.unwrap() > 1.0 - 1e-6);
}

#[test]
fn json_is_reproducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let h = random_hermitian(3, 1.0, &mut rng);
    let a = serde_json::to_string(&optimize_probe_and_measurement(&h, 0.0, &config(5)).unwrap()).unwrap();
    let b = serde_json::to_string(&optimize_probe_and_measurement(&h, 0.0, &config(5)).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"var_bound\""));
}
