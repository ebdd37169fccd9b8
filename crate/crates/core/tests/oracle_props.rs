mod common;

use common::rng;
use esfp::oracles::{expected_prandtl, synthetic_records};
use esfp::{
    analytic_theta, extract_prandtl, gaussian_surrogate_anisotropy, linfit, Error, SymTensor3,
    Vector3,
};
use proptest::prelude::*;
use rand_distr::{Distribution, Normal};

proptest! {
    #[test]
    fn exact_series_give_the_closure_prandtl(
        nu in -3.0..0.9f64,
        tau in 0.2..5.0f64,
        a in 0.2..2.0f64,
        qx in 0.1..10.0f64,
    ) {
        let theta0 = SymTensor3::diagonal(1.0 + a, 1.0 - a / 2.0, 1.0 - a / 2.0);
        let times: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05 * tau).collect();
        let recs = synthetic_records(&times, &theta0, Vector3::new(qx, 0.0, 0.0), nu, tau);
        let est = extract_prandtl(&recs, None, 1).unwrap();
        prop_assert!((est.pr_n - 3.0 / (2.0 * (1.0 - nu))).abs() < 1e-12);
        prop_assert!((est.slope_q - 3.0 / tau).abs() < 1e-12 / tau);
    }

    #[test]
    fn anisotropy_decreases_along_the_relaxation(
        nu in -1.25..0.9f64,
        d in (0.1..3.0f64, 0.1..3.0f64, 0.1..3.0f64),
        off in -0.05..0.05f64,
    ) {
        let theta0 = SymTensor3::new(d.0, d.1, d.2, off, 0.0, off);
        prop_assume!(esfp::is_spd(&theta0));
        let t = theta0.trace() / 3.0;
        prop_assume!(gaussian_surrogate_anisotropy(&theta0, t) > 1e-3 * t);
        let values: Vec<f64> = (0..40)
            .map(|i| {
                let th = analytic_theta(i as f64 * 0.05, 0.0, &theta0, nu, t, 1.0);
                gaussian_surrogate_anisotropy(&th, t)
            })
            .collect();
        prop_assert!(values.windows(2).all(|w| w[1] < w[0]), "{:?}", values);
    }
}

#[test]
fn noisy_line_slope_within_three_standard_errors() {
    let mut r = rng(41);
    let noise = Normal::new(0.0, 0.01).unwrap();
    let pts: Vec<(f64, f64)> = (0..1000)
        .map(|i| {
            let x = i as f64 / 999.0;
            (x, -4.5 * x + 2.0 + noise.sample(&mut r))
        })
        .collect();
    let fit = linfit(&pts).unwrap();
    // σ / √(Σ (x − x̄)²)
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / 1000.0;
    let sxx = pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let se = 0.01 / sxx.sqrt();
    assert!(
        (fit.slope + 4.5).abs() < 3.0 * se,
        "{} (se {se})",
        fit.slope
    );
    assert!(fit.r_squared > 0.999);
}

#[test]
fn fit_rejects_unusable_series() {
    assert!(matches!(
        linfit(&[(0.0, 1.0), (1.0, 2.0)]),
        Err(Error::DegenerateFit(_))
    ));
    assert!(matches!(
        linfit(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]),
        Err(Error::DegenerateFit(_))
    ));

    let theta0 = SymTensor3::diagonal(2.0, 0.5, 0.5);
    let times = [0.0, 0.1, 0.2, 0.3];
    let mut recs = synthetic_records(&times, &theta0, Vector3::new(1.0, 0.0, 0.0), -1.25, 1.0);
    assert!(extract_prandtl(&recs, Some((0.0, 0.15)), 1).is_err());
    recs[2].theta_diag.x = recs[2].temperature - 0.1;
    assert!(matches!(
        extract_prandtl(&recs, None, 1),
        Err(Error::SignChange { .. })
    ));
    assert_eq!(expected_prandtl(-1.25), 2.0 / 3.0);
}
