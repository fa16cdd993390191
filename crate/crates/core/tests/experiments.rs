use sra_core::evt::{asymptotic_mi_distribution, asymptotic_params};
use sra_core::experiments::*;
use sra_core::{Snr, SystemConfig};

fn db(x: f64) -> Snr {
    Snr::from_db(x).unwrap()
}

#[test]
fn cdf_run_layout_and_exact_oracle() {
    let r = run_cdf_comparison(128, &[1, 2, 4, 8, 16], db(0.0), 20_000, 5).unwrap();
    assert_eq!(r.cells.len(), 5);
    for c in &r.cells {
        assert_eq!(c.curve.len(), CURVE_POINTS);
        assert!(c.curve.windows(2).all(|w| w[1].analytic_cdf >= w[0].analytic_cdf));
        let m = c.metrics.as_ref().unwrap();
        assert_eq!(m.exact_ks.is_some(), c.n_t == 1);
    }
    let exact = r.cells[0].metrics.as_ref().unwrap().exact_ks.unwrap();
    assert!(exact <= 0.015, "exact KS {exact}");
}

#[test]
fn recorded_parameters_are_fresh() {
    let r = run_ergodic_capacity_sweep(64, &[1, 3], &[-10.0, 0.0, 10.0], 500, 9).unwrap();
    for (c, m) in r.metrics() {
        let config = SystemConfig::new(c.apertures, c.n_t, c.rho).unwrap();
        let g = asymptotic_mi_distribution(&config).unwrap();
        assert_eq!(m.location, g.location());
        assert_eq!(m.scale, g.scale());
        assert_eq!(m.analytic, asymptotic_params(&config).unwrap());
    }
}

#[test]
fn low_snr_linearization() {
    let r = run_ergodic_capacity_sweep(128, &[1], &[-20.0], 20_000, 3).unwrap();
    let (c, m) = r.metrics().next().unwrap();
    let linear = c.rho * m.analytic.theta * std::f64::consts::LOG2_E;
    assert!((m.empirical_mean - linear).abs() <= 0.05 * linear);
}

#[test]
fn capacity_grows_with_array_length() {
    let nts = [1, 2, 4, 8, 16];
    let r = run_ergodic_capacity_sweep(128, &nts, &[0.0], 20_000, 4).unwrap();
    let means: Vec<f64> = r.metrics().map(|(_, m)| m.empirical_mean).collect();
    assert!(means.windows(2).all(|w| w[1] > w[0]), "{means:?}");
}

#[test]
fn hardening_trends() {
    let r = run_hardening_sweep(2, &[64, 256, 1024, 4096], db(0.0), 20_000, 8).unwrap();
    let rows: Vec<_> = r.metrics().map(|(_, m)| m.clone()).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.windows(2).all(|w| w[1].empirical_var < w[0].empirical_var));
    assert!(rows.windows(2).all(|w| w[1].analytic_var < w[0].analytic_var));
    assert!(rows.windows(2).all(|w| w[1].empirical_mean > w[0].empirical_mean));
    assert!((rows[3].analytic.beta - 1.0).abs() <= 0.1);
    for m in &rows {
        let ratio = m.empirical_var.unwrap() / m.analytic_var;
        assert!((0.5..=2.0).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn dependency_check_two_apertures() {
    let c = SystemConfig::new(128, 2, 1.0).unwrap();
    let r = run_dependency_check(&c, 200_000, 1).unwrap();
    let d = r.cells[0].dependency.as_ref().unwrap();
    assert!(!d.vacuous);
    assert!(d.rows.iter().all(|row| row.max_delta.map_or(true, |x| x < 1.0)));
    assert!(d.monotone_within_se);
}

#[test]
fn reruns_are_identical() {
    let a = run_cdf_comparison(64, &[2, 4], db(3.0), 3000, 17).unwrap();
    let b = run_cdf_comparison(64, &[2, 4], db(3.0), 3000, 17).unwrap();
    assert_eq!(a, b);
    let c = run_ergodic_capacity_sweep(64, &[2], &[-5.0, 5.0], 3000, 17).unwrap();
    let d = run_ergodic_capacity_sweep(64, &[2], &[-5.0, 5.0], 3000, 17).unwrap();
    assert_eq!(c, d);
}
