use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

use ptqs_core::neutrino::{
    derive_osc_params, generate_curve, generate_curve_for_alpha, spectral_data,
    survival_probability, CurveTemplate, NeutrinoError, OscillationConfig, OSC_CONSTANT,
};
use ptqs_core::transitions::{probability_cpt, Flavor};

fn minima(f: impl Fn(f64) -> f64, grid: &[f64]) -> Vec<f64> {
    let vals: Vec<f64> = grid.iter().map(|&l| f(l)).collect();
    let g = (5f64.sqrt() - 1.0) / 2.0;
    (1..grid.len() - 1)
        .filter(|&i| vals[i] < vals[i - 1] && vals[i] <= vals[i + 1])
        .map(|i| {
            let (mut a, mut b) = (grid[i - 1], grid[i + 1]);
            while b - a > 1e-10 {
                let (x1, x2) = (b - g * (b - a), a + g * (b - a));
                if f(x1) < f(x2) {
                    b = x2;
                } else {
                    a = x1;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

fn pt_config(alpha_prime: f64, dm2: f64) -> OscillationConfig {
    OscillationConfig::new(dm2, alpha_prime.sin() * dm2, 0.0, FRAC_PI_2, 1.0)
}

#[test]
fn sigma_only_shifts_the_splitting() {
    let shifted = OscillationConfig::new(2.0e-3, 1.0e-3, 5.0e-4, 0.9, 1.5);
    let folded = OscillationConfig::new(2.5e-3, 1.0e-3, 0.0, 0.9, 1.5);
    let (a, b) = (
        generate_curve(&shifted).unwrap(),
        generate_curve(&folded).unwrap(),
    );
    for (x, y) in a.p_mumu.iter().zip(&b.p_mumu) {
        assert!((x - y).abs() <= 1e-12);
    }
}

#[test]
fn oscillation_frequency_scales_with_cos_alpha() {
    let grid: Vec<f64> = (0..=8000).map(f64::from).collect();
    let spacing = |alpha_prime: f64| {
        let cfg = pt_config(alpha_prime, 2.5e-3);
        let m = minima(|l| survival_probability(&cfg, l).unwrap(), &grid);
        assert!(m.len() >= 2, "{m:?}");
        m[1] - m[0]
    };
    let base = spacing(0.0);
    for a in [0.3, FRAC_PI_6, FRAC_PI_4, 1.2] {
        let rel = (spacing(a) / base - 1.0 / a.cos()).abs() / (1.0 / a.cos());
        assert!(rel <= 1e-6, "alpha' = {a}: relative error {rel:e}");
    }
}

#[test]
fn hermitian_limit_is_standard_two_flavour_formula() {
    let (dm2, e) = (2.4e-3, 0.8);
    let cfg = OscillationConfig::new(dm2, 0.0, 0.0, 0.0, e);
    for l in [0.0, 100.0, 295.0, 810.0, 1300.0] {
        let standard = 1.0 - (OSC_CONSTANT * dm2 * l / e).sin().powi(2);
        assert!((survival_probability(&cfg, l).unwrap() - standard).abs() <= 1e-12);
    }
    // real ρ folds into the diagonal and leaves probabilities alone
    let real_rho = OscillationConfig::new(dm2, 1.0e-3, 0.0, 0.0, e);
    for l in [0.0, 333.0, 1999.0] {
        let a = survival_probability(&real_rho, l).unwrap();
        let b = survival_probability(&cfg, l).unwrap();
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn rounded_constant_is_within_half_a_percent() {
    assert!((OSC_CONSTANT / 1.27 - 1.0).abs() <= 5e-3);
    let cfg = pt_config(FRAC_PI_6, 2.5e-3);
    let d = derive_osc_params(&cfg).unwrap();
    let rounded = 2.0 * 1.27 * FRAC_PI_6.cos() * 2.5e-3;
    assert!((d.beta_prime_phase_per_km / rounded - 1.0).abs() <= 5e-3);
}

#[test]
fn agrees_with_two_level_probabilities_in_km_units() {
    let mut cfg = OscillationConfig::new(2.5e-3, 1.9e-3, -3.0e-4, -2.2, 0.6);
    cfg.m2_bar = 3.0e-3;
    let sd = spectral_data(&cfg).unwrap();
    for l in [0.0, 17.0, 420.0, 1500.0] {
        let two_level = probability_cpt(&sd, Flavor::A, Flavor::A, l).probability;
        assert!((survival_probability(&cfg, l).unwrap() - two_level).abs() <= 1e-12);
    }
}

#[test]
fn violation_reports_the_bound() {
    let cfg = OscillationConfig::new(2.5e-3, 3.0e-3, 0.0, FRAC_PI_2, 1.0);
    let err = generate_curve(&cfg).unwrap_err();
    assert!(matches!(err, NeutrinoError::UnbrokenViolation { .. }));
    assert!(err
        .to_string()
        .contains("|rho sin varphi| <= |dm2_32 + sigma|"));
}

#[test]
fn alpha_override_matches_parameter_route() {
    let template = CurveTemplate {
        baselines: (0..=400).map(|k| 5.0 * f64::from(k)).collect(),
        ..CurveTemplate::default()
    };
    for a in [-0.7, 0.0, FRAC_PI_6, 1.3] {
        let mut cfg = pt_config(a, 2.5e-3);
        cfg.baselines = template.baselines.clone();
        let x = generate_curve(&cfg).unwrap();
        let y = generate_curve_for_alpha(&template, a).unwrap();
        for (p, q) in x.p_mumu.iter().zip(&y.p_mumu) {
            assert!((p - q).abs() <= 1e-12);
        }
    }
}
