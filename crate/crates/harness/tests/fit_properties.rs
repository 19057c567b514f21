use proptest::prelude::*;

use nsm_harness::fit::{fit_decay, fit_decay_window, log_spaced, FitModel};

proptest! {
    #[test]
    fn recovers_power_laws(p in -2.0f64..0.5, amp in 1e-3f64..1e3, start in 1.0f64..100.0, count in 10usize..60) {
        let t = log_spaced(start, start * 100.0, count);
        let v: Vec<f64> = t.iter().map(|t| amp * (1.0 + t).powf(p)).collect();
        let f = fit_decay(&t, &v, FitModel::Power).unwrap();
        prop_assert!((f.exponent - p).abs() < 1e-6);
        prop_assert!(f.residual >= 0.0);
    }

    #[test]
    fn recovers_log_corrected_laws(p in -2.0f64..0.0, amp in 1e-3f64..1e3) {
        let t = log_spaced(10.0, 1000.0, 30);
        let v: Vec<f64> = t.iter().map(|t| amp * (1.0 + t).powf(p) * t.ln_1p()).collect();
        let f = fit_decay(&t, &v, FitModel::PowerLog).unwrap();
        prop_assert!((f.exponent - p).abs() < 1e-6);
    }

    #[test]
    fn window_is_reported_inside_the_request(a in 2.0f64..50.0, w in 5.0f64..20.0) {
        let t = log_spaced(1.0, 1000.0, 200);
        let v: Vec<f64> = t.iter().map(|t| (1.0 + t).powf(-0.5)).collect();
        let f = fit_decay_window(&t, &v, FitModel::Power, (a, a * w)).unwrap();
        prop_assert!(f.window.0 >= a && f.window.1 <= a * w && f.window.0 < f.window.1);
    }

    #[test]
    fn scaling_values_leaves_exponent(p in -2.0f64..0.0, s in 1e-6f64..1e6) {
        let t = log_spaced(10.0, 1000.0, 25);
        let v: Vec<f64> = t.iter().map(|t| (1.0 + t).powf(p) * (1.0 + 0.1 * (t * 0.3).sin())).collect();
        let vs: Vec<f64> = v.iter().map(|x| x * s).collect();
        let a = fit_decay(&t, &v, FitModel::Power).unwrap();
        let b = fit_decay(&t, &vs, FitModel::Power).unwrap();
        prop_assert!((a.exponent - b.exponent).abs() < 1e-9);
    }
}
