use std::f64::consts::E;

use powertower::analysis::{
    bifurcation_scan, classify, cycle_for_x, cycle_from_p, linspace, ConvergenceClass,
};
use powertower::consts::{CYCLE_BASE, INV_E, TANGENT_BASE};
use powertower::dynamics::{
    cobweb_trace, double_step_derivative, iterate_double_step, iterate_tower, IterationConfig,
    IterationOutcome,
};
use powertower::lambertw::{
    lambert_w, tower_fixed_point, tower_fixed_point_repulsive, w_series, Branch,
};
use powertower::series::{compose, euler_ln_series, revert, w_exp_w_series, PowerSeries};
use powertower::tower::{finite_tower, g, g_prime, hyperop, tower_step};
use proptest::prelude::*;

proptest! {
    #[test]
    fn towers_nest_to_the_right(x in 0.05f64..1.5, n in 1u32..30) {
        let outer = finite_tower(x, n + 1).unwrap();
        let inner = tower_step(x, finite_tower(x, n).unwrap()).unwrap();
        prop_assert_eq!(outer, inner);
    }

    #[test]
    fn g_derivative_matches_finite_difference(y in 0.2f64..6.0) {
        let h = 1e-6;
        let fd = (g(y + h).unwrap() - g(y - h).unwrap()) / (2.0 * h);
        prop_assert!((g_prime(y).unwrap() - fd).abs() < 1e-8);
    }

    #[test]
    fn g_peaks_at_e(y in 0.05f64..20.0) {
        prop_assert!(g(y).unwrap() <= g(E).unwrap());
    }

    #[test]
    fn hyperop_ladder(n in 0u64..6, m in 1u64..5) {
        for grade in 1u8..=3 {
            let next = hyperop(grade + 1, n, m);
            // H_{k+1}(n, m) = H_k(n, H_{k+1}(n, m - 1))
            let prev = hyperop(grade + 1, n, m - 1).and_then(|p| hyperop(grade, n, p));
            match (next, prev) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "grade {}: {:?} vs {:?}", grade, a, b),
            }
        }
    }

    #[test]
    fn branches_are_ordered(z in -0.3678f64..-1e-6) {
        let w0 = lambert_w(z, Branch::Principal).unwrap();
        let wm = lambert_w(z, Branch::Secondary).unwrap();
        prop_assert!(wm <= -1.0 && (-1.0..0.0).contains(&w0));
    }

    #[test]
    fn truncated_series_error_is_quartic(z in -0.05f64..0.05) {
        let w = lambert_w(z, Branch::Principal).unwrap();
        let s = w_series(z, 4).unwrap();
        prop_assert!((w - s).abs() <= 20.0 * z.abs().powi(5) + 1e-17);
    }

    #[test]
    fn euler_series_solves_the_equation(v in -0.05f64..0.05) {
        let t = euler_ln_series(v, 4).unwrap();
        prop_assert!((t - v * t.exp()).abs() < 5e-6);
        prop_assert_eq!(t, -w_series(-v, 4).unwrap());
    }

    #[test]
    fn double_step_fixed_point_has_small_residual(x in 0.005f64..0.06) {
        let trace = iterate_double_step(x, x, &IterationConfig::default()).unwrap();
        if let IterationOutcome::Converged(y) = trace.outcome {
            prop_assert!((x.powf(x.powf(y)) - y).abs() < 1e-10);
        }
    }

    #[test]
    fn cobweb_alternates_between_curve_and_diagonal(x in 0.1f64..1.4, steps in 1usize..40) {
        let pts = cobweb_trace(x, x, steps).unwrap();
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            prop_assert!(a.0 == b.0 || a.1 == b.1);
        }
        for &(y, z) in pts.iter().skip(1).step_by(2) {
            prop_assert_eq!(z, tower_step(x, y).unwrap());
        }
    }

    #[test]
    fn cycle_straddles_middle_fixed_point(x in 0.002f64..0.06) {
        let c = cycle_for_x(x, &IterationConfig::default()).unwrap();
        let mid = tower_fixed_point(x).unwrap();
        prop_assert!(c.y_low < mid && mid < c.y_high);
        prop_assert!(c.residual() < 1e-12);
        prop_assert!(c.self_power_gap() < 1e-12);
    }

    #[test]
    fn reversion_round_trips(coeffs in prop::collection::vec(-1.0f64..1.0, 2..9), a1 in 1.0f64..2.0) {
        let mut c = coeffs;
        c[0] = a1;
        let order = c.len();
        let s = PowerSeries::new(c);
        let r = revert(&s, order).unwrap();
        let id = PowerSeries::identity();
        prop_assert!(compose(&s, &r, order).unwrap().max_abs_diff(&id, order) < 1e-9);
        prop_assert!(compose(&r, &s, order).unwrap().max_abs_diff(&id, order) < 1e-9);
    }
}

#[test]
fn g_of_fixed_point_returns_the_base() {
    for y in linspace(INV_E, E, 100) {
        let x = g(y).unwrap();
        let back = tower_fixed_point(x).unwrap();
        assert!((back - y).abs() < 1e-7 * y, "y = {y}, back = {back}");
    }
}

#[test]
fn lambert_round_trip_on_log_grid() {
    for t in linspace(-10.0, 5.0, 1000) {
        let z = 10f64.powf(t);
        let w = lambert_w(z, Branch::Principal).unwrap();
        assert!((w * w.exp() - z).abs() <= 1e-12 * z);
    }
    for t in linspace(-300.0, -0.44, 1000) {
        let z = -10f64.powf(t);
        let w = lambert_w(z, Branch::Secondary).unwrap();
        assert!((w * w.exp() - z).abs() <= 1e-12 * z.abs(), "z = {z}");
    }
}

#[test]
fn closed_form_matches_iteration() {
    let config = IterationConfig::default();
    for x in linspace(CYCLE_BASE + 0.01, TANGENT_BASE - 0.01, 50) {
        let closed = tower_fixed_point(x).unwrap();
        assert!((x.powf(closed) - closed).abs() < 1e-10);
        match iterate_tower(x, &config).unwrap().outcome {
            IterationOutcome::Converged(y) => {
                // Error after the stopping step is at most lambda/(1-lambda) * tol.
                let lambda = (closed.ln()).abs();
                let bound = 10.0 * config.tolerance() * (1.0 + lambda / (1.0 - lambda));
                assert!((y - closed).abs() < bound, "x = {x}: {y} vs {closed}");
            }
            // Near e^(-e) a slowly decaying oscillation can pass the cycle test.
            IterationOutcome::TwoCycle { y_low, y_high } => {
                assert!(y_high - y_low < 1e-9 && y_low < closed && closed < y_high);
            }
            other => panic!("x = {x}: {other:?}"),
        }
    }
}

#[test]
fn outcome_agrees_with_regime() {
    let config = IterationConfig::default();
    for t in linspace(0.01f64.ln(), 1.6f64.ln(), 400) {
        let x = t.exp();
        let class = classify(x).unwrap();
        let outcome = iterate_tower(x, &config).unwrap().outcome;
        let ok = match class {
            ConvergenceClass::DivergesToInfinity => outcome == IterationOutcome::Diverged,
            ConvergenceClass::TwoCycleRegime => matches!(
                outcome,
                IterationOutcome::TwoCycle { .. } | IterationOutcome::Undecided
            ),
            _ => match outcome {
                IterationOutcome::Converged(_) | IterationOutcome::Undecided => true,
                IterationOutcome::TwoCycle { y_low, y_high } => y_high - y_low < 1e-9,
                IterationOutcome::Diverged => false,
            },
        };
        assert!(ok, "x = {x}: {class} but {outcome:?}");
    }
}

#[test]
fn stability_flips_at_the_boundaries() {
    assert_eq!(classify(TANGENT_BASE).unwrap(), ConvergenceClass::TangentConvergence);
    assert_eq!(classify(CYCLE_BASE).unwrap(), ConvergenceClass::OscillatingConvergence);
    for x in linspace(1.01, TANGENT_BASE - 1e-3, 20) {
        assert!(tower_fixed_point(x).unwrap() < E);
        assert!(tower_fixed_point_repulsive(x).unwrap() > E);
    }
}

#[test]
fn double_step_derivative_on_grid() {
    for x in linspace(0.02, 1.4, 20) {
        for y in linspace(0.1, 3.0, 20) {
            let h = 1e-5;
            let f = |y: f64| x.powf(x.powf(y));
            let fd = (f(y + h) - f(y - h)) / (2.0 * h);
            let d = double_step_derivative(x, y).unwrap();
            assert!((d - fd).abs() <= 1e-6 * d.abs().max(1e-6), "({x}, {y})");
        }
    }
}

#[test]
fn cycle_ratio_round_trip() {
    let config = IterationConfig::default();
    for x in [0.01, 0.03, 0.0625] {
        let c = cycle_for_x(x, &config).unwrap();
        let back = cycle_from_p(c.p).unwrap();
        assert!((back.x - x).abs() < 1e-12 * x.max(1.0) * 10.0, "x = {x}: {}", back.x);
        assert!((back.y_low - c.y_low).abs() < 1e-10);
    }
}

#[test]
fn scan_is_monotone_between_one_and_tangent_base() {
    let rows = bifurcation_scan(1.0, TANGENT_BASE - 1e-6, 200, &IterationConfig::default()).unwrap();
    for w in rows.windows(2) {
        assert!(w[1].values[0] >= w[0].values[0], "{:?} then {:?}", w[0], w[1]);
    }
}

#[test]
fn w_series_recovered_to_sixth_order() {
    let r = revert(&w_exp_w_series(6), 6).unwrap();
    let want = [1.0, -1.0, 1.5, -8.0 / 3.0, 125.0 / 24.0, -54.0 / 5.0];
    for (k, w) in want.iter().enumerate() {
        assert!((r.coefficient(k + 1) - w).abs() < 1e-12);
    }
}
