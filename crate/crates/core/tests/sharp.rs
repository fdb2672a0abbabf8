mod common;

use std::f64::consts::PI;

use bergman_lab::fit::fit_power_law;
use bergman_lab::operators::apply_bergman;
use bergman_lab::sharp::{
    angle_threshold, arg_span_violations, closed_form_f_norm, delta_sweep, f_l1_norm, pf_norm_lower, sweep_family,
    SharpInstance,
};
use bergman_lab::{lp_norm, Error, GridWindow, Point, QuadratureSpec};
use common::rel;

#[test]
fn instance_exponents() {
    let s = SharpInstance::new(2.0, 0.0, 0.25).unwrap();
    assert_eq!((s.weight_exponent(), s.function_exponent()), (1.5, -1.5));
    let s = SharpInstance::new(1.5, 1.0, 0.5).unwrap();
    assert_eq!((s.weight_exponent(), s.function_exponent()), (0.75, -1.5));
    let s = SharpInstance::new(2.0, 0.0, 1.0 - 1e-12).unwrap();
    assert!(s.weight_exponent().abs() < 1e-10 && s.function_exponent().abs() < 1e-10);
    assert!(SharpInstance::new(2.5, 0.0, 0.5).is_err());
}

#[test]
fn function_norms() {
    let s = SharpInstance::new(2.0, 0.0, 0.25).unwrap();
    assert!((closed_form_f_norm(&s).powi(2) - 2.0 * PI).abs() < 1e-12);
    for (p, a) in [(1.5, 0.0), (2.0, 1.0), (1.2, 2.5)] {
        let base = closed_form_f_norm(&SharpInstance::new(p, a, 0.5).unwrap()).powf(p) * 0.5;
        for d in [0.25, 0.1, 1e-3] {
            let v = closed_form_f_norm(&SharpInstance::new(p, a, d).unwrap()).powf(p) * d;
            assert!(rel(v, base) < 1e-12);
        }
    }
    let win = GridWindow::new(-4, 1, -2.0, 2.0).unwrap();
    let q = QuadratureSpec::default();
    for (p, a) in [(2.0, 0.0), (1.5, 1.0), (2.0, -0.5)] {
        for d in [0.5, 0.25, 0.0625] {
            let s = SharpInstance::new(p, a, d).unwrap();
            let v = lp_norm(&s.function(), &s.weight(), &s.exponents(), &s.measure(), &win, &q).unwrap();
            assert!(rel(v.value, closed_form_f_norm(&s)) < 1e-6);
        }
    }
}

#[test]
fn cone_angle_thresholds() {
    let a0 = angle_threshold(0.0, 512).unwrap();
    assert!((a0.measured_m - (1.0 + 2f64.sqrt())).abs() < 1e-8, "{a0:?}");
    assert!((a0.paper_formula_m - (PI / 8.0).tan() - 1.0).abs() < 1e-15);
    let a1 = angle_threshold(1.0, 512).unwrap();
    assert!((a1.measured_m - (2.0 + 3f64.sqrt())).abs() < 1e-8, "{a1:?}");
    let mut prev = 0.0;
    for a in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let m = angle_threshold(a, 256).unwrap().measured_m;
        assert!(m > prev);
        prev = m;
        for scale in [1.0, 1.01, 1.5] {
            assert_eq!(arg_span_violations(a, scale * m, 10_000, 77), 0);
        }
    }
    // the printed formula admits violations
    assert!(arg_span_violations(0.0, a0.paper_formula_m, 10_000, 5) > 0);
}

#[test]
fn lower_bound_proxy() {
    let s = SharpInstance::new(2.0, 0.0, 0.125).unwrap();
    assert_eq!(-1.0 - s.epsilon(), -1.25);
    let m = angle_threshold(0.0, 512).unwrap().measured_m;
    assert!(matches!(pf_norm_lower(&s, m, Some(m.ln() + 1.0)), Err(Error::WindowTooSmall { .. })));
    assert!(pf_norm_lower(&s, 0.5, None).is_err());

    // pf^p δ^{p+1} is constant once the inner-radius factor M^{-ε} and the tail are divided out
    for (p, a) in [(2.0, 0.0), (1.5, 1.0)] {
        let m = angle_threshold(a, 512).unwrap().measured_m;
        let norm = |d: f64| {
            let s = SharpInstance::new(p, a, d).unwrap();
            let v = pf_norm_lower(&s, m, None).unwrap();
            v.value.powf(p) * d.powf(p + 1.0) * m.powf(s.epsilon()) / (1.0 - v.tail_fraction)
        };
        let base = norm(0.25);
        for k in 3..=6 {
            assert!(rel(norm((-(k as f64)).exp2()), base) < 1e-12);
        }
    }
}

#[test]
fn bergman_projection_of_the_extremal_function_beyond_the_cone() {
    // |Pf(z)| ≥ cos(π/4) ‖f‖₁ (|z|+1)^{-(2+α)} once |z| ≥ M, and ≤ ‖f‖₁ (|z|-1)^{-(2+α)}
    let q = QuadratureSpec::default();
    let win = GridWindow::new(-4, 5, -32.0, 32.0).unwrap();
    for a in [0.0, 1.0] {
        let s = SharpInstance::new(2.0, a, 0.25).unwrap();
        let m = angle_threshold(a, 512).unwrap().measured_m;
        let l1 = f_l1_norm(&s);
        let d = s.measure().dimension();
        for (r, t) in [(m, 0.3), (2.0 * m, PI / 2.0), (8.0, PI / 2.0), (3.0 * m, 2.5)] {
            let z = Point::new(r * t.cos(), r * t.sin()).unwrap();
            let v = apply_bergman(&s.function(), z, &s.measure(), &win, &q, 1.0).unwrap();
            let lo = 0.5f64.sqrt() * l1 * (r + 1.0).powf(-d);
            let hi = l1 * (r - 1.0).powf(-d);
            let val = v.value.norm();
            assert!(val >= lo && val <= hi, "alpha {a} z {z:?}: {val} not in [{lo}, {hi}]");
        }
    }
}

#[test]
fn sweep_rows_are_consistent() {
    let q = QuadratureSpec::default();
    let rows = delta_sweep(2.0, 0.0, &[0.5, 0.25, 0.125], &sweep_family().unwrap(), &q).unwrap();
    let mut prev = 0.0;
    for r in &rows {
        assert!(rel(r.ratio, r.pf_norm / r.f_norm) < 1e-15);
        let s = SharpInstance::new(2.0, 0.0, r.delta).unwrap();
        assert_eq!(r.f_norm, closed_form_f_norm(&s));
        assert!(r.bekolle > prev);
        prev = r.bekolle;
    }
    let near_one = delta_sweep(1.5, 1.0, &[0.999], &sweep_family().unwrap(), &q).unwrap();
    assert!((near_one[0].bekolle - 1.0).abs() < 0.01);
    assert!(delta_sweep(2.0, 0.0, &[1.5], &sweep_family().unwrap(), &q).is_err());
}

#[test]
fn power_law_fits() {
    let xs: Vec<f64> = (1..=8).map(|k| (k as f64).exp2()).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 3.5 * x.powf(-1.25)).collect();
    let f = fit_power_law(&xs, &ys).unwrap();
    assert!((f.slope + 1.25).abs() < 1e-12 && (f.intercept - 3.5f64.ln()).abs() < 1e-12);
    assert!((f.r_squared - 1.0).abs() < 1e-12);
    assert!(fit_power_law(&xs[..2], &ys[..2]).is_err());
    assert!(fit_power_law(&[1.0, 2.0, 3.0], &[1.0, -1.0, 2.0]).is_err());
}
