use std::f64::consts::{E, PI};

use num_complex::Complex64;
use serde_json::json;

use super::*;
use crate::series::{make_family, partial_sum, Direction, GrowthSpec};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fam(name: &str, params: serde_json::Value) -> FunctionFamily {
    make_family(name, &params).unwrap()
}

fn xi_exp() -> Complex64 {
    c(0.0, 1.0 / E)
}

#[test]
fn z_n_at_i_tau_n_keeps_only_the_log_term() {
    let f = fam("exp", json!({}));
    let p = ArcPoint::new(&f, xi_exp(), 100).unwrap();
    let w = c(0.0, p.tau_n);
    let xi = p.xi();
    let want = xi * (1.0 + (100f64).ln() / (2.0 * (1.0 - xi) * 100.0));
    assert!((z_n_arc(&p, w, Variant::V1).unwrap() - want).norm() < 1e-15);
}

#[test]
fn z_n_frozen_value() {
    // Recomputed at 40 digits from the formula with tau_n = wrap(100 (1/e - pi/2)).
    let f = fam("exp", json!({}));
    let p = ArcPoint::new(&f, xi_exp(), 100).unwrap();
    assert!((p.tau_n + 0.911_167_725_933_286_7).abs() < 1e-12);
    let z = z_n_arc(&p, c(0.0, 0.0), Variant::V1).unwrap();
    assert!((z - c(2.076_819_811_837_563e-4, 0.376_426_580_275_225_0)).norm() < 1e-14);
}

#[test]
fn z_n_tends_to_xi() {
    let f = fam("exp", json!({}));
    let w = c(0.7, -0.3);
    let d: Vec<f64> = [1_000usize, 100_000, 10_000_000]
        .iter()
        .map(|&n| {
            let p = ArcPoint::new(&f, xi_exp(), n).unwrap();
            (z_n_arc(&p, w, Variant::V1).unwrap() - p.xi()).norm()
        })
        .collect();
    assert!(d[0] > d[1] && d[1] > d[2] && d[2] < 1e-5);
}

#[test]
fn corner_point_and_v2_errors() {
    let f = fam("exp", json!({}));
    assert_eq!(ArcPoint::new(&f, c(1.0, 0.0), 50).unwrap_err(), Error::CornerPoint);
    assert!(ArcPoint::new(&f, c(0.5, 0.5), 50).is_err());
    let p = ArcPoint::new(&f, xi_exp(), 50).unwrap();
    assert!(matches!(z_n_arc(&p, c(0.0, 0.0), Variant::V2), Err(Error::Precondition(_))));
}

#[test]
fn exp_limit_value() {
    let f = fam("exp", json!({}));
    let p = ArcPoint::at_arg(&f, 0.9, 80).unwrap();
    let xi = p.xi();
    let w = c(0.3, 1.1);
    let want = 1.0 - (-w).exp() / ((1.0 - xi) * (2.0 * PI).sqrt());
    assert!((arc_limit_value(&p, w).unwrap() - want).norm() < 1e-14);
    assert_eq!(arc_scaling(&p).unwrap().theorem, Theorem::ArcOneDir);
    assert!((arc_limit_value(&p, c(60.0, 0.0)).unwrap() - 1.0).norm() < 1e-20);
}

#[test]
fn sin_generic_limit_matches_stated_form() {
    let f = fam("sin", json!({}));
    for n in [60usize, 61] {
        let p = ArcPoint::at_arg(&f, 0.7, n).unwrap();
        let xi = p.xi();
        let s = if n % 2 == 0 { 1.0 } else { -1.0 };
        let want = (1.0 / (1.0 - xi) - s / (1.0 + xi)) / (2.0 * PI).sqrt();
        let g = generic_scaling(&p).unwrap();
        assert_eq!(g.theorem, Theorem::ArcTwoDirCaseEq);
        assert!((g.d - want).norm() < 1e-14, "n={n}");
    }
}

fn preset_cases() -> Vec<(FunctionFamily, Vec<f64>)> {
    vec![
        (fam("sin", json!({})), vec![0.4, 1.0, -0.8]),
        (fam("cos", json!({})), vec![0.4, 1.0, -0.8]),
        (fam("bessel", json!({"nu": 0.0})), vec![0.5, -1.1]),
        (fam("bessel", json!({"nu": 1.5})), vec![0.5, 1.3]),
        (fam("confluent", json!({"alpha": -0.5, "beta": -2.5})), vec![0.8, -0.6]),
        (fam("expint", json!({"p": 0.0, "q": 3.0})), vec![0.6, 1.2]),
        (fam("expint", json!({"p": 3.0, "q": 0.0})), vec![0.6, -1.2]),
        (fam("expint", json!({"p": 1.0, "q": 1.0, "poly": [1.0, 0.5]})), vec![0.9]),
        (fam("expint", json!({"p": 1.0, "q": 2.0, "r": 0.0})), vec![0.9]),
        (fam("airy_ai", json!({})), vec![0.3, -0.5]),
        (fam("airy_bi", json!({})), vec![0.3, -0.5]),
        (fam("parabolic_u", json!({"a": 1.3})), vec![0.4, -0.2]),
        (fam("parabolic_u", json!({"a": -2.0})), vec![0.4, -0.2]),
        (fam("parabolic_u", json!({"a": 0.0})), vec![0.4, -0.2]),
    ]
}

#[test]
fn presets_agree_with_generic_limits() {
    for (f, args) in preset_cases() {
        for arg in args {
            for n in [40usize, 41, 42, 43, 200] {
                let p = ArcPoint::at_arg(&f, arg, n).unwrap();
                let s = preset_scaling(&p).unwrap().unwrap();
                let g = generic_scaling(&p).unwrap();
                let tag = format!("{} {:?} arg={arg} n={n}", f.name, f.kind);
                assert_eq!(s.theorem, g.theorem, "{tag}");
                assert!((s.d - g.d).norm() <= 1e-12 * g.d.norm().max(1.0), "{tag}: {} vs {}", s.d, g.d);
                assert!((s.log_shift - g.log_shift).norm() < 1e-14, "{tag}");
                assert!((s.sigma - g.sigma).abs() < 1e-12, "{tag}");
            }
        }
    }
}

#[test]
fn predictions_are_roots_of_the_limit() {
    let mut cases = preset_cases();
    cases.push((fam("exp", json!({})), vec![0.5, 1.5, -2.0]));
    cases.push((fam("mittag_leffler", json!({"lambda": 2.0})), vec![0.3, -0.7]));
    for (f, args) in cases {
        for arg in args {
            let p = ArcPoint::at_arg(&f, arg, 120).unwrap();
            let recs = match arc_predicted_zeros(&p, -3..=3) {
                Ok(r) => r,
                Err(Error::Degenerate(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            let d = arc_scaling(&p).unwrap().d;
            for r in &recs {
                assert!(arc_limit_value(&p, r.w).unwrap().norm() < 1e-12, "{} arg={arg}", f.name);
                assert!(((-r.w).exp().norm() - 1.0 / d.norm()).abs() < 1e-12 / d.norm());
                assert!((r.expected_error_scale - (120f64).ln() / 120.0).abs() < 1e-15);
                assert!((r.z_unscaled - f.rotation * p.r_n * r.z_scaled).norm() < 1e-12 * r.z_unscaled.norm());
            }
        }
    }
}

#[test]
fn consecutive_predictions_are_spaced_by_two_pi_over_n() {
    let f = fam("confluent", json!({"alpha": -0.5, "beta": -2.5}));
    let p = ArcPoint::at_arg(&f, 0.8, 200).unwrap();
    let recs = arc_predicted_zeros(&p, -2..=2).unwrap();
    let xi = p.xi();
    let want = xi.norm() * 2.0 * PI / ((1.0 - xi).norm() * 200.0);
    for pair in recs.windows(2) {
        let gap = (pair[1].z_scaled - pair[0].z_scaled).norm();
        assert!((gap / want - 1.0).abs() < 1e-12);
    }
}

#[test]
fn conjugate_points_give_conjugate_predictions() {
    for f in [
        fam("exp", json!({})),
        fam("confluent", json!({"alpha": -0.5, "beta": -2.5})),
        fam("sin", json!({})),
        fam("expint", json!({"p": 3.0, "q": 0.0})),
    ] {
        let up = ArcPoint::at_arg(&f, 0.9, 77).unwrap();
        let down = ArcPoint::at_arg(&f, -0.9, 77).unwrap();
        let a = arc_predicted_zeros(&up, -2..=2).unwrap();
        let b = arc_predicted_zeros(&down, -2..=2).unwrap();
        for ra in &a {
            let hit = b.iter().any(|rb| (rb.z_scaled - ra.z_scaled.conj()).norm() < 1e-12);
            assert!(hit, "{}", f.name);
            let wb = down_conj_w(&b, ra.w);
            assert!(wb, "{}", f.name);
        }
    }
}

fn down_conj_w(b: &[PredictionRecord], w: Complex64) -> bool {
    b.iter().any(|rb| (rb.w - w.conj()).norm() < 1e-12)
}

#[test]
fn exp_arc_prediction_matches_a_root() {
    let f = fam("exp", json!({}));
    let n = 100;
    let p = ArcPoint::new(&f, xi_exp(), n).unwrap();
    let rec = &arc_predicted_zeros(&p, 0..=0).unwrap()[0];
    let poly = partial_sum(&f, n, RadiusMode::Standard).unwrap();
    let roots = crate::all_roots(&poly, 1e-11).unwrap();
    let best = roots.roots.iter().map(|z| (z - rec.z_scaled).norm()).fold(f64::INFINITY, f64::min);
    assert!(best <= 10.0 * rec.expected_error_scale, "best {best}");
}

#[test]
fn degenerate_constant_is_reported() {
    // Equal-exponent pair whose terms cancel at this n: A = -(ζ-ξ)/((1-ξ)ζ^{1-n}).
    let xi_arg: f64 = 0.8;
    let base = fam("exp", json!({}));
    let p0 = ArcPoint::at_arg(&base, xi_arg, 64).unwrap();
    let xi = p0.xi();
    let zeta = c(-1.0, 0.0);
    let amp = -(zeta - xi) / ((1.0 - xi) * zeta.powi(1 - 64));
    let mut f = base.clone();
    f.growth = GrowthSpec::one_direction(1.0, c(0.0, 0.0), PI / 4.0).with_direction(zeta, amp, c(0.0, 0.0));
    let p = ArcPoint::at_arg(&f, xi_arg, 64).unwrap();
    assert!(generic_scaling(&p).unwrap().d.norm() < 1e-12);
    assert!(matches!(arc_predicted_zeros(&p, 0..=0), Err(Error::Degenerate(_))));
    let p65 = ArcPoint::at_arg(&f, xi_arg, 65).unwrap();
    assert!(arc_predicted_zeros(&p65, 0..=0).is_ok());
}

#[test]
fn uncovered_tie_is_unsupported() {
    let mut f = fam("exp", json!({}));
    let zero = c(0.0, 0.0);
    let mut g = GrowthSpec::one_direction(1.0, zero, PI / 5.0);
    for k in 1..4 {
        g.directions.push(Direction::new(Complex64::from_polar(1.0, PI * k as f64 / 2.0), c(1.0, 0.0), zero));
    }
    g.validate().unwrap();
    f.growth = g;
    let p = ArcPoint::at_arg(&f, 0.5, 50).unwrap();
    assert!(matches!(generic_scaling(&p), Err(Error::Unsupported(_))));
}

#[test]
fn corner_gate_follows_the_exponent_gap() {
    let gated = fam("expint", json!({"p": 0.0, "q": 3.0}));
    assert!(matches!(
        corner_predicted_zeros(&gated, 200, 2, RadiusMode::Standard),
        Err(Error::Gated { .. })
    ));
    let open = fam("expint", json!({"p": 3.0, "q": 0.0}));
    assert_eq!(corner_predicted_zeros(&open, 200, 2, RadiusMode::Standard).unwrap().len(), 4);
    for (p, q) in [(0.0, 0.0), (0.0, 0.49), (0.0, 0.5), (1.0, 1.6), (2.0, 0.1), (0.3, 0.79)] {
        let f = fam("expint", json!({"p": p, "q": q}));
        let ok = p - q + 0.5 > 0.0;
        assert_eq!(corner_predicted_zeros(&f, 50, 1, RadiusMode::Standard).is_ok(), ok, "p={p} q={q}");
    }
    for (a, ok) in [(-0.4, true), (-0.7, false), (-2.0, false), (1.0, true)] {
        let f = fam("parabolic_u", json!({"a": a}));
        assert_eq!(corner_gate(&f).is_ok(), ok, "a={a}");
    }
}

#[test]
fn exp_corner_predictions() {
    let f = fam("exp", json!({}));
    let n = 400;
    let recs = corner_predicted_zeros(&f, n, 3, RadiusMode::Standard).unwrap();
    let ws = erfc_zeros(3).unwrap();
    assert_eq!(recs.len(), 6);
    for (j, w) in ws.iter().enumerate() {
        let up = &recs[2 * j];
        let down = &recs[2 * j + 1];
        let want = n as f64 + w * (2.0 * n as f64).sqrt();
        assert!((up.z_unscaled - want).norm() < 1e-10);
        assert!((down.z_unscaled - want.conj()).norm() < 1e-10);
        assert_eq!(up.theorem, Theorem::CornerErfc);
        assert!((up.expected_error_scale - 0.05).abs() < 1e-15);
    }
}

#[test]
fn corner_scaling_uses_lambda() {
    let f = fam("mittag_leffler", json!({"lambda": 2.0}));
    let recs = corner_predicted_zeros(&f, 100, 1, RadiusMode::Standard).unwrap();
    let w1 = erfc_zeros(1).unwrap()[0];
    assert!((recs[0].z_scaled - (1.0 + w1 / 10.0)).norm() < 1e-14);
    let corrected = corner_predicted_zeros(&f, 100, 1, RadiusMode::MittagLefflerCorrected).unwrap();
    let ratio = corrected[0].z_unscaled / recs[0].z_unscaled;
    assert!((ratio - (0.005f64).exp()).norm() < 1e-14);
}

#[test]
fn kkmm_terms() {
    let f = fam("exp", json!({}));
    let w1 = erfc_zeros(1).unwrap()[0];
    let z1 = kkmm_refined_zero(&f, w1, 100, 1).unwrap();
    assert!((z1 - (1.0 + 2f64.sqrt() * w1 / 10.0)).norm() < 1e-15);
    assert!(kkmm_refined_zero(&f, w1, 100, 5).is_err());
    assert!(kkmm_refined_zero(&fam("sin", json!({})), w1, 100, 2).is_err());
}

#[test]
fn kkmm_refined_zero_matches_a_root_at_n100() {
    let f = fam("exp", json!({}));
    let n = 100;
    let poly = partial_sum(&f, n, RadiusMode::Standard).unwrap();
    let roots = crate::all_roots(&poly, 1e-11).unwrap();
    for w in erfc_zeros(2).unwrap() {
        let z = kkmm_refined_zero(&f, w, n, 4).unwrap();
        let best = roots.roots.iter().map(|r| (r - z).norm()).fold(f64::INFINITY, f64::min);
        assert!(best < 5e-3, "best {best}");
    }
}

#[test]
fn kkmm_zeros_follow_the_corrected_parabola() {
    // x = y²/v² - (u/(3v)) y + (1 - u² - 5v²)/18 for the zero u + iv of erfc(w/√2),
    // in the plane of p_{n-1}(z); the residual decays like n^{-1/2}.
    let f = fam("exp", json!({}));
    let w1 = erfc_zeros(1).unwrap()[0];
    let (u, v) = (2f64.sqrt() * w1.re, 2f64.sqrt() * w1.im);
    let resid = |n: usize| {
        let z = n as f64 * kkmm_refined_zero(&f, w1, n, 4).unwrap();
        let (x, y) = (z.re, z.im);
        (x - (y * y / (v * v) - u / (3.0 * v) * y + (1.0 - u * u - 5.0 * v * v) / 18.0)).abs()
    };
    let r: Vec<f64> = (20..=80).step_by(10).map(resid).collect();
    for &x in &r {
        assert!(x < 0.5, "{r:?}");
    }
    assert!(r.last().unwrap() < &r[0]);
}

#[test]
fn width_disk_counts() {
    let f = fam("exp", json!({}));
    let poly = partial_sum(&f, 50, RadiusMode::Standard).unwrap();
    let roots = crate::all_roots(&poly, 1e-11).unwrap();
    assert_eq!(width_disk_count(&roots, 0.0, 1000.0, -1.0, 0.0), 0);
    assert_eq!(width_disk_count(&roots, 0.0, 1.0, 0.0, 10.0), 49);
}

#[test]
fn prediction_exports() {
    let f = fam("exp", json!({}));
    let recs = corner_predicted_zeros(&f, 50, 2, RadiusMode::Standard).unwrap();
    let mut csv_out = Vec::new();
    write_predictions_csv(&recs, &mut csv_out).unwrap();
    let text = String::from_utf8(csv_out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "family,theorem,n,k,w_re,w_im,z_scaled_re,z_scaled_im,z_unscaled_re,z_unscaled_im,expected_error_scale"
    );
    assert_eq!(lines.count(), 4);
    let mut json_out = Vec::new();
    write_predictions_json(&recs, &mut json_out).unwrap();
    let rows: Vec<PredictionRow> = serde_json::from_slice(&json_out).unwrap();
    assert_eq!(rows[0], PredictionRow::from(&recs[0]));
    assert_eq!(rows[0].theorem, "corner-erfc");
    let tagged = serde_json::to_string(&Theorem::ArcTwoDirCaseEq).unwrap();
    assert_eq!(tagged, "\"arc-two-dir-case-eq\"");
}
