use num_complex::Complex64;
use serde_json::json;

use super::*;
use crate::curve::trace;
use crate::predict::{arc_predicted_zeros, Theorem};
use crate::series::make_family;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn exp() -> FunctionFamily {
    make_family("exp", &json!({})).unwrap()
}

fn record(z: Complex64, scale: f64, k: i64) -> PredictionRecord {
    PredictionRecord {
        family: "exp".into(),
        theorem: Theorem::ArcOneDir,
        k,
        w: c(0.0, 0.0),
        z_scaled: z,
        z_unscaled: z,
        n: 10,
        expected_error_scale: scale,
    }
}

fn root_set(roots: Vec<Complex64>) -> RootSet {
    RootSet {
        family: "exp".into(),
        n: roots.len() + 1,
        r_n: 1.0,
        rotation: c(1.0, 0.0),
        residuals: vec![0.0; roots.len()],
        roots,
        iterations: 0,
        converged: true,
        clusters: vec![],
        warnings: vec![],
    }
}

#[test]
fn exact_predictions_match_with_zero_error() {
    let roots = vec![c(0.5, 0.5), c(0.5, -0.5), c(-0.3, 0.1)];
    let preds: Vec<_> = roots.iter().enumerate().map(|(k, z)| record(*z, 0.01, k as i64)).collect();
    let r = match_predictions(&preds, &root_set(roots), DEFAULT_RADIUS_FACTOR);
    assert_eq!(r.pairs.len(), 3);
    assert!(r.pairs.iter().all(|p| p.abs_error == 0.0));
    assert_eq!(r.unmatched_predictions, 0);
}

#[test]
fn matching_is_injective() {
    let roots = vec![c(0.5, 0.0), c(0.9, 0.0)];
    let preds = vec![record(c(0.51, 0.0), 0.1, 0), record(c(0.52, 0.0), 0.1, 1)];
    let r = match_predictions(&preds, &root_set(roots), 1.0);
    assert_eq!(r.pairs.len(), 1);
    assert_eq!(r.pairs[0].prediction.k, 0);
    assert_eq!(r.unmatched_predictions, 1);
    assert_eq!(r.unmatched_roots_near_region, 0);
    let preds = vec![record(c(0.51, 0.0), 0.5, 0), record(c(0.52, 0.0), 0.5, 1)];
    let r = match_predictions(&preds, &root_set(vec![c(0.5, 0.0), c(0.9, 0.0)]), 1.0);
    assert_eq!(r.pairs.len(), 2);
    assert_ne!(r.pairs[0].matched_root, r.pairs[1].matched_root);
}

#[test]
fn matching_commutes_with_conjugation() {
    let roots = vec![c(0.4, 0.3), c(0.4, -0.3), c(0.7, 0.6), c(0.7, -0.6)];
    let preds = vec![record(c(0.41, 0.31), 0.05, 0), record(c(0.69, -0.58), 0.05, 1)];
    let conj_preds: Vec<_> = preds.iter().map(|p| record(p.z_scaled.conj(), 0.05, p.k)).collect();
    let a = match_predictions(&preds, &root_set(roots.clone()), 1.0);
    let b = match_predictions(&conj_preds, &root_set(roots), 1.0);
    for (x, y) in a.pairs.iter().zip(&b.pairs) {
        assert_eq!(x.matched_root.conj(), y.matched_root);
        assert!((x.abs_error - y.abs_error).abs() < 1e-15);
    }
}

#[test]
fn rate_fit_synthetic() {
    let ns = [50usize, 100, 200, 400, 800];
    let e: Vec<_> = ns.iter().map(|&n| (n, (n as f64).ln() / n as f64)).collect();
    let f = rate_fit(&e, RateModel::LognOverN).unwrap();
    assert!((f.fitted_exponent + 1.0).abs() < 1e-12 && (f.fitted_constant - 1.0).abs() < 1e-12);
    assert!(f.r_squared > 0.999);
    let e: Vec<_> = ns.iter().map(|&n| (n, 3.0 / (n as f64).sqrt())).collect();
    let f = rate_fit(&e, RateModel::InvSqrtN).unwrap();
    assert!((f.fitted_exponent + 0.5).abs() < 1e-12 && (f.fitted_constant - 3.0).abs() < 1e-11);
    assert!(matches!(rate_fit(&e[..2], RateModel::InvN), Err(Error::Insufficient(_))));
    let bad = [(10, 1.0), (20, 0.0), (40, 0.5)];
    assert!(matches!(rate_fit(&bad, RateModel::CustomPower), Err(Error::Degenerate(_))));
}

#[test]
fn buckholtz_and_disk() {
    let f = exp();
    for n in [25, 100] {
        let b = buckholtz_check(&f, n).unwrap();
        assert_eq!(b.n, n);
        assert!(b.pass, "{b:?}");
        assert!(enestrom_kakeya_check(&f, n).unwrap().pass);
    }
    let sin = make_family("sin", &json!({})).unwrap();
    assert!(matches!(buckholtz_check(&sin, 25), Err(Error::Precondition(_))));
}

#[test]
fn exterior_rate_for_exp() {
    let r = exterior_approach_fit(&exp(), &[100, 200, 400], (0.5, 1.0)).unwrap();
    assert!((r.target - 0.5).abs() < 1e-12);
    assert!((0.25..=0.75).contains(&r.fit.fitted_constant), "{r:?}");
    assert!(!r.model_mismatch);
    assert!(r.rows.iter().all(|row| row.all_exterior));
}

#[test]
fn roots_on_the_curve_flag_a_mismatch() {
    let f = exp();
    let on_curve: Vec<Complex64> = trace(1.0, 64).unwrap().iter().flat_map(|s| [s.xi, s.xi.conj()]).collect();
    let sets: Vec<RootSet> = [100, 200, 400]
        .iter()
        .map(|&n| RootSet { n, ..root_set(on_curve.clone()) })
        .collect();
    let r = exterior_from_roots(&f, &sets, (0.5, 1.0)).unwrap();
    assert!(r.fit.fitted_constant.abs() < 1e-10);
    assert!(r.model_mismatch);
    let few = vec![RootSet { n: 100, ..root_set(vec![c(0.5, 0.5)]) }];
    assert!(matches!(exterior_from_roots(&f, &few, (0.5, 1.0)), Err(Error::Insufficient(_))));
}

#[test]
fn corner_ratio_limit() {
    let rows = ratio_limit_check(&exp(), RatioSite::Corner, &[c(-1.0, 0.0)], &[400]).unwrap();
    let want = 1.0 - 0.5 * erfc(c(1.0 / 2f64.sqrt(), 0.0)).re;
    assert!((rows[0].predicted.re - want).abs() < 1e-14);
    assert!(rows[0].error < 2e-4);
    assert!(matches!(
        ratio_limit_check(&exp(), RatioSite::Corner, &[c(0.5, 0.0)], &[100]),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn arc_ratio_limits() {
    let xi = c(0.0, (-1f64).exp());
    let rows = ratio_limit_check(&exp(), RatioSite::Arc { xi }, &[c(0.0, 0.0)], &[100, 400, 1600]).unwrap();
    assert!(rows[0].error > rows[1].error && rows[1].error > rows[2].error, "{rows:?}");
    let rows = ratio_limit_check(&exp(), RatioSite::Arc { xi }, &[c(30.0, 0.0)], &[200]).unwrap();
    assert!((rows[0].measured - 1.0).norm() < 1e-6);
}

#[test]
fn ratio_errors_decrease_along_n() {
    let ns = [50, 100, 200, 400];
    let corner = [c(-0.5, 0.0), c(-1.0, 0.0), c(-1.0, 1.0), c(-1.0, -1.0)];
    let arc = [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
    let xi = c(0.0, (-1f64).exp());
    for (site, ws) in [(RatioSite::Corner, &corner[..]), (RatioSite::Arc { xi }, &arc[..])] {
        let rows = ratio_limit_check(&exp(), site, ws, &ns).unwrap();
        for w in ws {
            let e: Vec<f64> = rows.iter().filter(|r| r.w == *w).map(|r| r.error).collect();
            assert!(decreasing_with_one_inversion(&e), "{site:?} {w} {e:?}");
        }
    }
}

fn band_predictions(fam: &FunctionFamily, n: usize) -> Vec<PredictionRecord> {
    let mut out = Vec::new();
    for j in 3..=12 {
        for s in [1.0, -1.0] {
            let p = ArcPoint::at_arg(fam, s * j as f64 / 10.0, n).unwrap();
            out.extend(arc_predicted_zeros(&p, 0..=0).unwrap());
        }
    }
    out
}

#[test]
fn exp_arc_predictions_match_at_200() {
    let f = exp();
    let rs = &roots_for(&f, &[200], RadiusMode::Standard).unwrap()[0];
    let preds = band_predictions(&f, 200);
    let r = match_predictions(&preds, rs, DEFAULT_RADIUS_FACTOR);
    let good = r.pairs.iter().filter(|p| p.normalized_error <= 10.0).count();
    assert!(good as f64 >= 0.9 * preds.len() as f64);
}

#[test]
fn error_scale_law() {
    let ns = [50, 100, 200, 400];
    for fam in [exp(), make_family("confluent", &json!({"alpha": -0.5, "beta": -2.5})).unwrap()] {
        for rs in roots_for(&fam, &ns, RadiusMode::Standard).unwrap() {
            let preds = band_predictions(&fam, rs.n);
            let mut e: Vec<f64> = nearest_errors(&preds, &rs)
                .iter()
                .zip(&preds)
                .map(|(m, p)| m.unwrap().0 / p.expected_error_scale)
                .collect();
            // Exp errors decay faster than log n / n, so only the upper side is asserted.
            let med = median(&mut e);
            assert!(med > 0.0 && med <= 10.0, "{} n={} {med}", fam.name, rs.n);
        }
    }
}

#[test]
fn table_schemas() {
    let rs = root_set(vec![c(0.5, 0.25)]);
    let mut buf = Vec::new();
    write_csv(&root_rows(&rs), &mut buf).unwrap();
    assert!(String::from_utf8(buf).unwrap().starts_with("family,n,re,im,residual\n"));
    let rep = match_predictions(&[record(c(0.5, 0.25), 0.1, 3)], &rs, 1.0);
    let mut buf = Vec::new();
    write_csv(&match_rows(&rep), &mut buf).unwrap();
    assert!(String::from_utf8(buf)
        .unwrap()
        .starts_with("family,n,theorem,k,w_re,w_im,pred_re,pred_im,root_re,root_im,abs_err,norm_err\n"));
    let fit = rate_fit(&[(10, 0.1), (20, 0.05), (40, 0.025)], RateModel::InvN).unwrap();
    let mut buf = Vec::new();
    write_csv(&[rate_row("exp", "synthetic", &fit)], &mut buf).unwrap();
    assert!(String::from_utf8(buf).unwrap().starts_with("family,check,model,constant,exponent,r2\n"));
    let mut buf = Vec::new();
    write_json(&root_rows(&rs), &mut buf).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    assert_eq!(v[0]["residual"], json!(0.0));
}
