//! The limit curve `S = { |z^λ exp(1 - z^λ)| = 1, |z| <= 1 }` and the
//! functions `φ`, `τ` built from it.
//!
//! `|z^λ exp(1 - z^λ)| = exp(-λ Re φ(z))`, so the exterior of `S`, where the
//! modulus exceeds one, is the region `Re φ < 0`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `| |z^λ e^{1-z^λ}| - 1 |` for the on-curve class.
pub const ON_CURVE_TOL: f64 = 1e-9;

/// A point of `S` in the upper half of the principal sector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub xi: Complex64,
    pub arg: f64,
    /// `Im(ξ^λ - 1 - λ log ξ)`.
    pub tau: f64,
    /// Polyline length from the corner.
    pub arclength_hint: f64,
}

/// Position of a point relative to `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Exterior,
    Interior,
    OnCurve,
    OutsideUnitDisk,
}

/// `φ(z) = (z^λ - 1 - λ log z)/λ` on principal branches.
///
/// # Errors
/// [`Error::Domain`] at `z = 0`.
pub fn phi(z: Complex64, lambda: f64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("phi is undefined at 0".into()));
    }
    Ok((z.powf(lambda) - 1.0 - lambda * z.ln()) / lambda)
}

/// `|z^λ exp(1 - z^λ)|`.
pub fn szego_modulus(z: Complex64, lambda: f64) -> f64 {
    let u = z.powf(lambda);
    u.norm() * (1.0 - u.re).exp()
}

/// `τ = Im(ξ^λ - 1 - λ log ξ)`.
pub fn tau(xi: Complex64, lambda: f64) -> f64 {
    (xi.powf(lambda) - lambda * xi.ln()).im
}

/// Largest traced argument: `π` for `λ <= 1`, else `π/λ (1 - 1e-9)` to stay
/// off the `z^λ` branch cut.
pub fn max_arg(lambda: f64) -> f64 {
    if lambda <= 1.0 { PI } else { PI / lambda * (1.0 - 1e-9) }
}

/// Radius of `S` at argument `theta`, by bisection on `Re φ(r e^{iθ})` over `[1e-6, 1]`.
///
/// # Errors
/// [`Error::Bracketing`] when the sign pattern or monotonicity fails.
pub fn radius_at(theta: f64, lambda: f64) -> Result<f64> {
    let theta = theta.abs();
    if theta > max_arg(lambda) + 1e-15 {
        return Err(Error::Bracketing(theta));
    }
    let c = (lambda * theta).cos();
    // Re φ(r e^{iθ}) = (r^λ cos λθ - 1 - λ ln r)/λ, decreasing on (0, 1].
    let g = |r: f64| (r.powf(lambda) * c - 1.0 - lambda * r.ln()) / lambda;
    let (mut lo, mut hi) = (1e-6, 1.0);
    let (glo, ghi) = (g(lo), g(hi));
    if ghi > 1e-15 || glo < 0.0 {
        return Err(Error::Bracketing(theta));
    }
    if ghi >= -1e-300 {
        return Ok(1.0);
    }
    let mid_check = g(0.5 * (lo + hi));
    if !(mid_check < glo && mid_check > ghi) {
        return Err(Error::Bracketing(theta));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `m` samples of `S` from `ξ = 1` to the terminal argument, uniform in argument.
///
/// # Errors
/// [`Error::Parameter`] for `m < 2`; [`Error::Bracketing`] from the radius solve.
pub fn trace(lambda: f64, m: usize) -> Result<Vec<CurveSample>> {
    if m < 2 {
        return Err(Error::Parameter(format!("trace needs m >= 2, got {m}")));
    }
    let top = max_arg(lambda);
    let mut out: Vec<CurveSample> = Vec::with_capacity(m);
    let mut s = 0.0;
    for j in 0..m {
        let arg = top * j as f64 / (m - 1) as f64;
        let xi = Complex64::from_polar(radius_at(arg, lambda)?, arg);
        if let Some(prev) = out.last() {
            s += (xi - prev.xi).norm();
        }
        let t = if j == 0 { 0.0 } else { tau(xi, lambda) };
        out.push(CurveSample { xi, arg, tau: t, arclength_hint: s });
    }
    Ok(out)
}

/// Representative of `τ n/λ` modulo `2π` in `(-π, π]`.
pub fn tau_n(tau: f64, n: usize, lambda: f64) -> f64 {
    wrap_angle(tau * n as f64 / lambda)
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = x.rem_euclid(two_pi);
    if r > PI {
        r -= two_pi;
    }
    r
}

/// Sign classification of `|z^λ e^{1-z^λ}| - 1` inside the closed unit disk.
///
/// # Errors
/// [`Error::Domain`] at `z = 0`.
pub fn classify(z: Complex64, lambda: f64) -> Result<Region> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("classify is undefined at 0".into()));
    }
    if z.norm() > 1.0 + 1e-12 {
        return Ok(Region::OutsideUnitDisk);
    }
    let v = szego_modulus(z, lambda) - 1.0;
    Ok(if v.abs() <= ON_CURVE_TOL {
        Region::OnCurve
    } else if v > 0.0 {
        Region::Exterior
    } else {
        Region::Interior
    })
}

/// Distance from `z` to `S`, using the samples and their conjugates, refined
/// by projecting onto the nearest polyline segments and re-solving the radius
/// at the projected argument.
pub fn curve_distance(z: Complex64, samples: &[CurveSample], lambda: f64) -> f64 {
    if samples.is_empty() {
        return f64::INFINITY;
    }
    // Work in the upper half plane; S is symmetric under conjugation.
    let w = if z.im < 0.0 { z.conj() } else { z };
    let (mut best, mut bi) = (f64::INFINITY, 0);
    for (i, s) in samples.iter().enumerate() {
        let d = (w - s.xi).norm();
        if d < best {
            best = d;
            bi = i;
        }
    }
    let mut cands: Vec<f64> = Vec::new();
    for j in [bi.saturating_sub(1), bi] {
        if j + 1 >= samples.len() {
            continue;
        }
        let (a, b) = (samples[j].xi, samples[j + 1].xi);
        let ab = b - a;
        let t = ((w - a) * ab.conj()).re / ab.norm_sqr();
        let t = t.clamp(0.0, 1.0);
        // The chord is not on S; only its argument is used.
        cands.push((a + ab * t).arg());
    }
    for th in cands {
        if let Ok(r) = radius_at(th.clamp(0.0, max_arg(lambda)), lambda) {
            best = best.min((w - Complex64::from_polar(r, th)).norm());
        }
    }
    best
}

/// Writes samples as CSV with header `arg,re,im,tau`.
///
/// # Errors
/// I/O and CSV failures.
pub fn write_samples_csv<W: Write>(samples: &[CurveSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["arg", "re", "im", "tau"])?;
    for s in samples {
        w.write_record([s.arg.to_string(), s.xi.re.to_string(), s.xi.im.to_string(), s.tau.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phi_values() {
        assert!(phi(c(1.0, 0.0), 1.7).unwrap().norm() < 1e-16);
        let xi = c(0.0, 1.0 / std::f64::consts::E);
        assert!(phi(xi, 1.0).unwrap().re.abs() < 1e-15);
        // z = 0.5 lies inside: 0.5 e^{0.5} < 1 and Re φ > 0.
        let v = phi(c(0.5, 0.0), 1.0).unwrap().re;
        assert!((v - (-0.5 - 0.5f64.ln())).abs() < 1e-15 && v > 0.0);
        assert!(((-v).exp() - 0.5 * 0.5f64.exp()).abs() < 1e-15);
        assert!(phi(c(0.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn phi_local_expansion_at_corner() {
        for lambda in [0.7, 1.0, 2.0] {
            let h = 1e-4;
            let f = |x: f64| phi(c(x, 0.0), lambda).unwrap().re;
            let d1 = (f(1.0 + h) - f(1.0 - h)) / (2.0 * h);
            let d2 = (f(1.0 + h) - 2.0 * f(1.0) + f(1.0 - h)) / (h * h);
            assert!(d1.abs() < 1e-8);
            assert!((d2 - lambda).abs() < 1e-5);
        }
    }

    #[test]
    fn trace_lambda_one() {
        let s = trace(1.0, 513).unwrap();
        assert_eq!(s[0].xi, c(1.0, 0.0));
        assert_eq!(s[0].tau, 0.0);
        let mid = s[256];
        assert!((mid.arg - PI / 2.0).abs() < 1e-15);
        assert!((mid.xi.norm() - (-1.0f64).exp()).abs() < 1e-14);
        let last = s.last().unwrap();
        assert!((last.xi.re + 0.278_464_542_761_074).abs() < 1e-12);
        for w in s.windows(2) {
            assert!(w[1].xi.norm() < w[0].xi.norm());
        }
        for p in &s {
            assert!(phi(p.xi, 1.0).unwrap().re.abs() <= 1e-12);
            assert!(p.xi.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn trace_other_orders() {
        for lambda in [0.5, 0.8, 2.0, 3.0] {
            let s = trace(lambda, 200).unwrap();
            for p in &s {
                assert!(phi(p.xi, lambda).unwrap().re.abs() <= 1e-12);
                assert!(p.arg <= PI.min(PI / lambda) + 1e-12);
            }
        }
    }

    #[test]
    fn tau_n_examples() {
        assert_eq!(tau_n(0.0, 5, 1.0), 0.0);
        assert!(tau_n(2.0 * PI, 1, 1.0).abs() < 1e-15);
        assert!((tau_n(1.0, 7, 1.0) - (7.0 - 2.0 * PI)).abs() < 1e-14);
        assert_eq!(tau_n(PI, 1, 1.0), PI);
        assert_eq!(tau_n(-PI, 1, 1.0), PI);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(c(0.99, 0.0), 1.0).unwrap(), Region::Interior);
        assert_eq!(classify(c(1.0, 0.0), 1.0).unwrap(), Region::OnCurve);
        let xi = c(0.0, 1.0 / std::f64::consts::E);
        assert_eq!(classify(xi * 1.05, 1.0).unwrap(), Region::Exterior);
        assert_eq!(classify(xi * 0.95, 1.0).unwrap(), Region::Interior);
        assert_eq!(classify(c(2.0, 0.0), 1.0).unwrap(), Region::OutsideUnitDisk);
        assert!(classify(c(0.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn distance_examples() {
        let s = trace(1.0, 512).unwrap();
        assert!((curve_distance(c(0.0, 0.0), &s, 1.0) - 0.278_464_542_761_074).abs() < 1e-9);
        assert!((curve_distance(c(2.0, 0.0), &s, 1.0) - 1.0).abs() < 1e-12);
        assert!(curve_distance(s[100].xi, &s, 1.0) < 1e-12);
        assert!(curve_distance(s[100].xi.conj(), &s, 1.0) < 1e-12);
    }

    #[test]
    fn csv_rows() {
        let s = trace(1.0, 8).unwrap();
        let mut buf = Vec::new();
        write_samples_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 9);
        assert!(text.starts_with("arg,re,im,tau"));
    }
}
