//! Gamma function family: `ln Γ`, `1/Γ` and derivatives of `Γ` on the real line.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use super::scaled::ScaledComplex;
use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)) for k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series
}

/// `ln Γ(z)` for `Re z >= 1/2`, continuous branch.
fn log_gamma_right(z: Complex64) -> Complex64 {
    let mut shifted = z;
    let mut prod = Complex64::new(1.0, 0.0);
    while shifted.norm() < 12.0 {
        prod *= shifted;
        shifted += 1.0;
    }
    stirling(shifted) - prod.ln()
}

fn wrap_pi(x: f64) -> f64 {
    let mut y = x - 2.0 * PI * (x / (2.0 * PI)).round();
    if y <= -PI {
        y += 2.0 * PI;
    }
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

fn reduce2(x: f64) -> f64 {
    x - 2.0 * (x / 2.0).round()
}

/// `(sin πr, cos πr)` for `r ∈ [-1, 1]`, exact zeros at integers.
fn sincos_pi_reduced(r: f64) -> (f64, f64) {
    if r > 0.5 {
        let t = PI * (1.0 - r);
        (t.sin(), -t.cos())
    } else if r < -0.5 {
        let t = PI * (-1.0 - r);
        (t.sin(), -t.cos())
    } else {
        let t = PI * r;
        (t.sin(), t.cos())
    }
}

/// `sin(π z)` with exact argument reduction.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let r = reduce2(z.re);
    let (s, c) = sincos_pi_reduced(r);
    let y = PI * z.im;
    Complex64::new(s * y.cosh(), c * y.sinh())
}

/// `ln sin(π z)`, safe for large `|Im z|`.
fn log_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() <= 20.0 {
        return sin_pi(z).ln();
    }
    let w = Complex64::new(reduce2(z.re), z.im.abs());
    let i = Complex64::i();
    let v = -i * PI * w + (0.5 * i).ln() + (1.0 - (2.0 * i * PI * w).exp()).ln();
    if z.im < 0.0 {
        v.conj()
    } else {
        v
    }
}

fn near_pole(z: Complex64) -> Option<f64> {
    let k = z.re.round();
    if k <= 0.0 && (z - Complex64::new(k, 0.0)).norm() <= 1e-14 {
        Some(k)
    } else {
        None
    }
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Principal-branch `ln Γ(z)`: the imaginary part is reduced to `(-π, π]`.
///
/// # Errors
/// [`Error::GammaPole`] when `z` lies within `1e-14` of a nonpositive integer.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    let v = log_gamma_unwrapped(z)?;
    Ok(Complex64::new(v.re, wrap_pi(v.im)))
}

fn log_gamma_unwrapped(z: Complex64) -> Result<Complex64> {
    if let Some(k) = near_pole(z) {
        return Err(Error::GammaPole(k));
    }
    if z.re >= 0.5 {
        Ok(log_gamma_right(z))
    } else {
        Ok(Complex64::new(PI.ln(), 0.0) - log_sin_pi(z) - log_gamma_right(1.0 - z))
    }
}

/// `Γ(z)`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// `Γ(x)` for real `x`.
/// Exact at positive integers up to `171`.
pub fn gamma_real(x: f64) -> Result<f64> {
    if x >= 1.0 && x <= 171.0 && x.fract() == 0.0 {
        return Ok((2..x as u32).fold(1.0, |f, i| f * i as f64));
    }
    Ok(gamma(Complex64::new(x, 0.0))?.re)
}

/// `ln k!` for a nonnegative integer.
pub fn ln_factorial(k: usize) -> f64 {
    if k < 2 {
        return 0.0;
    }
    log_gamma_right(Complex64::new(k as f64 + 1.0, 0.0)).re
}

/// `1/Γ(z)`, entire; exactly zero at nonpositive integers.
pub fn reciprocal_gamma(z: Complex64) -> Complex64 {
    scaled_reciprocal_gamma(z).to_complex()
}

/// `1/Γ(z)` in scaled form, safe far beyond the `f64` range.
pub fn scaled_reciprocal_gamma(z: Complex64) -> ScaledComplex {
    if is_nonpositive_integer(z) {
        return ScaledComplex::ZERO;
    }
    if z.re >= 0.5 {
        ScaledComplex::from_log(-log_gamma_right(z))
    } else if z.im.abs() <= 20.0 {
        ScaledComplex::from_complex(sin_pi(z) / PI) * ScaledComplex::from_log(log_gamma_right(1.0 - z))
    } else {
        ScaledComplex::from_log(log_sin_pi(z) - PI.ln() + log_gamma_right(1.0 - z))
    }
}

/// `Γ(z)` in scaled form.
pub fn scaled_gamma(z: Complex64) -> Result<ScaledComplex> {
    Ok(ScaledComplex::from_log(log_gamma_unwrapped(z)?))
}

/// `Γ^{(k)}(a)` for real `a > 0` by a Cauchy integral on a circle around `a`.
///
/// The radius is `1/2`, shrunk to `a/2` when the pole at zero would be too close.
pub fn gamma_derivative(a: f64, k: usize) -> Result<f64> {
    if a <= 0.0 {
        return Err(Error::Parameter(format!("gamma_derivative needs a > 0, got {a}")));
    }
    let r = if a > 1.0 { 0.5 } else { 0.5 * a };
    let m = 128;
    let mut acc = 0.0;
    for j in 0..m {
        let theta = 2.0 * PI * (j as f64 + 0.5) / m as f64;
        let u = Complex64::from_polar(1.0, theta);
        let g = gamma(Complex64::new(a, 0.0) + u * r)?;
        acc += (g * Complex64::from_polar(1.0, -(k as f64) * theta)).re;
    }
    let kfact = (1..=k).fold(1.0, |f, i| f * i as f64);
    Ok(acc * kfact / (m as f64 * r.powi(k as i32)))
}

/// `ln 2`, re-exported for callers working in base-2 exponents.
pub const LN2: f64 = LN_2;
