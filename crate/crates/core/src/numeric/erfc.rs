//! Complementary error function and its zeros.
//!
//! On the closed right half-plane `erfc(z) = exp(-z²) w(iz)`, where the
//! Faddeeva function `w` is evaluated with Weideman's rational expansion in
//! `(L + iζ)/(L - iζ)`. The left half-plane follows from `erfc(-z) = 2 - erfc(z)`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const WEIDEMAN_N: usize = 40;

struct Weideman {
    l: f64,
    coeffs: Vec<f64>,
}

fn weideman() -> &'static Weideman {
    static TABLE: OnceLock<Weideman> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = WEIDEMAN_N;
        let m = 2 * n;
        let l = (n as f64 / 2f64.sqrt()).sqrt();
        // Samples of exp(-t²)(L²+t²) on the tangent grid, k = -m+1..m-1.
        let f: Vec<(i64, f64)> = (-(m as i64) + 1..m as i64)
            .map(|k| {
                let theta = k as f64 * PI / m as f64;
                let t = l * (theta / 2.0).tan();
                (k, (-t * t).exp() * (l * l + t * t))
            })
            .collect();
        let coeffs = (1..=n)
            .map(|j| {
                let s: f64 = f
                    .iter()
                    .map(|&(k, v)| v * (PI * j as f64 * k as f64 / m as f64).cos())
                    .sum();
                s / (2 * m) as f64
            })
            .collect();
        Weideman { l, coeffs }
    })
}

/// Faddeeva function `w(ζ) = exp(-ζ²) erfc(-iζ)` for `Im ζ >= 0`.
fn faddeeva_upper(zeta: Complex64) -> Complex64 {
    let tab = weideman();
    let i = Complex64::i();
    let denom = tab.l - i * zeta;
    let big_z = (tab.l + i * zeta) / denom;
    let mut p = Complex64::new(0.0, 0.0);
    for &a in tab.coeffs.iter().rev() {
        p = p * big_z + a;
    }
    2.0 * p / (denom * denom) + 1.0 / (PI.sqrt() * denom)
}

fn erfc_right(z: Complex64) -> Complex64 {
    let w = faddeeva_upper(Complex64::i() * z);
    let e = -z * z;
    if e.re.abs() < 700.0 {
        e.exp() * w
    } else {
        (e + w.ln()).exp()
    }
}

/// Complementary error function on the whole complex plane.
pub fn erfc(z: Complex64) -> Complex64 {
    if z.re >= 0.0 {
        erfc_right(z)
    } else {
        2.0 - erfc_right(-z)
    }
}

/// `erf(z) = 1 - erfc(z)`.
pub fn erf(z: Complex64) -> Complex64 {
    1.0 - erfc(z)
}

/// Derivative `erfc'(z) = -2 exp(-z²)/√π`.
pub fn erfc_derivative(z: Complex64) -> Complex64 {
    -2.0 * (-z * z).exp() / PI.sqrt()
}

/// Seed for the `k`-th zero (k >= 1): solve `s² = -2πik - ln(2√π s)` by
/// fixed-point iteration and return `-s`.
fn zero_seed(k: usize) -> Complex64 {
    let two_pi_k = 2.0 * PI * k as f64;
    let mut s = Complex64::from_polar(two_pi_k.sqrt(), -PI / 4.0);
    for _ in 0..8 {
        let rhs = Complex64::new(0.0, -two_pi_k) - (2.0 * PI.sqrt() * s).ln();
        s = rhs.sqrt();
        if s.re < 0.0 {
            s = -s;
        }
    }
    -s
}

/// The first `count` zeros of `erfc` in the upper half-plane, ordered by modulus.
///
/// # Errors
/// [`Error::NonConvergence`] if Newton refinement from the asymptotic seed stalls,
/// leaves the sector `π/2 < arg w < 3π/4`, or breaks the modulus ordering.
pub fn erfc_zeros(count: usize) -> Result<Vec<Complex64>> {
    if count == 0 {
        return Err(Error::Parameter("count must be at least 1".into()));
    }
    let mut out: Vec<Complex64> = Vec::with_capacity(count);
    for k in 1..=count {
        let mut z = zero_seed(k);
        let mut converged = false;
        for _ in 0..60 {
            let step = erfc(z) / erfc_derivative(z);
            z -= step;
            if step.norm() <= 1e-15 * z.norm() {
                converged = true;
                break;
            }
        }
        let scale = erfc_right(-z).norm();
        let arg = z.arg();
        let residual_ok = erfc(z).norm() <= 1e-10 * scale;
        let sector_ok = arg > PI / 2.0 && arg < 3.0 * PI / 4.0;
        let order_ok = out.last().is_none_or(|p| p.norm() < z.norm());
        if !(converged || residual_ok) || !residual_ok || !sector_ok || !order_ok {
            return Err(Error::NonConvergence(format!("erfc zero {k} from seed {}", zero_seed(k))));
        }
        out.push(z);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn value_at_zero() {
        assert!((erfc(c(0.0, 0.0)) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn value_at_ten_matches_asymptotic() {
        let v = erfc(c(10.0, 0.0));
        let asym = (-100f64).exp() / (10.0 * PI.sqrt()) * (1.0 - 1.0 / 200.0 + 3.0 / 40000.0);
        assert!(v.re > 0.0 && v.re <= 1e-40);
        assert!(v.im.abs() < 1e-60);
        assert!((v.re - asym).abs() < 3e-6 * asym);
    }

    #[test]
    fn reference_values() {
        // Reference values from a 30-digit evaluation.
        let cases = [
            (c(1.0, 0.0), c(0.157_299_207_050_285_13, 0.0)),
            (c(0.5, 2.0), c(-12.839_985_667_741_279, 1.042_992_500_831_420_3)),
            (c(3.0, -1.0), c(5.761_386_798_623_760_4e-5, 7.717_956_381_378_014e-7)),
        ];
        for (z, want) in cases {
            let got = erfc(z);
            assert!((got - want).norm() < 1e-12 * want.norm(), "{z}: {got} vs {want}");
        }
    }

    #[test]
    fn first_two_zeros() {
        let zs = erfc_zeros(2).unwrap();
        assert!((zs[0] - c(-1.35481, 1.99147)).norm() < 1e-4);
        assert!((zs[1] - c(-2.17704, 2.69115)).norm() < 1e-4);
        assert!((zs[0].re + zs[0].im - 0.636_657).abs() < 1e-5);
    }

    #[test]
    fn many_zeros_ordered_in_sector() {
        let zs = erfc_zeros(25).unwrap();
        for pair in zs.windows(2) {
            assert!(pair[0].norm() < pair[1].norm());
        }
    }
}
