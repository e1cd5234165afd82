//! Numerical integration: adaptive Gauss–Kronrod, tanh-sinh, and Gauss–Jacobi rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::log_gamma;
use crate::error::{Error, Result};

/// Value, error estimate and evaluation count of a quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 5000;

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    let value = k * h;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite integrand on [{a}, {b}]")));
    }
    let error = ((k - g) * h).norm();
    Ok(Panel { a, b, value, error })
}

/// Adaptive Gauss–Kronrod (7/15) for complex integrands with bisection of the
/// worst panel. An infinite upper limit is mapped by `t = a + s/(1-s)`.
///
/// # Errors
/// [`Error::Tolerance`] with the best estimate if the request is not met.
pub fn integrate_adaptive_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    integrate_with(f, a, b, tol, tol)
}

/// Real-valued form of [`integrate_adaptive_complex`].
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    integrate_with(|t| Complex64::new(f(t), 0.0), a, b, tol, tol)
}

/// Adaptive quadrature with separate relative and absolute targets:
/// stops when the estimate is below `max(rel·|value|, abs)`.
pub fn integrate_with<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    rel: f64,
    abs: f64,
) -> Result<QuadratureResult> {
    if a == b {
        return Ok(QuadratureResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            evaluations: 1,
        });
    }
    if b.is_infinite() {
        if b < 0.0 {
            return Err(Error::Parameter("only +inf upper limits are supported".into()));
        }
        let g = |s: f64| {
            let d = 1.0 - s;
            f(a + s / d) / (d * d)
        };
        return integrate_finite(&g, 0.0, 1.0, rel, abs);
    }
    integrate_finite(&f, a, b, rel, abs)
}

fn integrate_finite<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, rel: f64, abs: f64) -> Result<QuadratureResult> {
    let mut heap = BinaryHeap::new();
    let first = kronrod(f, a, b)?;
    let mut value = first.value;
    let mut error = first.error;
    heap.push(first);
    let mut evaluations = 15;
    while error > (rel * value.norm()).max(abs) {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Tolerance {
                value: value.re,
                error_estimate: error,
            });
        }
        let worst = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point.
            return Err(Error::Tolerance {
                value: value.re,
                error_estimate: error,
            });
        }
        let left = kronrod(f, worst.a, mid)?;
        let right = kronrod(f, mid, worst.b)?;
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Re-sum occasionally to cancel drift in the running totals.
        if heap.len() % 64 == 0 {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    value = heap.iter().map(|p| p.value).sum();
    error = heap.iter().map(|p| p.error).sum();
    Ok(QuadratureResult {
        value,
        error_estimate: error,
        evaluations,
    })
}

/// Tanh-sinh quadrature on a finite interval, refined by halving the step
/// until successive levels agree. Tolerates integrable endpoint singularities;
/// nodes near `a` are exact when `a = 0`, so place a singular endpoint there.
pub fn integrate_tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    let half = 0.5 * (b - a);
    let pi2 = std::f64::consts::FRAC_PI_2;
    // Node at parameter t; distances to each end are formed without cancellation.
    let eval = |t: f64| -> f64 {
        let u = pi2 * t.sinh();
        let w = pi2 * t.cosh() / u.cosh().powi(2);
        let e = (2.0 * u.abs()).exp();
        let dist = 2.0 * half / (e + 1.0);
        let x = if u > 0.0 { b - dist } else { a + dist };
        if dist <= 0.0 || x <= a || x >= b {
            return 0.0;
        }
        let fx = f(x);
        if fx.is_finite() {
            fx * w * half
        } else {
            0.0
        }
    };
    let tmax = 6.5;
    let mut h = 0.5;
    let mut evaluations = 1;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= tmax {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        evaluations += 2;
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= tmax {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            evaluations += 2;
            k += 2;
        }
        let cur = sum * h;
        let err = (cur - prev).abs();
        if err <= tol * cur.abs().max(1e-300) || err == 0.0 {
            return Ok(QuadratureResult {
                value: Complex64::new(cur, 0.0),
                error_estimate: err,
                evaluations,
            });
        }
        prev = cur;
    }
    Err(Error::Tolerance {
        value: prev,
        error_estimate: f64::NAN,
    })
}

/// Gauss–Jacobi rule for the weight `(1-t)^q (1+t)^p` on `[-1, 1]` by the
/// Golub–Welsch eigenvalue method. Returns `(nodes, weights)` with nodes ascending.
///
/// # Errors
/// [`Error::Parameter`] if `p <= -1`, `q <= -1` or `m == 0`.
pub fn gauss_jacobi_nodes(p: f64, q: f64, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if p <= -1.0 || q <= -1.0 || m == 0 {
        return Err(Error::Parameter(format!(
            "Gauss–Jacobi needs p, q > -1 and m >= 1 (p={p}, q={q}, m={m})"
        )));
    }
    let (alpha, beta) = (q, p);
    let ab = alpha + beta;
    let mu0 = ((ab + 1.0) * std::f64::consts::LN_2
        + log_gamma(Complex64::new(alpha + 1.0, 0.0))?.re
        + log_gamma(Complex64::new(beta + 1.0, 0.0))?.re
        - log_gamma(Complex64::new(ab + 2.0, 0.0))?.re)
        .exp();
    let diag = |k: usize| -> f64 {
        if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            let s = 2.0 * k as f64 + ab;
            (beta * beta - alpha * alpha) / (s * (s + 2.0))
        }
    };
    let off = |k: usize| -> f64 {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let b = if k == 1 {
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        b.sqrt()
    };
    let mut j = DMatrix::<f64>::zeros(m, m);
    for k in 0..m {
        j[(k, k)] = diag(k);
        if k + 1 < m {
            let o = off(k + 1);
            j[(k, k + 1)] = o;
            j[(k + 1, k)] = o;
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(pairs.into_iter().unzip())
}
