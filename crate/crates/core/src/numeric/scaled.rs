//! Complex numbers stored as a mantissa and a base-2 exponent.
//!
//! Partial sums of order-λ entire functions combine factors such as
//! `r_n^k / k!` whose magnitudes leave the `f64` range long before the
//! polynomials become hard to solve. [`ScaledComplex`] keeps the mantissa
//! modulus in `[1, 2)` and carries the binary exponent separately.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Multiply `x` by `2^e` without intermediate overflow or double rounding.
pub fn ldexp(x: f64, e: i64) -> f64 {
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if !x.is_finite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

fn ldexp_c(z: Complex64, e: i64) -> Complex64 {
    Complex64::new(ldexp(z.re, e), ldexp(z.im, e))
}

/// A complex value `mantissa * 2^exponent` with `|mantissa|` in `[1, 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledComplex {
    mantissa: Complex64,
    exponent: i64,
}

impl Default for ScaledComplex {
    fn default() -> Self {
        Self::ZERO
    }
}

impl ScaledComplex {
    pub const ZERO: ScaledComplex = ScaledComplex {
        mantissa: Complex64::new(0.0, 0.0),
        exponent: 0,
    };
    pub const ONE: ScaledComplex = ScaledComplex {
        mantissa: Complex64::new(1.0, 0.0),
        exponent: 0,
    };

    /// Builds `mantissa * 2^exponent` and normalizes it.
    pub fn new(mantissa: Complex64, exponent: i64) -> Self {
        if mantissa.re == 0.0 && mantissa.im == 0.0 {
            return Self::ZERO;
        }
        if !(mantissa.re.is_finite() && mantissa.im.is_finite()) {
            return ScaledComplex { mantissa, exponent };
        }
        // Pre-shrink so the modulus cannot overflow.
        let (m, e) = if mantissa.re.abs() > 1e300 || mantissa.im.abs() > 1e300 {
            (mantissa / 16.0, exponent + 4)
        } else {
            (mantissa, exponent)
        };
        let shift = m.norm().log2().floor() as i64;
        let mut m = ldexp_c(m, -shift);
        let mut e = e + shift;
        let mut a = m.norm();
        while a >= 2.0 {
            m /= 2.0;
            e += 1;
            a = m.norm();
        }
        while a < 1.0 {
            m *= 2.0;
            e -= 1;
            a = m.norm();
        }
        ScaledComplex {
            mantissa: m,
            exponent: e,
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, 0)
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), 0)
    }

    /// The value `exp(l)` for a complex logarithm `l`.
    pub fn from_log(l: Complex64) -> Self {
        if l.re == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let e = (l.re / std::f64::consts::LN_2).floor();
        let r = l.re - e * std::f64::consts::LN_2;
        let m = Complex64::from_polar(r.exp(), l.im);
        Self::new(m, e as i64)
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    /// Converts back to an ordinary complex value (may overflow to infinity
    /// or underflow to zero).
    pub fn to_complex(&self) -> Complex64 {
        ldexp_c(self.mantissa, self.exponent)
    }

    /// Natural logarithm with the principal argument.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(
            self.log_abs(),
            self.mantissa.im.atan2(self.mantissa.re),
        )
    }

    /// `ln |self|`, `-inf` for zero.
    pub fn log_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.norm().ln() + self.exponent as f64 * std::f64::consts::LN_2
    }

    /// `log2 |self|`, `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.norm().log2() + self.exponent as f64
    }

    /// `|self|` as a float (may overflow).
    pub fn abs(&self) -> f64 {
        ldexp(self.mantissa.norm(), self.exponent)
    }

    pub fn conj(&self) -> Self {
        ScaledComplex {
            mantissa: self.mantissa.conj(),
            exponent: self.exponent,
        }
    }

    pub fn recip(&self) -> Self {
        Self::new(self.mantissa.inv(), -self.exponent)
    }

    /// Multiply by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return *self;
        }
        ScaledComplex {
            mantissa: self.mantissa,
            exponent: self.exponent + k,
        }
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self::new(self.mantissa * z, self.exponent)
    }

    pub fn powi(&self, k: i32) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        let mut base = if k < 0 { self.recip() } else { *self };
        let mut k = k.unsigned_abs();
        let mut acc = Self::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// Compares moduli.
    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self
                .exponent
                .cmp(&other.exponent)
                .then_with(|| self.mantissa.norm().total_cmp(&other.mantissa.norm())),
        }
    }
}

impl From<Complex64> for ScaledComplex {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z)
    }
}

impl From<f64> for ScaledComplex {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Mul for ScaledComplex {
    type Output = ScaledComplex;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Div for ScaledComplex {
    type Output = ScaledComplex;
    fn div(self, rhs: Self) -> Self {
        Self::new(self.mantissa / rhs.mantissa, self.exponent - rhs.exponent)
    }
}

impl Add for ScaledComplex {
    type Output = ScaledComplex;
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= rhs.exponent {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let d = big.exponent - small.exponent;
        if d > 64 {
            return big;
        }
        Self::new(big.mantissa + ldexp_c(small.mantissa, -d), big.exponent)
    }
}

impl Neg for ScaledComplex {
    type Output = ScaledComplex;
    fn neg(self) -> Self {
        ScaledComplex {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Sub for ScaledComplex {
    type Output = ScaledComplex;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Sum for ScaledComplex {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for ScaledComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} + {}i) * 2^{}",
            self.mantissa.re, self.mantissa.im, self.exponent
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalized_mantissa() {
        let s = ScaledComplex::from_complex(Complex64::new(3.0, 4.0));
        let a = s.mantissa().norm();
        assert!((1.0..2.0).contains(&a));
        assert_eq!(s.to_complex(), Complex64::new(3.0, 4.0));
    }

    #[test]
    fn zero_has_zero_exponent() {
        let z = ScaledComplex::from_f64(0.0);
        assert_eq!(z.exponent(), 0);
        assert!(z.is_zero());
        assert_eq!((z * ScaledComplex::from_f64(5.0)).exponent(), 0);
    }

    #[test]
    fn subnormal_round_trip() {
        let x = Complex64::new(f64::MIN_POSITIVE / 1024.0, -3.0e-320);
        assert_eq!(ScaledComplex::from_complex(x).to_complex(), x);
        let y = Complex64::new(1.7e308, -1.0e308);
        assert_eq!(ScaledComplex::from_complex(y).to_complex(), y);
    }

    #[test]
    fn factorial_scale_ratio() {
        // 400^400 / 400! stays finite in log space.
        let mut acc = ScaledComplex::ONE;
        for k in 1..=400 {
            acc = acc * ScaledComplex::from_f64(400.0 / k as f64);
        }
        let expected = 400.0 * 400f64.ln() - crate::numeric::gamma::ln_factorial(400);
        assert!((acc.log_abs() - expected).abs() < 1e-10);
    }

    #[test]
    fn from_log_matches_exp() {
        let l = Complex64::new(2.5, 1.25);
        let s = ScaledComplex::from_log(l).to_complex();
        assert!((s - l.exp()).norm() < 1e-14 * l.exp().norm());
        let big = ScaledComplex::from_log(Complex64::new(2000.0, 0.0));
        assert!((big.log_abs() - 2000.0).abs() < 1e-12);
    }

    #[test]
    fn addition_with_cancellation() {
        let a = ScaledComplex::from_f64(1.0).mul_pow2(3000);
        let b = -a;
        assert!((a + b).is_zero());
        let c = a + ScaledComplex::from_f64(1.0);
        assert_eq!(c, a);
    }
}
