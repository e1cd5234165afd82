//! Scaled partial-sum polynomials `p_{n-1}(r_n z)` and their evaluation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::family::{FamilyKind, FunctionFamily};
use crate::error::{Error, Result};
use crate::numeric::ScaledComplex;

/// Choice of scaling radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusMode {
    /// `r_n = (n/λ)^{1/λ}`.
    Standard,
    /// `r_n = e^{1/(2n)} (n/λ)^{1/λ}`.
    MittagLefflerCorrected,
    /// A caller-supplied radius, e.g. `n` for `p_n(nz)`.
    Explicit(f64),
}

/// Raw functions with a cheap closed form, used for `p = f - tail`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    Exp,
    Sin,
    Cos,
}

impl ClosedForm {
    /// `f(u)` and `f'(u)`.
    pub fn eval_with_derivative(self, u: Complex64) -> (ScaledComplex, ScaledComplex) {
        let i = Complex64::new(0.0, 1.0);
        let ep = ScaledComplex::from_log(i * u);
        let em = ScaledComplex::from_log(-i * u);
        let half = |z: ScaledComplex, c: Complex64| z.scale(c);
        match self {
            Self::Exp => {
                let e = ScaledComplex::from_log(u);
                (e, e)
            }
            Self::Sin => (half(ep - em, Complex64::new(0.0, -0.5)), half(ep + em, Complex64::new(0.5, 0.0))),
            Self::Cos => (half(ep + em, Complex64::new(0.5, 0.0)), half(ep - em, Complex64::new(0.0, 0.5))),
        }
    }
}

/// Value, derivative and an absolute error bound of one evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: ScaledComplex,
    pub derivative: ScaledComplex,
    pub bound: ScaledComplex,
}

/// Coefficients `d_k = c_k ρ^k r_n^k`, `k = 0..n-1`, multiplied by `2^prescale_exponent`.
///
/// For closed-form families the next coefficients `d_n, d_{n+1}, ...` are
/// kept in `tail`, so that `p` can also be evaluated as `f(ρ r_n z) - tail`.
/// That form stays accurate where the monomial sum cancels catastrophically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialSumPoly {
    pub family: String,
    pub n: usize,
    pub r_n: f64,
    pub rotation: Complex64,
    pub coeffs: Vec<ScaledComplex>,
    pub prescale_exponent: i64,
    #[serde(default)]
    pub closed_form: Option<ClosedForm>,
    #[serde(default)]
    pub tail: Vec<ScaledComplex>,
}

/// Tail split is used only inside this radius, where the tail converges fast.
pub const TAIL_RADIUS: f64 = 0.97;

/// The scaling radius `r_n` for a family under a radius mode.
pub fn scaling_radius(lambda: f64, n: usize, mode: RadiusMode) -> f64 {
    let base = (n as f64 / lambda).powf(1.0 / lambda);
    match mode {
        RadiusMode::Standard => base,
        RadiusMode::MittagLefflerCorrected => (0.5 / n as f64).exp() * base,
        RadiusMode::Explicit(r) => r,
    }
}

/// Builds `p_{n-1}(r_n z)` for the rotated family.
///
/// # Errors
/// [`Error::Parameter`] for `n < 2`; [`Error::Degenerate`] if every scaled
/// coefficient vanishes; coefficient-generation failures.
pub fn partial_sum(fam: &FunctionFamily, n: usize, mode: RadiusMode) -> Result<PartialSumPoly> {
    if n < 2 {
        return Err(Error::Parameter(format!("partial_sum needs n >= 2, got {n}")));
    }
    if matches!(mode, RadiusMode::MittagLefflerCorrected) && !matches!(fam.kind, FamilyKind::MittagLeffler { .. }) {
        return Err(Error::Parameter("corrected radius applies to mittag_leffler only".into()));
    }
    let r_n = scaling_radius(fam.growth.lambda, n, mode);
    let closed_form = match fam.kind {
        FamilyKind::Exp => Some(ClosedForm::Exp),
        FamilyKind::Sin => Some(ClosedForm::Sin),
        FamilyKind::Cos => Some(ClosedForm::Cos),
        _ => None,
    };
    // Radius n scaling with |z| < 0.97 needs about 2 sqrt(n) + 1300 terms at worst.
    let extra = if closed_form.is_some() { n + 1400 } else { 0 };
    let step = ScaledComplex::from_complex(fam.rotation * r_n);
    let mut pow = ScaledComplex::ONE;
    let mut coeffs: Vec<ScaledComplex> = fam
        .coefficients(n + extra)?
        .into_iter()
        .map(|ck| {
            let v = ck * pow;
            pow = pow * step;
            v
        })
        .collect();
    let mut tail = coeffs.split_off(n);
    let max_exp = coeffs
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| d.exponent())
        .max()
        .ok_or_else(|| Error::Degenerate("all scaled coefficients vanish".into()))?;
    for d in coeffs.iter_mut().chain(tail.iter_mut()) {
        *d = d.mul_pow2(-max_exp);
    }
    Ok(PartialSumPoly {
        family: fam.name.clone(),
        n,
        r_n,
        rotation: fam.rotation,
        coeffs,
        prescale_exponent: -max_exp,
        closed_form,
        tail,
    })
}

/// `|x|` without leaving the scaled representation.
fn modulus(x: ScaledComplex) -> ScaledComplex {
    ScaledComplex::new(Complex64::new(x.mantissa().norm(), 0.0), x.exponent())
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Complex product with its rounding error (approximately summed).
fn two_prod_c(x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let (p1, e1) = two_prod(x.re, y.re);
    let (p2, e2) = two_prod(-x.im, y.im);
    let (p3, e3) = two_prod(x.re, y.im);
    let (p4, e4) = two_prod(x.im, y.re);
    let (re, e5) = two_sum(p1, p2);
    let (im, e6) = two_sum(p3, p4);
    (Complex64::new(re, im), Complex64::new(e1 + e2 + e5, e3 + e4 + e6))
}

fn two_sum_c(a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    let (re, e1) = two_sum(a.re, b.re);
    let (im, e2) = two_sum(a.im, b.im);
    (Complex64::new(re, im), Complex64::new(e1, e2))
}

/// Compensated Horner evaluation of `Σ d_k z^k` (coefficients in ascending order).
pub fn compensated_horner(d: &[Complex64], z: Complex64) -> Complex64 {
    let Some((&last, rest)) = d.split_last() else {
        return Complex64::new(0.0, 0.0);
    };
    let mut s = last;
    let mut err = Complex64::new(0.0, 0.0);
    for &dk in rest.iter().rev() {
        let (p, pe) = two_prod_c(s, z);
        let (t, se) = two_sum_c(p, dk);
        s = t;
        err = err * z + (pe + se);
    }
    s + err
}

/// Compensated Horner for the value and the derivative together.
pub fn compensated_horner_with_derivative(d: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let Some((&last, rest)) = d.split_last() else {
        return (zero, zero);
    };
    let (mut s, mut es) = (last, zero);
    let (mut t, mut et) = (zero, zero);
    for &dk in rest.iter().rev() {
        let (q, qe) = two_prod_c(t, z);
        let (t1, te) = two_sum_c(q, s);
        et = et * z + es + (qe + te);
        t = t1;
        let (p, pe) = two_prod_c(s, z);
        let (s1, se) = two_sum_c(p, dk);
        es = es * z + (pe + se);
        s = s1;
    }
    (s + es, t + et)
}

/// Plain Horner for the value and derivative.
pub fn horner_with_derivative(d: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &dk in d.iter().rev() {
        dp = dp * z + p;
        p = p * z + dk;
    }
    (p, dp)
}

/// Horner in scaled arithmetic for arbitrary coefficient ranges.
pub fn scaled_horner(d: &[ScaledComplex], z: Complex64) -> ScaledComplex {
    let zs = ScaledComplex::from_complex(z);
    let mut acc = ScaledComplex::ZERO;
    for dk in d.iter().rev() {
        acc = acc * zs + *dk;
    }
    acc
}

impl PartialSumPoly {
    /// Index of the highest nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|d| !d.is_zero()).unwrap_or(0)
    }

    /// True when the top coefficient `d_{n-1}` vanishes (parity families).
    pub fn degree_deficient(&self) -> bool {
        self.degree() + 1 < self.n
    }

    /// Coefficients as ordinary complex numbers, truncated to the true degree.
    /// `None` if some nonzero coefficient would underflow.
    pub fn dense(&self) -> Option<Vec<Complex64>> {
        let deg = self.degree();
        let mut out = Vec::with_capacity(deg + 1);
        for d in &self.coeffs[..=deg] {
            if !d.is_zero() && d.exponent() < -1020 {
                return None;
            }
            out.push(d.to_complex());
        }
        Some(out)
    }

    /// Value of the prescaled polynomial at a scaled-plane point.
    pub fn eval(&self, z: Complex64) -> ScaledComplex {
        let deg = self.degree();
        let safe = z.norm() <= 1.0 || (deg as f64) * z.norm().log2() < 900.0;
        match self.dense() {
            Some(d) if safe => ScaledComplex::from_complex(compensated_horner(&d, z)),
            _ => scaled_horner(&self.coeffs[..=deg], z),
        }
    }

    /// `p_{n-1}(r_n z)` for the rotated raw function, prescale undone.
    pub fn eval_unscaled(&self, z: Complex64) -> ScaledComplex {
        self.eval(z).mul_pow2(-self.prescale_exponent)
    }

    /// `Σ |d_k| |z|^k` of the prescaled coefficients (backward-error denominator).
    pub fn abs_sum(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let deg = self.degree();
        let mut acc = ScaledComplex::ZERO;
        for d in self.coeffs[..=deg].iter().rev() {
            acc = acc * ScaledComplex::from_f64(r) + modulus(*d);
        }
        acc.abs()
    }

    /// `p = 2^s f(ρ r_n z) - Σ_{k>=n} d_k z^k` with its derivative, for
    /// closed-form families inside [`TAIL_RADIUS`].
    pub fn eval_split(&self, z: Complex64) -> Option<Evaluation> {
        let cf = self.closed_form?;
        let r = z.norm();
        if r >= TAIL_RADIUS || r == 0.0 {
            return None;
        }
        let zs = ScaledComplex::from_complex(z);
        let (mut t, mut dt, mut a) = (ScaledComplex::ZERO, ScaledComplex::ZERO, ScaledComplex::ZERO);
        let mut pow = zs.powi(self.n as i32);
        let mut k = self.n;
        let mut last = f64::INFINITY;
        // Magnitudes are compared in log2 since prescaled values may lie below f64 range.
        for d in &self.tail {
            let term = *d * pow;
            t = t + term;
            dt = dt + term.scale(Complex64::new(k as f64, 0.0) / z);
            a = a + modulus(term);
            last = term.log2_abs() - t.log2_abs();
            pow = pow * zs;
            k += 1;
            if last <= -60.0 && !d.is_zero() {
                break;
            }
        }
        if last > -53.0 {
            return None;
        }
        let u = self.rotation * self.r_n * z;
        let (f, df) = cf.eval_with_derivative(u);
        let f = f.mul_pow2(self.prescale_exponent);
        let df = df.mul_pow2(self.prescale_exponent).scale(self.rotation * self.r_n);
        let eps = f64::EPSILON;
        let bound = modulus(f).scale(Complex64::new(eps * (4.0 + u.norm()), 0.0)) + a.scale(Complex64::new(8.0 * eps, 0.0));
        Some(Evaluation { value: f - t, derivative: df - dt, bound })
    }

    /// Converts a scaled-plane point to the raw function's variable.
    pub fn unscale(&self, z: Complex64) -> Complex64 {
        self.rotation * self.r_n * z
    }
}
