//! Entire-function families: presets, Maclaurin coefficients, evaluation.
//!
//! A family stores the raw function `f` (its Maclaurin coefficients are the
//! textbook ones) together with a `rotation` `ρ` and a `normalization` `C`
//! such that `F(z) = f(ρ z) / C` has the normalized growth described by the
//! [`GrowthSpec`]: `F(z) ≈ A_k (z/ζ_k)^{b_k} exp((z/ζ_k)^λ)` in sector `k`.
//! For Airy and parabolic-cylinder families `ρ` also carries a scale factor.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::growth::GrowthSpec;
use crate::error::{Error, Result};
use crate::numeric::gamma::{gamma_real, scaled_reciprocal_gamma};
use crate::numeric::quadrature::{gauss_jacobi_nodes, integrate_with};
use crate::numeric::ScaledComplex;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Parameters of the built-in families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyKind {
    Exp,
    MittagLeffler { lambda: f64 },
    Sin,
    Cos,
    Bessel { nu: f64 },
    Confluent { alpha: f64, beta: f64 },
    Expint { p: f64, q: f64, r: f64, poly: Vec<f64> },
    AiryAi,
    AiryBi,
    ParabolicU { a: f64 },
}

/// An entire function with prescribed growth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionFamily {
    pub name: String,
    pub kind: FamilyKind,
    pub growth: GrowthSpec,
    pub rotation: Complex64,
    pub normalization: Complex64,
    /// Smallest |z| at which the growth surrogate is used.
    pub surrogate_radius: f64,
}

/// Names accepted by [`make_family`].
pub const FAMILY_NAMES: [&str; 10] = [
    "exp",
    "mittag_leffler",
    "sin",
    "cos",
    "bessel",
    "confluent",
    "expint",
    "airy_ai",
    "airy_bi",
    "parabolic_u",
];

fn param(params: &Value, key: &str, default: Option<f64>) -> Result<f64> {
    match params.get(key) {
        Some(v) => v
            .as_f64()
            .ok_or_else(|| Error::Parameter(format!("parameter `{key}` must be a number"))),
        None => default.ok_or_else(|| Error::Parameter(format!("missing parameter `{key}`"))),
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Builds a family preset by name. Parameters are read from a JSON object:
/// `mittag_leffler {lambda}`, `bessel {nu}`, `confluent {alpha, beta}`,
/// `expint {p, q, r = -1, poly = [1]}` and `parabolic_u {a}`.
pub fn make_family(name: &str, params: &Value) -> Result<FunctionFamily> {
    let kind = match name {
        "exp" => FamilyKind::Exp,
        "mittag_leffler" => FamilyKind::MittagLeffler {
            lambda: param(params, "lambda", None)?,
        },
        "sin" => FamilyKind::Sin,
        "cos" => FamilyKind::Cos,
        "bessel" => FamilyKind::Bessel {
            nu: param(params, "nu", Some(0.0))?,
        },
        "confluent" => FamilyKind::Confluent {
            alpha: param(params, "alpha", None)?,
            beta: param(params, "beta", None)?,
        },
        "expint" => {
            let poly = match params.get("poly") {
                None => vec![1.0],
                Some(v) => v
                    .as_array()
                    .and_then(|a| a.iter().map(Value::as_f64).collect::<Option<Vec<_>>>())
                    .ok_or_else(|| Error::Parameter("`poly` must be an array of numbers".into()))?,
            };
            FamilyKind::Expint {
                p: param(params, "p", None)?,
                q: param(params, "q", None)?,
                r: param(params, "r", Some(-1.0))?,
                poly,
            }
        }
        "airy_ai" => FamilyKind::AiryAi,
        "airy_bi" => FamilyKind::AiryBi,
        "parabolic_u" => FamilyKind::ParabolicU {
            a: param(params, "a", None)?,
        },
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    FunctionFamily::from_kind(kind)
}

fn poly_eval(poly: &[f64], t: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

impl FunctionFamily {
    /// Builds the preset for a parameterized kind.
    pub fn from_kind(kind: FamilyKind) -> Result<Self> {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let quarter_pi = PI / 4.0;
        let (name, growth, rotation, normalization) = match &kind {
            FamilyKind::Exp => ("exp", GrowthSpec::one_direction(1.0, zero, quarter_pi), one, one),
            FamilyKind::MittagLeffler { lambda } => {
                let l = *lambda;
                if !(l > 0.5 && l.is_finite()) {
                    return Err(Error::Parameter(format!("mittag_leffler needs lambda > 1/2, got {l}")));
                }
                let theta = (PI / (4.0 * l)).min(0.75 * PI);
                ("mittag_leffler", GrowthSpec::one_direction(l, zero, theta), one, c(l, 0.0))
            }
            FamilyKind::Sin => (
                "sin",
                GrowthSpec::one_direction(1.0, zero, quarter_pi).with_direction(c(-1.0, 0.0), c(-1.0, 0.0), zero),
                c(0.0, 1.0),
                c(0.0, 0.5),
            ),
            FamilyKind::Cos => (
                "cos",
                GrowthSpec::one_direction(1.0, zero, quarter_pi).with_direction(c(-1.0, 0.0), one, zero),
                c(0.0, 1.0),
                c(0.5, 0.0),
            ),
            FamilyKind::Bessel { nu } => {
                let a = c(-nu - 0.5, 0.0);
                (
                    "bessel",
                    GrowthSpec::one_direction(1.0, a, quarter_pi).with_direction(c(-1.0, 0.0), one, a),
                    c(0.0, 1.0),
                    c(2f64.powf(*nu) / (2.0 * PI).sqrt(), 0.0),
                )
            }
            FamilyKind::Confluent { alpha, beta } => {
                if is_nonpositive_integer(*alpha) {
                    return Err(Error::Parameter("confluent alpha must not be a nonpositive integer".into()));
                }
                let norm = 1.0 / gamma_real(*alpha)?;
                (
                    "confluent",
                    GrowthSpec::one_direction(1.0, c(alpha - beta, 0.0), quarter_pi),
                    one,
                    c(norm, 0.0),
                )
            }
            FamilyKind::Expint { p, q, r, poly } => {
                let (p, q, r) = (*p, *q, *r);
                if !(p > -1.0 && q > -1.0) {
                    return Err(Error::Parameter("expint needs p, q > -1".into()));
                }
                if !(-1.0..1.0).contains(&r) {
                    return Err(Error::Parameter("expint needs -1 <= r < 1".into()));
                }
                if poly.is_empty() {
                    return Err(Error::Parameter("expint poly must be nonempty".into()));
                }
                // g(t) = (t-r)^p (1-t)^q P(t); near t = 1, g ≈ g2(0)(1-t)^q.
                let g2 = (1.0 - r).powf(p) * poly_eval(poly, 1.0);
                let g1 = (1.0 - r).powf(q) * poly_eval(poly, r);
                if g2 == 0.0 {
                    return Err(Error::Parameter("expint poly must not vanish at t = 1".into()));
                }
                let norm = g2 * gamma_real(q + 1.0)?;
                let mut growth = GrowthSpec::one_direction(1.0, c(-q - 1.0, 0.0), quarter_pi);
                if r == -1.0 {
                    if g1 == 0.0 {
                        return Err(Error::Parameter("expint poly must not vanish at t = r".into()));
                    }
                    let amp = g1 * gamma_real(p + 1.0)? / norm;
                    growth = growth.with_direction(c(-1.0, 0.0), c(amp, 0.0), c(-p - 1.0, 0.0));
                }
                ("expint", growth, one, c(norm, 0.0))
            }
            FamilyKind::AiryAi => {
                let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
                let theta = PI / 6.0;
                let rho = Complex64::from_polar(1.5f64.powf(2.0 / 3.0), 2.0 * PI / 3.0);
                let norm = Complex64::from_polar(1.5f64.powf(-1.0 / 6.0) / (2.0 * PI.sqrt()), -PI / 6.0);
                let a = c(-0.25, 0.0);
                (
                    "airy_ai",
                    GrowthSpec::one_direction(1.5, a, theta).with_direction(w, Complex64::from_polar(1.0, PI / 3.0), a),
                    rho,
                    norm,
                )
            }
            FamilyKind::AiryBi => {
                let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
                let theta = PI / 6.0;
                let a = c(-0.25, 0.0);
                (
                    "airy_bi",
                    GrowthSpec::one_direction(1.5, a, theta)
                        .with_direction(w, Complex64::from_polar(0.5, PI / 3.0), a)
                        .with_direction(w.conj(), Complex64::from_polar(0.5, -PI / 3.0), a),
                    c(1.5f64.powf(2.0 / 3.0), 0.0),
                    c(1.5f64.powf(-1.0 / 6.0) / PI.sqrt(), 0.0),
                )
            }
            FamilyKind::ParabolicU { a } => {
                let a = *a;
                if is_nonpositive_integer(a + 0.5) {
                    return Err(Error::Parameter("parabolic_u needs a + 1/2 not a nonpositive integer".into()));
                }
                let norm = (2.0 * PI).sqrt() * 2f64.powf(a - 0.5) / gamma_real(a + 0.5)?;
                let amp = 2f64.powf(-a - 0.5) / norm;
                let phase = PI * (a / 2.0 + 0.25);
                let b = c(-a - 0.5, 0.0);
                (
                    "parabolic_u",
                    GrowthSpec::one_direction(2.0, c(a - 0.5, 0.0), PI / 8.0)
                        .with_direction(c(0.0, 1.0), Complex64::from_polar(amp, phase), b)
                        .with_direction(c(0.0, -1.0), Complex64::from_polar(amp, -phase), b),
                    c(-2.0, 0.0),
                    c(norm, 0.0),
                )
            }
        };
        growth.validate()?;
        Ok(FunctionFamily {
            name: name.to_string(),
            kind,
            growth,
            rotation,
            normalization,
            surrogate_radius: 1.0,
        })
    }

    /// Whether every coefficient is real.
    pub fn is_real(&self) -> bool {
        true
    }

    /// Whether the zeros of the rotated partial sums are symmetric under conjugation.
    pub fn rotated_is_conjugate_symmetric(&self) -> bool {
        !matches!(self.kind, FamilyKind::AiryAi)
    }

    /// Maclaurin coefficient `c_k` of the raw function.
    pub fn coefficient(&self, k: usize) -> Result<ScaledComplex> {
        Ok(self.coefficients(k + 1)?[k])
    }

    /// Maclaurin coefficients `c_0, ..., c_{count-1}` of the raw function.
    ///
    /// # Errors
    /// Quadrature failures for the exponential-integral family.
    pub fn coefficients(&self, count: usize) -> Result<Vec<ScaledComplex>> {
        let mut out = Vec::with_capacity(count);
        match &self.kind {
            FamilyKind::Exp | FamilyKind::Sin | FamilyKind::Cos => {
                let mut inv_fact = ScaledComplex::ONE;
                for k in 0..count {
                    if k > 0 {
                        inv_fact = inv_fact * ScaledComplex::from_f64(1.0 / k as f64);
                    }
                    let v = match self.kind {
                        FamilyKind::Exp => inv_fact,
                        FamilyKind::Sin if k % 2 == 1 => {
                            if (k / 2) % 2 == 0 {
                                inv_fact
                            } else {
                                -inv_fact
                            }
                        }
                        FamilyKind::Cos if k % 2 == 0 => {
                            if (k / 2) % 2 == 0 {
                                inv_fact
                            } else {
                                -inv_fact
                            }
                        }
                        _ => ScaledComplex::ZERO,
                    };
                    out.push(v);
                }
            }
            FamilyKind::MittagLeffler { lambda } => {
                for k in 0..count {
                    out.push(scaled_reciprocal_gamma(c(k as f64 / lambda + 1.0, 0.0)));
                }
            }
            FamilyKind::Bessel { nu } => {
                let mut inv_fact = ScaledComplex::ONE;
                for k in 0..count {
                    if k % 2 == 1 {
                        out.push(ScaledComplex::ZERO);
                        continue;
                    }
                    let j = k / 2;
                    if j > 0 {
                        inv_fact = inv_fact * ScaledComplex::from_f64(-0.25 / j as f64);
                    }
                    out.push(inv_fact * scaled_reciprocal_gamma(c(nu + j as f64 + 1.0, 0.0)));
                }
            }
            FamilyKind::Confluent { alpha, beta } => {
                // c_k = (α)_k / (Γ(k+β) k!)
                let mut poch_over_fact = ScaledComplex::ONE;
                for k in 0..count {
                    if k > 0 {
                        let kf = k as f64;
                        poch_over_fact = poch_over_fact * ScaledComplex::from_f64((alpha + kf - 1.0) / kf);
                    }
                    out.push(poch_over_fact * scaled_reciprocal_gamma(c(k as f64 + beta, 0.0)));
                }
            }
            FamilyKind::Expint { p, q, r, poly } => {
                let moments = expint_moments(*p, *q, *r, poly, count)?;
                let mut inv_fact = ScaledComplex::ONE;
                for (k, m) in moments.into_iter().enumerate() {
                    if k > 0 {
                        inv_fact = inv_fact * ScaledComplex::from_f64(1.0 / k as f64);
                    }
                    out.push(inv_fact * ScaledComplex::from_f64(m));
                }
            }
            FamilyKind::AiryAi | FamilyKind::AiryBi => {
                let (y0, y1) = airy_seeds(matches!(self.kind, FamilyKind::AiryBi))?;
                for k in 0..count {
                    let v = match k {
                        0 => ScaledComplex::from_f64(y0),
                        1 => ScaledComplex::from_f64(y1),
                        2 => ScaledComplex::ZERO,
                        _ => out[k - 3] * ScaledComplex::from_f64(1.0 / (k as f64 * (k as f64 - 1.0))),
                    };
                    out.push(v);
                }
            }
            FamilyKind::ParabolicU { a } => {
                let (u0, u1) = parabolic_u_seeds(*a);
                for k in 0..count {
                    let v = match k {
                        0 => u0,
                        1 => u1,
                        _ => {
                            // k(k-1) u_k = a u_{k-2} + u_{k-4}/4
                            let mut s = out[k - 2] * ScaledComplex::from_f64(*a);
                            if k >= 4 {
                                s = s + out[k - 4] * ScaledComplex::from_f64(0.25);
                            }
                            s * ScaledComplex::from_f64(1.0 / (k as f64 * (k as f64 - 1.0)))
                        }
                    };
                    out.push(v);
                }
            }
        }
        Ok(out)
    }

    /// Coefficients of the normalized rotated function `F(z) = f(ρz)/C`.
    pub fn normalized_coefficients(&self, count: usize) -> Result<Vec<ScaledComplex>> {
        let rho = ScaledComplex::from_complex(self.rotation);
        let inv_c = ScaledComplex::from_complex(self.normalization).recip();
        let mut pow = inv_c;
        Ok(self
            .coefficients(count)?
            .into_iter()
            .map(|ck| {
                let v = ck * pow;
                pow = pow * rho;
                v
            })
            .collect())
    }

    /// Exact value of the raw function where a closed form or quadrature exists.
    pub fn eval_exact(&self, z: Complex64) -> Option<Result<ScaledComplex>> {
        let i = c(0.0, 1.0);
        match &self.kind {
            FamilyKind::Exp => Some(Ok(ScaledComplex::from_log(z))),
            FamilyKind::Sin => Some(Ok(
                (ScaledComplex::from_log(i * z) - ScaledComplex::from_log(-i * z)).scale(c(0.0, -0.5))
            )),
            FamilyKind::Cos => Some(Ok(
                (ScaledComplex::from_log(i * z) + ScaledComplex::from_log(-i * z)).scale(c(0.5, 0.0))
            )),
            FamilyKind::Expint { p, q, r, poly } => Some(expint_eval(*p, *q, *r, poly, z)),
            _ => None,
        }
    }

    /// Exact value of the normalized rotated function `F(z) = f(ρz)/C`.
    pub fn eval_normalized_exact(&self, z: Complex64) -> Option<Result<ScaledComplex>> {
        let inv_c = ScaledComplex::from_complex(self.normalization).recip();
        self.eval_exact(self.rotation * z).map(|r| r.map(|v| v * inv_c))
    }

    /// Growth surrogate `A_k (z/ζ_k)^{b_k} exp((z/ζ_k)^λ)` of the normalized
    /// rotated function, using the sector that contains `z`.
    ///
    /// # Errors
    /// [`Error::OutOfSector`] outside every sector or below the validity radius.
    pub fn eval_surrogate(&self, z: Complex64) -> Result<ScaledComplex> {
        if z.norm() < self.surrogate_radius {
            return Err(Error::OutOfSector);
        }
        let k = self.growth.sector_of(z).ok_or(Error::OutOfSector)?;
        let d = self.growth.directions[k];
        let u = z / d.zeta;
        let mut l = d.amplitude.ln() + d.exponent * u.ln() + u.powf(self.growth.lambda);
        if k == 0 && self.growth.log_exponent.norm() != 0.0 {
            l += self.growth.log_exponent * u.ln().ln();
        }
        Ok(ScaledComplex::from_log(l))
    }

    /// Normalized function value: exact where available, surrogate otherwise.
    pub fn eval_normalized(&self, z: Complex64) -> Result<ScaledComplex> {
        match self.eval_normalized_exact(z) {
            Some(v) => v,
            None => self.eval_surrogate(z),
        }
    }
}

/// `(y(0), y'(0))` for Ai or Bi.
fn airy_seeds(bi: bool) -> Result<(f64, f64)> {
    let g23 = gamma_real(2.0 / 3.0)?;
    let g13 = gamma_real(1.0 / 3.0)?;
    Ok(if bi {
        (3f64.powf(-1.0 / 6.0) / g23, 3f64.powf(1.0 / 6.0) / g13)
    } else {
        (3f64.powf(-2.0 / 3.0) / g23, -(3f64.powf(-1.0 / 3.0)) / g13)
    })
}

/// `(U(a,0), U'(a,0))` from the Γ-ratio formulas.
fn parabolic_u_seeds(a: f64) -> (ScaledComplex, ScaledComplex) {
    let sp = PI.sqrt();
    let u0 = scaled_reciprocal_gamma(c(0.75 + a / 2.0, 0.0))
        * ScaledComplex::from_f64(sp / 2f64.powf(a / 2.0 + 0.25));
    let u1 = scaled_reciprocal_gamma(c(0.25 + a / 2.0, 0.0))
        * ScaledComplex::from_f64(-sp / 2f64.powf(a / 2.0 - 0.25));
    (u0, u1)
}

/// Moments `∫_r^1 t^k (t-r)^p (1-t)^q P(t) dt` for `k < count`.
pub fn expint_moments(p: f64, q: f64, r: f64, poly: &[f64], count: usize) -> Result<Vec<f64>> {
    let m = (count + poly.len()).div_ceil(2) + 2;
    let (x, w) = gauss_jacobi_nodes(p, q, m)?;
    let half = 0.5 * (1.0 - r);
    let scale = half.powf(p + q + 1.0);
    let ts: Vec<f64> = x.iter().map(|&x| r + half * (x + 1.0)).collect();
    let base: Vec<f64> = ts.iter().zip(&w).map(|(&t, &w)| w * poly_eval(poly, t) * scale).collect();
    let mut pw = base;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(pw.iter().sum());
        for (v, &t) in pw.iter_mut().zip(&ts) {
            *v *= t;
        }
    }
    Ok(out)
}

fn expint_eval(p: f64, q: f64, r: f64, poly: &[f64], z: Complex64) -> Result<ScaledComplex> {
    // Factor out exp(z t*) at the endpoint where |exp(zt)| peaks.
    let tstar = if z.re >= 0.0 { 1.0 } else { r };
    let f = |t: f64| {
        let g = (t - r).max(0.0).powf(p) * (1.0 - t).max(0.0).powf(q) * poly_eval(poly, t);
        (z * (t - tstar)).exp() * g
    };
    let res = integrate_with(f, r, 1.0, 1e-13, 1e-300)?;
    Ok(ScaledComplex::from_log(z * tstar) * ScaledComplex::from_complex(res.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn fam(name: &str, p: Value) -> FunctionFamily {
        make_family(name, &p).unwrap()
    }

    #[test]
    fn exp_coefficients() {
        let f = fam("exp", json!({}));
        assert!((f.coefficient(3).unwrap().to_complex() - 1.0 / 6.0).norm() < 1e-16);
        assert_eq!(f.growth.lambda, 1.0);
        assert_eq!(f.growth.directions.len(), 1);
    }

    #[test]
    fn mittag_leffler_one_is_exp() {
        let e = fam("exp", json!({})).coefficients(30).unwrap();
        let m = fam("mittag_leffler", json!({"lambda": 1.0})).coefficients(30).unwrap();
        for (a, b) in e.iter().zip(&m) {
            assert!((a.to_complex() - b.to_complex()).norm() <= 1e-13 * a.abs());
        }
        assert!(make_family("mittag_leffler", &json!({"lambda": 0.5})).is_err());
    }

    #[test]
    fn sin_and_bessel_coefficients() {
        let s = fam("sin", json!({}));
        assert!((s.coefficient(3).unwrap().to_complex() + 1.0 / 6.0).norm() < 1e-16);
        assert!(s.coefficient(2).unwrap().is_zero());
        let b = fam("bessel", json!({"nu": 0.0}));
        assert!((b.coefficient(2).unwrap().to_complex() + 0.25).norm() < 1e-15);
        assert!(b.coefficient(5).unwrap().is_zero());
    }

    #[test]
    fn expint_zeroth_moment() {
        let f = fam("expint", json!({"p": 0.0, "q": 3.0, "r": -1.0}));
        assert!((f.coefficient(0).unwrap().to_complex() - 4.0).norm() < 1e-13);
    }

    #[test]
    fn unknown_family() {
        assert!(matches!(make_family("zeta", &json!({})), Err(Error::UnknownFamily(_))));
        assert!(make_family("confluent", &json!({"alpha": -2.0, "beta": 1.0})).is_err());
    }
}
