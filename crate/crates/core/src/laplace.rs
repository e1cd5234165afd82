//! Asymptotic series of Laplace-type integrals `∫ f(t) e^{λ g(t)} dt` and
//! their comparison against quadrature.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::gamma::{gamma_derivative, gamma_real};
use crate::numeric::{integrate_tanh_sinh, integrate_with, ScaledComplex};

/// One term `c λ^{-p} (log λ)^q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: Complex64,
    pub lambda_power: f64,
    pub log_power: f64,
}

impl Term {
    pub fn eval(&self, lambda: f64) -> Complex64 {
        let l = Complex64::new(lambda.ln(), 0.0);
        let log_part = if self.log_power == 0.0 { Complex64::new(1.0, 0.0) } else { l.powf(self.log_power) };
        self.coefficient * lambda.powf(-self.lambda_power) * log_part
    }
}

/// Where a series came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    Watson,
    LogPower,
    Boundary,
    Interior,
}

/// `Σ c_i λ^{-p_i} (log λ)^{q_i}`, times `e^{exp_rate·λ}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSeries {
    pub terms: Vec<Term>,
    pub origin: Origin,
    /// Exponent rate of the symbolic factor `e^{g λ}`; zero when absent.
    pub exp_rate: f64,
    /// Declared relative error `O(λ^{-order})` of a leading-term-only series.
    pub relative_error_order: Option<f64>,
}

impl AsymptoticSeries {
    fn new(terms: Vec<Term>, origin: Origin) -> Self {
        AsymptoticSeries {
            terms,
            origin,
            exp_rate: 0.0,
            relative_error_order: None,
        }
    }

    /// Checks that terms decrease in size: `p` nondecreasing, `q` decreasing within equal `p`.
    pub fn is_ordered(&self) -> bool {
        self.terms.windows(2).all(|w| {
            w[0].lambda_power < w[1].lambda_power
                || (w[0].lambda_power == w[1].lambda_power && w[0].log_power > w[1].log_power)
        })
    }

    /// Value including the factor `e^{exp_rate·λ}`, in scaled form.
    ///
    /// # Errors
    /// As [`series_eval`].
    pub fn value_scaled(&self, lambda: f64, terms: usize) -> Result<ScaledComplex> {
        let (v, _) = series_eval(self, lambda, terms)?;
        Ok(ScaledComplex::from_complex(v) * ScaledComplex::from_log(Complex64::new(self.exp_rate * lambda, 0.0)))
    }
}

fn fmt_real(x: f64) -> String {
    format!("{x}")
}

impl fmt::Display for AsymptoticSeries {
    /// Canonical form `c * λ^{-p} * (log λ)^{q} + ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let c = if t.coefficient.im == 0.0 {
                    fmt_real(t.coefficient.re)
                } else {
                    let sign = if t.coefficient.im < 0.0 { "-" } else { "+" };
                    format!("({}{}{}i)", fmt_real(t.coefficient.re), sign, fmt_real(t.coefficient.im.abs()))
                };
                format!("{c} * λ^{{-{}}} * (log λ)^{{{}}}", fmt_real(t.lambda_power), fmt_real(t.log_power))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Watson's lemma: `∫_0^T f(t) e^{-λt} dt ~ Σ a_k Γ(b_k+1) λ^{-b_k-1}` for `f ~ Σ a_k t^{b_k}`.
///
/// # Errors
/// [`Error::Precondition`] unless `b_0 > -1` and `b_k` increases strictly;
/// [`Error::Parameter`] when `count` exceeds the input length.
pub fn watson(terms_in: &[(Complex64, f64)], count: usize) -> Result<AsymptoticSeries> {
    if count > terms_in.len() {
        return Err(Error::Parameter(format!("{count} terms requested, {} given", terms_in.len())));
    }
    if let Some(&(_, b0)) = terms_in.first() {
        if !(b0 > -1.0) {
            return Err(Error::Precondition(format!("Watson's lemma needs b_0 > -1, got {b0}")));
        }
    }
    if terms_in.windows(2).any(|w| !(w[1].1 > w[0].1)) {
        return Err(Error::Precondition("exponents b_k must increase strictly".into()));
    }
    let terms = terms_in[..count]
        .iter()
        .map(|&(a, b)| {
            Ok(Term {
                coefficient: a * gamma_real(b + 1.0)?,
                lambda_power: b + 1.0,
                log_power: 0.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AsymptoticSeries::new(terms, Origin::Watson))
}

/// Generalized binomial coefficient `C(b, k)`.
fn binomial(b: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (b - j as f64) / (j + 1) as f64)
}

/// `∫_0^δ (-log t)^b t^{a-1} e^{-λt} dt ~ λ^{-a} Σ (-1)^k C(b,k) Γ^{(k)}(a) (log λ)^{b-k}`.
/// Terms whose binomial vanishes (integer `b >= 0`) end the series.
///
/// # Errors
/// [`Error::Precondition`] for `a <= 0`; failures of the `Γ^{(k)}` evaluation.
pub fn log_power(a: f64, b: f64, count: usize) -> Result<AsymptoticSeries> {
    if !(a > 0.0) {
        return Err(Error::Precondition(format!("log_power needs a > 0, got {a}")));
    }
    let mut terms = Vec::with_capacity(count);
    for k in 0..count {
        let bin = binomial(b, k);
        if bin == 0.0 {
            break;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        terms.push(Term {
            coefficient: Complex64::new(sign * bin * if k == 0 { gamma_real(a)? } else { gamma_derivative(a, k)? }, 0.0),
            lambda_power: a,
            log_power: b - k as f64,
        });
    }
    Ok(AsymptoticSeries::new(terms, Origin::LogPower))
}

/// Leading term `Γ(p+1) (-g'(a) λ)^{-p-1} e^{g(a) λ}` at a boundary maximum.
///
/// # Errors
/// [`Error::Precondition`] unless `g'(a) < 0` and `p > -1`.
pub fn boundary_leading(p: f64, g_at_a: f64, gprime_at_a: f64) -> Result<AsymptoticSeries> {
    if !(gprime_at_a < 0.0) {
        return Err(Error::Precondition(format!("boundary maximum needs g'(a) < 0, got {gprime_at_a}")));
    }
    if !(p > -1.0) {
        return Err(Error::Precondition(format!("boundary_leading needs p > -1, got {p}")));
    }
    let c = gamma_real(p + 1.0)? * (-gprime_at_a).powf(-p - 1.0);
    let mut s = AsymptoticSeries::new(
        vec![Term {
            coefficient: Complex64::new(c, 0.0),
            lambda_power: p + 1.0,
            log_power: 0.0,
        }],
        Origin::Boundary,
    );
    s.exp_rate = g_at_a;
    Ok(s)
}

/// Leading term `Γ(n+1/2) (2/(-g''(t_0) λ))^{n+1/2} e^{g(t_0) λ}` at an interior
/// maximum, for `f(t) ~ (t - t_0)^{2n}`, with relative error `O(λ^{-1/2})`.
///
/// # Errors
/// [`Error::Precondition`] unless `g''(t_0) < 0`.
pub fn interior_leading(n: usize, gpp_at_t0: f64, g_at_t0: f64) -> Result<AsymptoticSeries> {
    if !(gpp_at_t0 < 0.0) {
        return Err(Error::Precondition(format!("interior maximum needs g'' < 0, got {gpp_at_t0}")));
    }
    let h = n as f64 + 0.5;
    let c = gamma_real(h)? * (2.0 / -gpp_at_t0).powf(h);
    let mut s = AsymptoticSeries::new(
        vec![Term {
            coefficient: Complex64::new(c, 0.0),
            lambda_power: h,
            log_power: 0.0,
        }],
        Origin::Interior,
    );
    s.exp_rate = g_at_t0;
    s.relative_error_order = Some(0.5);
    Ok(s)
}

/// Partial sum of the first `terms` terms (without `e^{exp_rate·λ}`) and the
/// modulus of the first omitted term, zero when none remains.
///
/// # Errors
/// [`Error::Parameter`] when `terms` exceeds the series length.
pub fn series_eval(s: &AsymptoticSeries, lambda: f64, terms: usize) -> Result<(Complex64, f64)> {
    if terms > s.terms.len() {
        return Err(Error::Parameter(format!("{terms} terms requested, series has {}", s.terms.len())));
    }
    let value = s.terms[..terms].iter().map(|t| t.eval(lambda)).sum();
    let omitted = s.terms.get(terms).map_or(0.0, |t| t.eval(lambda).norm());
    Ok((value, omitted))
}

/// Checks that `∫_a^b f e^{λ g} dt / e^{Mλ}` has a nonincreasing envelope over
/// the increasing grid `lambdas`, after confirming `g < M` at interior samples.
///
/// # Errors
/// [`Error::Precondition`] when a sample has `g >= M`; quadrature failures.
pub fn tail_bound_check<F, G>(f: F, g: G, m: f64, a: f64, b: f64, lambdas: &[f64]) -> Result<bool>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if !(b > a) {
        return Ok(true);
    }
    let samples = 257;
    for j in 0..samples {
        let s = (j as f64 + 0.5) / samples as f64;
        let t = if b.is_finite() { a + s * (b - a) } else { a + s / (1.0 - s) };
        if !(g(t) < m) {
            return Err(Error::Precondition(format!("g({t}) = {} is not below M = {m}", g(t))));
        }
    }
    let mut prev = f64::INFINITY;
    for &lambda in lambdas {
        let q = integrate_with(|t| Complex64::new(f(t) * (lambda * (g(t) - m)).exp(), 0.0), a, b, 1e-10, 1e-300)?;
        let r = q.value.norm();
        if r > prev * (1.0 + 1e-9) {
            return Ok(false);
        }
        prev = r;
    }
    Ok(true)
}

/// A test integrand `∫_0^∞ f(t) e^{-λt} dt` with known expansion of `f` at zero.
#[derive(Clone, Copy, Debug)]
pub struct WatsonIntegrand {
    pub name: &'static str,
    pub f: fn(f64) -> f64,
    /// `(a_k, b_k)` for `k = 0..count`.
    pub expansion: fn(usize) -> Vec<(Complex64, f64)>,
}

fn alternating(count: usize, shift: f64) -> Vec<(Complex64, f64)> {
    (0..count)
        .map(|k| (Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0), k as f64 + shift))
        .collect()
}

/// `1/(1+t)`, `t^{-1/2}/(1+t)` and `log(1+t)/t`.
pub fn builtin_watson() -> [WatsonIntegrand; 3] {
    [
        WatsonIntegrand {
            name: "inv_one_plus_t",
            f: |t| 1.0 / (1.0 + t),
            expansion: |m| alternating(m, 0.0),
        },
        WatsonIntegrand {
            name: "rsqrt_over_one_plus_t",
            f: |t| 1.0 / (t.sqrt() * (1.0 + t)),
            expansion: |m| alternating(m, -0.5),
        },
        WatsonIntegrand {
            name: "log1p_over_t",
            f: |t| if t == 0.0 { 1.0 } else { t.ln_1p() / t },
            expansion: |m| {
                (0..m)
                    .map(|k| (Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 } / (k + 1) as f64, 0.0), k as f64))
                    .collect()
            },
        },
    ]
}

/// `∫_0^∞ f(t) e^{-λt} dt` by tanh-sinh on `[0, 60/λ]`, beyond which the
/// integrand is below `e^{-60}` times its scale.
///
/// # Errors
/// Quadrature failures.
pub fn watson_quadrature(f: fn(f64) -> f64, lambda: f64) -> Result<(f64, f64)> {
    let q = integrate_tanh_sinh(|t| f(t) * (-lambda * t).exp(), 0.0, 60.0 / lambda, 1e-15)?;
    Ok((q.value.re, q.error_estimate))
}

/// The log-power demonstration integral `∫_0^{1/2} (-log t)^{1/2} e^{-λt} dt`
/// (`a = 1`, `b = 1/2`), by tanh-sinh.
///
/// # Errors
/// Quadrature failures.
pub fn log_power_demo_quadrature(lambda: f64) -> Result<(f64, f64)> {
    let top = 0.5f64.min(60.0 / lambda);
    let q = integrate_tanh_sinh(|t| (-t.ln()).sqrt() * (-lambda * t).exp(), 0.0, top, 1e-15)?;
    Ok((q.value.re, q.error_estimate))
}

/// Parameters `(a, b)` of [`log_power_demo_quadrature`].
pub const LOG_POWER_DEMO: (f64, f64) = (1.0, 0.5);

/// One row of a series-versus-quadrature comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub integrand: String,
    pub lambda: f64,
    pub terms: usize,
    pub series: f64,
    pub quadrature: f64,
    pub abs_error: f64,
    pub first_omitted: f64,
    /// `|quadrature - series| <= 2 first_omitted + quadrature error estimate`.
    pub within: bool,
}

/// Compares the built-in Watson integrands and the log-power demo with their
/// series for `1..=max_terms` terms at each `λ`.
///
/// # Errors
/// Quadrature and series failures.
pub fn comparison_table(lambdas: &[f64], max_terms: usize) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::new();
    let mut push = |name: &str, lambda: f64, s: &AsymptoticSeries, quad: (f64, f64)| -> Result<()> {
        for m in 1..=max_terms.min(s.terms.len() - 1) {
            let (v, omitted) = series_eval(s, lambda, m)?;
            let err = (quad.0 - v.re).abs();
            rows.push(ComparisonRow {
                integrand: name.to_string(),
                lambda,
                terms: m,
                series: v.re,
                quadrature: quad.0,
                abs_error: err,
                first_omitted: omitted,
                within: err <= 2.0 * omitted + quad.1,
            });
        }
        Ok(())
    };
    for &lambda in lambdas {
        for w in builtin_watson() {
            let s = watson(&(w.expansion)(max_terms + 1), max_terms + 1)?;
            push(w.name, lambda, &s, watson_quadrature(w.f, lambda)?)?;
        }
        let s = log_power(LOG_POWER_DEMO.0, LOG_POWER_DEMO.1, max_terms + 1)?;
        push("log_power_demo", lambda, &s, log_power_demo_quadrature(lambda)?)?;
    }
    Ok(rows)
}

/// `max_λ |quadrature/leading - 1|·√λ`, the constant of an `O(λ^{-1/2})`
/// relative envelope, over the grid.
///
/// # Errors
/// Quadrature and series failures.
pub fn envelope_constant<Q>(s: &AsymptoticSeries, quadrature: Q, lambdas: &[f64]) -> Result<f64>
where
    Q: Fn(f64) -> Result<f64>,
{
    let mut c: f64 = 0.0;
    for &lambda in lambdas {
        let pred = series_eval(s, lambda, 1)?.0.re;
        c = c.max((quadrature(lambda)? / pred - 1.0).abs() * lambda.sqrt());
    }
    Ok(c)
}

/// Boundary demo `∫_0^1 t^{-1/2} e^{-λ sinh t} dt`: leading term `√(π/λ)`.
///
/// # Errors
/// As [`envelope_constant`].
pub fn boundary_demo(lambdas: &[f64]) -> Result<(AsymptoticSeries, f64)> {
    let s = boundary_leading(-0.5, 0.0, -1.0)?;
    let c = envelope_constant(
        &s,
        |lambda| Ok(integrate_tanh_sinh(|t| (-lambda * t.sinh()).exp() / t.sqrt(), 0.0, 1.0, 1e-14)?.value.re),
        lambdas,
    )?;
    Ok((s, c))
}

/// Interior demo `∫_{-1}^1 e^{λ(cos t - 1)} dt`: leading term `√(2π/λ)`.
///
/// # Errors
/// As [`envelope_constant`].
pub fn interior_demo(lambdas: &[f64]) -> Result<(AsymptoticSeries, f64)> {
    let s = interior_leading(0, -1.0, 0.0)?;
    let c = envelope_constant(
        &s,
        |lambda| Ok(integrate_with(|t| Complex64::new((lambda * (t.cos() - 1.0)).exp(), 0.0), -1.0, 1.0, 1e-13, 1e-300)?.value.re),
        lambdas,
    )?;
    Ok((s, c))
}

/// The grid on which the envelope constants are fitted.
pub const ENVELOPE_LAMBDAS: [f64; 4] = [20.0, 50.0, 100.0, 200.0];
