//! Matching predictions to computed roots, rate fits, the named quantitative
//! checks, and report tables.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{curve_distance, szego_modulus, trace};
use crate::error::{Error, Result};
use crate::numeric::{erfc, ScaledComplex};
use crate::predict::{arc_limit_value, arc_scaling, z_n_arc, ArcPoint, PredictionRecord, Variant};
use crate::rootfind::{all_roots, RootSet};
use crate::series::{partial_sum, FamilyKind, FunctionFamily, PartialSumPoly, RadiusMode};

#[cfg(test)]
mod tests;

/// Default matching radius, in units of the expected error scale.
pub const DEFAULT_RADIUS_FACTOR: f64 = 10.0;

/// Tolerance passed to the root finder by the pipelines here.
pub const ROOT_TOL: f64 = 1e-11;

/// One prediction and the root assigned to it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchPair {
    pub prediction: PredictionRecord,
    pub matched_root: Complex64,
    pub abs_error: f64,
    pub normalized_error: f64,
}

/// Result of matching one batch of predictions against one root set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub n: usize,
    pub family: String,
    pub pairs: Vec<MatchPair>,
    pub unmatched_predictions: usize,
    /// Roots inside some matching disk that were not assigned.
    pub unmatched_roots_near_region: usize,
}

/// Greedy nearest-neighbour matching in the scaled plane. A pair is allowed
/// when its distance is at most `radius_factor · expected_error_scale`;
/// candidate pairs are assigned in order of increasing distance, so each root
/// and each prediction is used at most once.
pub fn match_predictions(predictions: &[PredictionRecord], roots: &RootSet, radius_factor: f64) -> MatchReport {
    let mut cand: Vec<(f64, usize, usize)> = Vec::new();
    let mut near = vec![false; roots.roots.len()];
    for (i, p) in predictions.iter().enumerate() {
        let radius = radius_factor * p.expected_error_scale;
        for (j, r) in roots.roots.iter().enumerate() {
            let d = (r - p.z_scaled).norm();
            if d <= radius {
                cand.push((d, i, j));
                near[j] = true;
            }
        }
    }
    cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut pred_used = vec![None; predictions.len()];
    let mut root_used = vec![false; roots.roots.len()];
    for (d, i, j) in cand {
        if pred_used[i].is_none() && !root_used[j] {
            pred_used[i] = Some((j, d));
            root_used[j] = true;
        }
    }
    let mut pairs = Vec::new();
    for (i, u) in pred_used.iter().enumerate() {
        if let Some((j, d)) = *u {
            let p = &predictions[i];
            pairs.push(MatchPair {
                prediction: p.clone(),
                matched_root: roots.roots[j],
                abs_error: d,
                normalized_error: d / p.expected_error_scale,
            });
        }
    }
    MatchReport {
        n: roots.n,
        family: roots.family.clone(),
        unmatched_predictions: predictions.len() - pairs.len(),
        unmatched_roots_near_region: near.iter().zip(&root_used).filter(|(n, u)| **n && !**u).count(),
        pairs,
    }
}

/// Distance from each prediction to its nearest root, ignoring injectivity
/// and radius; `None` for an empty root set.
pub fn nearest_errors(predictions: &[PredictionRecord], roots: &RootSet) -> Vec<Option<(f64, Complex64)>> {
    predictions
        .iter()
        .map(|p| {
            roots
                .roots
                .iter()
                .map(|r| ((r - p.z_scaled).norm(), *r))
                .min_by(|a, b| a.0.total_cmp(&b.0))
        })
        .collect()
}

/// Error models for [`rate_fit`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateModel {
    /// `e_n = C n^α log n`; `α` should come out near `-1`.
    LognOverN,
    /// `e_n = C n^α`, expected `α = -1/2`.
    InvSqrtN,
    /// `e_n = C n^α`, expected `α = -1`.
    InvN,
    /// `e_n = C n^α` with no expected exponent.
    CustomPower,
}

impl RateModel {
    pub fn tag(self) -> &'static str {
        match self {
            RateModel::LognOverN => "logn_over_n",
            RateModel::InvSqrtN => "inv_sqrt_n",
            RateModel::InvN => "inv_n",
            RateModel::CustomPower => "custom_power",
        }
    }

    /// The exponent the model predicts, when it names one.
    pub fn expected_exponent(self) -> Option<f64> {
        match self {
            RateModel::LognOverN | RateModel::InvN => Some(-1.0),
            RateModel::InvSqrtN => Some(-0.5),
            RateModel::CustomPower => None,
        }
    }
}

/// Least-squares fit of an error law.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub model: RateModel,
    pub fitted_constant: f64,
    pub fitted_exponent: f64,
    pub r_squared: f64,
}

/// Fits `log e_n = log C + α log n` (after dividing by `log n` for
/// [`RateModel::LognOverN`]) by least squares.
///
/// # Errors
/// [`Error::Insufficient`] below three points; [`Error::Degenerate`] when
/// some `e_n <= 0` or all `n` coincide.
pub fn rate_fit(errors: &[(usize, f64)], model: RateModel) -> Result<RateFit> {
    if errors.len() < 3 {
        return Err(Error::Insufficient(format!("rate fit needs 3 points, got {}", errors.len())));
    }
    if let Some(&(n, e)) = errors.iter().find(|&&(n, e)| !(e > 0.0) || n < 2) {
        return Err(Error::Degenerate(format!("error {e} at n = {n} is not a positive sample")));
    }
    let pts: Vec<(f64, f64)> = errors
        .iter()
        .map(|&(n, e)| {
            let x = (n as f64).ln();
            let y = match model {
                RateModel::LognOverN => (e / x).ln(),
                _ => e.ln(),
            };
            (x, y)
        })
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all n coincide".into()));
    }
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let sse: f64 = pts.iter().map(|p| (p.1 - icpt - slope * p.0).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { (1.0 - sse / syy).clamp(0.0, 1.0) };
    Ok(RateFit {
        model,
        fitted_constant: icpt.exp(),
        fitted_exponent: slope,
        r_squared: r2,
    })
}

/// Roots of `p_{n-1}(r_n z)` for each `n`, computed in parallel and returned
/// in input order.
///
/// # Errors
/// The first failure among the runs.
pub fn roots_for(fam: &FunctionFamily, ns: &[usize], mode: RadiusMode) -> Result<Vec<RootSet>> {
    ns.par_iter()
        .map(|&n| all_roots(&partial_sum(fam, n, mode)?, ROOT_TOL))
        .collect()
}

/// Roots of `p_n(n z)` for the exponential family.
///
/// # Errors
/// [`Error::Precondition`] for other families; root-finder failures.
pub fn exp_section_roots(fam: &FunctionFamily, n: usize) -> Result<RootSet> {
    require_exp(fam, "this check")?;
    all_roots(&partial_sum(fam, n + 1, RadiusMode::Explicit(n as f64))?, ROOT_TOL)
}

fn require_exp(fam: &FunctionFamily, what: &str) -> Result<()> {
    if matches!(fam.kind, FamilyKind::Exp) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} is specific to the exponential family, got `{}`", fam.name)))
    }
}

/// Outcome of the distance-to-`S` check for `p_n(nz)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuckholtzResult {
    pub n: usize,
    pub max_distance: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Largest distance from a root of `p_n(nz)` to `S`, against `2e/√n`.
///
/// # Errors
/// As [`exp_section_roots`]; curve tracing failures.
pub fn buckholtz_check(fam: &FunctionFamily, n: usize) -> Result<BuckholtzResult> {
    let rs = exp_section_roots(fam, n)?;
    buckholtz_from_roots(&rs)
}

/// [`buckholtz_check`] on precomputed roots of `p_n(nz)`, whose root set
/// counts `n + 1` coefficients.
///
/// # Errors
/// Curve tracing failures.
pub fn buckholtz_from_roots(rs: &RootSet) -> Result<BuckholtzResult> {
    let samples = trace(1.0, 2048)?;
    let max_distance = rs.roots.iter().map(|z| curve_distance(*z, &samples, 1.0)).fold(0.0, f64::max);
    let n = rs.n - 1;
    let bound = 2.0 * std::f64::consts::E / (n as f64).sqrt();
    Ok(BuckholtzResult {
        n,
        max_distance,
        bound,
        pass: max_distance <= bound,
    })
}

/// Outcome of the unit-disk check for `p_n(nz)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskResult {
    pub n: usize,
    pub max_modulus: f64,
    pub pass: bool,
}

/// Every root of `p_n(nz)` lies in `|z| <= 1 + 1e-9`: the coefficients
/// `n^k/k!` are nonincreasing from `k = n-1` on, so Eneström–Kakeya applies.
///
/// # Errors
/// As [`exp_section_roots`].
pub fn enestrom_kakeya_check(fam: &FunctionFamily, n: usize) -> Result<DiskResult> {
    let rs = exp_section_roots(fam, n)?;
    Ok(disk_from_roots(&rs))
}

/// [`enestrom_kakeya_check`] on precomputed roots of `p_n(nz)`.
pub fn disk_from_roots(rs: &RootSet) -> DiskResult {
    let max_modulus = rs.roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    DiskResult {
        n: rs.n - 1,
        max_modulus,
        pass: max_modulus <= 1.0 + 1e-9,
    }
}

/// Per-`n` statistics of [`exterior_approach_fit`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExteriorRow {
    pub n: usize,
    pub band_roots: usize,
    /// Median of `|z^λ exp(1-z^λ)| - 1` over the band.
    pub median_excess: f64,
    /// `median_excess / (target · log n / n)`.
    pub normalized: f64,
    pub all_exterior: bool,
}

/// Approach rate of the zeros toward `S` from outside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExteriorReport {
    pub rows: Vec<ExteriorRow>,
    /// Coefficient of `log n / n` the fit should recover.
    pub target: f64,
    /// Constant of `C log n / n` with the exponent held at `-1`.
    pub fit: RateFit,
    /// Fit with a free exponent, when every median is positive.
    pub free_fit: Option<RateFit>,
    /// Set when the fitted constant is below a tenth of the target.
    pub model_mismatch: bool,
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len();
    if m % 2 == 1 { v[m / 2] } else { 0.5 * (v[m / 2 - 1] + v[m / 2]) }
}

/// Median excess `|z^λ exp(1-z^λ)| - 1` of the roots with `|arg z|` in `arc_band`
/// over `n_grid`, fitted against `C log n / n` with the exponent held. The target `C` is
/// `λ Re s` for the log shift `s` of the arc scaling at the middle of the band,
/// which is `λ/2` for one direction.
///
/// # Errors
/// [`Error::Insufficient`] when a band holds fewer than three roots; root,
/// scaling and fit failures.
pub fn exterior_approach_fit(fam: &FunctionFamily, n_grid: &[usize], arc_band: (f64, f64)) -> Result<ExteriorReport> {
    let sets = roots_for(fam, n_grid, RadiusMode::Standard)?;
    exterior_from_roots(fam, &sets, arc_band)
}

/// [`exterior_approach_fit`] on precomputed roots of `p_{n-1}(r_n z)`.
///
/// # Errors
/// As [`exterior_approach_fit`].
pub fn exterior_from_roots(fam: &FunctionFamily, sets: &[RootSet], arc_band: (f64, f64)) -> Result<ExteriorReport> {
    let lambda = fam.growth.lambda;
    let first = sets.first().ok_or_else(|| Error::Insufficient("no root sets".into()))?;
    let mid = ArcPoint::at_arg(fam, 0.5 * (arc_band.0 + arc_band.1), first.n)?;
    let target = lambda * arc_scaling(&mid)?.log_shift.re;
    let mut rows = Vec::new();
    for rs in sets {
        let mut ex: Vec<f64> = rs
            .roots
            .iter()
            .filter(|z| (arc_band.0..=arc_band.1).contains(&z.arg().abs()))
            .map(|z| szego_modulus(*z, lambda) - 1.0)
            .collect();
        if ex.len() < 3 {
            return Err(Error::Insufficient(format!("{} roots in the band at n = {}", ex.len(), rs.n)));
        }
        let all_exterior = ex.iter().all(|&e| e > 0.0);
        let band_roots = ex.len();
        let med = median(&mut ex);
        let scale = (rs.n as f64).ln() / rs.n as f64;
        rows.push(ExteriorRow {
            n: rs.n,
            band_roots,
            median_excess: med,
            normalized: med / (target * scale),
            all_exterior,
        });
    }
    let samples: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, r.median_excess)).collect();
    let fit = origin_fit(&samples);
    let free_fit = if rows.len() >= 3 && rows.iter().all(|r| r.median_excess > 0.0) {
        Some(rate_fit(&samples, RateModel::LognOverN)?)
    } else {
        None
    };
    Ok(ExteriorReport {
        free_fit,
        model_mismatch: fit.fitted_constant < 0.1 * target,
        rows,
        target,
        fit,
    })
}

/// `e_n ≈ C log n / n` with the exponent held at `-1`, by least squares
/// through the origin.
fn origin_fit(samples: &[(usize, f64)]) -> RateFit {
    let xs: Vec<f64> = samples.iter().map(|&(n, _)| (n as f64).ln() / n as f64).collect();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(samples).map(|(x, s)| x * s.1).sum();
    let c = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let my = samples.iter().map(|s| s.1).sum::<f64>() / samples.len().max(1) as f64;
    let syy: f64 = samples.iter().map(|s| (s.1 - my).powi(2)).sum();
    let sse: f64 = xs.iter().zip(samples).map(|(x, s)| (s.1 - c * x).powi(2)).sum();
    RateFit {
        model: RateModel::LognOverN,
        fitted_constant: c,
        fitted_exponent: -1.0,
        r_squared: if syy == 0.0 { 1.0 } else { (1.0 - sse / syy).clamp(0.0, 1.0) },
    }
}

/// Where a ratio limit is taken.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RatioSite {
    /// Arc point `ξ` on `S`.
    Arc { xi: Complex64 },
    /// The corner `z = 1`.
    Corner,
}

/// One measured ratio `p_{n-1}(r_n z_n(w)) / f(r_n z_n(w))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: usize,
    pub w: Complex64,
    pub measured: Complex64,
    pub predicted: Complex64,
    pub error: f64,
}

/// `p_{n-1}(r_n z) / f(ρ r_n z)`, with the numerator from the closed-form
/// split where available and the denominator exact or from the surrogate.
///
/// # Errors
/// [`Error::OutOfSector`] when the surrogate is invalid at the point.
pub fn measured_ratio(fam: &FunctionFamily, poly: &PartialSumPoly, z: Complex64) -> Result<Complex64> {
    let num = match poly.eval_split(z) {
        Some(e) => e.value.mul_pow2(-poly.prescale_exponent),
        None => poly.eval_unscaled(z),
    };
    let den = ScaledComplex::from_complex(fam.normalization) * fam.eval_normalized(poly.r_n * z)?;
    Ok((num / den).to_complex())
}

/// Measured ratios against their limits over `w_grid × n_grid`. At the
/// corner `z_n(w) = 1 + w/√n` with limit `½ erfc(w √(λ/2))`; on an arc the
/// first-variant `z_n(w)` with limit `1 - D e^{-w}`.
///
/// # Errors
/// [`Error::Precondition`] for a corner `w` with `Re w >= 0`; scaling and
/// evaluation failures.
pub fn ratio_limit_check(
    fam: &FunctionFamily,
    site: RatioSite,
    w_grid: &[Complex64],
    n_grid: &[usize],
) -> Result<Vec<RatioRow>> {
    if matches!(site, RatioSite::Corner) {
        if let Some(w) = w_grid.iter().find(|w| !(w.re < 0.0)) {
            return Err(Error::Precondition(format!("corner ratio needs Re w < 0, got {w}")));
        }
    }
    let lambda = fam.growth.lambda;
    let per_n: Vec<Vec<RatioRow>> = n_grid
        .par_iter()
        .map(|&n| {
            let poly = partial_sum(fam, n, RadiusMode::Standard)?;
            let point = match site {
                RatioSite::Arc { xi } => Some(ArcPoint::new(fam, xi, n)?),
                RatioSite::Corner => None,
            };
            w_grid
                .iter()
                .map(|&w| {
                    let (z, predicted) = match &point {
                        Some(p) => (z_n_arc(p, w, Variant::V1)?, arc_limit_value(p, w)?),
                        None => (
                            1.0 + w / (n as f64).sqrt(),
                            0.5 * erfc(w * (lambda / 2.0).sqrt()),
                        ),
                    };
                    let measured = measured_ratio(fam, &poly, z)?;
                    Ok(RatioRow {
                        n,
                        w,
                        measured,
                        predicted,
                        error: (measured - predicted).norm(),
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

/// True when `errors` decreases along its order with at most one increase.
pub fn decreasing_with_one_inversion(errors: &[f64]) -> bool {
    errors.windows(2).filter(|w| w[1] > w[0]).count() <= 1
}

/// Row of the roots table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootRow {
    pub family: String,
    pub n: usize,
    pub re: f64,
    pub im: f64,
    pub residual: f64,
}

/// Row of the matches table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchRow {
    pub family: String,
    pub n: usize,
    pub theorem: String,
    pub k: i64,
    pub w_re: f64,
    pub w_im: f64,
    pub pred_re: f64,
    pub pred_im: f64,
    pub root_re: f64,
    pub root_im: f64,
    pub abs_err: f64,
    pub norm_err: f64,
}

/// Row of the rates table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub family: String,
    pub check: String,
    pub model: String,
    pub constant: f64,
    pub exponent: f64,
    pub r2: f64,
}

pub fn root_rows(rs: &RootSet) -> Vec<RootRow> {
    rs.roots
        .iter()
        .zip(&rs.residuals)
        .map(|(z, r)| RootRow {
            family: rs.family.clone(),
            n: rs.n,
            re: z.re,
            im: z.im,
            residual: *r,
        })
        .collect()
}

pub fn match_rows(report: &MatchReport) -> Vec<MatchRow> {
    report
        .pairs
        .iter()
        .map(|p| MatchRow {
            family: report.family.clone(),
            n: report.n,
            theorem: p.prediction.theorem.tag().to_string(),
            k: p.prediction.k,
            w_re: p.prediction.w.re,
            w_im: p.prediction.w.im,
            pred_re: p.prediction.z_scaled.re,
            pred_im: p.prediction.z_scaled.im,
            root_re: p.matched_root.re,
            root_im: p.matched_root.im,
            abs_err: p.abs_error,
            norm_err: p.normalized_error,
        })
        .collect()
}

pub fn rate_row(family: &str, check: &str, fit: &RateFit) -> RateRow {
    RateRow {
        family: family.to_string(),
        check: check.to_string(),
        model: fit.model.tag().to_string(),
        constant: fit.fitted_constant,
        exponent: fit.fitted_exponent,
        r2: fit.r_squared,
    }
}

/// Writes rows as CSV with a header taken from the field names.
///
/// # Errors
/// I/O and serialization failures.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes rows as a pretty-printed JSON array with the same field names.
///
/// # Errors
/// I/O and serialization failures.
pub fn write_json<T: Serialize, W: Write>(rows: &[T], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    out.write_all(b"\n")?;
    Ok(())
}
