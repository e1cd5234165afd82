//! Predicted zeros from the arc and corner scaling limits.
//!
//! Along an arc point `ξ` of the limit curve the ratio
//! `p_{n-1}(r_n z_n(w)) / F(r_n z_n(w))` tends to `1 - D e^{-w}`, so zeros sit
//! at `w_k = Log D - 2πik`. Near `z = 1` the ratio tends to
//! `erfc(w sqrt(λ/2)) / 2` with `z = 1 + w/√n`.

mod presets;

use std::f64::consts::PI;
use std::io::Write;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::{self, CurveSample};
use crate::error::{Error, Result};
use crate::numeric::erfc_zeros;
use crate::rootfind::RootSet;
use crate::series::{scaling_radius, FamilyKind, FunctionFamily, RadiusMode};

pub use presets::preset_scaling;

/// Below this modulus the arc constant `D` is treated as degenerate.
pub const DEGENERATE_TOL: f64 = 1e-6;

/// Real parts closer than this count as equal when selecting the case.
const TIE_TOL: f64 = 1e-12;

/// Which scaling limit produced a prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    #[serde(rename = "arc-one-dir")]
    ArcOneDir,
    #[serde(rename = "arc-two-dir-case-a")]
    ArcTwoDirCaseA,
    #[serde(rename = "arc-two-dir-case-b")]
    ArcTwoDirCaseB,
    #[serde(rename = "arc-two-dir-case-eq")]
    ArcTwoDirCaseEq,
    #[serde(rename = "arc-m-dir")]
    ArcMDir,
    #[serde(rename = "corner-erfc")]
    CornerErfc,
    #[serde(rename = "corner-kkmm")]
    CornerKkmm,
}

impl Theorem {
    pub fn tag(self) -> &'static str {
        match self {
            Theorem::ArcOneDir => "arc-one-dir",
            Theorem::ArcTwoDirCaseA => "arc-two-dir-case-a",
            Theorem::ArcTwoDirCaseB => "arc-two-dir-case-b",
            Theorem::ArcTwoDirCaseEq => "arc-two-dir-case-eq",
            Theorem::ArcMDir => "arc-m-dir",
            Theorem::CornerErfc => "corner-erfc",
            Theorem::CornerKkmm => "corner-kkmm",
        }
    }

    pub fn is_arc(self) -> bool {
        !matches!(self, Theorem::CornerErfc | Theorem::CornerKkmm)
    }
}

/// A point `ξ ≠ 1` of the limit curve together with the phases `τ_n`, `σ_n`.
#[derive(Clone, Debug)]
pub struct ArcPoint<'a> {
    pub sample: CurveSample,
    pub n: usize,
    pub r_n: f64,
    pub tau_n: f64,
    /// `n arg ζ_k` reduced to `(-π, π]`, one per non-principal direction.
    pub sigma_n: Vec<f64>,
    pub family: &'a FunctionFamily,
}

impl<'a> ArcPoint<'a> {
    /// The curve point at argument `arg` (negative for the lower half).
    ///
    /// # Errors
    /// [`Error::Parameter`] for `n < 3`, [`Error::CornerPoint`] at `arg = 0`,
    /// [`Error::Bracketing`] from the radius solve.
    pub fn at_arg(family: &'a FunctionFamily, arg: f64, n: usize) -> Result<Self> {
        let lambda = family.growth.lambda;
        let r = curve::radius_at(arg, lambda)?;
        Self::new(family, Complex64::from_polar(r, arg), n)
    }

    /// Builds the point from `ξ`, which must lie on the curve.
    ///
    /// # Errors
    /// [`Error::Parameter`] for `n < 3` or `ξ` off the curve, [`Error::CornerPoint`] at `ξ = 1`.
    pub fn new(family: &'a FunctionFamily, xi: Complex64, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter(format!("arc predictions need n >= 3, got {n}")));
        }
        let lambda = family.growth.lambda;
        if (xi - 1.0).norm() < 1e-12 {
            return Err(Error::CornerPoint);
        }
        if (curve::szego_modulus(xi, lambda) - 1.0).abs() > 1e-8 || xi.norm() > 1.0 + 1e-12 {
            return Err(Error::Parameter(format!("xi = {xi} is not on the limit curve")));
        }
        let t = curve::tau(xi, lambda);
        let sample = CurveSample {
            xi,
            arg: xi.arg(),
            tau: t,
            arclength_hint: 0.0,
        };
        let sigma_n = family
            .growth
            .others()
            .iter()
            .map(|d| curve::wrap_angle(n as f64 * d.zeta.arg()))
            .collect();
        Ok(ArcPoint {
            sample,
            n,
            r_n: scaling_radius(lambda, n, RadiusMode::Standard),
            tau_n: curve::tau_n(t, n, lambda),
            sigma_n,
            family,
        })
    }

    pub fn xi(&self) -> Complex64 {
        self.sample.xi
    }

    fn lambda(&self) -> f64 {
        self.family.growth.lambda
    }
}

/// Parametrization `z_n(w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Shift `log n / 2` and phase `τ_n`.
    V1,
    /// Shift `(a - b + λ/2) log n / λ` and phase `σ_n + τ_n` of direction 1.
    V2,
}

/// The data of one arc scaling limit: `z_n(w) = ξ[1 + s log n/((1-ξ^λ)n) - (w - iσ - iτ_n)/((1-ξ^λ)n)]`
/// and the limit `1 - D e^{-w}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcScaling {
    pub theorem: Theorem,
    pub d: Complex64,
    pub log_shift: Complex64,
    pub sigma: f64,
}

fn z_from_shift(point: &ArcPoint, w: Complex64, log_shift: Complex64, sigma: f64) -> Complex64 {
    let xi = point.xi();
    let n = point.n as f64;
    let den = (1.0 - xi.powf(point.lambda())) * n;
    let i = Complex64::new(0.0, 1.0);
    xi * (1.0 + log_shift * n.ln() / den - (w - i * sigma - i * point.tau_n) / den)
}

/// `z_n(w)` in the scaled plane.
///
/// # Errors
/// [`Error::Precondition`] for `V2` on a one-direction family.
pub fn z_n_arc(point: &ArcPoint, w: Complex64, variant: Variant) -> Result<Complex64> {
    match variant {
        Variant::V1 => Ok(z_from_shift(point, w, Complex64::new(0.5, 0.0), 0.0)),
        Variant::V2 => {
            let g = &point.family.growth;
            let d = g
                .others()
                .first()
                .ok_or_else(|| Error::Precondition("V2 needs a second growth direction".into()))?;
            let shift = (g.a() - d.exponent + g.lambda / 2.0) / g.lambda;
            Ok(z_from_shift(point, w, shift, point.sigma_n[0]))
        }
    }
}

/// The arc scaling limit read off the growth data.
///
/// With `M` the largest of `Re a, Re b_k`, the directions attaining `M`
/// enter the constant. A unique maximizer gives a true limit; ties give the
/// `n`-dependent asymptotic. Ties between three or more directions, and ties
/// among two non-principal directions above `Re a` when `m > 2`, are not covered.
///
/// # Errors
/// [`Error::Unsupported`] for uncovered tie patterns, [`Error::Degenerate`]
/// if `ξ` coincides with some `ζ_k`.
pub fn generic_scaling(point: &ArcPoint) -> Result<ArcScaling> {
    let g = &point.family.growth;
    let lambda = g.lambda;
    let xi = point.xi();
    let a = g.a();
    let m = g.others().len();
    let top = g.directions.iter().map(|d| d.exponent.re).fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = (0..=m).filter(|&k| g.directions[k].exponent.re >= top - TIE_TOL).collect();
    let theorem = match (m, tied.len()) {
        (0, _) => Theorem::ArcOneDir,
        (1, 1) if tied[0] == 0 => Theorem::ArcTwoDirCaseA,
        (1, 1) => Theorem::ArcTwoDirCaseB,
        (1, _) => Theorem::ArcTwoDirCaseEq,
        (_, 1) => Theorem::ArcMDir,
        (2, 2) | (2, 3) => Theorem::ArcMDir,
        _ => {
            return Err(Error::Unsupported(format!(
                "{} of {} growth directions share the largest Re b",
                tied.len(),
                m + 1
            )))
        }
    };
    let lead = tied[0];
    let dl = g.directions[lead];
    let sigma_of = |k: usize| if k == 0 { 0.0 } else { point.sigma_n[k - 1] };
    let i = Complex64::new(0.0, 1.0);
    let ln_r = point.r_n.ln();
    let mut sum = Complex64::new(0.0, 0.0);
    for &k in &tied {
        let dk = g.directions[k];
        if (dk.zeta - xi).norm() < 1e-14 {
            return Err(Error::Degenerate("xi coincides with a growth direction".into()));
        }
        // (ζ_k/ζ_lead)^{-n} via reduced phases.
        let phase = (-i * (sigma_of(k) - sigma_of(lead))).exp();
        let radial = ((dk.exponent - dl.exponent) * ln_r).exp();
        sum += dk.amplitude * dk.zeta * phase * radial / (dk.zeta - xi);
    }
    let pre = ((a - dl.exponent) / lambda * lambda.ln()).exp() / ((a * xi.ln()).exp() * (2.0 * PI * lambda).sqrt());
    Ok(ArcScaling {
        theorem,
        d: sum * pre,
        log_shift: (a - dl.exponent + lambda / 2.0) / lambda,
        sigma: sigma_of(lead),
    })
}

/// The arc scaling for a point: the preset statement where one exists,
/// the generic one otherwise.
///
/// # Errors
/// As [`generic_scaling`].
pub fn arc_scaling(point: &ArcPoint) -> Result<ArcScaling> {
    match preset_scaling(point) {
        Some(s) => s,
        None => generic_scaling(point),
    }
}

/// The predicted value of `p_{n-1}(r_n z_n(w)) / F(r_n z_n(w))`, `1 - D e^{-w}`.
///
/// # Errors
/// As [`arc_scaling`].
pub fn arc_limit_value(point: &ArcPoint, w: Complex64) -> Result<Complex64> {
    let s = arc_scaling(point)?;
    Ok(1.0 - s.d * (-w).exp())
}

/// `z_n(w)` for the case that applies at `point`.
///
/// # Errors
/// As [`arc_scaling`].
pub fn z_n_for_case(point: &ArcPoint, w: Complex64) -> Result<Complex64> {
    let s = arc_scaling(point)?;
    Ok(z_from_shift(point, w, s.log_shift, s.sigma))
}

/// A predicted zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub family: String,
    pub theorem: Theorem,
    /// Index in the tower (arcs) or signed erfc-zero index (corner, negative for conjugates).
    pub k: i64,
    pub w: Complex64,
    /// Zero of `p_{n-1}(r_n z)`.
    pub z_scaled: Complex64,
    /// `ρ r_n z_scaled`, a zero of the raw partial sum.
    pub z_unscaled: Complex64,
    pub n: usize,
    pub expected_error_scale: f64,
}

/// Zeros of `1 - D e^{-w}`, `w_k = Log D - 2πik`, mapped through `z_n`.
///
/// # Errors
/// [`Error::Degenerate`] when `|D| < 1e-6` or `D` is not finite; errors of [`arc_scaling`].
pub fn arc_predicted_zeros(point: &ArcPoint, k_range: RangeInclusive<i64>) -> Result<Vec<PredictionRecord>> {
    let s = arc_scaling(point)?;
    if !(s.d.norm() >= DEGENERATE_TOL) || !s.d.is_finite() {
        return Err(Error::Degenerate(format!("arc constant |D| = {:e}", s.d.norm())));
    }
    let n = point.n;
    let scale = (n as f64).ln() / n as f64;
    let log_d = s.d.ln();
    let fam = point.family;
    Ok(k_range
        .map(|k| {
            let w = log_d - Complex64::new(0.0, 2.0 * PI * k as f64);
            let z = z_from_shift(point, w, s.log_shift, s.sigma);
            PredictionRecord {
                family: fam.name.clone(),
                theorem: s.theorem,
                k,
                w,
                z_scaled: z,
                z_unscaled: fam.rotation * point.r_n * z,
                n,
                expected_error_scale: scale,
            }
        })
        .collect())
}

/// Largest `Re b_k - Re a` over non-principal directions, `-∞` if there are none.
pub fn corner_excess(fam: &FunctionFamily) -> f64 {
    let a = fam.growth.a().re;
    fam.growth
        .others()
        .iter()
        .map(|d| d.exponent.re - a)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Fails with [`Error::Gated`] unless `Re b_k - Re a < λ/2` for every `k`.
pub fn corner_gate(fam: &FunctionFamily) -> Result<()> {
    let half = fam.growth.lambda / 2.0;
    let excess = corner_excess(fam);
    if excess >= half {
        return Err(Error::Gated {
            excess,
            half_lambda: half,
        });
    }
    Ok(())
}

/// Corner predictions `z = 1 + w_j sqrt(2/λ)/√n` for the first `count` erfc
/// zeros and their conjugates.
///
/// # Errors
/// [`Error::Gated`] when the corner limit does not exist; [`Error::Parameter`]
/// for `n < 3` or `count = 0`.
pub fn corner_predicted_zeros(
    fam: &FunctionFamily,
    n: usize,
    count: usize,
    mode: RadiusMode,
) -> Result<Vec<PredictionRecord>> {
    corner_gate(fam)?;
    if n < 3 {
        return Err(Error::Parameter(format!("corner predictions need n >= 3, got {n}")));
    }
    let lambda = fam.growth.lambda;
    let r_n = scaling_radius(lambda, n, mode);
    let sn = (n as f64).sqrt();
    let factor = (2.0 / lambda).sqrt();
    let mut out = Vec::with_capacity(2 * count);
    for (j, wj) in erfc_zeros(count)?.into_iter().enumerate() {
        for (k, v) in [(j as i64 + 1, wj), (-(j as i64) - 1, wj.conj())] {
            let w = v * factor;
            let z = 1.0 + w / sn;
            out.push(PredictionRecord {
                family: fam.name.clone(),
                theorem: Theorem::CornerErfc,
                k,
                w,
                z_scaled: z,
                z_unscaled: fam.rotation * r_n * z,
                n,
                expected_error_scale: 1.0 / sn,
            });
        }
    }
    Ok(out)
}

/// Refined corner zero of `p_{n-1}[exp](nz)` with `terms` corrections to `z = 1`.
///
/// # Errors
/// [`Error::Parameter`] for non-exp families or `terms` outside `1..=4`.
pub fn kkmm_refined_zero(fam: &FunctionFamily, w: Complex64, n: usize, terms: usize) -> Result<Complex64> {
    if fam.kind != FamilyKind::Exp {
        return Err(Error::Parameter(format!("refined corner zeros are for exp only, got {}", fam.name)));
    }
    if !(1..=4).contains(&terms) {
        return Err(Error::Parameter(format!("terms must lie in 1..=4, got {terms}")));
    }
    let h = 1.0 / (n as f64).sqrt();
    let s2 = 2f64.sqrt();
    let w2 = w * w;
    let parts = [
        s2 * w * h,
        (2.0 * w2 - 1.0) / 3.0 * h * h,
        (2.0 * w2 * w - 7.0 * w) / (18.0 * s2) * h.powi(3),
        -(6.0 * w2 * w2 + 7.0 * w2 - 8.0) / 405.0 * h.powi(4),
    ];
    Ok(parts[..terms].iter().fold(Complex64::new(1.0, 0.0), |z, t| z + t))
}

/// Refined corner predictions for the first `count` erfc zeros and conjugates.
/// The error scale is `n^{-(terms+1)/2}`.
///
/// # Errors
/// As [`kkmm_refined_zero`]; [`Error::Parameter`] for `n < 3`.
pub fn kkmm_predicted_zeros(fam: &FunctionFamily, n: usize, count: usize, terms: usize) -> Result<Vec<PredictionRecord>> {
    if n < 3 {
        return Err(Error::Parameter(format!("corner predictions need n >= 3, got {n}")));
    }
    let r_n = n as f64;
    let mut out = Vec::with_capacity(2 * count);
    for (j, wj) in erfc_zeros(count)?.into_iter().enumerate() {
        let z = kkmm_refined_zero(fam, wj, n, terms)?;
        for (k, w, z) in [(j as i64 + 1, wj, z), (-(j as i64) - 1, wj.conj(), z.conj())] {
            out.push(PredictionRecord {
                family: fam.name.clone(),
                theorem: Theorem::CornerKkmm,
                k,
                w,
                z_scaled: z,
                z_unscaled: r_n * z,
                n,
                expected_error_scale: (n as f64).powf(-((terms + 1) as f64) / 2.0),
            });
        }
    }
    Ok(out)
}

/// Number of unscaled roots in the disk `|z - ρ_n e^{iθ}| <= ρ_n n^{exponent+ε}`.
pub fn width_disk_count(roots: &RootSet, center_arg: f64, rho_n: f64, exponent: f64, epsilon: f64) -> usize {
    let center = Complex64::from_polar(rho_n, center_arg);
    let radius = rho_n * (roots.n as f64).powf(exponent + epsilon);
    roots.unscaled().iter().filter(|z| (*z - center).norm() <= radius).count()
}

/// Flat row used by the CSV and JSON exports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionRow {
    pub family: String,
    pub theorem: String,
    pub n: usize,
    pub k: i64,
    pub w_re: f64,
    pub w_im: f64,
    pub z_scaled_re: f64,
    pub z_scaled_im: f64,
    pub z_unscaled_re: f64,
    pub z_unscaled_im: f64,
    pub expected_error_scale: f64,
}

impl From<&PredictionRecord> for PredictionRow {
    fn from(r: &PredictionRecord) -> Self {
        PredictionRow {
            family: r.family.clone(),
            theorem: r.theorem.tag().to_string(),
            n: r.n,
            k: r.k,
            w_re: r.w.re,
            w_im: r.w.im,
            z_scaled_re: r.z_scaled.re,
            z_scaled_im: r.z_scaled.im,
            z_unscaled_re: r.z_unscaled.re,
            z_unscaled_im: r.z_unscaled.im,
            expected_error_scale: r.expected_error_scale,
        }
    }
}

/// Writes predictions as CSV with a header row.
///
/// # Errors
/// I/O and serialization failures.
pub fn write_predictions_csv<W: Write>(records: &[PredictionRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(PredictionRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes predictions as a pretty-printed JSON array of rows.
///
/// # Errors
/// I/O and serialization failures.
pub fn write_predictions_json<W: Write>(records: &[PredictionRecord], out: W) -> Result<()> {
    let rows: Vec<PredictionRow> = records.iter().map(PredictionRow::from).collect();
    serde_json::to_writer_pretty(out, &rows)?;
    Ok(())
}

#[cfg(test)]
mod tests;
