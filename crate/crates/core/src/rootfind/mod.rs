//! All zeros of a scaled partial sum by Aberth–Ehrlich iteration.
//!
//! The default sweep is Gauss–Seidel: each correction uses the freshest
//! estimates of the other roots, which keeps the run bit-for-bit
//! reproducible. A Jacobi sweep over rayon is available for large degrees.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::ScaledComplex;
use crate::series::poly::compensated_horner_with_derivative;
use crate::series::PartialSumPoly;

/// Default backward-error tolerance.
pub const DEFAULT_TOL: f64 = 1e-11;

/// Relative distance below which two roots are reported as a cluster.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Iteration controls.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Sweep after which the worst unconverged roots are perturbed.
    pub restart_at: usize,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_iter: 200, restart_at: 100, seed: 0, parallel: false }
    }
}

impl RootOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Zeros of `p_{n-1}(r_n z)` in the scaled plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub family: String,
    pub n: usize,
    pub r_n: f64,
    pub rotation: Complex64,
    pub roots: Vec<Complex64>,
    /// Backward error `|p(z)| / Σ|d_k||z|^k` per root.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Index pairs closer than the cluster tolerance.
    pub clusters: Vec<(usize, usize)>,
    pub warnings: Vec<String>,
}

impl RootSet {
    /// Roots in the variable of the raw function: `ρ r_n z`.
    pub fn unscaled(&self) -> Vec<Complex64> {
        self.roots.iter().map(|z| self.rotation * self.r_n * z).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Prescaled coefficients in the form used by the iteration.
enum Coeffs {
    Dense(Vec<Complex64>),
    Scaled(Vec<ScaledComplex>),
}

struct Evaluator<'a> {
    coeffs: Coeffs,
    rev: Vec<Complex64>,
    abs: Vec<f64>,
    abs_rev: Vec<f64>,
    deg: usize,
    /// Source polynomial when the tail split applies (no low-order deflation).
    split: Option<&'a PartialSumPoly>,
    shift: usize,
}

/// Newton correction, backward error, and whether `|p|` is at the
/// evaluation's own error level.
struct Step {
    ratio: Complex64,
    backward: f64,
    attained: bool,
}

impl<'a> Evaluator<'a> {
    /// `d` holds the coefficients after dividing out `z^shift`.
    fn new(d: &[ScaledComplex], split: Option<&'a PartialSumPoly>, shift: usize) -> Self {
        let deg = d.len() - 1;
        let dense = if d.iter().all(|c| c.is_zero() || c.exponent() >= -1020) {
            Coeffs::Dense(d.iter().map(|c| c.to_complex()).collect())
        } else {
            Coeffs::Scaled(d.to_vec())
        };
        let (rev, abs) = match &dense {
            Coeffs::Dense(c) => (c.iter().rev().copied().collect(), c.iter().map(|x| x.norm()).collect()),
            Coeffs::Scaled(_) => (Vec::new(), Vec::new()),
        };
        let abs_rev: Vec<f64> = abs.iter().rev().copied().collect();
        let split = split.filter(|p| p.closed_form.is_some());
        Self { coeffs: dense, rev, abs, abs_rev, deg, split, shift }
    }

    fn newton(&self, z: Complex64) -> Step {
        let eps = f64::EPSILON;
        let g = 4.0 * (self.deg + 1) as f64 * eps;
        let (p, dp, bound, a) = match &self.coeffs {
            Coeffs::Dense(c) if z.norm() > 1.0 => {
                let y = z.inv();
                let (q, dq) = compensated_horner_with_derivative(&self.rev, y);
                let a = abs_horner(&self.abs_rev, y.norm());
                let ratio = z * q / (self.deg as f64 * q - y * dq);
                let attained = q.norm() <= 8.0 * (eps * q.norm() + g * g * a);
                return Step { ratio, backward: q.norm() / a, attained };
            }
            Coeffs::Dense(c) => {
                let (p, dp) = compensated_horner_with_derivative(c, z);
                let a = abs_horner(&self.abs, z.norm());
                let noise = eps * p.norm() + g * g * a;
                (ScaledComplex::from_complex(p), ScaledComplex::from_complex(dp), ScaledComplex::from_f64(noise), ScaledComplex::from_f64(a))
            }
            Coeffs::Scaled(c) => {
                let (p, dp, a) = renormalized_horner(c, z);
                (p, dp, a.scale(Complex64::new(g, 0.0)), a)
            }
        };
        // `bound` is the evaluation noise of the stored polynomial. Relative
        // to the true partial sum, the doubles in the coefficients add up to
        // ε·Σ|d_k||z|^k, which decides whether the closed-form split is better.
        let (mut p, mut dp, mut bound) = (p, dp, bound);
        let representation = a.scale(Complex64::new(eps, 0.0)) + bound;
        if representation.abs_ratio(&p) > 1e-12 {
            if let Some(ev) = self.split.and_then(|poly| poly.eval_split(z)) {
                if ev.bound.cmp_abs(&representation).is_lt() {
                    // Divide out z^shift from the split value of the undeflated polynomial.
                    let zs = ScaledComplex::from_complex(z);
                    let zk = zs.powi(self.shift as i32);
                    let v = ev.value / zk;
                    let dv = (ev.derivative - v.scale(Complex64::new(self.shift as f64, 0.0)) * zs.powi(self.shift as i32 - 1)) / zk;
                    p = v;
                    dp = dv;
                    bound = ev.bound / zk;
                }
            }
        }
        let ratio = (p / dp).to_complex();
        let attained = p.cmp_abs(&bound.scale(Complex64::new(8.0, 0.0))).is_le();
        Step { ratio, backward: (p / a).abs(), attained }
    }
}

trait AbsRatio {
    fn abs_ratio(&self, other: &Self) -> f64;
}

impl AbsRatio for ScaledComplex {
    fn abs_ratio(&self, other: &Self) -> f64 {
        if other.is_zero() { f64::INFINITY } else { (*self / *other).abs() }
    }
}

/// Horner for `p`, `p'` and `Σ|d_k||z|^k` in doubles sharing one binary
/// exponent, renormalized when the running sum leaves `[2^-256, 2^256]`.
fn renormalized_horner(c: &[ScaledComplex], z: Complex64) -> (ScaledComplex, ScaledComplex, ScaledComplex) {
    let r = z.norm();
    let zero = Complex64::new(0.0, 0.0);
    let (mut p, mut dp, mut a) = (zero, zero, 0.0f64);
    let mut e: i64 = match c.last() {
        Some(top) => top.exponent(),
        None => 0,
    };
    for dk in c.iter().rev() {
        dp = dp * z + p;
        p = p * z;
        a *= r;
        if !dk.is_zero() {
            let sh = dk.exponent() - e;
            if sh > -1074 {
                let v = ldexp(dk.mantissa(), sh);
                p += v;
                a += v.norm();
            }
        }
        if a > 1e77 || (a < 1e-77 && a > 0.0) {
            let k = a.log2().round() as i64;
            p = ldexp(p, -k);
            dp = ldexp(dp, -k);
            a = crate::numeric::scaled::ldexp(a, -k);
            e += k;
        }
    }
    (ScaledComplex::new(p, e), ScaledComplex::new(dp, e), ScaledComplex::new(Complex64::new(a, 0.0), e))
}

fn ldexp(z: Complex64, k: i64) -> Complex64 {
    use crate::numeric::scaled::ldexp as ld;
    Complex64::new(ld(z.re, k), ld(z.im, k))
}

fn abs_horner(a: &[f64], r: f64) -> f64 {
    a.iter().rev().fold(0.0, |acc, &x| acc * r + x)
}

/// Seeds on Newton-polygon circles, rotated off the symmetry axes.
///
/// Radii come from the upper convex hull of `(k, log2|d_k|)`: an edge from
/// `i` to `j` contributes `j - i` seeds on the circle of radius
/// `(|d_i|/|d_j|)^{1/(j-i)}`. Zero coefficients are skipped; a vanishing
/// constant term is not special-cased here.
pub fn initial_guesses(poly: &PartialSumPoly) -> Vec<Complex64> {
    let deg = poly.degree();
    seeds(&poly.coeffs[..=deg])
}

fn seeds(d: &[ScaledComplex]) -> Vec<Complex64> {
    let deg = d.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        let z = (-d[0] / d[1]).to_complex();
        return vec![z];
    }
    let pts: Vec<(usize, f64)> =
        d.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.log2_abs())).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (i0, y0) = hull[hull.len() - 2];
            let (i1, y1) = hull[hull.len() - 1];
            let cross = (i1 as f64 - i0 as f64) * (p.1 - y0) - (y1 - y0) * (p.0 as f64 - i0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(deg);
    // Copies of the polygon circles start at angles spread by the golden angle.
    let offset = 0.4;
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    for (e, w) in hull.windows(2).enumerate() {
        let (i, yi) = w[0];
        let (j, yj) = w[1];
        let m = j - i;
        let r = ((yi - yj) / m as f64).exp2();
        for t in 0..m {
            let ang = 2.0 * std::f64::consts::PI * t as f64 / m as f64 + offset + golden * e as f64;
            out.push(Complex64::from_polar(r, ang));
        }
    }
    out
}

/// Aberth–Ehrlich roots; returns the set even if unconverged, flagged.
///
/// # Errors
/// [`Error::Degenerate`] for a constant polynomial.
pub fn all_roots_partial(poly: &PartialSumPoly, opts: &RootOptions) -> Result<RootSet> {
    let deg = poly.degree();
    if deg == 0 {
        return Err(Error::Degenerate("polynomial has degree 0".into()));
    }
    let low = poly.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let core = &poly.coeffs[low..=deg];
    let mut roots = vec![Complex64::new(0.0, 0.0); low];
    let mut iterations = 0;
    let mut warnings = Vec::new();
    let ev = Evaluator::new(core, Some(poly), low);
    if core.len() == 2 {
        roots.push((-core[0] / core[1]).to_complex());
    } else if core.len() > 2 {
        let (z, it, ok) = aberth(&ev, seeds(core), opts);
        roots.extend(z);
        iterations = it;
        if !ok {
            warnings.push(format!("iteration budget of {} sweeps exhausted", opts.max_iter));
        }
    }
    let full = Evaluator::new(&poly.coeffs[..=deg], Some(poly), 0);
    let residuals: Vec<f64> = roots.iter().map(|&z| if z == Complex64::new(0.0, 0.0) && low > 0 { 0.0 } else { full.newton(z).backward }).collect();
    let unconverged = residuals.iter().filter(|&&r| !(r <= opts.tol)).count();
    let converged = unconverged == 0;
    if unconverged > 0 {
        warnings.push(format!("{unconverged} roots above backward-error tolerance {:e}", opts.tol));
    }
    let clusters = find_clusters(&roots, low);
    for &(i, j) in &clusters {
        warnings.push(format!("roots {i} and {j} form a cluster at {}", roots[i]));
    }
    Ok(RootSet {
        family: poly.family.clone(),
        n: poly.n,
        r_n: poly.r_n,
        rotation: poly.rotation,
        roots,
        residuals,
        iterations,
        converged,
        clusters,
        warnings,
    })
}

/// Aberth–Ehrlich roots with the backward-error contract enforced.
///
/// # Errors
/// [`Error::Unconverged`] if any root misses `tol` after the iteration
/// budget; [`Error::Degenerate`] for a constant polynomial.
pub fn all_roots(poly: &PartialSumPoly, tol: f64) -> Result<RootSet> {
    all_roots_with(poly, &RootOptions::with_tol(tol))
}

/// [`all_roots`] with explicit options.
///
/// # Errors
/// As [`all_roots`].
pub fn all_roots_with(poly: &PartialSumPoly, opts: &RootOptions) -> Result<RootSet> {
    let set = all_roots_partial(poly, opts)?;
    if set.converged {
        Ok(set)
    } else {
        let unconverged = set.residuals.iter().filter(|&&r| !(r <= opts.tol)).count();
        Err(Error::Unconverged { iterations: set.iterations, unconverged })
    }
}

fn find_clusters(roots: &[Complex64], zero_mult: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if i < zero_mult && j < zero_mult {
                continue;
            }
            if (roots[i] - roots[j]).norm() < CLUSTER_TOL * (1.0 + roots[i].norm()) {
                out.push((i, j));
            }
        }
    }
    out
}

fn aberth(ev: &Evaluator, mut z: Vec<Complex64>, opts: &RootOptions) -> (Vec<Complex64>, usize, bool) {
    let m = z.len();
    let mut done = vec![false; m];
    let mut resid = vec![f64::INFINITY; m];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for it in 1..=opts.max_iter {
        if opts.parallel {
            let upd: Vec<Option<(Complex64, f64, bool, f64)>> = (0..m)
                .into_par_iter()
                .map(|i| if done[i] { None } else { Some(correction(ev, &z, i)) })
                .collect();
            for (i, u) in upd.into_iter().enumerate() {
                if let Some((w, be, hit, dmin)) = u {
                    resid[i] = be;
                    done[i] = settled(w, hit, dmin, z[i]);
                    z[i] -= w;
                }
            }
        } else {
            for i in 0..m {
                if done[i] {
                    continue;
                }
                let (w, be, hit, dmin) = correction(ev, &z, i);
                resid[i] = be;
                done[i] = settled(w, hit, dmin, z[i]);
                z[i] -= w;
            }
        }
        if done.iter().all(|&d| d) {
            return (z, it, true);
        }
        if it == opts.restart_at {
            let mut open: Vec<usize> = (0..m).filter(|&i| !done[i]).collect();
            open.sort_by(|&a, &b| resid[b].total_cmp(&resid[a]));
            let k = open.len().div_ceil(10);
            for &i in &open[..k] {
                let re: f64 = rng.random_range(-1.0..1.0);
                let im: f64 = rng.random_range(-1.0..1.0);
                z[i] *= Complex64::new(1.0 + 1e-3 * re, 1e-3 * im);
            }
        }
    }
    (z, opts.max_iter, false)
}

/// A root is settled when the step is at rounding level, or when `|p|` is
/// at the evaluation's error level and the step no longer pushes it toward
/// a neighbour.
fn settled(w: Complex64, attained: bool, dmin: f64, z: Complex64) -> bool {
    w.norm() <= 2.0 * f64::EPSILON * z.norm() || (attained && w.norm() <= 0.1 * dmin)
}

/// Aberth correction for root `i`, backward error, attainment flag and the
/// distance to the nearest other estimate.
fn correction(ev: &Evaluator, z: &[Complex64], i: usize) -> (Complex64, f64, bool, f64) {
    let zi = z[i];
    let st = ev.newton(zi);
    let mut s = Complex64::new(0.0, 0.0);
    let mut dmin = f64::INFINITY;
    for (j, &zj) in z.iter().enumerate() {
        if j != i {
            let d = zi - zj;
            dmin = dmin.min(d.norm());
            s += d.inv();
        }
    }
    if !st.ratio.is_finite() {
        // Nudge off an exact critical point or an overflow; never settle here.
        return (zi * 1e-6 + Complex64::new(0.0, 1e-12), f64::INFINITY, false, dmin);
    }
    let w = st.ratio / (1.0 - st.ratio * s);
    let w = if w.is_finite() { w } else { st.ratio };
    (w, st.backward, st.attained, dmin)
}

/// Relative error of `∏|z_i|` against `|d_0/d_deg|`, in log space.
///
/// With `m` trailing zero coefficients the check uses the nonzero roots
/// against `|d_m/d_deg|`.
pub fn vieta_check(poly: &PartialSumPoly, roots: &RootSet) -> f64 {
    let deg = poly.degree();
    let low = poly.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut nz: Vec<f64> = roots.roots.iter().map(|z| z.norm()).collect();
    nz.sort_by(|a, b| a.total_cmp(b));
    let log_prod: f64 = nz[low..].iter().map(|r| r.ln()).sum();
    let target = poly.coeffs[low].log_abs() - poly.coeffs[deg].log_abs();
    (log_prod - target).exp_m1().abs()
}
