//! Arc scaling limits of the application families, written out as stated for
//! each family rather than derived from its growth data.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ArcPoint, ArcScaling, Theorem};
use crate::curve::wrap_angle;
use crate::error::Result;
use crate::numeric::gamma::gamma_real;
use crate::series::FamilyKind;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn polar(arg: f64) -> Complex64 {
    Complex64::from_polar(1.0, arg)
}

fn sign(n: usize) -> f64 {
    if n % 2 == 0 { 1.0 } else { -1.0 }
}

fn z1(theorem: Theorem, d: Complex64) -> ArcScaling {
    ArcScaling {
        theorem,
        d,
        log_shift: c(0.5, 0.0),
        sigma: 0.0,
    }
}

/// The stated arc limit for `sin`, `cos`, `bessel`, `confluent`, `expint`,
/// `airy_ai`, `airy_bi` and `parabolic_u`; `None` for other families.
pub fn preset_scaling(point: &ArcPoint) -> Option<Result<ArcScaling>> {
    let xi = point.xi();
    let n = point.n;
    let s2p = (2.0 * PI).sqrt();
    let one = c(1.0, 0.0);
    let sg = sign(n);
    match &point.family.kind {
        FamilyKind::Sin => Some(Ok(z1(
            Theorem::ArcTwoDirCaseEq,
            (one / (1.0 - xi) - sg / (1.0 + xi)) / s2p,
        ))),
        FamilyKind::Cos => Some(Ok(z1(
            Theorem::ArcTwoDirCaseEq,
            (one / (1.0 - xi) + sg / (1.0 + xi)) / s2p,
        ))),
        FamilyKind::Bessel { nu } => Some(Ok(z1(
            Theorem::ArcTwoDirCaseEq,
            (one / (1.0 - xi) + sg / (1.0 + xi)) * xi.powf(nu + 0.5) / s2p,
        ))),
        FamilyKind::Confluent { alpha, beta } => Some(Ok(z1(
            Theorem::ArcOneDir,
            one / (xi.powf(alpha - beta) * (1.0 - xi) * s2p),
        ))),
        FamilyKind::Expint { p, q, r, .. } => {
            let lead = xi.powf(q + 1.0);
            if *r != -1.0 {
                return Some(Ok(z1(Theorem::ArcOneDir, lead / ((1.0 - xi) * s2p))));
            }
            let amp = point.family.growth.directions[1].amplitude;
            Some(Ok(if q < p {
                z1(Theorem::ArcTwoDirCaseA, lead / ((1.0 - xi) * s2p))
            } else if q > p {
                ArcScaling {
                    theorem: Theorem::ArcTwoDirCaseB,
                    d: amp * lead / ((1.0 + xi) * s2p),
                    log_shift: c(p - q + 0.5, 0.0),
                    sigma: wrap_angle(PI * n as f64),
                }
            } else {
                let nqp = (n as f64).powf(q - p);
                z1(
                    Theorem::ArcTwoDirCaseEq,
                    (one / (1.0 - xi) + amp * sg * nqp / (1.0 + xi)) * lead / s2p,
                )
            }))
        }
        FamilyKind::AiryAi => {
            let w = polar(2.0 * PI / 3.0);
            let phase = polar(-2.0 * PI * (n % 3) as f64 / 3.0);
            Some(Ok(z1(
                Theorem::ArcTwoDirCaseEq,
                (one / (1.0 - xi) - phase / (w - xi)) * xi.powf(0.25) / (3.0 * PI).sqrt(),
            )))
        }
        FamilyKind::AiryBi => {
            let w = polar(2.0 * PI / 3.0);
            let phase = polar(-2.0 * PI * (n % 3) as f64 / 3.0);
            Some(Ok(z1(
                Theorem::ArcMDir,
                (one / (1.0 - xi) - phase / (2.0 * (w - xi)) - phase.conj() / (2.0 * (w.conj() - xi))) * xi.powf(0.25)
                    / (3.0 * PI).sqrt(),
            )))
        }
        FamilyKind::ParabolicU { a } => Some(parabolic(point, *a)),
        _ => None,
    }
}

fn parabolic(point: &ArcPoint, a: f64) -> Result<ArcScaling> {
    let xi = point.xi();
    let n = point.n;
    let i = c(0.0, 1.0);
    let one = c(1.0, 0.0);
    let sp = PI.sqrt();
    let xi_pow = xi.powf(a - 0.5);
    if a > 0.0 {
        return Ok(z1(Theorem::ArcMDir, one / (xi_pow * 2.0 * sp * (1.0 - xi))));
    }
    let g = gamma_real(a + 0.5)?;
    // i^{1-n}, (-i)^{1-n} and (-1)^n from n mod 4.
    let ipow = |s: f64| polar(s * PI / 2.0 * (1 - (n % 4) as i64) as f64);
    if a < 0.0 {
        let bracket = polar(PI * (a / 2.0 + 0.75)) / (i - xi) + sign(n) * polar(-PI * (a / 2.0 - 0.25)) / (i + xi);
        return Ok(ArcScaling {
            theorem: Theorem::ArcMDir,
            d: bracket * g / (2f64.powf(a + 1.5) * PI * xi_pow),
            log_shift: c(a + 0.5, 0.0),
            sigma: wrap_angle(PI * n as f64 / 2.0),
        });
    }
    let phi = polar(PI * (a / 2.0 + 0.25));
    let inner = ipow(1.0) * phi / (i - xi) - ipow(-1.0) * phi.conj() / (i + xi);
    let r_pow = point.r_n.powf(-2.0 * a);
    let bracket = one / (1.0 - xi) + g * r_pow / (4f64.powf(a) * (2.0 * PI).sqrt()) * inner;
    Ok(z1(Theorem::ArcMDir, bracket / (2.0 * sp * xi_pow)))
}
