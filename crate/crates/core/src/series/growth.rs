//! Growth descriptors: directions of maximal exponential growth.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One direction of maximal growth, `A (z/ζ)^b exp((z/ζ)^λ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub zeta: Complex64,
    pub amplitude: Complex64,
    pub exponent: Complex64,
}

impl Direction {
    pub fn new(zeta: Complex64, amplitude: Complex64, exponent: Complex64) -> Self {
        Direction {
            zeta,
            amplitude,
            exponent,
        }
    }
}

/// Growth data of a normalized family: order, directions, log exponent and
/// sector geometry. Direction 0 is the positive real axis with unit amplitude.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthSpec {
    pub lambda: f64,
    pub directions: Vec<Direction>,
    pub log_exponent: Complex64,
    pub mu: f64,
    pub theta: f64,
}

impl GrowthSpec {
    /// Single direction `z^a exp(z^λ)`.
    pub fn one_direction(lambda: f64, a: Complex64, theta: f64) -> Self {
        GrowthSpec {
            lambda,
            directions: vec![Direction::new(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), a)],
            log_exponent: Complex64::new(0.0, 0.0),
            mu: (lambda * theta).cos(),
            theta,
        }
    }

    /// Adds a non-principal direction.
    pub fn with_direction(mut self, zeta: Complex64, amplitude: Complex64, exponent: Complex64) -> Self {
        self.directions.push(Direction::new(zeta, amplitude, exponent));
        self
    }

    /// The principal exponent `a = b_0`.
    pub fn a(&self) -> Complex64 {
        self.directions[0].exponent
    }

    /// Non-principal directions.
    pub fn others(&self) -> &[Direction] {
        &self.directions[1..]
    }

    /// Index of the direction whose sector contains `z`.
    pub fn sector_of(&self, z: Complex64) -> Option<usize> {
        self.directions
            .iter()
            .position(|d| (z / d.zeta).arg().abs() <= self.theta)
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Parameter(m.to_string()));
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return bad("lambda must be positive");
        }
        if self.directions.is_empty() {
            return bad("at least one direction is required");
        }
        let d0 = self.directions[0];
        if (d0.zeta - 1.0).norm() > 1e-15 || (d0.amplitude - 1.0).norm() > 1e-15 {
            return bad("direction 0 must have zeta = 1 and amplitude = 1");
        }
        if !(self.mu < 1.0) {
            return bad("mu must be below 1");
        }
        if !(self.theta > 0.0 && self.theta < PI) {
            return bad("theta must lie in (0, pi)");
        }
        if self.directions.len() > 1 && self.log_exponent.norm() != 0.0 {
            return bad("log exponent is only allowed with one direction");
        }
        for (i, di) in self.directions.iter().enumerate() {
            if (di.zeta.norm() - 1.0).abs() > 1e-12 {
                return bad("direction zeta must have unit modulus");
            }
            for dj in &self.directions[i + 1..] {
                let gap = (dj.zeta / di.zeta).arg().abs();
                if gap <= 2.0 * self.theta {
                    return bad("growth sectors overlap");
                }
            }
        }
        Ok(())
    }
}
