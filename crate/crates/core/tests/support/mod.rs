//! Shared helpers for integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};
use szego::series::poly::compensated_horner_with_derivative;
use szego::series::{make_family, FunctionFamily};

pub fn fam(name: &str, p: Value) -> FunctionFamily {
    make_family(name, &p).unwrap()
}

/// One preset per family plus a few parameter variants.
pub fn presets() -> Vec<FunctionFamily> {
    vec![
        fam("exp", json!({})),
        fam("mittag_leffler", json!({"lambda": 2.0})),
        fam("mittag_leffler", json!({"lambda": 0.8})),
        fam("sin", json!({})),
        fam("cos", json!({})),
        fam("bessel", json!({"nu": 0.0})),
        fam("bessel", json!({"nu": 1.5})),
        fam("confluent", json!({"alpha": -0.5, "beta": -2.5})),
        fam("confluent", json!({"alpha": 1.5, "beta": 0.5})),
        fam("expint", json!({"p": 3.0, "q": 0.0, "r": -1.0})),
        fam("expint", json!({"p": 0.0, "q": 3.0, "r": -1.0})),
        fam("expint", json!({"p": 0.5, "q": 1.0, "r": 0.0, "poly": [1.0, 2.0]})),
        fam("airy_ai", json!({})),
        fam("airy_bi", json!({})),
        fam("parabolic_u", json!({"a": 0.5})),
        fam("parabolic_u", json!({"a": -0.25})),
    ]
}

/// Eigenvalues of the companion matrix of `Σ d_k z^k`.
pub fn companion_roots(d: &[Complex64]) -> Vec<Complex64> {
    let deg = d.len() - 1;
    let lead = d[deg];
    let mut m = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -d[i] / lead;
    }
    balance(&mut m);
    // A fixed random unitary similarity breaks parity structure that stalls
    // the shifted QR iteration.
    let mut x = 0.123_456_789f64;
    let g = DMatrix::<Complex64>::from_fn(deg, deg, |_, _| {
        x = (x * 9301.0 + 0.4927).fract();
        let a = x;
        x = (x * 9301.0 + 0.4927).fract();
        Complex64::new(a - 0.5, x - 0.5)
    });
    let q = g.qr().q();
    let m = q.adjoint() * m * &q;
    let raw: Vec<Complex64> = nalgebra::Schur::try_new(m, f64::EPSILON, 100_000)
        .expect("schur converges")
        .eigenvalues()
        .expect("schur eigenvalues")
        .iter()
        .copied()
        .collect();
    // Eigenvalues carry errors of order cond·ε; a few compensated Newton
    // steps bring each to the accuracy of the coefficients.
    raw.into_iter()
        .map(|mut z| {
            for _ in 0..4 {
                let (p, dp) = compensated_horner_with_derivative(d, z);
                let step = p / dp;
                if step.is_finite() {
                    z -= step;
                }
            }
            z
        })
        .collect()
}

/// Parlett–Reinsch diagonal balancing with powers of two.
fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    for _ in 0..200 {
        let mut changed = false;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].l1_norm();
                    r += m[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let (mut f, s) = (1.0, c + r);
            let (mut c2, mut r2) = (c, r);
            while c2 < r2 / 2.0 {
                c2 *= 2.0;
                r2 /= 2.0;
                f *= 2.0;
            }
            while c2 > r2 * 2.0 {
                c2 /= 2.0;
                r2 *= 2.0;
                f /= 2.0;
            }
            if (c2 + r2) < 0.95 * s {
                changed = true;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Largest distance under greedy nearest matching (both sets same size).
pub fn set_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut done = vec![false; a.len()];
    let mut worst: f64 = 0.0;
    for (d, i, j) in pairs {
        if !done[i] && !used[j] {
            done[i] = true;
            used[j] = true;
            worst = worst.max(d);
        }
    }
    worst
}
