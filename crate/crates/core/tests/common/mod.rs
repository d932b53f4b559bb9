//! Shared oracles for the integration tests.

#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rhbvp::boundary::{sample_closed_form, BoundaryCircle, BoundaryExpr, BoundaryFunction};
use std::f64::consts::{PI, TAU};

/// Panels per smooth piece; the kernel peaks near `arg z` with width `1 − |z|`.
const PANELS: usize = 16;

/// Schwarz integral `(1/2π)∫ (ζ + z)/(ζ − z)·u(θ) dθ` by double-exponential
/// quadrature, with `u` smooth on each interval between consecutive
/// `breaks` (which must include both ends of the period).
pub fn schwarz_oracle(u: impl Fn(f64) -> f64, breaks: &[f64], z: C64) -> C64 {
    let kernel = |t: f64| {
        let zeta = C64::from_polar(1.0, t);
        (zeta + z) / (zeta - z) * u(t)
    };
    let mut re = 0.0;
    let mut im = 0.0;
    for piece in breaks.windows(2) {
        let (a, b) = (piece[0], piece[1]);
        let h = (b - a) / PANELS as f64;
        for k in 0..PANELS {
            let (lo, hi) = (a + h * k as f64, a + h * (k + 1) as f64);
            re += quadrature::integrate(|t| kernel(t).re, lo, hi, 1e-14).integral;
            im += quadrature::integrate(|t| kernel(t).im, lo, hi, 1e-14).integral;
        }
    }
    C64::new(re, im) / TAU
}

/// `count` points uniformly distributed in `|z| ≤ radius`, fixed seed.
pub fn disk_points(seed: u64, count: usize, radius: f64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| C64::from_polar(radius * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>()))
        .collect()
}

pub fn unit_data(expr: BoundaryExpr, n: usize) -> BoundaryFunction {
    sample_closed_form(&expr, BoundaryCircle::unit(), n, &[]).unwrap()
}

pub fn winding(n: usize) -> BoundaryFunction {
    unit_data(BoundaryExpr::FourierMode { m: 1, amplitude: 1.0 }, n)
}

pub fn constant(value: f64, n: usize) -> BoundaryFunction {
    unit_data(BoundaryExpr::Const { re: value, im: 0.0 }, n)
}

pub fn cosine(k: u32, n: usize) -> BoundaryFunction {
    unit_data(BoundaryExpr::Cos { k, amplitude: 1.0 }, n)
}

/// Principal argument of `e^{iθ}`: `θ` moved into `(−π, π]`.
pub fn principal_theta(t: f64) -> f64 {
    if t > PI {
        t - TAU
    } else {
        t
    }
}
