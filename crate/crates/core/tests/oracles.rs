//! Property tests for boundary functions and the Schwarz operator.

mod common;

use std::f64::consts::TAU;

use common::{disk_points, unit_data};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rhbvp::boundary::{
    argument_lift, sample_closed_form, total_variation, AngleArc, BoundaryCircle, BoundaryExpr, BoundaryFunction,
};
use rhbvp::schwarz::{conjugate_boundary, schwarz_quadrature, schwarz_spectral};
use rhbvp::Error;

/// Real trigonometric polynomial `Σ a_k cos kθ + b_k sin kθ`, `k = 1..`.
fn trig(constant: f64, cos: &[f64], sin: &[f64]) -> BoundaryExpr {
    let mut terms = vec![BoundaryExpr::Const { re: constant, im: 0.0 }];
    for (k, &a) in cos.iter().enumerate() {
        terms.push(BoundaryExpr::Cos { k: k as u32 + 1, amplitude: a });
    }
    for (k, &b) in sin.iter().enumerate() {
        terms.push(BoundaryExpr::Sin { k: k as u32 + 1, amplitude: b });
    }
    BoundaryExpr::Sum { terms }
}

fn amplitudes() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, 1..6)
}

fn combine(u: &BoundaryFunction, v: &BoundaryFunction, a: f64, b: f64) -> BoundaryFunction {
    let values = u.real_values().iter().zip(v.real_values()).map(|(x, y)| a * x + b * y).collect();
    BoundaryFunction::from_real(*u.circle(), values, vec![]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn argument_lift_reproduces_coefficient(c in amplitudes(), s in amplitudes(), scale in 0.1..6.0f64) {
        // A phase of several multiples of π crosses the branch cut many times.
        let phase = unit_data(trig(0.3, &c, &s), 512);
        let samples = phase.real_values().iter().map(|p| C64::from_polar(1.0, scale * p)).collect();
        let lam = BoundaryFunction::from_samples(*phase.circle(), samples, vec![]).unwrap();
        let alpha = argument_lift(&lam).unwrap();
        for (a, l) in alpha.values().iter().zip(lam.samples()) {
            prop_assert!((C64::from_polar(1.0, *a) - l).norm() <= 1e-12);
            prop_assert!(*a > -std::f64::consts::PI && *a <= std::f64::consts::PI);
        }
    }

    #[test]
    fn argument_lift_of_constant_is_constant(angle in -3.0..3.0f64) {
        let lam = unit_data(BoundaryExpr::ExpI { phase: Box::new(BoundaryExpr::Const { re: angle, im: 0.0 }) }, 64);
        let alpha = argument_lift(&lam).unwrap();
        let v = alpha.values();
        prop_assert!(v.iter().all(|&x| x == v[0]));
        prop_assert!(alpha.jumps().is_empty());
    }

    #[test]
    fn total_variation_splits_additively_at_sample_points(c in amplitudes(), s in amplitudes(), k in 1usize..255) {
        let f = unit_data(trig(0.0, &c, &s), 256);
        let split = f.theta(k);
        let whole = total_variation(&f, AngleArc::new(0.0, TAU), false).unwrap();
        let left = total_variation(&f, AngleArc::new(0.0, split), false).unwrap();
        let right = total_variation(&f, AngleArc::new(split, TAU), false).unwrap();
        prop_assert!((whole - left - right).abs() <= 1e-12 * (1.0 + whole));
    }

    #[test]
    fn total_variation_is_superadditive_on_disjoint_arcs(c in amplitudes(), s in amplitudes(), a in 0.1..3.0f64, gap in 0.0..0.5f64) {
        let f = unit_data(trig(0.0, &c, &s), 256);
        let b = a + gap;
        let whole = total_variation(&f, AngleArc::new(0.0, TAU), false).unwrap();
        let left = total_variation(&f, AngleArc::new(0.0, a), false).unwrap();
        let right = total_variation(&f, AngleArc::new(b, TAU), false).unwrap();
        prop_assert!(whole + 1e-12 >= left + right);
    }

    #[test]
    fn total_variation_grows_under_refinement(c in amplitudes(), at in 0.5..5.5f64, lo in 0.0..3.0f64, len in 0.5..3.0f64) {
        let expr = BoundaryExpr::Sum { terms: vec![trig(0.0, &c, &[]), BoundaryExpr::Step { a: 0.0, b: 1.5, at }] };
        let arc = AngleArc::new(lo, lo + len);
        let mut prev = 0.0;
        for n in [64, 128, 256, 512] {
            let f = sample_closed_form(&expr, BoundaryCircle::unit(), n, &[]).unwrap();
            let tv = total_variation(&f, arc, true).unwrap();
            prop_assert!(tv + 1e-12 >= prev, "n = {n}: {tv} < {prev}");
            prev = tv;
        }
    }

    #[test]
    fn schwarz_mode_identity(k in 1u32..128) {
        let rep = schwarz_spectral(&unit_data(BoundaryExpr::Cos { k, amplitude: 1.0 }, 256), 128).unwrap();
        for (j, c) in rep.coeffs().iter().enumerate() {
            let expect = if j == k as usize { 1.0 } else { 0.0 };
            prop_assert!((c - expect).norm() <= 1e-12);
        }
    }

    #[test]
    fn schwarz_is_normalized(c in amplitudes(), s in amplitudes(), m in -3.0..3.0f64) {
        let rep = schwarz_spectral(&unit_data(trig(m, &c, &s), 128), 64).unwrap();
        prop_assert_eq!(rep.evaluate(C64::new(0.0, 0.0)).unwrap().im, 0.0);
    }

    #[test]
    fn schwarz_is_linear(c1 in amplitudes(), c2 in amplitudes(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let u = unit_data(trig(0.5, &c1, &[]), 128);
        let v = unit_data(trig(-1.0, &[], &c2), 128);
        let lhs = schwarz_spectral(&combine(&u, &v, a, b), 64).unwrap();
        let su = schwarz_spectral(&u, 64).unwrap();
        let sv = schwarz_spectral(&v, 64).unwrap();
        for ((x, y), z) in lhs.coeffs().iter().zip(su.coeffs()).zip(sv.coeffs()) {
            prop_assert!((x - (y * a + z * b)).norm() <= 1e-13);
        }
    }

    #[test]
    fn conjugate_twice_negates_the_oscillating_part(c in amplitudes(), s in amplitudes(), m in -3.0..3.0f64) {
        let u = unit_data(trig(m, &c, &s), 128);
        let twice = conjugate_boundary(&conjugate_boundary(&u).unwrap()).unwrap();
        let mean = u.real_values().iter().sum::<f64>() / 128.0;
        for (x, y) in u.real_values().iter().zip(twice.real_values()) {
            prop_assert!((y + (x - mean)).abs() <= 1e-10);
        }
    }

    #[test]
    fn quadrature_matches_spectral_near_the_circle(c in amplitudes(), s in amplitudes(), theta in 0.0..TAU, depth in 2.0..4.0f64) {
        let u = unit_data(trig(0.2, &c, &s), 64);
        let z = C64::from_polar(1.0 - 10f64.powf(-depth), theta);
        let q = schwarz_quadrature(&u, z).unwrap();
        let spectral = schwarz_spectral(&u, 32).unwrap().evaluate(z).unwrap();
        prop_assert!((q - spectral).norm() <= 1e-10);
    }
}

/// Along a radius, a trigonometric polynomial of degree `K` is recovered with
/// error at most `Σ_k |a_k|·(1 − r^k) ≤ (1 − r)·Σ_k k·|a_k|`.
#[test]
fn retrace_error_is_bounded_by_the_radial_distance() {
    let cos = [0.5, -1.0, 0.25];
    let sin = [0.0, 0.7, 0.0, -0.3];
    let u = unit_data(trig(1.0, &cos, &sin), 256);
    let rep = schwarz_spectral(&u, 128).unwrap();
    let weight: f64 = cos.iter().enumerate().map(|(k, a)| (k + 1) as f64 * a.abs()).sum::<f64>()
        + sin.iter().enumerate().map(|(k, b)| (k + 1) as f64 * b.abs()).sum::<f64>();
    for depth in [1e-2, 1e-3, 1e-4] {
        let r = 1.0 - depth;
        let worst = (0..256)
            .map(|j| {
                let theta = u.theta(j);
                (rep.evaluate(C64::from_polar(r, theta)).unwrap().re - u.real_values()[j]).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst <= weight * depth * (1.0 + 1e-9), "r = {r}: {worst} > {}", weight * depth);
    }
}

#[test]
fn quadrature_refuses_points_beyond_resolution() {
    let u = unit_data(BoundaryExpr::Cos { k: 1, amplitude: 1.0 }, 64);
    let res = schwarz_quadrature(&u, C64::new(1.0 - 1e-7, 0.0));
    assert!(matches!(res, Err(Error::Resolution { .. })));
}

#[test]
fn quadrature_matches_closed_form_on_jump_data() {
    // Step data: S[u] = 1/2·(1 + … ) has the closed form
    // a + (b − a)/2 + (i(b − a)/π)·log((1 − z e^{−i·at})/(1 − z)) for a jump
    // from a to b at `at` and back at 0.
    let (a, b, at) = (-1.0, 2.0, 2.0);
    let u = sample_closed_form(&BoundaryExpr::Step { a, b, at }, BoundaryCircle::unit(), 1024, &[]).unwrap();
    for z in disk_points(3, 20, 0.95) {
        let ratio = (C64::new(1.0, 0.0) - z * C64::from_polar(1.0, -at)) / (C64::new(1.0, 0.0) - z);
        let oracle = schwarz_oracle_step(a, b, at, z);
        let closed = C64::new(a + (b - a) * (TAU - at) / TAU, 0.0) + C64::new(0.0, (b - a) / std::f64::consts::PI) * ratio.ln();
        assert!((oracle - closed).norm() < 1e-9, "closed form disagrees with the integral");
        let q = schwarz_quadrature(&u, z).unwrap();
        let s = schwarz_spectral(&u, 512).unwrap().evaluate(z).unwrap();
        assert!((q - closed).norm() < 1e-10, "quadrature {q} vs {closed}");
        assert!((s - closed).norm() < 1e-10, "spectral {s} vs {closed}");
    }
}

fn schwarz_oracle_step(a: f64, b: f64, at: f64, z: C64) -> C64 {
    common::schwarz_oracle(|t| if t < at { a } else { b }, &[0.0, at, TAU], z)
}
