//! Covering map, path lifting and the annulus solver.

mod common;

use std::f64::consts::{FRAC_PI_4, PI};

use common::disk_points;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rhbvp::annulus::{
    covering_map, monodromy, solve_annulus, AnnulusDomain, AnnulusSolution, ComponentData, CoveringMap,
};
use rhbvp::boundary::{sample_closed_form, BoundaryCircle, BoundaryExpr};
use rhbvp::schwarz::DiskPoint;
use rhbvp::verify::{nontangential_limit_check, radial_ladder, BoundaryCondition, CheckParams, ResidualReport};
use rhbvp::wrap_angle;

const N: usize = 2048;

fn data(circle: BoundaryCircle, lambda: BoundaryExpr, phi: BoundaryExpr) -> ComponentData {
    ComponentData {
        lambda: sample_closed_form(&lambda, circle, N, &[]).unwrap(),
        phi: sample_closed_form(&phi, circle, N, &[]).unwrap(),
    }
}

fn constant(v: f64) -> BoundaryExpr {
    BoundaryExpr::Const { re: v, im: 0.0 }
}

fn solve_constant(r: f64, outer_phi: f64, inner_phi: f64) -> AnnulusSolution {
    let d = AnnulusDomain::new(r).unwrap();
    solve_annulus(
        r,
        data(d.outer(), constant(1.0), constant(outer_phi)),
        data(d.inner(), constant(1.0), constant(inner_phi)),
    )
    .unwrap()
}

#[test]
fn covering_map_is_locally_conformal() {
    let cover = covering_map(0.3).unwrap();
    let h = 1e-6;
    for w in disk_points(31, 1000, 0.95) {
        let d = cover.derivative(w);
        assert!(d.norm() > 0.0);
        let fd = (cover.map(w + h) - cover.map(w - h)) / (2.0 * h);
        assert!((fd - d).norm() <= 1e-6 * (1.0 + d.norm()), "w = {w}");
    }
}

#[test]
fn radial_segment_lift_closes() {
    let cover = covering_map(0.4).unwrap();
    for theta in [0.0, 1.0, 2.5, -2.0] {
        let (z0, z1) = (C64::from_polar(0.45, theta), C64::from_polar(0.95, theta));
        let out: Vec<C64> = (0..=50).map(|k| z0 + (z1 - z0) * (k as f64 / 50.0)).collect();
        let back: Vec<C64> = out.iter().rev().copied().collect();
        let path = [out, back[1..].to_vec()].concat();
        let start = cover.inverse(z0, 0).unwrap();
        let lifted = cover.lift_path(&path, start.w).unwrap();
        assert!((lifted.last().unwrap() - start.w).norm() <= 1e-8);
    }
}

#[test]
fn lifted_values_agree_with_sheet_evaluation() {
    let sol = solve_constant(0.5, 1.0, 0.0);
    let cover = sol.cover();
    let z0 = C64::new(0.75, 0.0);
    let start = CoveringMap::strip_of_point(&cover.inverse(z0, 0).unwrap());
    // Wind one and a half times around the hole.
    let path: Vec<C64> = (0..=384).map(|k| C64::from_polar(0.75, PI * k as f64 / 128.0)).collect();
    let lifted = cover.lift_path_strip(&path, start).unwrap();
    for (z, s) in path.iter().zip(&lifted).step_by(32) {
        let sheet = cover.sheet_of(*s);
        let direct = sol.evaluate(*z, sheet).unwrap();
        let along = sol.evaluate_strip(*s).unwrap();
        assert!((direct - along).norm() <= 1e-8, "z = {z}, sheet {sheet}");
    }
    assert_eq!(cover.sheet_of(*lifted.last().unwrap()), 1);
}

/// A radial approach to the outer circle lifts to a vertical line in the
/// strip, so its image in the disk meets the circle perpendicularly.
#[test]
fn radial_approach_lifts_nontangentially() {
    let cover = covering_map(0.5).unwrap();
    let a = cover.exponent();
    let theta = 0.5;
    let limit = CoveringMap::disk_point(C64::new(theta / a, 0.0)).w;
    let path: Vec<C64> = (0..=60).map(|k| C64::from_polar(1.0 - 0.25 * 0.8f64.powi(k), theta)).collect();
    let start = CoveringMap::strip_of_point(&cover.inverse(path[0], 0).unwrap());
    let lifted = cover.lift_path_strip(&path, start).unwrap();
    let mut last_angle = f64::INFINITY;
    for s in lifted.iter().skip(20) {
        let w = CoveringMap::disk_point(*s).w;
        let angle = ((limit - w) / limit).arg().abs();
        assert!(angle < FRAC_PI_4, "angle {angle}");
        last_angle = angle;
    }
    assert!(last_angle < 1e-3);
}

#[test]
fn zero_and_constant_data_have_no_monodromy() {
    for (outer, inner) in [(0.0, 0.0), (1.0, 1.0)] {
        let sol = solve_constant(0.5, outer, inner);
        assert!(monodromy(&sol).unwrap().norm() <= 1e-10);
        let z = C64::new(0.1, 0.7);
        assert!((sol.evaluate(z, 0).unwrap() - outer).norm() <= 1e-10);
    }
}

/// Harmonic measure of the outer circle lifts to `F = 1 + (i/π)·s`, whose
/// increment over one deck step is `2i/a`.
#[test]
fn sheets_differ_by_the_monodromy() {
    let r = 0.3;
    let sol = solve_constant(r, 1.0, 0.0);
    let a = -r.ln() / PI;
    let period = C64::new(0.0, 2.0 / a);
    assert!((monodromy(&sol).unwrap() - period).norm() <= 1e-6);
    for z in [C64::new(0.5, 0.2), C64::new(-0.4, -0.4), C64::new(0.0, 0.9)] {
        let exact = 1.0 + z.norm().ln() / r.ln().abs();
        for sheet in -1..=1 {
            let f = sol.evaluate(z, sheet).unwrap();
            assert!((f.re - exact).abs() <= 1e-6, "sheet {sheet}: {} vs {exact}", f.re);
            let next = sol.evaluate(z, sheet + 1).unwrap();
            assert!((next - f - period).norm() <= 1e-6);
        }
    }
}

fn smooth_solution(r: f64, n: usize) -> AnnulusSolution {
    let d = AnnulusDomain::new(r).unwrap();
    let sample = |circle, e: BoundaryExpr| sample_closed_form(&e, circle, n, &[]).unwrap();
    let outer = ComponentData {
        lambda: sample(d.outer(), BoundaryExpr::ExpI { phase: Box::new(BoundaryExpr::Sin { k: 1, amplitude: 0.5 }) }),
        phi: sample(d.outer(), BoundaryExpr::Cos { k: 1, amplitude: 1.0 }),
    };
    let inner = ComponentData { lambda: sample(d.inner(), constant(1.0)), phi: sample(d.inner(), constant(0.3)) };
    solve_annulus(r, outer, inner).unwrap()
}

fn smooth_report(sol: &AnnulusSolution, sheet: i64) -> ResidualReport {
    let f = |z: C64| sol.evaluate(z, sheet);
    let components = [
        BoundaryCondition::new(&sol.outer().lambda, &sol.outer().phi),
        BoundaryCondition::new(&sol.inner().lambda, &sol.inner().phi),
    ];
    let params = CheckParams { aperture: FRAC_PI_4, ..CheckParams::new(radial_ladder(1e-2, 3).unwrap(), 64) };
    nontangential_limit_check(&f, &components, &params).unwrap()
}

/// A thin hole leaves the whole sheet inside the resolved window. The data
/// oscillate without limit near the accumulation points of the cover, so the
/// accuracy grows only algebraically with the grid; the bounds are
/// regression values.
#[test]
fn smooth_data_on_a_thin_annulus() {
    let sol = smooth_solution(0.1, 16384);
    assert_eq!(sol.resolved_half_width(), PI);
    let report = smooth_report(&sol, 0);
    assert!(report.converged_fraction() >= 0.9, "{}", report.converged_fraction());
    assert!(report.sup_limit_residual() < 1e-3, "{}", report.sup_limit_residual());
}

/// For a wide annulus only the window around `arg z = 0` is resolved.
#[test]
fn smooth_data_inside_the_resolved_window() {
    let sol = smooth_solution(0.5, 4096);
    let window = sol.resolved_half_width();
    assert!(window > 1.0 && window < PI, "{window}");
    let report = smooth_report(&sol, 0);
    let inside: Vec<_> = report.rows.iter().filter(|row| wrap_angle(row.theta).abs() < 0.75 * window).collect();
    assert!(inside.len() > report.rows.len() / 8);
    let converged = inside.iter().filter(|row| row.converged).count();
    assert!(converged as f64 >= 0.8 * inside.len() as f64, "{converged} of {}", inside.len());
    for row in inside {
        assert!(row.limit_residual < 2e-3, "theta {}: {}", row.theta, row.limit_residual);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn image_lies_in_the_annulus(r in 0.05..0.95f64, re in -1.0..1.0f64, im in -1.0..1.0f64) {
        let w = C64::new(re, im);
        prop_assume!(w.norm() < 1.0 - 1e-6);
        let m = covering_map(r).unwrap().map(w).norm();
        prop_assert!(m > r && m < 1.0);
    }

    #[test]
    fn deck_transformation_preserves_the_image(r in 0.2..0.8f64, re in -0.9..0.9f64, im in -0.9..0.9f64) {
        let w = C64::new(re, im);
        prop_assume!(w.norm() < 0.9);
        let cover = covering_map(r).unwrap();
        let p = DiskPoint::new(w);
        prop_assert!((cover.map_point(&cover.deck_point(&p)) - cover.map(w)).norm() <= 1e-10);
    }
}
