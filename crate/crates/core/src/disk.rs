//! Riemann-Hilbert problem on the unit disk.
//!
//! With `α` the argument of `λ`, `g` its Schwarz integral and `β = Im g` on the
//! boundary, the function `A = exp(i·g)` satisfies `conj(λ)·A → e^{−β}` on the
//! circle. Any analytic `B` with `Re B → φ·e^β` then gives a solution
//! `f = A·B`, since `Re{conj(λ)·f} → e^{−β}·Re B = φ`.
//!
//! When `λ` jumps by `J < 0` somewhere (for instance the `−2π` branch jump of
//! a coefficient with winding), `e^β` behaves like `|θ − θ_k|^{J/π}`: singular,
//! and for `J ≤ −π` not even integrable. There `B` is taken as
//! `K(z)^m · S[φ·e^β / K^m]`, where `K` is real and positive on the circle
//! with a pole of order two at the jump. This keeps `Re B → φ·e^β` off the
//! jump while leaving the integrand at worst mildly singular.

use std::f64::consts::PI;
use std::io::Write;

use crate::boundary::{argument_lift, normalize_jumps, ArgumentFunction, BoundaryFunction};
use crate::schwarz::{
    conjugate_boundary, conjugate_samples, schwarz_spectral, split_jumps, AnalyticRep, DiskPoint,
    PoleFactor,
};
use crate::{Error, Result, C64};

/// Largest `β` sample for which `e^β` is formed.
pub const BETA_LIMIT: f64 = 700.0;

/// Assembled solution `f = exp(i·g)·B` and the boundary traces it was built from.
#[derive(Clone, Debug)]
pub struct DiskSolution {
    lambda: BoundaryFunction,
    phi: BoundaryFunction,
    alpha: ArgumentFunction,
    g: AnalyticRep,
    beta: BoundaryFunction,
    weight: BoundaryFunction,
    b: AnalyticRep,
    jumps: Vec<f64>,
    family_parameter: f64,
}

impl DiskSolution {
    pub fn lambda(&self) -> &BoundaryFunction {
        &self.lambda
    }

    pub fn phi(&self) -> &BoundaryFunction {
        &self.phi
    }

    pub fn alpha(&self) -> &ArgumentFunction {
        &self.alpha
    }

    pub fn g(&self) -> &AnalyticRep {
        &self.g
    }

    pub fn beta(&self) -> &BoundaryFunction {
        &self.beta
    }

    /// `φ·e^β` on the grid.
    pub fn weight(&self) -> &BoundaryFunction {
        &self.weight
    }

    pub fn b(&self) -> &AnalyticRep {
        &self.b
    }

    /// Exceptional angles: jumps of `α` and of `φ`.
    pub fn jumps(&self) -> &[f64] {
        &self.jumps
    }

    /// The `c` of the member `f + ic·A` this solution represents.
    pub fn family_parameter(&self) -> f64 {
        self.family_parameter
    }

    /// `A(z) = exp(i·g(z))`.
    pub fn a(&self, z: C64) -> Result<C64> {
        Ok((C64::i() * self.g.evaluate(z)?).exp())
    }

    pub fn evaluate_f(&self, z: C64) -> Result<C64> {
        let w = z.norm();
        if !(w < 1.0) {
            return Err(Error::Domain(format!("|z| = {w} is not inside the unit disk")));
        }
        self.evaluate_f_at(&DiskPoint::new(z))
    }

    /// Value at a point whose distance to the circle may be below the
    /// resolution of `|w|` itself; only the complements must be nonzero.
    pub(crate) fn evaluate_f_at(&self, p: &DiskPoint) -> Result<C64> {
        if p.one_minus_w == C64::new(0.0, 0.0) || p.one_plus_w == C64::new(0.0, 0.0) || !p.w.is_finite() {
            return Err(Error::Domain(format!("{} is not inside the unit disk", p.w)));
        }
        let a = (C64::i() * self.g.evaluate_at(p)?).exp();
        Ok(a * self.b.evaluate_at(p)?)
    }

    /// Write boundary traces with columns
    /// `theta,alpha,beta,phi,weight,residual_at_r`.
    pub fn write_traces_csv<W: Write>(&self, r: f64, mut out: W) -> Result<()> {
        writeln!(out, "theta,alpha,beta,phi,weight,residual_at_r")?;
        let alpha = self.alpha.values();
        for j in 0..self.lambda.len() {
            let theta = self.lambda.theta(j);
            let z = C64::from_polar(r, theta);
            let f = self.evaluate_f(z)?;
            let lam = self.lambda.samples()[j];
            let phi = self.phi.samples()[j].re;
            let residual = ((lam.conj() * f).re - phi).abs();
            writeln!(
                out,
                "{theta},{},{},{phi},{},{residual}",
                alpha[j],
                self.beta.samples()[j].re,
                self.weight.samples()[j].re
            )?;
        }
        Ok(())
    }
}

/// Solve with the default cutoff `M = N/2`.
pub fn solve_disk(lambda: &BoundaryFunction, phi: &BoundaryFunction) -> Result<DiskSolution> {
    solve_disk_with_modes(lambda, phi, lambda.len() / 2)
}

pub fn solve_disk_with_modes(
    lambda: &BoundaryFunction,
    phi: &BoundaryFunction,
    modes: usize,
) -> Result<DiskSolution> {
    if lambda.len() != phi.len() {
        return Err(Error::Validation(format!(
            "grid mismatch: lambda has {} samples, phi has {}",
            lambda.len(),
            phi.len()
        )));
    }
    phi.require_real("phi")?;

    let alpha = argument_lift(lambda)?;
    let g = schwarz_spectral(alpha.base(), modes)?;
    let beta = conjugate_boundary(alpha.base())?;
    check_beta(&beta)?;

    let mut jumps = alpha.jumps().to_vec();
    jumps.extend_from_slice(phi.jumps());
    let jumps = normalize_jumps(jumps);

    let phi_values = phi.real_values();
    let weight: Vec<f64> = phi_values
        .iter()
        .zip(beta.real_values())
        .map(|(p, b)| p * b.exp())
        .collect();
    let weight = BoundaryFunction::from_real(*phi.circle(), weight, jumps.clone())?;

    // Regularised weight: e^{β_r}·Π|2 sin((θ−θ_k)/2)|^{J_k/π + 2m_k}, with m_k
    // chosen so the exponent lands in (−1/4, 7/4].
    let split = split_jumps(alpha.base())?;
    let beta_regular = conjugate_samples(&split.regular);
    let exponents: Vec<(f64, f64)> = split
        .terms
        .iter()
        .map(|t| {
            let p = t.size / PI;
            let q = p + 2.0 * pole_order(p) as f64;
            // Round-off in the jump size must not turn `0^0` into `0^{−ε}`.
            (t.angle, if q.abs() < 1e-9 { 0.0 } else { q })
        })
        .collect();
    let poles: Vec<PoleFactor> = split
        .terms
        .iter()
        .map(|t| PoleFactor { angle: t.angle, order: pole_order(t.size / PI) })
        .collect();
    let mut regularised: Vec<f64> = (0..phi.len())
        .map(|j| {
            let theta = phi.theta(j);
            let mut v = phi_values[j] * beta_regular[j].exp();
            for &(angle, q) in &exponents {
                let s = (2.0 * ((theta - angle) * 0.5).sin()).abs();
                v *= s.powf(q);
            }
            v
        })
        .collect();
    // An integrable singularity sitting on a grid point: use its neighbours.
    let n = regularised.len();
    for j in 0..n {
        if !regularised[j].is_finite() {
            let (l, r) = (regularised[(j + n - 1) % n], regularised[(j + 1) % n]);
            regularised[j] = if l.is_finite() && r.is_finite() { 0.5 * (l + r) } else { 0.0 };
        }
    }
    let regularised = BoundaryFunction::from_real(*phi.circle(), regularised, phi.jumps().to_vec())?;
    let b = schwarz_spectral(&regularised, modes)?.with_poles(poles);

    Ok(DiskSolution {
        lambda: lambda.clone(),
        phi: phi.clone(),
        alpha,
        g,
        beta,
        weight,
        b,
        jumps,
        family_parameter: 0.0,
    })
}

fn check_beta(beta: &BoundaryFunction) -> Result<()> {
    let values = beta.real_values();
    let Some((j, &max_beta)) = values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) else {
        return Ok(());
    };
    if max_beta > BETA_LIMIT {
        return Err(Error::Scaling { max_beta, theta: beta.theta(j), limit: BETA_LIMIT });
    }
    Ok(())
}

/// Smallest `m ≥ 0` with `p + 2m > −1/4`. The weight then has at most a
/// `|θ − θ_k|^{−1/4}` singularity; insisting on `p + 2m ≥ 0` instead would
/// attach a pole factor to jumps that are zero up to round-off, and the
/// cancellation against the weight's `|θ − θ_k|²` zero amplifies noise.
fn pole_order(p: f64) -> u32 {
    const SLACK: f64 = 0.25;
    if p > -SLACK {
        0
    } else {
        ((-SLACK - p) / 2.0).floor() as u32 + 1
    }
}

/// The member `f + ic·A` of the solution family: `B` is replaced by `B + ic`,
/// which changes the boundary values of `Re{conj(λ)·f}` by `c·Re(i·e^{−β}) = 0`.
pub fn homogeneous_family(sol: &DiskSolution, c: f64) -> Result<DiskSolution> {
    if !c.is_finite() {
        return Err(Error::Validation(format!("family parameter must be finite, got {c}")));
    }
    let mut out = sol.clone();
    out.b = out.b.plus_constant(C64::new(0.0, c));
    out.family_parameter += c;
    Ok(out)
}

/// Write `re_z,im_z,re_f,im_f` rows for the given interior points.
pub fn write_interior_csv<W: Write>(sol: &DiskSolution, points: &[C64], mut out: W) -> Result<()> {
    writeln!(out, "re_z,im_z,re_f,im_f")?;
    for &z in points {
        let f = sol.evaluate_f(z)?;
        writeln!(out, "{},{},{},{}", z.re, z.im, f.re, f.im)?;
    }
    Ok(())
}
