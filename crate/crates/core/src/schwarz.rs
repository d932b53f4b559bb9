//! Schwarz integral, conjugate boundary functions and the analytic-function
//! representation used for `g`, `B` and the cover solution `F`.
//!
//! For real boundary data `u` the Schwarz integral
//!
//! ```text
//! g(z) = (1/2π) ∫ u(θ) (ζ + z)/(ζ − z) dθ,   ζ = e^{iθ},
//! ```
//!
//! is analytic in the unit disk with `Re g → u` and `Im g(0) = 0`. Its Taylor
//! coefficients are `c_0 = a_0`, `c_k = 2 a_k` where `a_k` are the Fourier
//! coefficients of `u`.
//!
//! Both evaluators split `u` at its declared jumps. Each jump of size `J` at
//! `ζ_k` is removed as a sawtooth whose Schwarz integral is known in closed
//! form, `(iJ/π)·log(1 − z/ζ_k)`, and only the continuous remainder is
//! transformed (spectral path) or integrated (trapezoid path).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;
use std::sync::{Arc, Mutex, OnceLock};

use crate::boundary::{BoundaryFunction, ANGLE_EPS};
use crate::{fft, wrap_angle, Error, Result, C64, RESOLUTION_THRESHOLD, TAU};

/// Above this modulus [`AnalyticRep::evaluate`] hands the regular part to the
/// trapezoid evaluator when the series was truncated.
pub const DELEGATION_RADIUS: f64 = 0.99;

/// Relative spectral energy above the cutoff below which the series is
/// considered complete and no quadrature source is kept.
const TAIL_ENERGY_TOL: f64 = 1e-24;

/// Trapezoid points per unit of `1/(1−|z|)`.
const REFINEMENT: f64 = 40.0;

/// `(iJ/π)·log(1 − z/ζ_k)`: the Schwarz integral of a sawtooth that jumps by
/// `size` at `angle` and is linear with slope `−size/2π` elsewhere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumpTerm {
    pub angle: f64,
    pub size: f64,
}

impl JumpTerm {
    pub fn eval(&self, p: &DiskPoint) -> C64 {
        C64::new(0.0, self.size / PI) * p.complement(self.angle).ln()
    }

    /// Boundary value of the real part: `−(J/2π)·((θ − θ_k) mod 2π − π)`.
    pub fn boundary_real(&self, theta: f64) -> f64 {
        -self.size / TAU * (wrap_angle(theta - self.angle) - PI)
    }

    /// Boundary value of the imaginary part: `(J/π)·ln|2 sin((θ − θ_k)/2)|`,
    /// infinite at the jump itself.
    pub fn boundary_imag(&self, theta: f64) -> f64 {
        self.size / PI * (2.0 * ((theta - self.angle) * 0.5).sin()).abs().ln()
    }
}

/// `K(z)^order` with `K(z) = −(z/ζ_k)/(1 − z/ζ_k)²`. `K` is real and positive
/// on `|z| = 1` away from `ζ_k`, so multiplying by it leaves the sign of the
/// boundary real part alone while adding a pole at `ζ_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleFactor {
    pub angle: f64,
    pub order: u32,
}

impl PoleFactor {
    pub fn eval(&self, p: &DiskPoint) -> C64 {
        let zeta = C64::from_polar(1.0, self.angle);
        let one_minus = p.complement(self.angle);
        let k = -(p.w * zeta.conj()) / (one_minus * one_minus);
        k.powu(self.order)
    }
}

/// A point of the unit disk together with accurately known `1 − w` and
/// `1 + w`. Points produced by the annulus cover can sit within `1e−12` of
/// `±1`, where forming `1 − w` from `w` would lose most digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskPoint {
    pub w: C64,
    pub one_minus_w: C64,
    pub one_plus_w: C64,
}

impl DiskPoint {
    pub fn new(w: C64) -> Self {
        Self { w, one_minus_w: C64::new(1.0, 0.0) - w, one_plus_w: C64::new(1.0, 0.0) + w }
    }

    /// `1 − w/ζ` for `ζ = e^{i·angle}`.
    fn complement(&self, angle: f64) -> C64 {
        if angle == 0.0 {
            self.one_minus_w
        } else if angle == PI {
            self.one_plus_w
        } else {
            C64::new(1.0, 0.0) - self.w * C64::from_polar(1.0, -angle)
        }
    }
}

/// Real boundary data split into a continuous remainder and closed-form jump
/// terms.
#[derive(Clone, Debug)]
pub(crate) struct JumpSplit {
    pub regular: Vec<f64>,
    pub terms: Vec<JumpTerm>,
}

/// Remove a sawtooth at every declared jump of `u`. Jump sizes come from
/// quadratic extrapolation of up to three samples on each side; the sample on
/// the jump itself is never used.
pub(crate) fn split_jumps(u: &BoundaryFunction) -> Result<JumpSplit> {
    let values = u.real_values();
    let n = values.len();
    let h = u.step();
    let jumps = u.jumps();

    let mut limits = Vec::with_capacity(jumps.len());
    for (k, &angle) in jumps.iter().enumerate() {
        let others: Vec<f64> = jumps
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != k)
            .map(|(_, &a)| signed_offset(a, angle))
            .collect();
        let left = one_sided_limit(&values, h, angle, &others, Side::Left)?;
        let right = one_sided_limit(&values, h, angle, &others, Side::Right)?;
        limits.push((left, right));
    }
    let terms: Vec<JumpTerm> = jumps
        .iter()
        .zip(&limits)
        .map(|(&angle, &(l, r))| JumpTerm { angle, size: r - l })
        .collect();

    let mut regular: Vec<f64> = (0..n)
        .map(|j| {
            let theta = h * j as f64;
            values[j] - terms.iter().map(|t| t.boundary_real(theta)).sum::<f64>()
        })
        .collect();
    // Samples sitting on a jump: use the midpoint of the one-sided limits,
    // which is where the continuous remainder passes.
    for (k, term) in terms.iter().enumerate() {
        let p = term.angle / h;
        if (p - p.round()).abs() * h <= ANGLE_EPS {
            let j = (p.round() as usize) % n;
            let theta = h * j as f64;
            let others: f64 = terms
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != k)
                .map(|(_, t)| t.boundary_real(theta))
                .sum();
            regular[j] = 0.5 * (limits[k].0 + limits[k].1) - others;
        }
    }
    Ok(JumpSplit { regular, terms })
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Left,
    Right,
}

/// Offset of `a` from `origin` in `(−π, π]`.
fn signed_offset(a: f64, origin: f64) -> f64 {
    let d = wrap_angle(a - origin);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

fn one_sided_limit(values: &[f64], h: f64, angle: f64, others: &[f64], side: Side) -> Result<f64> {
    let n = values.len() as i64;
    let p = angle / h;
    let on_grid = (p - p.round()).abs() * h <= ANGLE_EPS;
    let mut idx: i64 = match (side, on_grid) {
        (Side::Left, true) => p.round() as i64 - 1,
        (Side::Left, false) => p.floor() as i64,
        (Side::Right, true) => p.round() as i64 + 1,
        (Side::Right, false) => p.ceil() as i64,
    };
    let mut xs = Vec::with_capacity(3);
    let mut ys = Vec::with_capacity(3);
    while xs.len() < 3 {
        let x = idx as f64 * h - angle;
        let blocked = others.iter().any(|&d| match side {
            Side::Left => d > x + ANGLE_EPS && d < 0.0,
            Side::Right => d > 0.0 && d <= x + ANGLE_EPS,
        });
        if blocked || x.abs() > PI {
            break;
        }
        xs.push(x);
        ys.push(values[idx.rem_euclid(n) as usize]);
        idx += if side == Side::Left { -1 } else { 1 };
    }
    if xs.is_empty() {
        return Err(Error::Validation(format!(
            "jump at theta = {angle:.6} has no grid samples on its {} side before the next jump; refine the grid",
            if side == Side::Left { "left" } else { "right" }
        )));
    }
    // Lagrange extrapolation to x = 0.
    let mut acc = 0.0;
    for i in 0..xs.len() {
        let mut w = 1.0;
        for m in 0..xs.len() {
            if m != i {
                w *= -xs[m] / (xs[i] - xs[m]);
            }
        }
        acc += w * ys[i];
    }
    Ok(acc)
}

/// Boundary samples of the harmonic conjugate of continuous periodic data via
/// the multiplier `−i·sgn(k)`; the mean and the Nyquist mode map to zero.
pub(crate) fn conjugate_samples(regular: &[f64]) -> Vec<f64> {
    let n = regular.len();
    let mut coeffs = fft::forward_real(regular);
    for (k, c) in coeffs.iter_mut().enumerate() {
        let m = fft::mode(k, n);
        *c = if m == 0 || m == (n / 2) as i64 {
            C64::new(0.0, 0.0)
        } else {
            *c * C64::new(0.0, -(m.signum() as f64))
        };
    }
    fft::inverse(&coeffs).into_iter().map(|c| c.re).collect()
}

/// Regular part of a boundary function, kept for trapezoid re-evaluation.
#[derive(Debug)]
pub struct QuadratureSource {
    boundary: Arc<BoundaryFunction>,
    regular: Vec<f64>,
    refined: Mutex<HashMap<usize, Arc<Vec<f64>>>>,
}

impl QuadratureSource {
    fn new(boundary: Arc<BoundaryFunction>, regular: Vec<f64>) -> Self {
        Self { boundary, regular, refined: Mutex::new(HashMap::new()) }
    }

    pub fn boundary(&self) -> &BoundaryFunction {
        &self.boundary
    }

    fn refined(&self, len: usize) -> Arc<Vec<f64>> {
        let mut cache = self.refined.lock().expect("refinement cache poisoned");
        cache
            .entry(len)
            .or_insert_with(|| Arc::new(fft::resample_real(&self.regular, len)))
            .clone()
    }

    fn trapezoid(&self, z: C64) -> Result<C64> {
        let len = refined_len(self.regular.len(), z)?;
        Ok(trapezoid_sum(&self.refined(len), z))
    }
}

/// Grid size used by the trapezoid rule at `z`: at least `40/(1−|z|)`, which
/// puts the aliasing error `~2|z|^L` near `e^{−40}`.
fn refined_len(n: usize, z: C64) -> Result<usize> {
    let r = z.norm();
    if r >= 1.0 {
        return Err(Error::Domain(format!("|z| = {r} is not inside the unit disk")));
    }
    let distance = 1.0 - r;
    if distance < RESOLUTION_THRESHOLD {
        return Err(Error::Resolution { distance, threshold: RESOLUTION_THRESHOLD });
    }
    let need = (REFINEMENT / distance).ceil() as usize;
    Ok(need.max(n).next_power_of_two())
}

fn roots_of_unity(len: usize) -> Arc<Vec<C64>> {
    static TABLES: OnceLock<Mutex<HashMap<usize, Arc<Vec<C64>>>>> = OnceLock::new();
    let mut tables = TABLES.get_or_init(Default::default).lock().expect("root table poisoned");
    tables
        .entry(len)
        .or_insert_with(|| {
            Arc::new((0..len).map(|l| C64::from_polar(1.0, TAU * l as f64 / len as f64)).collect())
        })
        .clone()
}

/// `(1/L) Σ u_l (ζ_l + z)/(ζ_l − z)` on the `L`-point grid.
fn trapezoid_sum(values: &[f64], z: C64) -> C64 {
    let len = values.len();
    let roots = roots_of_unity(len);
    let mut acc = C64::new(0.0, 0.0);
    for (&u, &zeta) in values.iter().zip(roots.iter()) {
        if u != 0.0 {
            acc += (zeta + z) / (zeta - z) * u;
        }
    }
    acc / len as f64
}

/// An analytic function on the unit disk,
///
/// ```text
/// (Σ_{k<M} c_k z^k + Σ_jumps (iJ/π)·log(1 − z/ζ_j)) · Π K_p(z)^{m_p} + offset.
/// ```
///
/// The series carries the continuous part of the boundary data; jump terms and
/// pole factors are exact. A rep built from real data by the Schwarz integral
/// has no pole factors, zero offset and `Im c_0 = 0`.
#[derive(Clone, Debug)]
pub struct AnalyticRep {
    coeffs: Vec<C64>,
    jumps: Vec<JumpTerm>,
    poles: Vec<PoleFactor>,
    offset: C64,
    source: Option<Arc<QuadratureSource>>,
}

impl AnalyticRep {
    pub fn from_coeffs(coeffs: Vec<C64>) -> Self {
        Self { coeffs, jumps: Vec::new(), poles: Vec::new(), offset: C64::new(0.0, 0.0), source: None }
    }

    pub fn constant(c: C64) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn jump_terms(&self) -> &[JumpTerm] {
        &self.jumps
    }

    pub fn pole_factors(&self) -> &[PoleFactor] {
        &self.poles
    }

    pub fn offset(&self) -> C64 {
        self.offset
    }

    pub fn source(&self) -> Option<&QuadratureSource> {
        self.source.as_deref()
    }

    /// Multiply by `K_p^{order}` for each given pole factor.
    pub fn with_poles(mut self, poles: Vec<PoleFactor>) -> Self {
        self.poles.extend(poles.into_iter().filter(|p| p.order > 0));
        self
    }

    /// Add a constant after all factors.
    pub fn plus_constant(mut self, c: C64) -> Self {
        self.offset += c;
        self
    }

    /// Value at `z`, `|z| < 1`.
    pub fn evaluate(&self, z: C64) -> Result<C64> {
        check_inside(z)?;
        self.evaluate_at(&DiskPoint::new(z))
    }

    /// Value at a disk point with accurate complements. The series is summed
    /// by Horner's rule, except between [`DELEGATION_RADIUS`] and the
    /// quadrature resolution limit when the series was truncated.
    pub fn evaluate_at(&self, p: &DiskPoint) -> Result<C64> {
        let z = p.w;
        let r = z.norm();
        let regular = match &self.source {
            Some(src) if r > DELEGATION_RADIUS && 1.0 - r >= RESOLUTION_THRESHOLD => src.trapezoid(z)?,
            _ => horner(&self.coeffs, z),
        };
        Ok(self.assemble(regular, p))
    }

    /// Series-only evaluation; never delegates.
    pub fn evaluate_series(&self, z: C64) -> Result<C64> {
        check_inside(z)?;
        let p = DiskPoint::new(z);
        Ok(self.assemble(horner(&self.coeffs, z), &p))
    }

    fn assemble(&self, regular: C64, p: &DiskPoint) -> C64 {
        let mut v = regular;
        for t in &self.jumps {
            v += t.eval(p);
        }
        for pole in &self.poles {
            v *= pole.eval(p);
        }
        v + self.offset
    }

    /// Write the series coefficients as `k,re,im` rows.
    pub fn write_coefficients_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "k,re,im")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            writeln!(out, "{k},{},{}", c.re, c.im)?;
        }
        Ok(())
    }
}

fn check_inside(z: C64) -> Result<()> {
    let r = z.norm();
    if r.is_finite() && r < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("|z| = {r} is not inside the unit disk")))
    }
}

fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Schwarz integral of real data as a truncated Taylor series with `modes`
/// coefficients, plus closed-form jump terms.
pub fn schwarz_spectral(u: &BoundaryFunction, modes: usize) -> Result<AnalyticRep> {
    u.require_real("Schwarz integral input")?;
    let n = u.len();
    if modes > n / 2 {
        return Err(Error::Aliasing { modes, half: n / 2, n });
    }
    if modes == 0 {
        return Err(Error::Validation("mode cutoff must be at least 1".into()));
    }
    let split = split_jumps(u)?;
    let a = fft::forward_real(&split.regular);
    let mut coeffs = Vec::with_capacity(modes);
    coeffs.push(C64::new(a[0].re, 0.0));
    coeffs.extend(a[1..modes].iter().map(|&c| c * 2.0));

    let total: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    let tail: f64 = (modes..n / 2).map(|k| a[k].norm_sqr()).sum();
    let source = (tail > TAIL_ENERGY_TOL * total.max(1.0))
        .then(|| Arc::new(QuadratureSource::new(Arc::new(u.clone()), split.regular)));
    Ok(AnalyticRep {
        coeffs,
        jumps: split.terms,
        poles: Vec::new(),
        offset: C64::new(0.0, 0.0),
        source,
    })
}

/// Trapezoid evaluation of the Schwarz integral at one interior point. The
/// continuous part is resampled onto at least `max(N, 40/(1−|z|))` points.
pub fn schwarz_quadrature(u: &BoundaryFunction, z: C64) -> Result<C64> {
    u.require_real("Schwarz integral input")?;
    let len = refined_len(u.len(), z)?;
    let split = split_jumps(u)?;
    let fine = fft::resample_real(&split.regular, len);
    let p = DiskPoint::new(z);
    Ok(trapezoid_sum(&fine, z) + split.terms.iter().map(|t| t.eval(&p)).sum::<C64>())
}

/// Boundary trace `β = Im g` of the Schwarz integral of `u`, normalised by
/// `Im g(0) = 0`. Output jumps equal input jumps; samples on a jump hold the
/// finite part (the logarithmic term of that jump is dropped).
pub fn conjugate_boundary(u: &BoundaryFunction) -> Result<BoundaryFunction> {
    u.require_real("conjugate function input")?;
    let split = split_jumps(u)?;
    let mut beta = conjugate_samples(&split.regular);
    let h = u.step();
    for (j, b) in beta.iter_mut().enumerate() {
        let theta = h * j as f64;
        for t in &split.terms {
            if (wrap_angle(theta - t.angle)).min(TAU - wrap_angle(theta - t.angle)) > ANGLE_EPS {
                *b += t.boundary_imag(theta);
            }
        }
    }
    BoundaryFunction::from_real(*u.circle(), beta, u.jumps().to_vec())
}
