//! Boundary data on circles: grid samples, jump sets, total variation and the
//! argument lift of unimodular coefficients.

mod expr;
mod lift;

pub use expr::BoundaryExpr;
pub use lift::{argument_lift, ArgumentFunction, ArcVariation};

use serde::{Deserialize, Serialize};

use crate::{circular_distance, wrap_angle, Error, Result, C64, TAU};

/// Two angles closer than this are treated as the same point.
pub(crate) const ANGLE_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// The domain lies inside the circle.
    Outer,
    /// The domain lies outside the circle.
    Inner,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryCircle {
    center: C64,
    radius: f64,
    orientation: Orientation,
}

impl BoundaryCircle {
    pub fn new(center: C64, radius: f64, orientation: Orientation) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!("circle radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius, orientation })
    }

    /// `|z| = 1`, domain inside.
    pub fn unit() -> Self {
        Self { center: C64::new(0.0, 0.0), radius: 1.0, orientation: Orientation::Outer }
    }

    pub fn center(&self) -> C64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn point(&self, theta: f64) -> C64 {
        self.center + C64::from_polar(self.radius, theta)
    }

    pub fn is_unit(&self) -> bool {
        self.center == C64::new(0.0, 0.0)
            && self.radius == 1.0
            && self.orientation == Orientation::Outer
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Analytic,
    PiecewiseSmooth,
}

/// Complex samples at `θ_j = 2πj/N` on a circle together with the angles
/// where the function jumps.
///
/// A sample that sits exactly on a jump stores the right-hand limit. Nothing
/// downstream evaluates the function at a jump angle.
#[derive(Clone, Debug)]
pub struct BoundaryFunction {
    circle: BoundaryCircle,
    samples: Vec<C64>,
    jumps: Vec<f64>,
    smoothness: Smoothness,
    expr: Option<BoundaryExpr>,
}

impl BoundaryFunction {
    pub fn from_samples(circle: BoundaryCircle, samples: Vec<C64>, jumps: Vec<f64>) -> Result<Self> {
        let n = samples.len();
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Validation(format!(
                "grid size must be a power of two and at least 8, got {n}"
            )));
        }
        if let Some(bad) = samples.iter().position(|s| !(s.re.is_finite() && s.im.is_finite())) {
            return Err(Error::Validation(format!(
                "non-finite sample at theta = {:.6}",
                TAU * bad as f64 / n as f64
            )));
        }
        for w in jumps.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Validation(format!(
                    "jump angles must be strictly increasing, got {} after {}",
                    w[1], w[0]
                )));
            }
        }
        if let Some(j) = jumps.iter().find(|&&j| !(0.0..TAU).contains(&j)) {
            return Err(Error::Validation(format!("jump angle {j} outside [0, 2pi)")));
        }
        let smoothness =
            if jumps.is_empty() { Smoothness::Analytic } else { Smoothness::PiecewiseSmooth };
        Ok(Self { circle, samples, jumps, smoothness, expr: None })
    }

    pub fn from_real(circle: BoundaryCircle, values: Vec<f64>, jumps: Vec<f64>) -> Result<Self> {
        Self::from_samples(circle, values.into_iter().map(|v| C64::new(v, 0.0)).collect(), jumps)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn circle(&self) -> &BoundaryCircle {
        &self.circle
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn jumps(&self) -> &[f64] {
        &self.jumps
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn expr(&self) -> Option<&BoundaryExpr> {
        self.expr.as_ref()
    }

    pub fn step(&self) -> f64 {
        TAU / self.len() as f64
    }

    pub fn theta(&self, j: usize) -> f64 {
        TAU * j as f64 / self.len() as f64
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.re).collect()
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.im.abs()))
    }

    pub fn is_real(&self) -> bool {
        self.max_abs_imag() <= 1e-12 * (1.0 + self.sup_norm())
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.norm()))
    }

    pub(crate) fn require_real(&self, what: &str) -> Result<()> {
        if self.is_real() {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "{what} must be real-valued (max |Im| = {:.3e})",
                self.max_abs_imag()
            )))
        }
    }

    pub(crate) fn with_expr(mut self, expr: BoundaryExpr) -> Self {
        self.expr = Some(expr);
        self
    }

    /// True when `theta` is within [`ANGLE_EPS`] of a declared jump.
    pub fn is_jump(&self, theta: f64) -> bool {
        self.jumps.iter().any(|&j| circular_distance(j, theta) <= ANGLE_EPS)
    }

    /// Value at an arbitrary angle: exact for closed-form data, otherwise
    /// linear interpolation that never reaches across a jump.
    pub fn value_at(&self, theta: f64) -> C64 {
        if let Some(v) = self.expr.as_ref().and_then(|e| e.eval(theta)) {
            return v;
        }
        let n = self.len();
        let h = self.step();
        let t = wrap_angle(theta);
        let j = ((t / h).floor() as usize).min(n - 1);
        let left = self.theta(j);
        let right = left + h;
        let frac = (t - left) / h;
        let next = (j + 1) % n;
        // A jump strictly inside (left, right]: stay on the side of `t`.
        let cut = self.jumps.iter().map(|&jmp| if jmp < left - ANGLE_EPS { jmp + TAU } else { jmp }).find(|&jmp| {
            jmp > left + ANGLE_EPS && jmp <= right + ANGLE_EPS
        });
        match cut {
            Some(c) if t < c - ANGLE_EPS => self.samples[j],
            Some(_) => self.samples[next],
            None => self.samples[j] * (1.0 - frac) + self.samples[next] * frac,
        }
    }
}

/// Sample a built-in expression on an `n`-point grid.
///
/// The jump list is the union of `jumps` and the discontinuities the
/// expression carries by construction (e.g. a step also jumps at `0`).
pub fn sample_closed_form(
    expr: &BoundaryExpr,
    circle: BoundaryCircle,
    n: usize,
    jumps: &[f64],
) -> Result<BoundaryFunction> {
    let mut all: Vec<f64> = jumps.to_vec();
    for &j in jumps {
        if !j.is_finite() || !(0.0..TAU).contains(&j) {
            return Err(Error::Config(format!("jump angle {j} outside [0, 2pi)")));
        }
    }
    all.extend(expr.inherent_jumps());
    let all = normalize_jumps(all);
    let samples: Vec<C64> = match expr {
        BoundaryExpr::Samples { re, im } => {
            if re.len() != n || !(im.is_empty() || im.len() == n) {
                return Err(Error::Config(format!(
                    "samples block has {} real / {} imaginary values, expected {n}",
                    re.len(),
                    im.len()
                )));
            }
            re.iter()
                .enumerate()
                .map(|(j, &r)| C64::new(r, im.get(j).copied().unwrap_or(0.0)))
                .collect()
        }
        _ => {
            let mut out = Vec::with_capacity(n);
            for j in 0..n {
                let theta = TAU * j as f64 / n as f64;
                out.push(expr.eval(theta).ok_or_else(|| {
                    Error::Config("nested samples blocks are not supported".into())
                })?);
            }
            out
        }
    };
    Ok(BoundaryFunction::from_samples(circle, samples, all)?.with_expr(expr.clone()))
}

/// Wrap, sort and de-duplicate a list of angles.
pub(crate) fn normalize_jumps(mut jumps: Vec<f64>) -> Vec<f64> {
    for j in jumps.iter_mut() {
        *j = wrap_angle(*j);
    }
    jumps.sort_by(f64::total_cmp);
    jumps.dedup_by(|a, b| (*a - *b).abs() <= ANGLE_EPS);
    if jumps.len() > 1 && TAU - jumps[jumps.len() - 1] + jumps[0] <= ANGLE_EPS {
        jumps.pop();
    }
    jumps
}

/// Closed angular interval `[start, end]` with `0 ≤ start < end ≤ 2π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleArc {
    pub start: f64,
    pub end: f64,
}

impl AngleArc {
    pub fn new(start: f64, end: f64) -> Self {
        Self { start, end }
    }

    pub fn full() -> Self {
        Self { start: 0.0, end: TAU }
    }
}

/// Discrete total variation `Σ |f(θ_{j+1}) − f(θ_j)|` over the grid points in
/// a closed arc, in angular order.
///
/// When `arc.end == 2π` the periodic sample at `2π` (equal to the sample at
/// `0`) closes the sum, unless the function jumps at `0`.
pub fn total_variation(f: &BoundaryFunction, arc: AngleArc, allow_jumps: bool) -> Result<f64> {
    if !(arc.start.is_finite() && arc.end.is_finite()) || arc.start < 0.0 || arc.end > TAU {
        return Err(Error::Domain(format!(
            "arc [{}, {}] exceeds [0, 2pi]",
            arc.start, arc.end
        )));
    }
    if arc.end <= arc.start {
        return Err(Error::Domain(format!("empty arc [{}, {}]", arc.start, arc.end)));
    }
    if !allow_jumps {
        if let Some(j) = f.jumps().iter().find(|&&j| j > arc.start && j < arc.end) {
            return Err(Error::Domain(format!(
                "arc [{}, {}] contains the jump at {j}; pass allow_jumps to include it",
                arc.start, arc.end
            )));
        }
    }
    let n = f.len();
    let h = f.step();
    let first = (arc.start / h - 1e-9).ceil().max(0.0) as usize;
    let mut values: Vec<C64> = (first..n)
        .take_while(|&j| f.theta(j) <= arc.end + 1e-12)
        .map(|j| f.samples()[j])
        .collect();
    if arc.end >= TAU && !f.is_jump(0.0) {
        values.push(f.samples()[0]);
    }
    Ok(values.windows(2).map(|w| (w[1] - w[0]).norm()).sum())
}
