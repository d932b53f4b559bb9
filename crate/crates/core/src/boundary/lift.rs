use std::f64::consts::PI;

use super::{normalize_jumps, BoundaryFunction, ANGLE_EPS};
use crate::{wrap_angle, Error, Result, C64, TAU};

/// Tolerance on `|λ(θ_j)| = 1`.
pub const UNIMODULAR_TOL: f64 = 1e-9;

/// The argument `α` of a unimodular coefficient, with values in `(−π, π]`.
#[derive(Clone, Debug)]
pub struct ArgumentFunction {
    base: BoundaryFunction,
    branch_jumps: Vec<f64>,
}

/// Variation of `α` over one maximal jump-free arc (open at both ends). The
/// last arc wraps through `2π`, so its `end` may exceed `2π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcVariation {
    pub start: f64,
    pub end: f64,
    pub variation: f64,
}

impl ArgumentFunction {
    /// Real samples with the full jump set (inherited from `λ` plus the
    /// `±2π` branch jumps introduced by the principal value).
    pub fn base(&self) -> &BoundaryFunction {
        &self.base
    }

    pub fn values(&self) -> Vec<f64> {
        self.base.real_values()
    }

    pub fn jumps(&self) -> &[f64] {
        self.base.jumps()
    }

    pub fn branch_jumps(&self) -> &[f64] {
        &self.branch_jumps
    }

    /// Total variation of `α` on each arc between consecutive jumps. With no
    /// jumps the single entry covers the whole circle.
    pub fn arc_variations(&self) -> Vec<ArcVariation> {
        let values = self.values();
        let n = values.len();
        let jumps = self.jumps();
        let h = TAU / n as f64;
        if jumps.is_empty() {
            let v = (0..n).map(|j| (values[(j + 1) % n] - values[j]).abs()).sum();
            return vec![ArcVariation { start: 0.0, end: TAU, variation: v }];
        }
        let mut out = Vec::with_capacity(jumps.len());
        for (i, &start) in jumps.iter().enumerate() {
            let end = if i + 1 < jumps.len() { jumps[i + 1] } else { jumps[0] + TAU };
            // Grid points strictly inside (start, end), taken cyclically.
            let first = (start / h + ANGLE_EPS).floor() as usize + 1;
            let mut prev: Option<f64> = None;
            let mut variation = 0.0;
            let mut k = first;
            while (k as f64) * h < end - ANGLE_EPS {
                let v = values[k % n];
                if let Some(p) = prev {
                    variation += (v - p).abs();
                }
                prev = Some(v);
                k += 1;
            }
            out.push(ArcVariation { start, end, variation });
        }
        out
    }
}

/// Principal-value argument lift `α(θ_j) ∈ (−π, π]` with `exp(iα) = λ`.
///
/// Wherever consecutive samples differ by more than `π` inside an arc on which
/// `λ` is continuous, the crossing of the branch cut is located by linear
/// interpolation of the unwrapped argument and recorded as a jump.
pub fn argument_lift(lambda: &BoundaryFunction) -> Result<ArgumentFunction> {
    let n = lambda.len();
    let samples = lambda.samples();
    let (worst_j, worst) = samples
        .iter()
        .enumerate()
        .map(|(j, s)| (j, (s.norm() - 1.0).abs()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    if worst > UNIMODULAR_TOL {
        return Err(Error::Validation(format!(
            "coefficient is not unimodular: ||lambda| - 1| = {worst:.3e} at theta = {:.6}",
            lambda.theta(worst_j)
        )));
    }
    let alpha: Vec<f64> = samples.iter().map(|&s| principal_arg(s)).collect();

    let h = lambda.step();
    let mut branch = Vec::new();
    for j in 0..n {
        let next = (j + 1) % n;
        let (a0, a1) = (alpha[j], alpha[next]);
        if (a1 - a0).abs() <= PI {
            continue;
        }
        let left = h * j as f64;
        let right = left + h;
        let declared = lambda.jumps().iter().any(|&jmp| {
            let jmp = if jmp < left - ANGLE_EPS { jmp + TAU } else { jmp };
            jmp > left + ANGLE_EPS && jmp <= right + ANGLE_EPS
        });
        if declared {
            continue;
        }
        let (unwrapped, level) = if a0 > a1 { (a1 + TAU, PI) } else { (a1 - TAU, -PI) };
        let frac = ((level - a0) / (unwrapped - a0)).clamp(0.0, 1.0);
        branch.push(wrap_angle(left + frac * h));
    }
    let branch = normalize_jumps(branch);
    let mut all = lambda.jumps().to_vec();
    all.extend_from_slice(&branch);
    let base = BoundaryFunction::from_real(*lambda.circle(), alpha, normalize_jumps(all))?;
    Ok(ArgumentFunction { base, branch_jumps: branch })
}

/// `arg z` in `(−π, π]`.
pub(crate) fn principal_arg(z: C64) -> f64 {
    let a = z.arg();
    if a <= -PI {
        PI
    } else {
        a
    }
}
