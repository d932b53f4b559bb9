//! Closed-form boundary data used by configs and tests.

use serde::{Deserialize, Serialize};

use crate::{wrap_angle, C64, TAU};

fn one() -> f64 {
    1.0
}

/// A built-in boundary function of the polar angle `θ ∈ [0, 2π)`.
///
/// Serialised as `{"kind": "...", "params": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum BoundaryExpr {
    Const {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    /// `amplitude · e^{imθ}`.
    FourierMode {
        m: i64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// `amplitude · cos(kθ)`.
    Cos {
        k: u32,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// `amplitude · sin(kθ)`.
    Sin {
        k: u32,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// `a` on `[0, at)`, `b` on `[at, 2π)`.
    Step { a: f64, b: f64, at: f64 },
    /// `scale · θ` with `θ` taken in `(−π, π]`.
    Sawtooth {
        #[serde(default = "one")]
        scale: f64,
    },
    /// `|2 sin((θ − at)/2)|^exponent`, Hölder continuous for `exponent > 0`.
    Cusp { exponent: f64, at: f64 },
    /// Raw grid values; `im` may be omitted for real data.
    Samples {
        re: Vec<f64>,
        #[serde(default)]
        im: Vec<f64>,
    },
    Sum { terms: Vec<BoundaryExpr> },
    /// `exp(i · Re p(θ))`, a unimodular function with the jumps of `p`.
    ExpI { phase: Box<BoundaryExpr> },
}

impl BoundaryExpr {
    /// Value at `theta`. Jump points take the right-hand limit, except the
    /// sawtooth, whose range `(−π, π]` puts `π` at `θ = π`.
    ///
    /// Returns `None` for [`BoundaryExpr::Samples`], which needs its grid.
    pub fn eval(&self, theta: f64) -> Option<C64> {
        let t = wrap_angle(theta);
        let v = match self {
            BoundaryExpr::Const { re, im } => C64::new(*re, *im),
            BoundaryExpr::FourierMode { m, amplitude } => {
                C64::from_polar(*amplitude, (*m as f64) * t)
            }
            BoundaryExpr::Cos { k, amplitude } => C64::new(amplitude * (*k as f64 * t).cos(), 0.0),
            BoundaryExpr::Sin { k, amplitude } => C64::new(amplitude * (*k as f64 * t).sin(), 0.0),
            BoundaryExpr::Step { a, b, at } => {
                C64::new(if t < wrap_angle(*at) { *a } else { *b }, 0.0)
            }
            BoundaryExpr::Sawtooth { scale } => {
                let p = if t <= std::f64::consts::PI { t } else { t - TAU };
                C64::new(scale * p, 0.0)
            }
            BoundaryExpr::Cusp { exponent, at } => {
                let s = (2.0 * ((t - at) * 0.5).sin()).abs();
                C64::new(s.powf(*exponent), 0.0)
            }
            BoundaryExpr::Samples { .. } => return None,
            BoundaryExpr::Sum { terms } => {
                let mut acc = C64::new(0.0, 0.0);
                for term in terms {
                    acc += term.eval(t)?;
                }
                acc
            }
            BoundaryExpr::ExpI { phase } => C64::from_polar(1.0, phase.eval(t)?.re),
        };
        Some(v)
    }

    /// Discontinuities that the expression has regardless of user input.
    pub fn inherent_jumps(&self) -> Vec<f64> {
        match self {
            BoundaryExpr::Step { a, b, at } if a != b => vec![0.0, wrap_angle(*at)],
            BoundaryExpr::Sawtooth { scale } if *scale != 0.0 => vec![std::f64::consts::PI],
            BoundaryExpr::Cusp { exponent, at } if *exponent < 0.0 => vec![wrap_angle(*at)],
            BoundaryExpr::Sum { terms } => terms.iter().flat_map(|t| t.inherent_jumps()).collect(),
            BoundaryExpr::ExpI { phase } => phase.inherent_jumps(),
            _ => Vec::new(),
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            BoundaryExpr::Const { im, .. } => *im == 0.0,
            BoundaryExpr::FourierMode { m, amplitude } => *m == 0 || *amplitude == 0.0,
            BoundaryExpr::Samples { im, .. } => im.iter().all(|&x| x == 0.0),
            BoundaryExpr::Sum { terms } => terms.iter().all(|t| t.is_real()),
            BoundaryExpr::ExpI { .. } => false,
            _ => true,
        }
    }
}
