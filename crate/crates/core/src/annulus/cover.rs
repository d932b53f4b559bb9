//! Explicit universal cover of the annulus by the unit disk.
//!
//! `T(w) = i(1 + w)/(1 − w)` maps the disk onto the upper half-plane,
//! `s = log T` onto the strip `0 < Im s < π`, and `G = exp(i·a·s)` with
//! `a = −ln r/π` wraps the strip onto `r < |z| < 1`. Positive real `T`
//! (`Im s = 0`) lands on `|z| = 1`, negative real `T` on `|z| = r`.
//!
//! Points are handled in the strip coordinate `s`: there both `G` and its
//! inverse are elementary, and `1 ∓ w` are recovered without cancellation
//! even when `w` is within rounding of `±1`.

use std::f64::consts::PI;

use crate::schwarz::DiskPoint;
use crate::{Error, Result, C64, TAU};

/// Margin from the boundary circles required of continued paths.
pub const PATH_MARGIN: f64 = 1e-8;
/// Largest number of consecutive step halvings in [`lift_path`].
pub const MAX_HALVINGS: u32 = 40;

const NEWTON_ITERS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoveringMap {
    r: f64,
    a: f64,
}

/// Build the cover for the annulus `r < |z| < 1`.
pub fn covering_map(r: f64) -> Result<CoveringMap> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("inner radius must lie in (0, 1), got {r}")));
    }
    Ok(CoveringMap { r, a: -r.ln() / PI })
}

impl CoveringMap {
    pub fn inner_radius(&self) -> f64 {
        self.r
    }

    /// Cover exponent `a = −ln r/π`.
    pub fn exponent(&self) -> f64 {
        self.a
    }

    /// Half-plane dilation `μ = e^{2π/a}` of the deck generator that
    /// continues the lift once counterclockwise around the core circle.
    pub fn deck_factor(&self) -> f64 {
        (self.deck_shift()).exp()
    }

    /// The same generator in the strip: `s ↦ s + 2π/a`.
    pub fn deck_shift(&self) -> f64 {
        TAU / self.a
    }

    /// `T(w) = i(1 + w)/(1 − w)`.
    pub fn to_half_plane(w: C64) -> C64 {
        C64::i() * (C64::new(1.0, 0.0) + w) / (C64::new(1.0, 0.0) - w)
    }

    /// `T⁻¹(t) = (t − i)/(t + i)`.
    pub fn from_half_plane(t: C64) -> C64 {
        (t - C64::i()) / (t + C64::i())
    }

    /// Strip coordinate `log T(w)`.
    pub fn strip_of(w: C64) -> C64 {
        Self::to_half_plane(w).ln()
    }

    /// Disk point for strip coordinate `s`, with `1 − w = 2i/(T + i)` and
    /// `1 + w = 2T/(T + i)` computed directly.
    pub fn disk_point(s: C64) -> DiskPoint {
        // Divide through by T when it is large so that nothing overflows.
        if s.re > 0.0 {
            let inv = (-s).exp();
            let denom = C64::new(1.0, 0.0) + C64::i() * inv;
            DiskPoint {
                w: (C64::new(1.0, 0.0) - C64::i() * inv) / denom,
                one_minus_w: C64::new(0.0, 2.0) * inv / denom,
                one_plus_w: C64::new(2.0, 0.0) / denom,
            }
        } else {
            let t = s.exp();
            let denom = t + C64::i();
            DiskPoint {
                w: (t - C64::i()) / denom,
                one_minus_w: C64::new(0.0, 2.0) / denom,
                one_plus_w: t * 2.0 / denom,
            }
        }
    }

    /// `G(w)`.
    pub fn map(&self, w: C64) -> C64 {
        self.map_strip(Self::strip_of(w))
    }

    pub fn map_strip(&self, s: C64) -> C64 {
        (C64::i() * self.a * s).exp()
    }

    /// `G'(w) = 2ia·G(w)/(1 − w²)`.
    pub fn derivative(&self, w: C64) -> C64 {
        C64::new(0.0, 2.0 * self.a) * self.map(w) / (C64::new(1.0, 0.0) - w * w)
    }

    /// Deck generator on the disk. For small `r` the image lies within
    /// rounding of `±1`; [`CoveringMap::deck_point`] keeps it resolvable.
    pub fn deck(&self, w: C64) -> C64 {
        self.deck_point(&DiskPoint::new(w)).w
    }

    pub fn deck_point(&self, p: &DiskPoint) -> DiskPoint {
        Self::disk_point(Self::strip_of_point(p) + self.deck_shift())
    }

    /// `log T` computed from the stored complements.
    pub fn strip_of_point(p: &DiskPoint) -> C64 {
        (C64::i() * p.one_plus_w / p.one_minus_w).ln()
    }

    /// `G` at a disk point with accurate complements.
    pub fn map_point(&self, p: &DiskPoint) -> C64 {
        self.map_strip(Self::strip_of_point(p))
    }

    /// Strip coordinate of the preimage of `z` on sheet `sheet`. Sheet `n`
    /// collects the preimages with `arg z ∈ (−π, π]` shifted by `2πn`; sheet
    /// `0` contains the preimage of every point of the positive real axis
    /// that lies on the imaginary axis of the strip.
    pub fn inverse_strip(&self, z: C64, sheet: i64) -> Result<C64> {
        let m = z.norm();
        if !(m > self.r && m < 1.0) {
            return Err(Error::Domain(format!("|z| = {m} is outside the annulus ({}, 1)", self.r)));
        }
        let arg = z.arg();
        let arg = if arg <= -PI { PI } else { arg };
        Ok(C64::new((arg + TAU * sheet as f64) / self.a, -m.ln() / self.a))
    }

    pub fn inverse(&self, z: C64, sheet: i64) -> Result<DiskPoint> {
        Ok(Self::disk_point(self.inverse_strip(z, sheet)?))
    }

    /// Sheet index of a strip coordinate.
    pub fn sheet_of(&self, s: C64) -> i64 {
        // Arg in (−π, π] means Re s·a ∈ (−π + 2πn, π + 2πn].
        (-((PI - self.a * s.re) / TAU).floor()) as i64
    }

    /// Boundary correspondence: the disk boundary angle `η ∈ (0, 2π)`,
    /// `η ≠ π`, lands on the outer circle for `η > π` and on the inner one
    /// for `η < π`. Returns `(is_outer, θ)` with `θ` unwrapped.
    pub fn boundary_angle(&self, eta: f64) -> (bool, f64) {
        let cot = 1.0 / (0.5 * eta).tan();
        if eta > PI {
            (true, self.a * (-cot).ln())
        } else {
            (false, self.a * cot.ln())
        }
    }

    /// Disk boundary angle of the outer (`is_outer`) or inner circle point at
    /// unwrapped angle `theta`.
    pub fn boundary_preimage(&self, is_outer: bool, theta: f64) -> f64 {
        let y = 2.0 * (-theta / self.a).exp().atan();
        if is_outer {
            TAU - y
        } else {
            y
        }
    }

    fn check_in_annulus(&self, z: C64) -> Result<()> {
        let m = z.norm();
        if m < self.r + PATH_MARGIN || m > 1.0 - PATH_MARGIN {
            return Err(Error::Validation(format!(
                "path point {z} is within {PATH_MARGIN:e} of the annulus boundary"
            )));
        }
        Ok(())
    }

    /// Newton on `G(s) = z` in the strip, seeded at `seed`.
    fn newton(&self, seed: C64, z: C64) -> Option<C64> {
        let mut s = seed;
        for _ in 0..NEWTON_ITERS {
            let g = self.map_strip(s);
            let ds = (g - z) / (C64::i() * self.a * g);
            s -= ds;
            if !s.is_finite() || s.im <= 0.0 || s.im >= PI {
                return None;
            }
            if ds.norm() <= 1e-15 * (1.0 + s.norm()) {
                return Some(s);
            }
        }
        let g = self.map_strip(s);
        ((g - z).norm() <= 1e-13).then_some(s)
    }

    /// Continue the strip coordinate `start` (a preimage of `path[0]`) along
    /// the polyline; returns the strip coordinate over each vertex.
    pub fn lift_path_strip(&self, path: &[C64], start: C64) -> Result<Vec<C64>> {
        let Some(&first) = path.first() else {
            return Ok(Vec::new());
        };
        self.check_in_annulus(first)?;
        let mismatch = (self.map_strip(start) - first).norm();
        if mismatch > 1e-8 {
            return Err(Error::Validation(format!(
                "start branch maps to a point {mismatch:e} away from the path start"
            )));
        }
        let mut out = Vec::with_capacity(path.len());
        let mut s = start;
        out.push(s);
        for pair in path.windows(2) {
            let (z0, z1) = (pair[0], pair[1]);
            self.check_in_annulus(z1)?;
            let mut tau: f64 = 0.0;
            let mut step = 1.0;
            let mut halvings = 0;
            while tau < 1.0 {
                let next_tau = (tau + step).min(1.0);
                let here = z0 + (z1 - z0) * tau;
                let target = z0 + (z1 - z0) * next_tau;
                self.check_in_annulus(target)?;
                // Continuity: the increment must agree with the local
                // linearisation, which rules out landing on another sheet.
                let predicted = (target - here) / (C64::i() * self.a * here);
                let accepted = self.newton(s, target).filter(|&s_new| {
                    ((s_new - s) - predicted).norm() <= 0.1 * predicted.norm() + 1e-12
                });
                match accepted {
                    Some(s_new) => {
                        s = s_new;
                        tau = next_tau;
                        step *= 2.0;
                        halvings = 0;
                    }
                    None => {
                        halvings += 1;
                        if halvings > MAX_HALVINGS {
                            return Err(Error::Continuation(format!(
                                "local inversion failed after {MAX_HALVINGS} step halvings near {here}; refine the path"
                            )));
                        }
                        step *= 0.5;
                    }
                }
            }
            out.push(s);
        }
        Ok(out)
    }

    /// Continue the branch of `G⁻¹` through `start_branch` along the polyline.
    pub fn lift_path(&self, path: &[C64], start_branch: C64) -> Result<Vec<C64>> {
        let lifted = self.lift_path_strip(path, Self::strip_of(start_branch))?;
        Ok(lifted.into_iter().map(|s| Self::disk_point(s).w).collect())
    }
}

/// Closed polygon with `count` vertices on the circle `|z| = radius`,
/// counterclockwise from the positive real axis.
pub fn circle_path(radius: f64, count: usize) -> Vec<C64> {
    (0..=count).map(|k| C64::from_polar(radius, TAU * k as f64 / count as f64)).collect()
}
