//! Residuals of the boundary condition along nontangential approaches.
//!
//! A probe at boundary angle `θ` walks into the domain along
//! `z = c + R·e^{iθ}(1 ∓ t·e^{iψ})` for each rung `t` of a decreasing ladder
//! and each direction `ψ ∈ {0, ±ψ_max/2}`; the sign is `−` on a circle that
//! bounds the domain from outside and `+` on an inner circle. At every rung the
//! residual `|Re{conj(λ(θ))·f(z)} − φ(θ)|` is recorded.
//!
//! For a smooth solution the raw residual still contains the approach error
//! `O(t·|f'|)`. Each row therefore also carries a limit residual, the linear
//! extrapolation to `t = 0` of the signed residual at the last two rungs.

use std::f64::consts::FRAC_PI_4;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::boundary::{normalize_jumps, BoundaryFunction, Orientation};
use crate::{circular_distance, Error, Result, C64, RESOLUTION_THRESHOLD, TAU};

/// Tolerance for the nonincreasing-trend flag.
const TREND_FLOOR: f64 = 1e-12;

/// Anything that can be evaluated inside the domain.
pub trait Evaluable: Sync {
    fn value(&self, z: C64) -> Result<C64>;
}

impl<F> Evaluable for F
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    fn value(&self, z: C64) -> Result<C64> {
        self(z)
    }
}

/// Geometric ladder `t_k = base·10^{−k}`, `k = 0..count`.
pub fn radial_ladder(base: f64, count: usize) -> Result<Vec<f64>> {
    if !(base > 0.0 && base < 1.0) {
        return Err(Error::Config(format!("ladder base must lie in (0, 1), got {base}")));
    }
    if count < 2 {
        return Err(Error::Config(format!("ladder needs at least 2 rungs, got {count}")));
    }
    Ok((0..count).map(|k| base / 10f64.powi(k as i32)).collect())
}

/// Cone of approach at one boundary angle.
#[derive(Clone, Debug, PartialEq)]
pub struct StolzApproach {
    pub theta: f64,
    pub aperture: f64,
    pub ladder: Vec<f64>,
}

impl StolzApproach {
    pub fn new(theta: f64, aperture: f64, ladder: Vec<f64>) -> Result<Self> {
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&aperture) {
            return Err(Error::Config(format!("aperture must lie in [0, π/2), got {aperture}")));
        }
        if ladder.len() < 2 {
            return Err(Error::Config("ladder needs at least 2 rungs".into()));
        }
        if ladder.iter().any(|&t| !(t > 0.0 && t < 1.0)) {
            return Err(Error::Config("ladder rungs must lie in (0, 1)".into()));
        }
        if ladder.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("ladder must be strictly decreasing".into()));
        }
        Ok(Self { theta, aperture, ladder })
    }

    /// Directions `0, +ψ_max/2, −ψ_max/2`; just `0` for a radial-only cone.
    pub fn directions(&self) -> Vec<f64> {
        if self.aperture == 0.0 {
            vec![0.0]
        } else {
            vec![0.0, 0.5 * self.aperture, -0.5 * self.aperture]
        }
    }

    /// Probe point at rung `t` and direction `psi` for the given circle.
    pub fn point(&self, center: C64, radius: f64, orientation: Orientation, psi: f64, t: f64) -> C64 {
        let step = C64::from_polar(t, psi);
        let factor = match orientation {
            Orientation::Outer => C64::new(1.0, 0.0) - step,
            Orientation::Inner => C64::new(1.0, 0.0) + step,
        };
        center + C64::from_polar(radius, self.theta) * factor
    }
}

/// Boundary data on one circle and the angles excluded from probing.
#[derive(Clone, Debug)]
pub struct BoundaryCondition<'a> {
    pub lambda: &'a BoundaryFunction,
    pub phi: &'a BoundaryFunction,
    pub exceptional: Vec<f64>,
}

impl<'a> BoundaryCondition<'a> {
    /// Exceptional set: the declared jumps of `λ` and `φ`.
    pub fn new(lambda: &'a BoundaryFunction, phi: &'a BoundaryFunction) -> Self {
        let mut exceptional = lambda.jumps().to_vec();
        exceptional.extend_from_slice(phi.jumps());
        Self { lambda, phi, exceptional: normalize_jumps(exceptional) }
    }

    pub fn with_exceptional(mut self, extra: &[f64]) -> Self {
        self.exceptional.extend_from_slice(extra);
        self.exceptional = normalize_jumps(std::mem::take(&mut self.exceptional));
        self
    }
}

/// Harness settings shared by all probes.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckParams {
    pub aperture: f64,
    pub ladder: Vec<f64>,
    pub probe_count: usize,
    /// Half-width of the excluded neighbourhood of each exceptional angle;
    /// `None` means `10/N`.
    pub delta_excl: Option<f64>,
}

impl CheckParams {
    pub fn new(ladder: Vec<f64>, probe_count: usize) -> Self {
        Self { aperture: FRAC_PI_4, ladder, probe_count, delta_excl: None }
    }
}

/// One probe angle and direction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeRow {
    pub component: usize,
    pub theta: f64,
    pub psi: f64,
    /// Residual at each rung of the ladder.
    pub residuals: Vec<f64>,
    /// Residual extrapolated to `t = 0` from the last two rungs.
    pub limit_residual: f64,
    /// Residuals are nonincreasing along the ladder.
    pub converged: bool,
}

impl ProbeRow {
    pub fn final_residual(&self) -> f64 {
        *self.residuals.last().unwrap_or(&0.0)
    }

    /// `residual(last rung) / residual(first rung)`, or `0` if both vanish.
    pub fn ratio(&self) -> f64 {
        let first = self.residuals[0];
        if first == 0.0 {
            if self.final_residual() == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.final_residual() / first
        }
    }
}

/// Excluded neighbourhood `[center − half_width, center + half_width]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExcludedArc {
    pub component: usize,
    pub center: f64,
    pub half_width: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub ladder: Vec<f64>,
    pub rows: Vec<ProbeRow>,
    pub excluded_arcs: Vec<ExcludedArc>,
    /// Probe angles that fell inside an excluded arc, as `(component, θ)`.
    pub excluded_probes: Vec<(usize, f64)>,
}

#[derive(Serialize)]
struct Summary {
    sup_residual: f64,
    sup_limit_residual: f64,
    probes: usize,
    excluded: usize,
}

impl ResidualReport {
    /// Largest final-rung residual over included probes.
    pub fn sup_residual(&self) -> f64 {
        self.rows.iter().map(ProbeRow::final_residual).fold(0.0, f64::max)
    }

    pub fn sup_limit_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.limit_residual).fold(0.0, f64::max)
    }

    /// Largest residual at rung `k` over included probes.
    pub fn sup_at_rung(&self, k: usize) -> f64 {
        self.rows.iter().map(|r| r.residuals[k]).fold(0.0, f64::max)
    }

    pub fn converged_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            return 1.0;
        }
        self.rows.iter().filter(|r| r.converged).count() as f64 / self.rows.len() as f64
    }

    /// Rows as `theta,psi,t,residual,converged`, one line per rung.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "theta,psi,t,residual,converged")?;
        for row in &self.rows {
            for (t, r) in self.ladder.iter().zip(&row.residuals) {
                writeln!(out, "{},{},{},{},{}", row.theta, row.psi, t, r, row.converged)?;
            }
        }
        Ok(())
    }

    pub fn summary_json(&self) -> Result<String> {
        let summary = Summary {
            sup_residual: self.sup_residual(),
            sup_limit_residual: self.sup_limit_residual(),
            probes: self.rows.len(),
            excluded: self.excluded_probes.len(),
        };
        Ok(serde_json::to_string_pretty(&summary)?)
    }
}

/// Evaluate the boundary residual of `f` on every component.
pub fn nontangential_limit_check(
    f: &dyn Evaluable,
    components: &[BoundaryCondition<'_>],
    params: &CheckParams,
) -> Result<ResidualReport> {
    if params.probe_count < 8 {
        return Err(Error::Config(format!("probe_count must be at least 8, got {}", params.probe_count)));
    }
    let template = StolzApproach::new(0.0, params.aperture, params.ladder.clone())?;
    let last = *template.ladder.last().expect("ladder is nonempty");
    if last < RESOLUTION_THRESHOLD {
        return Err(Error::Config(format!(
            "final ladder rung {last:e} is below the evaluator resolution {RESOLUTION_THRESHOLD:e}"
        )));
    }

    let mut rows = Vec::new();
    let mut excluded_arcs = Vec::new();
    let mut excluded_probes = Vec::new();
    for (c, bc) in components.iter().enumerate() {
        let n = bc.lambda.len();
        if bc.phi.len() != n {
            return Err(Error::Validation(format!(
                "grid mismatch on component {c}: lambda has {n} samples, phi has {}",
                bc.phi.len()
            )));
        }
        let delta = params.delta_excl.unwrap_or(10.0 / n as f64);
        excluded_arcs.extend(
            bc.exceptional.iter().map(|&center| ExcludedArc { component: c, center, half_width: delta }),
        );
        let h = TAU / n as f64;
        let mut thetas = Vec::with_capacity(params.probe_count);
        for i in 0..params.probe_count {
            let j = i * n / params.probe_count;
            let theta = (j as f64 + 0.5) * h;
            if bc.exceptional.iter().any(|&x| circular_distance(theta, x) <= delta) {
                excluded_probes.push((c, theta));
            } else {
                thetas.push(theta);
            }
        }
        let circle = *bc.lambda.circle();
        let component_rows: Result<Vec<Vec<ProbeRow>>> = thetas
            .par_iter()
            .map(|&theta| {
                let approach = StolzApproach { theta, ..template.clone() };
                let lam = bc.lambda.value_at(theta);
                let phi = bc.phi.value_at(theta).re;
                approach
                    .directions()
                    .into_iter()
                    .map(|psi| {
                        let signed = approach
                            .ladder
                            .iter()
                            .map(|&t| {
                                let z = approach.point(circle.center(), circle.radius(), circle.orientation(), psi, t);
                                Ok((lam.conj() * f.value(z)?).re - phi)
                            })
                            .collect::<Result<Vec<f64>>>()?;
                        Ok(make_row(c, theta, psi, &approach.ladder, &signed))
                    })
                    .collect()
            })
            .collect();
        rows.extend(component_rows?.into_iter().flatten());
    }
    Ok(ResidualReport { ladder: template.ladder, rows, excluded_arcs, excluded_probes })
}

fn make_row(component: usize, theta: f64, psi: f64, ladder: &[f64], signed: &[f64]) -> ProbeRow {
    let k = signed.len() - 1;
    let (t0, t1) = (ladder[k - 1], ladder[k]);
    let (r0, r1) = (signed[k - 1], signed[k]);
    let limit = r1 - t1 * (r0 - r1) / (t0 - t1);
    let residuals: Vec<f64> = signed.iter().map(|r| r.abs()).collect();
    let converged = residuals.windows(2).all(|w| w[1] <= w[0] + TREND_FLOOR);
    ProbeRow { component, theta, psi, residuals, limit_residual: limit.abs(), converged }
}

/// Mean of `f` over the circle `|z| = rho` with `count` equispaced points.
/// For `f` analytic on a neighbourhood of the closed disk of radius `rho`
/// this equals `f(0)` with spectral accuracy.
pub fn circular_mean(f: &dyn Evaluable, rho: f64, count: usize) -> Result<C64> {
    let mut sum = C64::new(0.0, 0.0);
    for j in 0..count {
        sum += f.value(C64::from_polar(rho, TAU * j as f64 / count as f64))?;
    }
    Ok(sum / count as f64)
}
