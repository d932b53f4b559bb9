//! JSON problem configuration.
//!
//! ```json
//! {
//!   "domain": {"type": "disk"},
//!   "lambda": {"kind": "fourier_mode", "params": {"m": 1}},
//!   "phi": {"kind": "const", "params": {"re": 1.0}},
//!   "solver": {"n": 4096, "tolerance": 1e-3},
//!   "outputs": {"report": "report.csv"}
//! }
//! ```
//!
//! An annulus replaces `lambda`/`phi` by `outer` and `inner` blocks and uses
//! `{"type": "annulus", "r": 0.5}`. Output paths are relative to the config
//! file's directory.

use std::collections::HashSet;
use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::annulus::AnnulusDomain;
use crate::boundary::{sample_closed_form, BoundaryCircle, BoundaryExpr, BoundaryFunction, Orientation};
use crate::{Error, Result, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Disk,
    Annulus { r: f64 },
    /// A general circular domain. Only the two circles of a centred annulus
    /// are supported; anything else is rejected during validation.
    Circular { circles: Vec<CircleSpec> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSpec {
    pub center: [f64; 2],
    pub radius: f64,
}

/// Coefficient and data on one boundary circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub lambda: BoundaryExpr,
    pub phi: BoundaryExpr,
    /// Extra declared jump angles on this circle.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub jumps: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ResidualMetric {
    /// Final-rung residual.
    #[default]
    Raw,
    /// Residual extrapolated to the boundary from the last two rungs.
    Limit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderSpec {
    pub base: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverParams {
    /// Grid size `N`.
    pub n: usize,
    /// Series cutoff `M`; `N/2` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Jump exclusion half-width; `10/N` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_excl: Option<f64>,
    pub ladder: LadderSpec,
    pub aperture: f64,
    pub probes: usize,
    pub tolerance: f64,
    pub residual_metric: ResidualMetric,
    /// Random interior points written to the interior CSV.
    pub interior_points: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            n: 4096,
            m: None,
            delta_excl: None,
            ladder: LadderSpec { base: 1e-2, count: 3 },
            aperture: FRAC_PI_4,
            probes: 256,
            tolerance: 1e-3,
            residual_metric: ResidualMetric::Raw,
            interior_points: 16,
        }
    }
}

impl SolverParams {
    pub fn modes(&self) -> usize {
        self.m.unwrap_or(self.n / 2)
    }
}

/// Output files; every entry is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub traces: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interior: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branches: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monodromy: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<PathBuf>,
    /// Directory for the `--emit-plot-data` files.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot_dir: Option<PathBuf>,
}

impl OutputSpec {
    fn entries(&self) -> Vec<(&'static str, &PathBuf)> {
        [
            ("traces", &self.traces),
            ("report", &self.report),
            ("summary", &self.summary),
            ("interior", &self.interior),
            ("coefficients", &self.coefficients),
            ("branches", &self.branches),
            ("monodromy", &self.monodromy),
            ("family", &self.family),
            ("plot_dir", &self.plot_dir),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|p| (k, p)))
        .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub domain: DomainSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<BoundaryExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<BoundaryExpr>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub jumps: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<ComponentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<ComponentSpec>,
    #[serde(default)]
    pub solver: SolverParams,
    #[serde(default)]
    pub outputs: OutputSpec,
    /// Parameters `c` of the family members `f + ic·A`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub family: Vec<f64>,
}

/// A validated problem ready to solve.
#[derive(Clone, Debug)]
pub enum Problem {
    Disk { lambda: BoundaryFunction, phi: BoundaryFunction },
    Annulus { r: f64, outer: (BoundaryFunction, BoundaryFunction), inner: (BoundaryFunction, BoundaryFunction) },
}

impl ProblemConfig {
    /// Parse and validate. Errors carry serde's line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.domain {
            DomainSpec::Disk => {
                if self.lambda.is_none() || self.phi.is_none() {
                    return Err(Error::Config("disk domain needs `lambda` and `phi`".into()));
                }
                if self.outer.is_some() || self.inner.is_some() {
                    return Err(Error::Config("disk domain takes `lambda`/`phi`, not `outer`/`inner`".into()));
                }
            }
            DomainSpec::Annulus { r } => {
                AnnulusDomain::new(*r).map_err(|e| Error::Config(format!("domain.r: {e}")))?;
                self.require_components()?;
            }
            DomainSpec::Circular { circles } => {
                let circles = circles
                    .iter()
                    .map(|c| BoundaryCircle::new(C64::new(c.center[0], c.center[1]), c.radius, Orientation::Outer))
                    .collect::<Result<Vec<_>>>()?;
                AnnulusDomain::from_circles(&circles)?;
                self.require_components()?;
            }
        }
        let s = &self.solver;
        if s.n < 8 || !s.n.is_power_of_two() {
            return Err(Error::Config(format!("solver.n must be a power of two >= 8, got {}", s.n)));
        }
        if s.modes() == 0 || s.modes() > s.n / 2 {
            return Err(Error::Config(format!("solver.m must lie in [1, n/2], got {}", s.modes())));
        }
        if !(s.tolerance > 0.0) {
            return Err(Error::Config(format!("solver.tolerance must be positive, got {}", s.tolerance)));
        }
        let mut seen = HashSet::new();
        for (name, path) in self.outputs.entries() {
            if !seen.insert(path) {
                return Err(Error::Config(format!(
                    "outputs.{name}: path {} is used by another output",
                    path.display()
                )));
            }
        }
        Ok(())
    }

    fn require_components(&self) -> Result<()> {
        if self.outer.is_none() || self.inner.is_none() {
            return Err(Error::Config("annulus domain needs `outer` and `inner` blocks".into()));
        }
        if self.lambda.is_some() || self.phi.is_some() {
            return Err(Error::Config("annulus domain takes `outer`/`inner`, not `lambda`/`phi`".into()));
        }
        Ok(())
    }

    /// Inner radius for annulus domains.
    pub fn annulus_radius(&self) -> Option<f64> {
        match &self.domain {
            DomainSpec::Disk => None,
            DomainSpec::Annulus { r } => Some(*r),
            DomainSpec::Circular { circles } => circles.iter().map(|c| c.radius).reduce(f64::min),
        }
    }

    /// Sample the boundary data on the configured grid.
    pub fn problem(&self) -> Result<Problem> {
        self.validate()?;
        let n = self.solver.n;
        match self.annulus_radius() {
            None => {
                let circle = BoundaryCircle::unit();
                let lambda = sample_closed_form(self.lambda.as_ref().expect("validated"), circle, n, &self.jumps)?;
                let phi = sample_closed_form(self.phi.as_ref().expect("validated"), circle, n, &self.jumps)?;
                Ok(Problem::Disk { lambda, phi })
            }
            Some(r) => {
                let domain = AnnulusDomain::new(r)?;
                let sample = |spec: &ComponentSpec, circle: BoundaryCircle| -> Result<(BoundaryFunction, BoundaryFunction)> {
                    Ok((
                        sample_closed_form(&spec.lambda, circle, n, &spec.jumps)?,
                        sample_closed_form(&spec.phi, circle, n, &spec.jumps)?,
                    ))
                };
                Ok(Problem::Annulus {
                    r,
                    outer: sample(self.outer.as_ref().expect("validated"), domain.outer())?,
                    inner: sample(self.inner.as_ref().expect("validated"), domain.inner())?,
                })
            }
        }
    }
}

/// Resolve an output path against the config directory.
pub fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}
