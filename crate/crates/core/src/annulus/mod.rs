//! Riemann-Hilbert problem on the annulus `r < |z| < 1`.
//!
//! The boundary data are pulled back to the unit circle along the covering
//! map, the disk problem is solved there, and the annulus solution is the
//! composition with the multivalued inverse. Sheets are indexed relative to
//! the basepoint `(1 + r)/2`, whose sheet-0 preimage is the base branch.

mod cover;

pub use cover::{circle_path, covering_map, CoveringMap, MAX_HALVINGS, PATH_MARGIN};

use std::f64::consts::PI;
use std::io::Write;

use crate::boundary::{normalize_jumps, BoundaryCircle, BoundaryFunction, Orientation};
use crate::disk::{solve_disk_with_modes, DiskSolution};
use crate::schwarz::DiskPoint;
use crate::{wrap_angle, Error, Result, C64, TAU};

/// Component jumps pulled back closer than this many grid cells to the
/// accumulation points `η = 0, π` are dropped.
const ACCUMULATION_CELLS: f64 = 4.0;

/// Vertices used by [`monodromy`] for the core loop.
const CORE_LOOP_VERTICES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnulusDomain {
    r: f64,
}

impl AnnulusDomain {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Domain(format!("inner radius must lie in (0, 1), got {r}")));
        }
        Ok(Self { r })
    }

    /// Accept a list of boundary circles; anything but the two circles of a
    /// centred annulus is rejected.
    pub fn from_circles(circles: &[BoundaryCircle]) -> Result<Self> {
        if circles.len() >= 3 {
            return Err(Error::Config(format!(
                "annulus only: {} boundary circles given, general circular domains are not supported",
                circles.len()
            )));
        }
        let [outer, inner] = circles else {
            return Err(Error::Config("an annulus needs exactly two boundary circles".into()));
        };
        let centred = |c: &BoundaryCircle| c.center().norm() == 0.0;
        if !(centred(outer) && centred(inner) && outer.radius() == 1.0) {
            return Err(Error::Config("annulus circles must be |z| = 1 and |z| = r".into()));
        }
        let domain = Self::new(inner.radius())?;
        // Concentric circles of different radii have disjoint closures.
        Ok(domain)
    }

    pub fn inner_radius(&self) -> f64 {
        self.r
    }

    pub fn outer(&self) -> BoundaryCircle {
        BoundaryCircle::unit()
    }

    pub fn inner(&self) -> BoundaryCircle {
        BoundaryCircle::new(C64::new(0.0, 0.0), self.r, Orientation::Inner).expect("r > 0")
    }

    pub fn contains(&self, z: C64) -> bool {
        let m = z.norm();
        m > self.r && m < 1.0
    }
}

/// Boundary data on one circle.
#[derive(Clone, Debug)]
pub struct ComponentData {
    pub lambda: BoundaryFunction,
    pub phi: BoundaryFunction,
}

#[derive(Clone, Debug)]
pub struct AnnulusSolution {
    cover: CoveringMap,
    disk: DiskSolution,
    outer: ComponentData,
    inner: ComponentData,
    basepoint: C64,
    base_strip: C64,
}

impl AnnulusSolution {
    pub fn cover(&self) -> &CoveringMap {
        &self.cover
    }

    /// The solution `F` of the pulled-back problem on the disk.
    pub fn disk_solution(&self) -> &DiskSolution {
        &self.disk
    }

    pub fn outer(&self) -> &ComponentData {
        &self.outer
    }

    pub fn inner(&self) -> &ComponentData {
        &self.inner
    }

    pub fn basepoint(&self) -> C64 {
        self.basepoint
    }

    /// Preimage of the basepoint on sheet 0.
    pub fn base_branch(&self) -> C64 {
        CoveringMap::disk_point(self.base_strip).w
    }

    /// `f(z)` on the given sheet.
    pub fn evaluate(&self, z: C64, sheet: i64) -> Result<C64> {
        let p = self.cover.inverse(z, sheet)?;
        self.disk.evaluate_f_at(&p)
    }

    /// `F` at a point given by its strip coordinate.
    pub fn evaluate_strip(&self, s: C64) -> Result<C64> {
        self.disk.evaluate_f_at(&CoveringMap::disk_point(s))
    }

    /// `F(w)` at a disk point.
    pub fn evaluate_cover(&self, w: C64) -> Result<C64> {
        self.disk.evaluate_f(w)
    }

    /// Half-width of the angular window `|arg z| < w` around which sheet 0
    /// is resolved. Boundary points at angle `θ` pull back to within
    /// `~e^{−|θ|/a}` of the accumulation points `η = 0, π`, so the uniform
    /// grid on the cover only sees data with `|θ| ≤ a·ln cot(c/2)`, `c` a few
    /// cells. Outside the window `f` is accurate only for data that are
    /// constant on each circle. Equals `π` when the whole sheet is resolved.
    pub fn resolved_half_width(&self) -> f64 {
        let clearance = ACCUMULATION_CELLS * TAU / self.disk.phi().len() as f64;
        (self.cover.exponent() * (0.5 * clearance).tan().recip().ln()).min(PI)
    }

    /// Jumps of the pulled-back problem, mapped back to angles on each
    /// circle: `(outer, inner)`. The accumulation points `η = 0, π` have no
    /// image and are left out.
    pub fn exceptional_angles(&self) -> (Vec<f64>, Vec<f64>) {
        let mut outer = Vec::new();
        let mut inner = Vec::new();
        for &eta in self.disk.jumps() {
            if eta == 0.0 || eta == PI {
                continue;
            }
            let (is_outer, theta) = self.cover.boundary_angle(eta);
            if is_outer {
                outer.push(wrap_angle(theta));
            } else {
                inner.push(wrap_angle(theta));
            }
        }
        (normalize_jumps(outer), normalize_jumps(inner))
    }
}

/// Solve with the default cutoff `M = N/2`.
pub fn solve_annulus(r: f64, outer: ComponentData, inner: ComponentData) -> Result<AnnulusSolution> {
    let modes = outer.lambda.len() / 2;
    solve_annulus_with_modes(r, outer, inner, modes)
}

pub fn solve_annulus_with_modes(
    r: f64,
    outer: ComponentData,
    inner: ComponentData,
    modes: usize,
) -> Result<AnnulusSolution> {
    let domain = AnnulusDomain::new(r)?;
    let cover = covering_map(r)?;
    let n = outer.lambda.len();
    for (name, f) in [
        ("outer phi", &outer.phi),
        ("inner lambda", &inner.lambda),
        ("inner phi", &inner.phi),
    ] {
        if f.len() != n {
            return Err(Error::Validation(format!(
                "grid mismatch: outer lambda has {n} samples, {name} has {}",
                f.len()
            )));
        }
    }
    check_circle("outer", &outer, &domain.outer())?;
    check_circle("inner", &inner, &domain.inner())?;
    outer.phi.require_real("outer phi")?;
    inner.phi.require_real("inner phi")?;

    let jumps = pulled_back_jumps(&cover, &outer, &inner, n);
    let h = TAU / n as f64;
    let backgrounds = [Background::of(&outer), Background::of(&inner)];
    let pull = |lambda: bool| -> Vec<C64> {
        (0..n)
            .map(|j| {
                let eta = j as f64 * h;
                // At the accumulation points every neighbourhood holds
                // infinitely many periods of the data: take their average,
                // from the side that starts the next cell.
                let at_accumulation = j == 0 || 2 * j == n;
                let (is_outer, theta) = cover.boundary_angle(if at_accumulation { eta + h } else { eta });
                let data = if is_outer { &outer } else { &inner };
                let bg = &backgrounds[usize::from(!is_outer)];
                match (lambda, at_accumulation, bg.lambda) {
                    (true, true, Some(mean)) => mean,
                    (true, _, _) => data.lambda.value_at(wrap_angle(theta)),
                    (false, true, _) => C64::new(bg.phi, 0.0),
                    (false, false, _) => data.phi.value_at(wrap_angle(theta)),
                }
            })
            .collect()
    };
    let unit = BoundaryCircle::unit();
    let big_lambda = BoundaryFunction::from_samples(unit, pull(true), jumps.clone())?;
    let big_phi: Vec<f64> = pull(false).iter().map(|v| v.re).collect();
    let big_phi = BoundaryFunction::from_real(unit, big_phi, jumps)?;
    let disk = solve_disk_with_modes(&big_lambda, &big_phi, modes)?;

    let basepoint = C64::new(0.5 * (1.0 + r), 0.0);
    let base_strip = cover.inverse_strip(basepoint, 0)?;
    Ok(AnnulusSolution { cover, disk, outer, inner, basepoint, base_strip })
}

/// Averages of one component's data, used where the pullback is unresolved.
struct Background {
    phi: f64,
    /// `e^{i·mean arg λ}`, or `None` when `λ` winds around the origin and
    /// has no meaningful average argument.
    lambda: Option<C64>,
}

impl Background {
    fn of(data: &ComponentData) -> Self {
        let phi = data.phi.real_values();
        let phi = phi.iter().sum::<f64>() / phi.len() as f64;
        let samples = data.lambda.samples();
        let mut arg = samples[0].arg();
        let mut total = arg;
        for pair in samples.windows(2) {
            arg += (pair[1] / pair[0]).arg();
            total += arg;
        }
        let winding = arg + (samples[0] / samples[samples.len() - 1]).arg() - samples[0].arg();
        let lambda = (winding.abs() < PI).then(|| C64::from_polar(1.0, total / samples.len() as f64));
        Self { phi, lambda }
    }
}

fn check_circle(name: &str, data: &ComponentData, expect: &BoundaryCircle) -> Result<()> {
    for f in [&data.lambda, &data.phi] {
        let c = f.circle();
        if c.center() != expect.center() || (c.radius() - expect.radius()).abs() > 1e-14 {
            return Err(Error::Validation(format!(
                "{name} data lives on |z - {}| = {}, expected |z| = {}",
                c.center(),
                c.radius(),
                expect.radius()
            )));
        }
    }
    Ok(())
}

/// `η = 0, π` plus the preimages of every component jump that stay clear of
/// them.
fn pulled_back_jumps(cover: &CoveringMap, outer: &ComponentData, inner: &ComponentData, n: usize) -> Vec<f64> {
    let h = TAU / n as f64;
    let clearance = ACCUMULATION_CELLS * h;
    let mut jumps = vec![0.0, PI];
    let a = cover.exponent();
    for (is_outer, data) in [(true, outer), (false, inner)] {
        let mut own = data.lambda.jumps().to_vec();
        own.extend_from_slice(data.phi.jumps());
        for theta in normalize_jumps(own) {
            // Preimages sit at x = e^{(θ + 2πk)/a}; beyond x ∈ (h, 1/h) they
            // are within a cell or two of the accumulation points.
            let k_lo = ((a * (h * 0.5).ln() - theta) / TAU).floor() as i64;
            let k_hi = ((a * (2.0 / h).ln() - theta) / TAU).ceil() as i64;
            for k in k_lo..=k_hi {
                let eta = cover.boundary_preimage(is_outer, theta + TAU * k as f64);
                if (eta - PI).abs() > clearance && eta > clearance && TAU - eta > clearance {
                    jumps.push(eta);
                }
            }
        }
    }
    normalize_jumps(jumps)
}

/// Increment of `f` after continuing once counterclockwise around the core
/// circle `|z| = (1 + r)/2` from the base branch.
pub fn monodromy(sol: &AnnulusSolution) -> Result<C64> {
    let path = circle_path(sol.basepoint.re, CORE_LOOP_VERTICES);
    let lifted = sol.cover.lift_path_strip(&path, sol.base_strip)?;
    let end = *lifted.last().expect("path is nonempty");
    Ok(sol.evaluate_strip(end)? - sol.evaluate_strip(sol.base_strip)?)
}

/// Write `re_z,im_z,sheet_index,re_f,im_f` rows for every point and sheet.
pub fn write_branch_csv<W: Write>(sol: &AnnulusSolution, points: &[C64], sheets: &[i64], mut out: W) -> Result<()> {
    writeln!(out, "re_z,im_z,sheet_index,re_f,im_f")?;
    for &z in points {
        for &sheet in sheets {
            let f = sol.evaluate(z, sheet)?;
            writeln!(out, "{},{},{sheet},{},{}", z.re, z.im, f.re, f.im)?;
        }
    }
    Ok(())
}

/// Lift of `z` on `sheet` as a disk point.
pub fn lift_point(sol: &AnnulusSolution, z: C64, sheet: i64) -> Result<DiskPoint> {
    sol.cover.inverse(z, sheet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{sample_closed_form, BoundaryExpr};

    fn component(circle: BoundaryCircle, lambda: BoundaryExpr, phi: BoundaryExpr, n: usize) -> ComponentData {
        ComponentData {
            lambda: sample_closed_form(&lambda, circle, n, &[]).unwrap(),
            phi: sample_closed_form(&phi, circle, n, &[]).unwrap(),
        }
    }

    fn constant_problem(r: f64, outer_phi: f64, inner_phi: f64, n: usize) -> AnnulusSolution {
        let d = AnnulusDomain::new(r).unwrap();
        let one = BoundaryExpr::Const { re: 1.0, im: 0.0 };
        let outer = component(d.outer(), one.clone(), BoundaryExpr::Const { re: outer_phi, im: 0.0 }, n);
        let inner = component(d.inner(), one, BoundaryExpr::Const { re: inner_phi, im: 0.0 }, n);
        solve_annulus(r, outer, inner).unwrap()
    }

    #[test]
    fn domain_validation() {
        assert!(AnnulusDomain::new(1.5).is_err());
        let c = BoundaryCircle::unit();
        match AnnulusDomain::from_circles(&[c, c, c]) {
            Err(Error::Config(msg)) => assert!(msg.contains("annulus only")),
            other => panic!("unexpected {other:?}"),
        }
        let d = AnnulusDomain::new(0.4).unwrap();
        assert_eq!(AnnulusDomain::from_circles(&[d.outer(), d.inner()]).unwrap(), d);
    }

    #[test]
    fn zero_data_gives_zero_on_every_sheet() {
        let sol = constant_problem(0.5, 0.0, 0.0, 256);
        for sheet in -1..=1 {
            assert_eq!(sol.evaluate(C64::new(0.0, 0.7), sheet).unwrap(), C64::new(0.0, 0.0));
        }
        assert_eq!(monodromy(&sol).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn unit_data_gives_one() {
        let sol = constant_problem(0.5, 1.0, 1.0, 256);
        for sheet in -1..=1 {
            assert!((sol.evaluate(C64::new(-0.6, 0.2), sheet).unwrap() - 1.0).norm() < 1e-13);
        }
        assert!(monodromy(&sol).unwrap().norm() < 1e-12);
    }

    #[test]
    fn harmonic_measure_and_its_period() {
        let r: f64 = 0.5;
        let sol = constant_problem(r, 1.0, 0.0, 512);
        let z = C64::new(0.75, 0.0);
        let expect = (0.75 / r).ln() / (1.0 / r).ln();
        assert!((sol.evaluate(z, 0).unwrap().re - expect).abs() < 1e-10);
        let period = TAU / (1.0 / r).ln();
        let m = monodromy(&sol).unwrap();
        assert!((m - C64::new(0.0, period)).norm() < 1e-8, "{m}");
        let jump = sol.evaluate(z, 1).unwrap() - sol.evaluate(z, 0).unwrap();
        assert!((jump - m).norm() < 1e-8);
    }

    #[test]
    fn base_branch_maps_to_basepoint() {
        let sol = constant_problem(0.3, 0.0, 0.0, 64);
        assert!((sol.cover().map(sol.base_branch()) - sol.basepoint()).norm() < 1e-12);
    }

    #[test]
    fn grid_mismatch_and_wrong_circle() {
        let d = AnnulusDomain::new(0.5).unwrap();
        let one = BoundaryExpr::Const { re: 1.0, im: 0.0 };
        let outer = component(d.outer(), one.clone(), one.clone(), 64);
        let inner = component(d.inner(), one.clone(), one.clone(), 32);
        assert!(matches!(solve_annulus(0.5, outer.clone(), inner), Err(Error::Validation(_))));
        let wrong = component(AnnulusDomain::new(0.6).unwrap().inner(), one.clone(), one, 64);
        assert!(matches!(solve_annulus(0.5, outer, wrong), Err(Error::Validation(_))));
    }

    #[test]
    fn component_jumps_pull_back_to_preimages() {
        let d = AnnulusDomain::new(0.5).unwrap();
        let n = 1024;
        let one = BoundaryExpr::Const { re: 1.0, im: 0.0 };
        let outer = component(d.outer(), one.clone(), BoundaryExpr::Step { a: 0.0, b: 1.0, at: 2.0 }, n);
        let inner = component(d.inner(), one.clone(), BoundaryExpr::Const { re: 0.5, im: 0.0 }, n);
        let cover = covering_map(0.5).unwrap();
        let jumps = pulled_back_jumps(&cover, &outer, &inner, n);
        assert!(jumps.contains(&0.0) && jumps.contains(&PI));
        for &eta in &jumps[..] {
            if eta == 0.0 || eta == PI {
                continue;
            }
            let (is_outer, theta) = cover.boundary_angle(eta);
            assert!(is_outer);
            let t = wrap_angle(theta);
            assert!(t.abs() < 1e-9 || (t - 2.0).abs() < 1e-9 || (TAU - t).abs() < 1e-9, "{t}");
        }
        let sol = solve_annulus(0.5, outer, inner).unwrap();
        let (o, i) = sol.exceptional_angles();
        assert!(i.is_empty());
        assert!(o.iter().all(|t| t.abs() < 1e-9 || (t - 2.0).abs() < 1e-9 || (TAU - t).abs() < 1e-9));
    }

    #[test]
    fn branch_csv_header() {
        let sol = constant_problem(0.5, 1.0, 0.0, 64);
        let mut buf = Vec::new();
        write_branch_csv(&sol, &[C64::new(0.75, 0.0)], &[0, 1], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("re_z,im_z,sheet_index,re_f,im_f\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
