//! Command-line front end.
//!
//! Exit codes: `0` when the summary residual is within tolerance, `2` when
//! the solve succeeded but the residual exceeds it, `1` on any error.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::annulus::{monodromy, solve_annulus_with_modes, write_branch_csv, AnnulusSolution, ComponentData};
use crate::boundary::BoundaryFunction;
use crate::config::{resolve, Problem, ProblemConfig, ResidualMetric};
use crate::disk::{homogeneous_family, solve_disk_with_modes, write_interior_csv, DiskSolution};
use crate::verify::{nontangential_limit_check, radial_ladder, BoundaryCondition, CheckParams, ResidualReport};
use crate::{Error, Result, C64, TAU};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TOLERANCE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "rhbvp", version, about = "Riemann-Hilbert boundary value problems on the disk and the annulus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a disk problem, verify it and write the configured outputs.
    SolveDisk(RunArgs),
    /// Solve an annulus problem, verify it and report the monodromy.
    SolveAnnulus(RunArgs),
    /// Solve and write only the residual report and summary.
    Verify(RunArgs),
    /// Verify the members `f + ic·A` of a disk solution family.
    Family(FamilyArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Problem configuration (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Override the configured residual tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Also write `theta,value` CSVs of the boundary traces.
    #[arg(long)]
    pub emit_plot_data: bool,
    /// Seed for the random interior sample points.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Family parameters; overrides the config's `family` list.
    #[arg(long = "c", allow_negative_numbers = true, value_delimiter = ',')]
    pub values: Vec<f64>,
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_TOLERANCE,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

/// Run one command; `Ok(true)` when the residual is within tolerance.
pub fn execute(command: &Command) -> Result<bool> {
    match command {
        Command::SolveDisk(args) => {
            let ctx = Context::load(args)?;
            let (lambda, phi) = ctx.disk_problem()?;
            let sol = solve_disk_with_modes(&lambda, &phi, ctx.config.solver.modes())?;
            let report = ctx.check_disk(&sol)?;
            ctx.write_disk_outputs(&sol, &report)?;
            ctx.finish(&report)
        }
        Command::SolveAnnulus(args) => {
            let ctx = Context::load(args)?;
            let sol = ctx.annulus_solution()?;
            let report = ctx.check_annulus(&sol)?;
            ctx.write_annulus_outputs(&sol, &report)?;
            ctx.finish(&report)
        }
        Command::Verify(args) => {
            let ctx = Context::load(args)?;
            let report = match ctx.config.problem()? {
                Problem::Disk { lambda, phi } => {
                    let sol = solve_disk_with_modes(&lambda, &phi, ctx.config.solver.modes())?;
                    ctx.check_disk(&sol)?
                }
                Problem::Annulus { .. } => ctx.check_annulus(&ctx.annulus_solution()?)?,
            };
            ctx.write_report(&report)?;
            ctx.finish(&report)
        }
        Command::Family(args) => {
            let ctx = Context::load(&args.run)?;
            let values = if args.values.is_empty() { ctx.config.family.clone() } else { args.values.clone() };
            if values.is_empty() {
                return Err(Error::Config("family needs parameters: set `family` or pass --c".into()));
            }
            let (lambda, phi) = ctx.disk_problem()?;
            let base = solve_disk_with_modes(&lambda, &phi, ctx.config.solver.modes())?;
            let mut rows = Vec::new();
            let mut pass = true;
            for &c in &values {
                let member = homogeneous_family(&base, c)?;
                let report = ctx.check_disk(&member)?;
                let value = ctx.metric(&report);
                let ok = value <= ctx.tolerance;
                println!("c = {c}: residual = {value:e} ({})", if ok { "pass" } else { "exceeds tolerance" });
                pass &= ok;
                rows.push((c, member.evaluate_f(C64::new(0.0, 0.0))?, report));
            }
            if let Some(path) = ctx.output(&ctx.config.outputs.family) {
                let mut out = create(&path)?;
                writeln!(out, "c,re_f0,im_f0,sup_residual,sup_limit_residual")?;
                for (c, f0, report) in &rows {
                    writeln!(out, "{c},{},{},{},{}", f0.re, f0.im, report.sup_residual(), report.sup_limit_residual())?;
                }
                out.flush()?;
            }
            if let Some((_, _, report)) = rows.last() {
                ctx.write_report(report)?;
            }
            Ok(pass)
        }
    }
}

struct Context<'a> {
    args: &'a RunArgs,
    config: ProblemConfig,
    base_dir: PathBuf,
    tolerance: f64,
}

impl<'a> Context<'a> {
    fn load(args: &'a RunArgs) -> Result<Self> {
        let config = ProblemConfig::load(&args.config)?;
        let base_dir = args.config.parent().map(Path::to_path_buf).unwrap_or_default();
        let tolerance = args.tolerance.unwrap_or(config.solver.tolerance);
        if !(tolerance > 0.0) {
            return Err(Error::Config(format!("tolerance must be positive, got {tolerance}")));
        }
        Ok(Self { args, config, base_dir, tolerance })
    }

    fn output(&self, path: &Option<PathBuf>) -> Option<PathBuf> {
        path.as_ref().map(|p| resolve(&self.base_dir, p))
    }

    fn disk_problem(&self) -> Result<(BoundaryFunction, BoundaryFunction)> {
        match self.config.problem()? {
            Problem::Disk { lambda, phi } => Ok((lambda, phi)),
            Problem::Annulus { .. } => Err(Error::Config("this command needs a disk domain".into())),
        }
    }

    fn annulus_solution(&self) -> Result<AnnulusSolution> {
        match self.config.problem()? {
            Problem::Annulus { r, outer, inner } => solve_annulus_with_modes(
                r,
                ComponentData { lambda: outer.0, phi: outer.1 },
                ComponentData { lambda: inner.0, phi: inner.1 },
                self.config.solver.modes(),
            ),
            Problem::Disk { .. } => Err(Error::Config("this command needs an annulus domain".into())),
        }
    }

    fn params(&self) -> Result<CheckParams> {
        let s = &self.config.solver;
        Ok(CheckParams {
            aperture: s.aperture,
            ladder: radial_ladder(s.ladder.base, s.ladder.count)?,
            probe_count: s.probes,
            delta_excl: s.delta_excl,
        })
    }

    fn check_disk(&self, sol: &DiskSolution) -> Result<ResidualReport> {
        let f = |z: C64| sol.evaluate_f(z);
        let bc = BoundaryCondition::new(sol.lambda(), sol.phi()).with_exceptional(sol.jumps());
        nontangential_limit_check(&f, &[bc], &self.params()?)
    }

    fn check_annulus(&self, sol: &AnnulusSolution) -> Result<ResidualReport> {
        let f = |z: C64| sol.evaluate(z, 0);
        let (outer_exc, inner_exc) = sol.exceptional_angles();
        let components = [
            BoundaryCondition::new(&sol.outer().lambda, &sol.outer().phi).with_exceptional(&outer_exc),
            BoundaryCondition::new(&sol.inner().lambda, &sol.inner().phi).with_exceptional(&inner_exc),
        ];
        nontangential_limit_check(&f, &components, &self.params()?)
    }

    fn metric(&self, report: &ResidualReport) -> f64 {
        match self.config.solver.residual_metric {
            ResidualMetric::Raw => report.sup_residual(),
            ResidualMetric::Limit => report.sup_limit_residual(),
        }
    }

    fn finish(&self, report: &ResidualReport) -> Result<bool> {
        let value = self.metric(report);
        let pass = value <= self.tolerance;
        println!(
            "residual = {value:e}, tolerance = {:e}, probes = {}, excluded = {}: {}",
            self.tolerance,
            report.rows.len(),
            report.excluded_probes.len(),
            if pass { "pass" } else { "exceeds tolerance" }
        );
        Ok(pass)
    }

    fn write_report(&self, report: &ResidualReport) -> Result<()> {
        if let Some(path) = self.output(&self.config.outputs.report) {
            let mut out = create(&path)?;
            report.write_csv(&mut out)?;
            out.flush()?;
        }
        if let Some(path) = self.output(&self.config.outputs.summary) {
            let mut out = create(&path)?;
            writeln!(out, "{}", report.summary_json()?)?;
            out.flush()?;
        }
        Ok(())
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.args.seed)
    }

    fn write_disk_outputs(&self, sol: &DiskSolution, report: &ResidualReport) -> Result<()> {
        self.write_report(report)?;
        let outputs = &self.config.outputs;
        if let Some(path) = self.output(&outputs.traces) {
            let t = *report.ladder.last().expect("ladder is nonempty");
            let mut out = create(&path)?;
            sol.write_traces_csv(1.0 - t, &mut out)?;
            out.flush()?;
        }
        if let Some(path) = self.output(&outputs.interior) {
            let mut rng = self.rng();
            let points: Vec<C64> = (0..self.config.solver.interior_points)
                .map(|_| C64::from_polar(0.9 * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>()))
                .collect();
            let mut out = create(&path)?;
            write_interior_csv(sol, &points, &mut out)?;
            out.flush()?;
        }
        if let Some(path) = self.output(&outputs.coefficients) {
            let mut out = create(&path)?;
            sol.b().write_coefficients_csv(&mut out)?;
            out.flush()?;
        }
        if self.args.emit_plot_data {
            let dir = self.plot_dir();
            let n = sol.lambda().len();
            let theta: Vec<f64> = (0..n).map(|j| sol.lambda().theta(j)).collect();
            write_plot(&dir.join("alpha.csv"), &theta, &sol.alpha().values())?;
            write_plot(&dir.join("beta.csv"), &theta, &sol.beta().real_values())?;
            write_plot(&dir.join("phi.csv"), &theta, &sol.phi().real_values())?;
            write_plot(&dir.join("weight.csv"), &theta, &sol.weight().real_values())?;
        }
        Ok(())
    }

    fn write_annulus_outputs(&self, sol: &AnnulusSolution, report: &ResidualReport) -> Result<()> {
        self.write_report(report)?;
        let outputs = &self.config.outputs;
        let r = sol.cover().inner_radius();
        if let Some(path) = self.output(&outputs.branches) {
            let mut rng = self.rng();
            let points: Vec<C64> = (0..self.config.solver.interior_points)
                .map(|_| C64::from_polar(r + (1.0 - r) * (0.05 + 0.9 * rng.gen::<f64>()), TAU * rng.gen::<f64>()))
                .collect();
            let mut out = create(&path)?;
            write_branch_csv(sol, &points, &[-1, 0, 1], &mut out)?;
            out.flush()?;
        }
        let m = monodromy(sol)?;
        println!("monodromy = {:e} {:+e}i", m.re, m.im);
        let window = sol.resolved_half_width();
        let varying = [sol.outer(), sol.inner()]
            .iter()
            .flat_map(|c| [&c.lambda, &c.phi])
            .any(|f| f.samples().iter().any(|v| *v != f.samples()[0]));
        if varying && window < PI {
            println!("note: the cover grid resolves |arg z| < {window:.3} on each sheet; refine n for non-constant data");
        }
        if let Some(path) = self.output(&outputs.monodromy) {
            let mut out = create(&path)?;
            writeln!(out, "{}", serde_json::json!({ "re": m.re, "im": m.im }))?;
            out.flush()?;
        }
        if self.args.emit_plot_data {
            let dir = self.plot_dir();
            let disk = sol.disk_solution();
            let n = disk.lambda().len();
            let eta: Vec<f64> = (0..n).map(|j| disk.lambda().theta(j)).collect();
            write_plot(&dir.join("pullback_alpha.csv"), &eta, &disk.alpha().values())?;
            write_plot(&dir.join("pullback_phi.csv"), &eta, &disk.phi().real_values())?;
        }
        Ok(())
    }

    fn plot_dir(&self) -> PathBuf {
        self.output(&self.config.outputs.plot_dir).unwrap_or_else(|| self.base_dir.clone())
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn write_plot(path: &Path, x: &[f64], y: &[f64]) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "theta,value")?;
    for (a, b) in x.iter().zip(y) {
        writeln!(out, "{a},{b}")?;
    }
    out.flush()?;
    Ok(())
}
