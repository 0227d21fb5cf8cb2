//! Command-line front end. Exit codes: 0 success, 1 a verification
//! residual exceeded its tolerance, 2 configuration or input error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{CoordinateModel, NumberList, Settings};
use crate::error::{GeometryError, Result};
use crate::export;
use crate::generators::{self, classify, ClassificationReport, ClassifyOptions, GeneratorSpec};
use crate::surface::{DerivativeMode, Grid, Immersion, ParamDomain, SurfaceGeometry};
use crate::verify::{self, Subject, Suite, VerificationReport};
use crate::warped_space::WarpedSpace;

/// Environment variable that fixes the worker thread count.
pub const THREADS_ENV: &str = "WARPED_CAS_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_RESIDUAL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "warped-cas",
    version,
    about = "Constant angle surfaces in warped products I x_f E^2"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a surface and write an OBJ mesh plus per-vertex geometry records.
    Generate(CommonArgs),
    /// Run verification suites and report residuals.
    Verify(CommonArgs),
    /// Decide which family a surface belongs to.
    Classify(CommonArgs),
    /// Print a geometry summary of a generated surface.
    Report(ReportArgs),
}

/// Flags shared by all commands. Each one mirrors a config-file key and
/// overrides it.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML file with any of the keys below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// type_i | type_ii | type_iii | rotational | minimal_power | harmonic_exp
    #[arg(long)]
    pub family: Option<String>,
    /// Registry entry (constant:a, linear:a,b, power:m, exp) or table:PATH.
    #[arg(long = "warp", alias = "warping")]
    pub warping: Option<String>,
    /// Constant angle in degrees.
    #[arg(long = "theta-deg", allow_negative_numbers = true)]
    pub theta_deg: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t0: Option<f64>,
    /// Expression in v, e.g. "0.3*sin(v)".
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long = "alpha-table")]
    pub alpha_table: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma2: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub radius: Option<f64>,
    /// u0,u1,v0,v1
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    /// NUxNV or N.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long = "t-base", allow_negative_numbers = true)]
    pub t_base: Option<f64>,
    #[arg(long = "v-base", allow_negative_numbers = true)]
    pub v_base: Option<f64>,
    /// Suite name or "all".
    #[arg(long)]
    pub suite: Option<String>,
    /// analytic | finite_difference
    #[arg(long = "derivative-mode")]
    pub derivative_mode: Option<String>,
    /// raw | half_space
    #[arg(long)]
    pub model: Option<String>,
    /// OBJ output path.
    #[arg(short = 'o', long = "mesh", alias = "output")]
    pub mesh: Option<PathBuf>,
    /// JSON-lines output path (defaults next to the mesh).
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// JSON report path (defaults to stdout).
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long = "tol-analytic")]
    pub tol_analytic: Option<f64>,
    #[arg(long = "tol-fd")]
    pub tol_fd: Option<f64>,
    #[arg(long = "tol-quadrature")]
    pub tol_quadrature: Option<f64>,
    /// "(t, x, y)" expressions in u and v.
    #[arg(long, allow_hyphen_values = true)]
    pub immersion: Option<String>,
    /// JSON-lines records to classify.
    #[arg(long)]
    pub samples: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Also print the full pointwise geometry at u,v.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
}

fn parse_mode(s: &str) -> Result<DerivativeMode> {
    match s.trim() {
        "analytic" => Ok(DerivativeMode::Analytic),
        "finite_difference" | "fd" => Ok(DerivativeMode::FiniteDifference),
        other => Err(GeometryError::Parse(format!("unknown derivative mode '{other}'"))),
    }
}

impl CommonArgs {
    fn flag_settings(&self) -> Result<Settings> {
        Ok(Settings {
            family: self.family.clone(),
            warping: self.warping.clone(),
            theta_deg: self.theta_deg,
            m: self.m,
            t0: self.t0,
            alpha: self.alpha.clone(),
            alpha_table: self.alpha_table.clone(),
            gamma1: self.gamma1.clone(),
            gamma2: self.gamma2.clone(),
            radius: self.radius,
            domain: self.domain.clone().map(NumberList::Text),
            grid: self.grid.clone().map(NumberList::Text),
            t_base: self.t_base,
            v_base: self.v_base,
            suite: self.suite.clone(),
            derivative_mode: self.derivative_mode.as_deref().map(parse_mode).transpose()?,
            model: self.model.as_deref().map(str::parse::<CoordinateModel>).transpose()?,
            mesh: self.mesh.clone(),
            records: self.records.clone(),
            report: self.report.clone(),
            tol_analytic: self.tol_analytic,
            tol_fd: self.tol_fd,
            tol_quadrature: self.tol_quadrature,
            immersion: self.immersion.clone(),
            samples: self.samples.clone(),
        })
    }

    /// Config file values with command-line flags applied on top.
    pub fn settings(&self) -> Result<Settings> {
        let file = match &self.config {
            Some(p) => Settings::load(p)?,
            None => Settings::default(),
        };
        Ok(file.overlay(self.flag_settings()?))
    }
}

#[derive(Debug)]
enum Failure {
    Config(GeometryError),
    Io(io::Error),
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Failure::Config(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Normal output goes to `out`, diagnostics to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    let result = match &cli.command {
        Command::Generate(a) => cmd_generate(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Classify(a) => cmd_classify(a, out),
        Command::Report(a) => cmd_report(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| GeometryError::InvalidParameter(format!("{THREADS_ENV}={value} is not a thread count")))?;
    // a second call in the same process finds the pool already built
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn subject_from(settings: &Settings) -> Result<(Subject, GeneratorSpec)> {
    let spec = settings.generator_spec()?;
    let subject = Subject::from_spec(&spec)?.with_mode(settings.derivative_mode());
    Ok((subject, spec))
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>, out: &mut dyn Write) -> io::Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    match path {
        Some(p) => fs::write(p, text + "\n"),
        None => writeln!(out, "{text}"),
    }
}

#[derive(Debug, Serialize)]
struct GenerateSummary {
    family: String,
    warping: String,
    theta: Option<f64>,
    grid: Grid,
    domain: ParamDomain,
    derivative_mode: DerivativeMode,
    model: CoordinateModel,
    vertices: usize,
    triangles: usize,
    excluded: usize,
    theta_mean: f64,
    theta_std: f64,
    mesh: Option<PathBuf>,
    records: Option<PathBuf>,
}

fn mean_std(xs: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = xs.collect();
    let n = v.len().max(1) as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn cmd_generate(args: &CommonArgs, out: &mut dyn Write) -> CliResult {
    let settings = args.settings()?;
    let (subject, spec) = subject_from(&settings)?;
    let s = &subject.immersion;
    let model = settings.model(s.space().warping())?;
    let grid = spec.grid;
    let mesh = export::build_mesh(s, grid, model)?;
    let records = export::vertex_records(s, grid, model)?;
    let records_path = settings
        .records
        .clone()
        .or_else(|| settings.mesh.as_ref().map(|m| m.with_extension("jsonl")));
    if let Some(path) = &settings.mesh {
        let header = vec![
            format!("family {}", spec.family),
            format!("warping {}", s.space().warping().name()),
            format!("grid {grid}"),
            format!(
                "model {}",
                if model == CoordinateModel::Raw {
                    "raw (x y t)"
                } else {
                    "half_space (x y z)"
                }
            ),
        ];
        export::write_obj(&mesh, &header, BufWriter::new(File::create(path)?))?;
    }
    if let Some(path) = &records_path {
        let mut w = BufWriter::new(File::create(path)?);
        export::write_jsonl(&records, &mut w)?;
        w.flush()?;
    }
    let (theta_mean, theta_std) = mean_std(records.iter().map(|r| r.theta));
    let summary = GenerateSummary {
        family: spec.family.to_string(),
        warping: s.space().warping().name().to_string(),
        theta: subject.declared_theta(),
        grid,
        domain: *s.domain(),
        derivative_mode: s.mode(),
        model,
        vertices: mesh.vertices.len(),
        triangles: mesh.triangles.len(),
        excluded: mesh.excluded,
        theta_mean,
        theta_std,
        mesh: settings.mesh.clone(),
        records: records_path,
    };
    write_json(&summary, settings.report.as_deref(), out)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct VerifySummary {
    pass: bool,
    reports: Vec<VerificationReport>,
}

fn cmd_verify(args: &CommonArgs, out: &mut dyn Write) -> CliResult {
    let settings = args.settings()?;
    let (subject, spec) = subject_from(&settings)?;
    let suites = Suite::resolve(settings.suite.as_deref().unwrap_or("all"), &subject)?;
    let reports = verify::run_suites(&suites, &subject, spec.grid, &settings.tolerances())?;
    let pass = reports.iter().all(|r| r.pass);
    write_json(&VerifySummary { pass, reports }, settings.report.as_deref(), out)?;
    Ok(if pass { EXIT_OK } else { EXIT_RESIDUAL })
}

/// Immersion to classify: an expression, a sample file, or a generator spec.
fn classify_target(settings: &Settings) -> Result<(Immersion, Grid, ClassifyOptions)> {
    if let Some(src) = &settings.immersion {
        let space = WarpedSpace::new(settings.warping()?);
        let domain = settings.domain()?.unwrap_or(ParamDomain::new(-1.0, 1.0, -1.0, 1.0)?);
        let mut constants = Vec::new();
        if let Some(t0) = settings.t0 {
            constants.push(("t0", t0));
        }
        let s = Immersion::from_expression(space, domain, src, &constants)?;
        return Ok((
            apply_mode(s, settings),
            settings.grid()?,
            classify_options(settings, None),
        ));
    }
    if let Some(path) = &settings.samples {
        let file = File::open(path)
            .map_err(|e| GeometryError::InvalidParameter(format!("cannot open samples {}: {e}", path.display())))?;
        let sampled = export::read_samples(BufReader::new(file))?;
        let space = WarpedSpace::new(settings.warping()?);
        let s = Immersion::from_samples(space, sampled.domain, sampled.grid, &sampled.points)?;
        let opts = ClassifyOptions {
            t_base: settings.t_base,
            ..ClassifyOptions::sampled()
        };
        return Ok((s, sampled.grid, opts));
    }
    let spec = settings.generator_spec()?;
    let s = apply_mode(generators::generate(&spec)?, settings);
    Ok((s, spec.grid, classify_options(settings, Some(spec.t_base()?))))
}

fn classify_options(settings: &Settings, spec_base: Option<f64>) -> ClassifyOptions {
    ClassifyOptions {
        t_base: settings.t_base.or(spec_base),
        ..ClassifyOptions::default()
    }
}

fn apply_mode(s: Immersion, settings: &Settings) -> Immersion {
    match settings.derivative_mode() {
        DerivativeMode::FiniteDifference => s.finite_difference(),
        DerivativeMode::Analytic => s,
    }
}

/// Keeps at most `n` evenly spaced entries.
fn thin<T: Clone>(xs: &[T], n: usize) -> Vec<T> {
    if xs.len() <= n {
        return xs.to_vec();
    }
    (0..n).map(|k| xs[k * (xs.len() - 1) / (n - 1)].clone()).collect()
}

const ALPHA_SAMPLES_SHOWN: usize = 32;

fn cmd_classify(args: &CommonArgs, out: &mut dyn Write) -> CliResult {
    let settings = args.settings()?;
    let (s, grid, opts) = classify_target(&settings)?;
    let mut report: ClassificationReport = classify(&s, grid, &opts)?;
    report.alpha = thin(&report.alpha, ALPHA_SAMPLES_SHOWN);
    write_json(&report, settings.report.as_deref(), out)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, Serialize)]
struct Stats {
    min: f64,
    max: f64,
    mean: f64,
}

impl Stats {
    fn of(xs: &[f64]) -> Option<Self> {
        if xs.is_empty() {
            return None;
        }
        Some(Self {
            min: xs.iter().copied().fold(f64::INFINITY, f64::min),
            max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean: xs.iter().sum::<f64>() / xs.len() as f64,
        })
    }
}

#[derive(Debug, Serialize)]
struct GeometryReport {
    family: String,
    warping: String,
    theta: Option<f64>,
    grid: Grid,
    domain: ParamDomain,
    derivative_mode: DerivativeMode,
    points: usize,
    theta_mean: f64,
    theta_std: f64,
    mean_curvature: Option<Stats>,
    gauss_curvature: Option<Stats>,
    max_principal_direction_residual: f64,
    point: Option<SurfaceGeometry>,
}

fn cmd_report(args: &ReportArgs, out: &mut dyn Write) -> CliResult {
    let settings = args.common.settings()?;
    let (subject, spec) = subject_from(&settings)?;
    let s = &subject.immersion;
    let records = export::vertex_records(s, spec.grid, CoordinateModel::Raw)?;
    let (theta_mean, theta_std) = mean_std(records.iter().map(|r| r.theta));
    let h: Vec<f64> = records.iter().map(|r| r.mean_curvature).collect();
    let k: Vec<f64> = records.iter().filter_map(|r| r.gauss_curvature).collect();
    let point = match &args.point {
        Some(p) => {
            let uv: Vec<f64> = p
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|e| GeometryError::Parse(format!("--point: {e}")))
                })
                .collect::<Result<_>>()?;
            let [u, v] = uv[..] else {
                return Err(GeometryError::Parse("--point needs u,v".into()).into());
            };
            Some(s.geometry(u, v)?)
        }
        None => None,
    };
    let report = GeometryReport {
        family: spec.family.to_string(),
        warping: s.space().warping().name().to_string(),
        theta: subject.declared_theta(),
        grid: spec.grid,
        domain: *s.domain(),
        derivative_mode: s.mode(),
        points: records.len(),
        theta_mean,
        theta_std,
        mean_curvature: Stats::of(&h),
        gauss_curvature: Stats::of(&k),
        max_principal_direction_residual: records
            .iter()
            .map(|r| r.residuals.principal_direction)
            .fold(0.0, f64::max),
        point,
    };
    write_json(&report, settings.report.as_deref(), out)?;
    Ok(EXIT_OK)
}
