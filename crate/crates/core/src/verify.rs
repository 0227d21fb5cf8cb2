//! Named verification suites: each runs a family of residual checks over a
//! sample grid and reports the worst value against a tolerance.

use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::generators::{self, classify, ClassifyOptions, Family, GeneratorSpec, Verdict};
use crate::surface::{mat2, DerivativeMode, Grid, Immersion, Vec2};
use crate::warped_space::{AmbientVector, WarpFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    ConstantAngle,
    PrincipalDirection,
    FrameConnection,
    GaussCodazzi,
    Laplacian,
    Oracles,
    Umbilical,
    FlatCone,
    Minimal,
    Harmonic,
    ClassificationRoundtrip,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::ConstantAngle,
        Suite::PrincipalDirection,
        Suite::FrameConnection,
        Suite::GaussCodazzi,
        Suite::Laplacian,
        Suite::Oracles,
        Suite::Umbilical,
        Suite::FlatCone,
        Suite::Minimal,
        Suite::Harmonic,
        Suite::ClassificationRoundtrip,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::ConstantAngle => "constant_angle",
            Suite::PrincipalDirection => "principal_direction",
            Suite::FrameConnection => "frame_connection",
            Suite::GaussCodazzi => "gauss_codazzi",
            Suite::Laplacian => "laplacian",
            Suite::Oracles => "oracles",
            Suite::Umbilical => "umbilical",
            Suite::FlatCone => "flat_cone",
            Suite::Minimal => "minimal",
            Suite::Harmonic => "harmonic",
            Suite::ClassificationRoundtrip => "classification_roundtrip",
        }
    }

    /// Expands `all` into the suites that make sense for `subject`;
    /// otherwise parses a single suite name.
    pub fn resolve(name: &str, subject: &Subject) -> Result<Vec<Suite>> {
        if name.trim() == "all" {
            Ok(applicable_suites(subject))
        } else {
            Ok(vec![name.parse()?])
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s.trim())
            .ok_or_else(|| GeometryError::Parse(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Checks that only use closed-form derivatives.
    pub analytic: f64,
    /// Checks that take finite differences of computed quantities.
    pub finite_difference: f64,
    /// Checks that round-trip through numerical integration.
    pub quadrature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            analytic: 1e-8,
            finite_difference: 1e-5,
            quadrature: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Analytic,
    Fd,
    Quadrature,
}

/// The surface under test, with the spec that produced it when known.
#[derive(Debug, Clone)]
pub struct Subject {
    pub immersion: Immersion,
    pub spec: Option<GeneratorSpec>,
}

impl Subject {
    pub fn from_spec(spec: &GeneratorSpec) -> Result<Self> {
        Ok(Self {
            immersion: generators::generate(spec)?,
            spec: Some(spec.clone()),
        })
    }

    pub fn from_immersion(immersion: Immersion) -> Self {
        Self { immersion, spec: None }
    }

    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        if mode == DerivativeMode::FiniteDifference {
            self.immersion = self.immersion.finite_difference();
        }
        self
    }

    pub fn family(&self) -> Option<Family> {
        self.spec.as_ref().map(|s| s.family)
    }

    /// Angle the generator was asked for, in `[0, pi/2]`.
    pub fn declared_theta(&self) -> Option<f64> {
        let spec = self.spec.as_ref()?;
        Some(match spec.family {
            Family::TypeIII => 0.0,
            Family::MinimalPower => generators::minimal_theta(spec.m?).ok()?,
            _ => spec.theta,
        })
    }

    fn branch_sign(&self) -> f64 {
        if self.family() == Some(Family::HarmonicExp) {
            -1.0
        } else {
            1.0
        }
    }

    fn has_type_i_coordinates(&self) -> bool {
        match &self.spec {
            Some(spec) => match spec.family {
                Family::TypeI => spec.cylinder.is_none() || spec.theta < std::f64::consts::FRAC_PI_2,
                Family::Rotational | Family::MinimalPower | Family::HarmonicExp => true,
                _ => false,
            },
            None => false,
        }
    }
}

/// Suites run by `all`.
pub fn applicable_suites(subject: &Subject) -> Vec<Suite> {
    let mut out = vec![Suite::ConstantAngle, Suite::PrincipalDirection];
    let family = subject.family();
    if family != Some(Family::TypeIII) {
        out.push(Suite::FrameConnection);
    }
    out.extend([Suite::GaussCodazzi, Suite::Laplacian, Suite::Oracles]);
    match family {
        Some(Family::TypeII) => out.extend([Suite::Umbilical, Suite::FlatCone]),
        Some(Family::MinimalPower) => out.push(Suite::Minimal),
        Some(Family::HarmonicExp) => out.push(Suite::Harmonic),
        _ => {}
    }
    if subject.spec.is_some() {
        out.push(Suite::ClassificationRoundtrip);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// The identity being tested.
    pub statement: String,
    pub grid: String,
    pub evaluated: usize,
    pub skipped: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Grid mean of the main quantity behind the check, where meaningful.
    pub observed: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub derivative_mode: DerivativeMode,
    pub quadrature_abs_tol: f64,
    pub quadrature_rel_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub subject: String,
    pub warping: String,
    pub theta: Option<f64>,
    pub grid: Grid,
    pub environment: Environment,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

/// Worst residuals over a sweep. A point contributes to every column or to
/// none; points where the geometry is undefined are counted as skipped.
#[derive(Debug, Clone)]
struct Sweep<const N: usize> {
    max: [f64; N],
    sum: [f64; N],
    evaluated: usize,
    skipped: usize,
}

fn is_skippable(e: &GeometryError) -> bool {
    matches!(
        e,
        GeometryError::DegenerateImmersion { .. }
            | GeometryError::AngleDegenerate
            | GeometryError::BoundaryMargin { .. }
    )
}

fn sweep<const N: usize, F>(s: &Immersion, grid: Grid, f: F) -> Result<Sweep<N>>
where
    F: Fn(f64, f64) -> Result<[f64; N]> + Sync,
{
    let values = grid.map(s.domain(), f);
    let mut out = Sweep {
        max: [0.0; N],
        sum: [0.0; N],
        evaluated: 0,
        skipped: 0,
    };
    for r in values {
        match r {
            Ok(vals) => {
                out.evaluated += 1;
                for k in 0..N {
                    // NaN must fail, so it is promoted to infinity
                    let a = if vals[k].is_nan() { f64::INFINITY } else { vals[k] };
                    out.max[k] = out.max[k].max(a.abs());
                    out.sum[k] += vals[k];
                }
            }
            Err(e) if is_skippable(&e) => out.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

struct Builder<'a> {
    subject: &'a Subject,
    grid: Grid,
    tol: Tolerances,
    checks: Vec<CheckRecord>,
}

impl Builder<'_> {
    fn tolerance(&self, kind: Kind) -> f64 {
        match kind {
            Kind::Analytic if self.subject.immersion.mode() == DerivativeMode::Analytic => self.tol.analytic,
            Kind::Analytic | Kind::Fd => self.tol.finite_difference,
            Kind::Quadrature => self.tol.quadrature,
        }
    }

    fn push<const N: usize>(
        &mut self,
        sw: &Sweep<N>,
        k: usize,
        name: &str,
        statement: &str,
        kind: Kind,
        observed: Option<usize>,
    ) {
        self.push_value(
            name,
            statement,
            kind,
            sw.max[k],
            sw.evaluated,
            sw.skipped,
            observed.map(|o| {
                if sw.evaluated > 0 {
                    sw.sum[o] / sw.evaluated as f64
                } else {
                    f64::NAN
                }
            }),
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn push_value(
        &mut self,
        name: &str,
        statement: &str,
        kind: Kind,
        residual: f64,
        evaluated: usize,
        skipped: usize,
        observed: Option<f64>,
    ) {
        let tolerance = self.tolerance(kind);
        self.checks.push(CheckRecord {
            name: name.into(),
            statement: statement.into(),
            grid: self.grid.to_string(),
            evaluated,
            skipped,
            max_residual: residual,
            tolerance,
            pass: residual <= tolerance,
            observed,
        });
    }
}

/// Orthonormal basis of the tangent plane in coordinates, by Gram-Schmidt
/// on `(d_u, d_v)`.
fn orthonormal(g: &mat2::Mat2) -> (Vec2, Vec2) {
    let e = g[0][0];
    let root_e = e.sqrt();
    let root_det = mat2::det(g).sqrt();
    ([1.0 / root_e, 0.0], [-g[0][1] / (root_e * root_det), root_e / root_det])
}

/// Runs one suite. Residual failures are reported, never returned as errors.
pub fn run_suite(suite: Suite, subject: &Subject, grid: Grid, tol: &Tolerances) -> Result<VerificationReport> {
    let s = &subject.immersion;
    let mut b = Builder {
        subject,
        grid,
        tol: *tol,
        checks: Vec::new(),
    };
    match suite {
        Suite::ConstantAngle => constant_angle(&mut b)?,
        Suite::PrincipalDirection => {
            let sw = sweep(s, grid, |u, v| {
                let l = s.local(u, v)?;
                let off = off_diagonal(s, u, v)?;
                Ok([s.principal_direction_residual(u, v)?, off, l.cos * l.log_d1()])
            })?;
            b.push(
                &sw,
                0,
                "principal_direction",
                "A T = -cos(theta) (log f)' T",
                Kind::Analytic,
                None,
            );
            b.push(&sw, 1, "frame_off_diagonal", "g(A e1, e2) = 0", Kind::Analytic, None);
        }
        Suite::FrameConnection => frame_connection(&mut b)?,
        Suite::GaussCodazzi => {
            let sw = sweep(s, grid, |u, v| {
                let g = s.first_fundamental_form(u, v)?;
                let (o1, o2) = orthonormal(&g);
                let r = s.gauss_residuals(u, v, &[[o1, o2, o1], [o1, o2, o2]])?;
                let c = s.codazzi_residual(u, v, o1, o2)?;
                Ok([mat2::norm(&g, r[0]).max(mat2::norm(&g, r[1])), mat2::norm(&g, c)])
            })?;
            b.push(
                &sw,
                0,
                "gauss_equation",
                "R(X,Y)Z = tangential part of ambient curvature plus A terms",
                Kind::Fd,
                None,
            );
            b.push(
                &sw,
                1,
                "codazzi_equation",
                "(nabla_X A)Y - (nabla_Y A)X = cos(theta) (log f)'' (g(Y,T)X - g(X,T)Y)",
                Kind::Fd,
                None,
            );
        }
        Suite::Laplacian => {
            let sw = sweep(s, grid, |u, v| {
                let (lhs, rhs) = s.laplacian_height(u, v)?;
                Ok([lhs - rhs, lhs])
            })?;
            b.push(
                &sw,
                0,
                "laplacian_height",
                "Delta h = 2 cos(theta) H + (log f)' (1 + cos^2 theta)",
                Kind::Fd,
                Some(1),
            );
        }
        Suite::Oracles => {
            let r = compare_oracles(s, grid)?;
            b.push_value(
                "gauss_curvature_oracles",
                "Brioschi K = det A - (log f)'^2 - (log f)'' |T|^2 = K_ambient(TM) + det A",
                Kind::Fd,
                r.max_pairwise,
                r.evaluated,
                r.skipped,
                Some(r.mean_brioschi),
            );
        }
        Suite::Umbilical => {
            let sw = sweep(s, grid, |u, v| {
                let l = s.local(u, v)?;
                let [k1, k2] = l.principal();
                let flip = if l.cos < 0.0 { -1.0 } else { 1.0 };
                let h = flip * l.mean_curvature();
                Ok([k2 - k1, h + flip * l.cos * l.log_d1(), h])
            })?;
            b.push(&sw, 0, "umbilical", "k1 = k2", Kind::Analytic, None);
            b.push(
                &sw,
                1,
                "umbilical_mean_curvature",
                "H = -cos(theta) f'/f",
                Kind::Analytic,
                Some(2),
            );
        }
        Suite::FlatCone => {
            let sw = sweep(s, grid, |u, v| {
                let k = s.gauss_curvature_intrinsic(u, v)?;
                let l = s.local(u, v)?;
                let f = s.space().warping().values(l.jet.point[0])?;
                Ok([k + l.sin * l.sin * f.d2f / f.f, k])
            })?;
            b.push(
                &sw,
                0,
                "type_ii_gauss_curvature",
                "K = -sin^2(theta) f''/f",
                Kind::Fd,
                Some(1),
            );
            if matches!(s.space().warping().family(), WarpFamily::Linear { .. }) {
                b.push(&sw, 1, "flat_cone", "K = 0 for linear f", Kind::Fd, Some(1));
            }
        }
        Suite::Minimal => {
            let sw = sweep(s, grid, |u, v| {
                let h = s.local(u, v)?.mean_curvature();
                Ok([h, h])
            })?;
            b.push(&sw, 0, "minimal", "H = 0", Kind::Analytic, Some(1));
            if let (Some(spec), Some(Family::MinimalPower)) = (&subject.spec, subject.family()) {
                let m = spec.m.unwrap_or(f64::NAN);
                let theta = generators::minimal_theta(m)?;
                let round = (generators::minimal_exponent(theta) - m).abs();
                b.push_value(
                    "minimal_exponent",
                    "m = sin^2(theta) / (1 + cos^2(theta))",
                    Kind::Analytic,
                    round,
                    1,
                    0,
                    Some(theta),
                );
            }
        }
        Suite::Harmonic => harmonic(&mut b)?,
        Suite::ClassificationRoundtrip => classification_roundtrip(&mut b)?,
    }
    let checks = b.checks;
    let pass = checks.iter().all(|c| c.pass);
    let quad = subject.spec.as_ref().map(|s| s.quadrature).unwrap_or_default();
    Ok(VerificationReport {
        suite,
        subject: s.label().to_string(),
        warping: s.space().warping().name().to_string(),
        theta: subject.declared_theta(),
        grid,
        environment: Environment {
            derivative_mode: s.mode(),
            quadrature_abs_tol: quad.abs_tol,
            quadrature_rel_tol: quad.rel_tol,
        },
        checks,
        pass,
    })
}

/// Runs several suites in order.
pub fn run_suites(
    suites: &[Suite],
    subject: &Subject,
    grid: Grid,
    tol: &Tolerances,
) -> Result<Vec<VerificationReport>> {
    suites.iter().map(|&x| run_suite(x, subject, grid, tol)).collect()
}

/// `g(A e1, e2)`, zero where the frame is undefined.
fn off_diagonal(s: &Immersion, u: f64, v: f64) -> Result<f64> {
    match s.adapted_frame(u, v) {
        Ok(f) => Ok(f.off_diagonal),
        Err(GeometryError::AngleDegenerate) => Ok(0.0),
        Err(e) => Err(e),
    }
}

fn constant_angle(b: &mut Builder<'_>) -> Result<()> {
    let s = &b.subject.immersion;
    let sw = sweep(s, b.grid, |u, v| {
        let l = s.local(u, v)?;
        Ok([l.sin.atan2(l.cos.abs())])
    })?;
    let thetas: Vec<f64> = b
        .grid
        .map(s.domain(), |u, v| s.local(u, v).map(|l| l.sin.atan2(l.cos.abs())))
        .into_iter()
        .filter_map(|r| r.ok())
        .collect();
    let n = thetas.len().max(1) as f64;
    let mean = thetas.iter().sum::<f64>() / n;
    let std = (thetas.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / n).sqrt();
    b.push_value(
        "theta_stddev",
        "theta is constant",
        Kind::Analytic,
        std,
        sw.evaluated,
        sw.skipped,
        Some(mean),
    );
    if let Some(theta) = b.subject.declared_theta() {
        let dev = thetas.iter().map(|t| (t - theta).abs()).fold(0.0, f64::max);
        b.push_value(
            "theta_declared",
            "theta equals the generator angle",
            Kind::Analytic,
            dev,
            sw.evaluated,
            sw.skipped,
            Some(mean),
        );
    }
    Ok(())
}

fn frame_connection(b: &mut Builder<'_>) -> Result<()> {
    let s = &b.subject.immersion;
    let sw = sweep(s, b.grid, |u, v| {
        let c = s.frame_connection(u, v)?;
        Ok([c.e1_e1, c.e1_e2, c.e2_e1.max(c.e2_e2)])
    })?;
    b.push(&sw, 0, "nabla_e1_e1", "nabla_{e1} e1 = 0", Kind::Fd, None);
    b.push(&sw, 1, "nabla_e1_e2", "nabla_{e1} e2 = 0", Kind::Fd, None);
    b.push(
        &sw,
        2,
        "nabla_e2_frame",
        "nabla_{e2} e1 = c e2, nabla_{e2} e2 = -c e1",
        Kind::Fd,
        None,
    );
    if !b.subject.has_type_i_coordinates() {
        return Ok(());
    }
    let spec = b.subject.spec.clone().expect("type (i) coordinates come from a spec");
    let eps = b.subject.branch_sign();
    let (sin, cos) = (spec.sin_theta(), spec.cos_theta());
    let lambda_law = sweep(s, b.grid, |u, v| {
        let frame = s.adapted_frame(u, v)?;
        let l = s.local(u, v)?;
        let flip = if l.cos < 0.0 { -1.0 } else { 1.0 };
        let beta = generators::beta(s, u, v)?;
        let lambda = flip * frame.lambda_e2;
        Ok([lambda * beta - (eps * sin - l.log_d1() * beta * cos)])
    })?;
    b.push(
        &lambda_law,
        0,
        "lambda_law",
        "lambda beta = sin(theta) - (f'/f) beta cos(theta)",
        Kind::Analytic,
        None,
    );
    let beta_ode = sweep(s, b.grid, |u, v| {
        s.check_interior(u, v)?;
        let beta_u = crate::numdiff::scalar_d1(|x| generators::beta(s, x, v), u)?;
        let sigma_u = crate::numdiff::scalar_d1(|x| spec.sigma(x), u)?;
        Ok([beta_u - sigma_u * generators::beta(s, u, v)? - eps * cos])
    })?;
    b.push(
        &beta_ode,
        0,
        "beta_ode",
        "beta_u - sigma' beta = cos(theta)",
        Kind::Fd,
        None,
    );
    Ok(())
}

fn harmonic(b: &mut Builder<'_>) -> Result<()> {
    let s = &b.subject.immersion;
    let sw = sweep(s, b.grid, |u, v| {
        let (lhs, _) = s.laplacian_height(u, v)?;
        let l = s.local(u, v)?;
        let flip = if l.cos < 0.0 { -1.0 } else { 1.0 };
        let (h, c) = (flip * l.mean_curvature(), l.cos.abs());
        let k = s.gauss_curvature_intrinsic(u, v)?;
        Ok([lhs, h + (1.0 + c * c) / (2.0 * c), k, h])
    })?;
    b.push(&sw, 0, "harmonic_height", "Delta h = 0", Kind::Fd, Some(0));
    b.push(
        &sw,
        1,
        "harmonic_mean_curvature",
        "H = -(1 + cos^2 theta) / (2 cos theta)",
        Kind::Analytic,
        Some(3),
    );
    b.push(&sw, 2, "harmonic_flat", "K = 0", Kind::Fd, Some(2));

    let (sect, n) = ambient_sectional_sample(s, b.grid, 0x5eed)?;
    b.push_value(
        "ambient_sectional",
        "sectional curvature of random planes = -1",
        Kind::Analytic,
        sect,
        n,
        0,
        None,
    );

    if s.is_exp_warped() {
        let theta = b.subject.declared_theta();
        let cone = sweep(s, b.grid, |u, v| {
            let p = s.point(u, v)?;
            let [x, y, z] = crate::surface::to_half_space(s.space(), &p)?;
            let c2 = match theta {
                Some(t) => (t.cos() / t.sin()).powi(2),
                None => f64::NAN,
            };
            Ok([(x * x + y * y) - c2 * z * z])
        })?;
        b.push(
            &cone,
            0,
            "half_space_cone",
            "x^2 + y^2 = cot^2(theta) z^2 in the half-space model",
            Kind::Analytic,
            None,
        );
    }
    Ok(())
}

/// Largest `|K + 1|` over seeded random planes at grid points.
fn ambient_sectional_sample(s: &Immersion, grid: Grid, seed: u64) -> Result<(f64, usize)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for (u, v) in grid.points(s.domain()).into_iter().step_by(16) {
        let p = match s.point(u, v) {
            Ok(p) => p,
            Err(e) if is_skippable(&e) => continue,
            Err(e) => return Err(e),
        };
        let mut random = || {
            AmbientVector::new(
                p,
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
        };
        let (a, c) = (random(), random());
        match s.space().sectional_curvature(&p, &a, &c) {
            Ok(k) => {
                worst = worst.max((k + 1.0).abs());
                n += 1;
            }
            Err(GeometryError::DegeneratePlane(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok((worst, n))
}

fn expected_verdict(spec: &GeneratorSpec) -> Verdict {
    match spec.family {
        Family::TypeII => Verdict::TypeII,
        Family::TypeIII => Verdict::TypeIII,
        _ => Verdict::TypeI,
    }
}

fn classification_roundtrip(b: &mut Builder<'_>) -> Result<()> {
    let Some(spec) = b.subject.spec.clone() else {
        return Err(GeometryError::InvalidParameter(
            "classification_roundtrip needs a generator spec".into(),
        ));
    };
    let s = &b.subject.immersion;
    let opts = ClassifyOptions {
        t_base: Some(spec.t_base()?),
        ..ClassifyOptions::default()
    };
    let report = classify(s, b.grid, &opts)?;
    let expected = expected_verdict(&spec);
    let label_ok = if report.verdict == expected { 0.0 } else { 1.0 };
    b.push_value(
        "classification_label",
        "classify(generate(spec)) recovers the family",
        Kind::Analytic,
        label_ok,
        report.samples,
        report.excluded,
        None,
    );
    if let Some(theta) = b.subject.declared_theta() {
        b.push_value(
            "classification_theta",
            "estimated theta equals the generator angle",
            Kind::Analytic,
            (report.theta_mean - theta).abs(),
            report.samples,
            report.excluded,
            Some(report.theta_mean),
        );
    }
    if spec.family == Family::TypeI && spec.cylinder.is_none() && report.verdict == Verdict::TypeI {
        let alpha = spec.alpha.clone().unwrap_or_else(generators::ProfileFunction::zero);
        let mut diffs = Vec::with_capacity(report.alpha.len());
        for a in &report.alpha {
            diffs.push(a.alpha - alpha.value(a.v)?);
        }
        b.push_value(
            "alpha_recovery",
            "recovered alpha matches the input up to a constant",
            Kind::Quadrature,
            spread(&diffs),
            diffs.len(),
            report.samples - diffs.len(),
            None,
        );
    }
    Ok(())
}

/// Half the range: the sup distance to the best constant.
pub fn spread(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    0.5 * (hi - lo)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub grid: Grid,
    pub evaluated: usize,
    pub skipped: usize,
    pub max_brioschi_vs_trace: f64,
    pub max_brioschi_vs_sectional: f64,
    pub max_trace_vs_sectional: f64,
    pub max_pairwise: f64,
    pub mean_brioschi: f64,
}

/// Three independent computations of the Gauss curvature, compared
/// pairwise over the grid.
pub fn compare_oracles(s: &Immersion, grid: Grid) -> Result<OracleReport> {
    let sw = sweep(s, grid, |u, v| {
        let o = s.curvature_oracles(u, v)?;
        Ok([
            o.brioschi - o.gauss_trace,
            o.brioschi - o.ambient_sectional,
            o.gauss_trace - o.ambient_sectional,
            o.brioschi,
        ])
    })?;
    let mean = if sw.evaluated > 0 {
        sw.sum[3] / sw.evaluated as f64
    } else {
        f64::NAN
    };
    Ok(OracleReport {
        grid,
        evaluated: sw.evaluated,
        skipped: sw.skipped,
        max_brioschi_vs_trace: sw.max[0],
        max_brioschi_vs_sectional: sw.max[1],
        max_trace_vs_sectional: sw.max[2],
        max_pairwise: sw.max[0].max(sw.max[1]).max(sw.max[2]),
        mean_brioschi: mean,
    })
}
