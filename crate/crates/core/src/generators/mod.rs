//! Constructors for every constant angle surface family, with closed-form
//! parameter derivatives attached.
//!
//! Indefinite integrals carry explicit lower limits ([`BasePoints`]):
//! `F(t) = int_{t_b}^t dtau / f(tau)`, `S(v) = int_{v_b}^v alpha(s) sin(s) ds`
//! and `C(v) = int_{v_b}^v alpha(s) cos(s) ds`.

mod classify;

pub use classify::{classify, AlphaSample, ClassificationReport, ClassifyOptions, Verdict};

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::expr::Expr;
use crate::interp::MonotoneCubic;
use crate::numdiff;
use crate::quadrature::{integrate_with, Primitive, QuadratureOptions};
use crate::surface::{Grid, Immersion, Jet, ParamDomain};
use crate::warped_space::{Interval, WarpedSpace, WarpingFunction};

/// Below this `|iota_v|` (in the `v`-speed factor) a type (i) or rotational
/// surface is not immersed.
pub const REGULARITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    TypeI,
    TypeII,
    TypeIII,
    Rotational,
    MinimalPower,
    HarmonicExp,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::TypeI,
        Family::TypeII,
        Family::TypeIII,
        Family::Rotational,
        Family::MinimalPower,
        Family::HarmonicExp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::TypeI => "type_i",
            Family::TypeII => "type_ii",
            Family::TypeIII => "type_iii",
            Family::Rotational => "rotational",
            Family::MinimalPower => "minimal_power",
            Family::HarmonicExp => "harmonic_exp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s.trim())
            .ok_or_else(|| GeometryError::Parse(format!("unknown family '{s}'")))
    }
}

type Fn3 = Arc<dyn Fn(f64) -> Result<(f64, f64, f64)> + Send + Sync>;

/// A scalar function of `v` with two derivatives: the free function `alpha`
/// of type (i) surfaces, or a cylinder profile coordinate.
#[derive(Clone)]
pub struct ProfileFunction {
    description: String,
    eval: Fn3,
}

impl fmt::Debug for ProfileFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProfileFunction({})", self.description)
    }
}

impl ProfileFunction {
    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn constant(c: f64) -> Self {
        Self {
            description: format!("{c}"),
            eval: Arc::new(move |_| Ok((c, 0.0, 0.0))),
        }
    }

    /// From the expression grammar in [`crate::expr`], variable `v`.
    pub fn from_expr(src: &str) -> Result<Self> {
        let e = Expr::parse(src)?;
        let d1 = e.derivative("v");
        let d2 = d1.derivative("v");
        Ok(Self {
            description: src.to_string(),
            eval: Arc::new(move |v| {
                let env = [("v", v)];
                Ok((e.eval(&env)?, d1.eval(&env)?, d2.eval(&env)?))
            }),
        })
    }

    /// Arbitrary closure; derivatives by finite differences.
    pub fn from_fn<F>(description: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        Self {
            description: description.into(),
            eval: Arc::new(move |v| {
                let g = |s: f64| Ok(f(s));
                Ok((f(v), numdiff::scalar_d1(g, v)?, numdiff::scalar_d2(g, v)?))
            }),
        }
    }

    /// Monotone-cubic interpolant through samples (at least four knots).
    pub fn sampled(vs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if vs.len() < 4 {
            return Err(GeometryError::InvalidParameter(format!(
                "sampled profile needs at least 4 knots, got {}",
                vs.len()
            )));
        }
        let table = Arc::new(MonotoneCubic::new(vs, values)?);
        Ok(Self {
            description: "sampled".into(),
            eval: Arc::new(move |v| Ok(table.eval(v))),
        })
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn value(&self, v: f64) -> Result<f64> {
        Ok((self.eval)(v)?.0)
    }

    /// `(value, first derivative, second derivative)`
    pub fn eval3(&self, v: f64) -> Result<(f64, f64, f64)> {
        (self.eval)(v)
    }
}

/// Lower limits of the indefinite integrals. `t = None` selects the
/// default described on [`GeneratorSpec::default_t_base`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BasePoints {
    pub t: Option<f64>,
    pub v: f64,
}

/// Everything needed to build one surface.
#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    pub family: Family,
    pub warping: WarpingFunction,
    /// Constant angle in radians.
    pub theta: f64,
    pub alpha: Option<ProfileFunction>,
    /// `(gamma_1, gamma_2)` for the cylinder `(u, gamma_1(v), gamma_2(v))`,
    /// used by type (i) at `theta = pi/2` when present.
    pub cylinder: Option<(ProfileFunction, ProfileFunction)>,
    pub t0: Option<f64>,
    pub m: Option<f64>,
    /// Radius of the circular cylinder (rotational family at `theta = pi/2`).
    pub radius: f64,
    pub domain: Option<ParamDomain>,
    pub grid: Grid,
    pub base: BasePoints,
    pub quadrature: QuadratureOptions,
}

impl GeneratorSpec {
    pub fn new(family: Family, warping: WarpingFunction, theta: f64) -> Self {
        Self {
            family,
            warping,
            theta,
            alpha: None,
            cylinder: None,
            t0: None,
            m: None,
            radius: 1.0,
            domain: None,
            grid: Grid { nu: 64, nv: 64 },
            base: BasePoints::default(),
            quadrature: QuadratureOptions::default(),
        }
    }

    pub fn type_i(warping: WarpingFunction, theta: f64, alpha: ProfileFunction) -> Self {
        Self {
            alpha: Some(alpha),
            ..Self::new(Family::TypeI, warping, theta)
        }
    }

    pub fn type_ii(warping: WarpingFunction, theta: f64) -> Self {
        Self::new(Family::TypeII, warping, theta)
    }

    pub fn type_iii(warping: WarpingFunction, t0: f64) -> Self {
        Self {
            t0: Some(t0),
            ..Self::new(Family::TypeIII, warping, 0.0)
        }
    }

    pub fn rotational(warping: WarpingFunction, theta: f64) -> Self {
        Self::new(Family::Rotational, warping, theta)
    }

    pub fn minimal_power(m: f64) -> Result<Self> {
        Ok(Self {
            m: Some(m),
            ..Self::new(Family::MinimalPower, WarpingFunction::power(m)?, minimal_theta(m)?)
        })
    }

    pub fn harmonic_exp(theta: f64) -> Self {
        Self::new(Family::HarmonicExp, WarpingFunction::exp(), theta)
    }

    pub fn with_domain(mut self, domain: ParamDomain) -> Self {
        self.domain = Some(domain);
        self
    }

    pub fn with_grid(mut self, grid: Grid) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_base(mut self, base: BasePoints) -> Self {
        self.base = base;
        self
    }

    /// Height range `[t_lo, t_hi]` covered by default domains: `[-0.5, 0.5]`
    /// on the real line, otherwise a unit-length window starting half a unit
    /// inside the finite end of `I`.
    pub fn default_t_range(&self) -> (f64, f64) {
        default_t_range(self.warping.interval())
    }

    pub fn default_domain(&self) -> Result<ParamDomain> {
        match self.family {
            Family::TypeIII => ParamDomain::new(-1.0, 1.0, -1.0, 1.0),
            _ => {
                let (lo, hi) = self.default_t_range();
                let s = self.sin_theta();
                let (v0, v1) = if self.family == Family::TypeII {
                    (-1.0, 1.0)
                } else {
                    (0.0, TAU)
                };
                ParamDomain::new(lo / s, hi / s, v0, v1)
            }
        }
    }

    pub fn effective_domain(&self) -> Result<ParamDomain> {
        match self.domain {
            Some(d) => Ok(d),
            None => self.default_domain(),
        }
    }

    /// Default lower limit of `F`: halfway between the finite lower end of
    /// `I` and the lowest height of the domain, or one unit below the lowest
    /// height when `I` is unbounded below. Keeps `F > 0` on the domain.
    pub fn default_t_base(&self) -> Result<f64> {
        let d = self.effective_domain()?;
        let s = self.sin_theta();
        let t_lo = (d.u0 * s).min(d.u1 * s);
        let lo = self.warping.interval().lo;
        Ok(if lo.is_finite() { 0.5 * (lo + t_lo) } else { t_lo - 1.0 })
    }

    pub fn t_base(&self) -> Result<f64> {
        match self.base.t {
            Some(t) => Ok(t),
            None => self.default_t_base(),
        }
    }

    fn is_vertical(&self) -> bool {
        (self.theta - FRAC_PI_2).abs() < 1e-15
    }

    pub fn sin_theta(&self) -> f64 {
        if self.is_vertical() {
            1.0
        } else {
            self.theta.sin()
        }
    }

    pub fn cos_theta(&self) -> f64 {
        if self.is_vertical() {
            0.0
        } else {
            self.theta.cos()
        }
    }

    /// `sigma(u) = log f(u sin(theta))`
    pub fn sigma(&self, u: f64) -> Result<f64> {
        Ok(self.warping.eval(u * self.sin_theta())?.ln())
    }

    /// `F(t) = int_{t_b}^t dtau / f(tau)`
    pub fn reciprocal_integral(&self, t: f64) -> Result<f64> {
        let w = self.warping.clone();
        integrate_with(move |tau| Ok(1.0 / w.eval(tau)?), self.t_base()?, t, &self.quadrature)
    }
}

/// `theta = arccos sqrt((1 - m) / (1 + m))`
pub fn minimal_theta(m: f64) -> Result<f64> {
    if !(m > 0.0 && m < 1.0) {
        return Err(GeometryError::InvalidParameter(format!(
            "minimal family needs m in (0, 1), got {m}"
        )));
    }
    Ok(((1.0 - m) / (1.0 + m)).sqrt().acos())
}

/// `m = sin^2(theta) / (1 + cos^2(theta))`, inverse of [`minimal_theta`].
pub fn minimal_exponent(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    s * s / (1.0 + c * c)
}

pub(crate) fn default_t_range(i: Interval) -> (f64, f64) {
    match (i.lo.is_finite(), i.hi.is_finite()) {
        (false, false) => (-0.5, 0.5),
        (true, false) => (i.lo + 0.5, i.lo + 1.5),
        (false, true) => (i.hi - 1.5, i.hi - 0.5),
        (true, true) => {
            let w = i.hi - i.lo;
            (i.lo + 0.25 * w, i.lo + 0.75 * w)
        }
    }
}

type ScalarFn = Box<dyn Fn(f64) -> Result<f64> + Send + Sync>;
type SharedPrimitive = Arc<Primitive<ScalarFn>>;

const PANELS: usize = 64;

/// Window `[a, b]` padded on both sides, kept inside `(lo, hi)`.
fn padded(a: f64, b: f64, lo: f64, hi: f64) -> (f64, f64) {
    let margin = 0.05 * (b - a) + 0.01;
    let left = if lo.is_finite() {
        (a - margin).max(0.5 * (lo + a))
    } else {
        a - margin
    };
    let right = if hi.is_finite() {
        (b + margin).min(0.5 * (hi + b))
    } else {
        b + margin
    };
    (left, right)
}

/// `F` tabulated over the heights reached by the domain.
fn reciprocal_primitive(spec: &GeneratorSpec, d: &ParamDomain) -> Result<SharedPrimitive> {
    let s = spec.sin_theta();
    let base = spec.t_base()?;
    let (t0, t1) = ((d.u0 * s).min(d.u1 * s), (d.u0 * s).max(d.u1 * s));
    let i = spec.warping.interval();
    let (a, b) = padded(t0.min(base), t1.max(base), i.lo, i.hi);
    let w = spec.warping.clone();
    let g: ScalarFn = Box::new(move |tau| Ok(1.0 / w.eval(tau)?));
    Ok(Arc::new(Primitive::new(g, base, a, b, PANELS, spec.quadrature)?))
}

/// `(S, C)` tabulated over the `v`-range of the domain.
fn alpha_primitives(
    spec: &GeneratorSpec,
    d: &ParamDomain,
    alpha: &ProfileFunction,
) -> Result<(SharedPrimitive, SharedPrimitive)> {
    let base = spec.base.v;
    let (a, b) = padded(d.v0.min(base), d.v1.max(base), f64::NEG_INFINITY, f64::INFINITY);
    let (a1, a2) = (alpha.clone(), alpha.clone());
    let gs: ScalarFn = Box::new(move |x| Ok(a1.value(x)? * x.sin()));
    let gc: ScalarFn = Box::new(move |x| Ok(a2.value(x)? * x.cos()));
    Ok((
        Arc::new(Primitive::new(gs, base, a, b, PANELS, spec.quadrature)?),
        Arc::new(Primitive::new(gc, base, a, b, PANELS, spec.quadrature)?),
    ))
}

fn check_theta(theta: f64, open_right: bool) -> Result<()> {
    let ok = theta > 0.0
        && if open_right {
            theta < FRAC_PI_2
        } else {
            theta <= FRAC_PI_2 + 1e-15
        };
    if ok {
        Ok(())
    } else {
        let range = if open_right { "(0, pi/2)" } else { "(0, pi/2]" };
        Err(GeometryError::InvalidParameter(format!(
            "theta = {theta} must lie in {range}"
        )))
    }
}

fn check_heights(spec: &GeneratorSpec, d: &ParamDomain) -> Result<()> {
    let s = spec.sin_theta();
    let i = spec.warping.interval();
    i.check(d.u0 * s)?;
    i.check(d.u1 * s)?;
    Ok(())
}

/// Builds the immersion for `spec.family`.
pub fn generate(spec: &GeneratorSpec) -> Result<Immersion> {
    match spec.family {
        Family::TypeI => make_type_i(spec),
        Family::TypeII => make_type_ii(spec),
        Family::TypeIII => make_type_iii(spec),
        Family::Rotational => make_rotational(spec),
        Family::MinimalPower => make_minimal_power(spec),
        Family::HarmonicExp => make_harmonic_exp(spec),
    }
}

/// Fails if `speed` vanishes or changes sign over the spec's grid.
fn check_speed<F>(spec: &GeneratorSpec, d: &ParamDomain, what: &str, speed: F) -> Result<()>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let values = spec.grid.map(d, &speed);
    let mut sign = 0.0;
    for (value, (u, v)) in values.into_iter().zip(spec.grid.points(d)) {
        let value = value?;
        if value.abs() < REGULARITY_TOL {
            return Err(GeometryError::Regularity {
                u,
                v,
                reason: format!("{what} vanishes"),
            });
        }
        if sign != 0.0 && value.signum() != sign {
            return Err(GeometryError::Regularity {
                u,
                v,
                reason: format!("{what} changes sign on the grid"),
            });
        }
        sign = value.signum();
    }
    Ok(())
}

/// `iota(u, v) = (u sin(theta), cot(theta) F cos v - S(v), cot(theta) F sin v + C(v))`
/// with `F = F(u sin(theta))`. At `theta = pi/2` with a cylinder profile the
/// surface is `(u, gamma_1(v), gamma_2(v))` instead.
pub fn make_type_i(spec: &GeneratorSpec) -> Result<Immersion> {
    check_theta(spec.theta, false)?;
    let d = spec.effective_domain()?;
    check_heights(spec, &d)?;
    let space = WarpedSpace::new(spec.warping.clone());
    if spec.is_vertical() {
        if let Some((g1, g2)) = spec.cylinder.clone() {
            return make_cylinder(spec, space, d, g1, g2);
        }
    }
    let alpha = spec.alpha.clone().unwrap_or_else(ProfileFunction::zero);
    let (s, c) = (spec.sin_theta(), spec.cos_theta());
    let cot = c / s;
    let prim = reciprocal_primitive(spec, &d)?;
    let recip = move |t: f64| -> Result<f64> {
        if cot == 0.0 {
            Ok(0.0)
        } else {
            prim.eval(t)
        }
    };
    let (s_prim, c_prim) = alpha_primitives(spec, &d, &alpha)?;
    let sc = move |v: f64| -> Result<(f64, f64)> { Ok((s_prim.eval(v)?, c_prim.eval(v)?)) };
    let warping = spec.warping.clone();

    {
        let alpha = alpha.clone();
        let recip = recip.clone();
        check_speed(spec, &d, "cot(theta) F + alpha", move |u, v| {
            Ok(cot * recip(u * s)? + alpha.value(v)?)
        })?;
    }

    let map = {
        let recip = recip.clone();
        let sc = sc.clone();
        move |u: f64, v: f64| -> Result<[f64; 3]> {
            let kf = cot * recip(u * s)?;
            let (si, ci) = sc(v)?;
            let (sv, cv) = v.sin_cos();
            Ok([u * s, kf * cv - si, kf * sv + ci])
        }
    };
    let jet = move |u: f64, v: f64| -> Result<Jet> {
        let t = u * s;
        let w = warping.values(t)?;
        let kf = cot * recip(t)?;
        let (a, da, _) = alpha.eval3(v)?;
        let (si, ci) = sc(v)?;
        let b = kf + a;
        let (sv, cv) = v.sin_cos();
        let cf = c / w.f;
        let cff = -c * s * w.df / (w.f * w.f);
        Ok(Jet {
            point: [t, kf * cv - si, kf * sv + ci],
            du: [s, cf * cv, cf * sv],
            dv: [0.0, -b * sv, b * cv],
            duu: [0.0, cff * cv, cff * sv],
            duv: [0.0, -cf * sv, cf * cv],
            dvv: [0.0, -da * sv - b * cv, da * cv - b * sv],
        })
    };
    Ok(Immersion::new(space, d, map).with_jet(jet).with_label("type_i"))
}

fn make_cylinder(
    spec: &GeneratorSpec,
    space: WarpedSpace,
    d: ParamDomain,
    g1: ProfileFunction,
    g2: ProfileFunction,
) -> Result<Immersion> {
    {
        let (g1, g2) = (g1.clone(), g2.clone());
        check_speed(spec, &d, "|gamma'|", move |_, v| {
            let (_, a, _) = g1.eval3(v)?;
            let (_, b, _) = g2.eval3(v)?;
            Ok(a.hypot(b))
        })?;
    }
    let map = {
        let (g1, g2) = (g1.clone(), g2.clone());
        move |u: f64, v: f64| Ok([u, g1.value(v)?, g2.value(v)?])
    };
    let jet = move |u: f64, v: f64| -> Result<Jet> {
        let (x, dx, ddx) = g1.eval3(v)?;
        let (y, dy, ddy) = g2.eval3(v)?;
        Ok(Jet {
            point: [u, x, y],
            du: [1.0, 0.0, 0.0],
            dv: [0.0, dx, dy],
            duu: [0.0; 3],
            duv: [0.0; 3],
            dvv: [0.0, ddx, ddy],
        })
    };
    Ok(Immersion::new(space, d, map)
        .with_jet(jet)
        .with_label("type_i_cylinder"))
}

/// `iota(u, v) = (u sin(theta), cot(theta) F(u sin(theta)), v)`: the cylinder
/// `x = G(t)` in coordinates where `u` is arc length along `T`.
pub fn make_type_ii(spec: &GeneratorSpec) -> Result<Immersion> {
    check_theta(spec.theta, false)?;
    let d = spec.effective_domain()?;
    check_heights(spec, &d)?;
    let (s, c) = (spec.sin_theta(), spec.cos_theta());
    let cot = c / s;
    let warping = spec.warping.clone();
    let prim = reciprocal_primitive(spec, &d)?;
    let recip = move |t: f64| -> Result<f64> {
        if cot == 0.0 {
            Ok(0.0)
        } else {
            prim.eval(t)
        }
    };
    let map = {
        let recip = recip.clone();
        move |u: f64, v: f64| Ok([u * s, cot * recip(u * s)?, v])
    };
    let jet = move |u: f64, v: f64| -> Result<Jet> {
        let t = u * s;
        let w = warping.values(t)?;
        Ok(Jet {
            point: [t, cot * recip(t)?, v],
            du: [s, c / w.f, 0.0],
            dv: [0.0, 0.0, 1.0],
            duu: [0.0, -c * s * w.df / (w.f * w.f), 0.0],
            duv: [0.0; 3],
            dvv: [0.0; 3],
        })
    };
    let space = WarpedSpace::new(spec.warping.clone());
    Ok(Immersion::new(space, d, map).with_jet(jet).with_label("type_ii"))
}

/// The slice `t = t0`, parametrized by `(x, y) = (u, v)`.
pub fn make_type_iii(spec: &GeneratorSpec) -> Result<Immersion> {
    let t0 = spec
        .t0
        .ok_or_else(|| GeometryError::InvalidParameter("type_iii needs t0".into()))?;
    spec.warping.interval().check(t0)?;
    let d = spec.effective_domain()?;
    let space = WarpedSpace::new(spec.warping.clone());
    let jet = move |u: f64, v: f64| -> Result<Jet> {
        Ok(Jet {
            point: [t0, u, v],
            du: [0.0, 1.0, 0.0],
            dv: [0.0, 0.0, 1.0],
            duu: [0.0; 3],
            duv: [0.0; 3],
            dvv: [0.0; 3],
        })
    };
    Ok(Immersion::new(space, d, move |u, v| Ok([t0, u, v]))
        .with_jet(jet)
        .with_label("type_iii"))
}

/// Surface of revolution `(u sin(theta), b(u) cos v, +-b(u) sin v)` for a
/// profile `b` given with its first two derivatives.
fn revolution<B>(space: WarpedSpace, d: ParamDomain, s: f64, mirrored: bool, label: &str, profile: B) -> Immersion
where
    B: Fn(f64) -> Result<(f64, f64, f64)> + Send + Sync + Clone + 'static,
{
    let sign = if mirrored { -1.0 } else { 1.0 };
    let map = {
        let profile = profile.clone();
        move |u: f64, v: f64| -> Result<[f64; 3]> {
            let (b, _, _) = profile(u)?;
            Ok([u * s, b * v.cos(), sign * b * v.sin()])
        }
    };
    let jet = move |u: f64, v: f64| -> Result<Jet> {
        let (b, db, ddb) = profile(u)?;
        let (sv, cv) = v.sin_cos();
        Ok(Jet {
            point: [u * s, b * cv, sign * b * sv],
            du: [s, db * cv, sign * db * sv],
            dv: [0.0, -b * sv, sign * b * cv],
            duu: [0.0, ddb * cv, sign * ddb * sv],
            duv: [0.0, -db * sv, sign * db * cv],
            dvv: [0.0, -b * cv, -sign * b * sv],
        })
    };
    Immersion::new(space, d, map).with_jet(jet).with_label(label)
}

/// Rotational constant angle surface: profile `b(u) = cot(theta) F(u sin(theta))`,
/// or the circular cylinder of radius `spec.radius` at `theta = pi/2`.
pub fn make_rotational(spec: &GeneratorSpec) -> Result<Immersion> {
    check_theta(spec.theta, false)?;
    let d = spec.effective_domain()?;
    check_heights(spec, &d)?;
    let space = WarpedSpace::new(spec.warping.clone());
    if spec.is_vertical() {
        let r = spec.radius;
        if !(r.abs() > REGULARITY_TOL) {
            return Err(GeometryError::Regularity {
                u: d.u0,
                v: d.v0,
                reason: "cylinder radius vanishes".into(),
            });
        }
        return Ok(revolution(space, d, 1.0, false, "rotational", move |_| {
            Ok((r, 0.0, 0.0))
        }));
    }
    let (s, c) = (spec.sin_theta(), spec.cos_theta());
    let cot = c / s;
    let prim = reciprocal_primitive(spec, &d)?;
    let warping = spec.warping.clone();
    let profile = move |u: f64| -> Result<(f64, f64, f64)> {
        let t = u * s;
        let w = warping.values(t)?;
        let b = cot * prim.eval(t)?;
        Ok((b, c / w.f, -c * s * w.df / (w.f * w.f)))
    };
    {
        let profile = profile.clone();
        check_speed(spec, &d, "b(u)", move |u, _| Ok(profile(u)?.0))?;
    }
    // arc length and constant angle conditions on the profile curve
    let warping = spec.warping.clone();
    for (u, _) in spec.grid.points(&d).into_iter().step_by(spec.grid.nv.max(1)) {
        let (_, db, _) = profile(u)?;
        let f = warping.eval(u * s)?;
        let arc = s * s + f * f * db * db - 1.0;
        let angle = db * f - c;
        if arc.abs() > 1e-12 || angle.abs() > 1e-12 {
            return Err(GeometryError::Regularity {
                u,
                v: d.v0,
                reason: format!("profile conditions violated (arc {arc:e}, angle {angle:e})"),
            });
        }
    }
    Ok(revolution(space, d, s, false, "rotational", profile))
}

/// Minimal surface in `I x_{t^m} E^2`:
/// `(u sin(theta), k (u sin(theta))^{1-m} cos v, k (u sin(theta))^{1-m} sin v)`
/// with `k = cot(theta) / (1 - m)` and `theta = arccos sqrt((1-m)/(1+m))`.
pub fn make_minimal_power(spec: &GeneratorSpec) -> Result<Immersion> {
    let m = spec
        .m
        .ok_or_else(|| GeometryError::InvalidParameter("minimal_power needs m".into()))?;
    let theta = minimal_theta(m)?;
    let warping = WarpingFunction::power(m)?;
    let (s, c) = theta.sin_cos();
    let cot = c / s;
    let k = cot / (1.0 - m);
    let spec_for_domain = GeneratorSpec {
        warping: warping.clone(),
        theta,
        ..spec.clone()
    };
    let d = spec_for_domain.effective_domain()?;
    if d.u0 * s <= 0.0 {
        return Err(GeometryError::Domain {
            t: d.u0 * s,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    check_heights(&spec_for_domain, &d)?;
    let profile = move |u: f64| -> Result<(f64, f64, f64)> {
        let t = u * s;
        if t <= 0.0 {
            return Err(GeometryError::Domain {
                t,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        let b = k * t.powf(1.0 - m);
        let db = cot * s * t.powf(-m);
        let ddb = -m * cot * s * s * t.powf(-m - 1.0);
        Ok((b, db, ddb))
    };
    Ok(revolution(
        WarpedSpace::new(warping),
        d,
        s,
        false,
        "minimal_power",
        profile,
    ))
}

/// Flat constant-mean-curvature surface in `I x_exp E^2` (hyperbolic space):
/// `(u sin(theta), cot(theta) e^{-u sin(theta)} cos v, -cot(theta) e^{-u sin(theta)} sin v)`.
/// The `y` reflection makes `iota_u x_f iota_v` point to increasing `t`.
pub fn make_harmonic_exp(spec: &GeneratorSpec) -> Result<Immersion> {
    check_theta(spec.theta, true)?;
    let spec = GeneratorSpec {
        warping: WarpingFunction::exp(),
        ..spec.clone()
    };
    let d = spec.effective_domain()?;
    let (s, c) = spec.theta.sin_cos();
    let cot = c / s;
    let profile = move |u: f64| -> Result<(f64, f64, f64)> {
        let e = (-u * s).exp();
        Ok((cot * e, -c * e, c * s * e))
    };
    Ok(revolution(
        WarpedSpace::new(spec.warping.clone()),
        d,
        s,
        true,
        "harmonic_exp",
        profile,
    ))
}

/// `|iota_v|` in the warped metric.
pub fn beta(s: &Immersion, u: f64, v: f64) -> Result<f64> {
    let g = s.first_fundamental_form(u, v)?;
    Ok(g[1][1].sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_windows_follow_the_interval() {
        assert_eq!(default_t_range(Interval::REAL_LINE), (-0.5, 0.5));
        assert_eq!(default_t_range(Interval::new(0.0, f64::INFINITY).unwrap()), (0.5, 1.5));
        assert_eq!(
            default_t_range(Interval::new(f64::NEG_INFINITY, 2.0).unwrap()),
            (0.5, 1.5)
        );
        assert_eq!(default_t_range(Interval::new(0.0, 4.0).unwrap()), (1.0, 3.0));
    }

    #[test]
    fn default_base_point_keeps_f_positive() {
        let spec = GeneratorSpec::type_ii(WarpingFunction::power(0.5).unwrap(), FRAC_PI_2);
        assert_eq!(spec.default_t_base().unwrap(), 0.25);
        let spec = GeneratorSpec::type_ii(WarpingFunction::exp(), FRAC_PI_2);
        assert_eq!(spec.default_t_base().unwrap(), -1.5);
        let spec = spec.with_base(BasePoints { t: Some(0.1), v: 0.0 });
        assert_eq!(spec.t_base().unwrap(), 0.1);
    }

    #[test]
    fn reciprocal_integral_and_sigma() {
        let spec = GeneratorSpec::type_ii(WarpingFunction::exp(), 0.5);
        let tb = spec.t_base().unwrap();
        let got = spec.reciprocal_integral(0.3).unwrap();
        assert!((got - ((-tb).exp() - (-0.3f64).exp())).abs() < 1e-12);
        assert!((spec.sigma(0.7).unwrap() - 0.7 * 0.5f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn profile_functions() {
        let p = ProfileFunction::from_expr("v^3 - 2*v").unwrap();
        assert_eq!(p.eval3(2.0).unwrap(), (4.0, 10.0, 12.0));
        let q = ProfileFunction::from_fn("sin", f64::sin);
        let (a, b, c) = q.eval3(0.4).unwrap();
        assert!((a - 0.4f64.sin()).abs() < 1e-15 && (b - 0.4f64.cos()).abs() < 1e-8 && (c + 0.4f64.sin()).abs() < 1e-5);
        assert!(ProfileFunction::sampled(vec![0.0, 1.0, 2.0], vec![0.0; 3]).is_err());
        let s = ProfileFunction::sampled(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert!((s.value(1.5).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.as_str().parse::<Family>().unwrap(), f);
        }
        assert!("type_iv".parse::<Family>().is_err());
    }
}
