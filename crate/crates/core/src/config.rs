//! Run settings: a flat TOML key-value file, overridable key by key from
//! the command line.
//!
//! ```toml
//! family = "type_i"
//! warping = "exp"            # registry string, or "table:path/to/f.txt"
//! theta_deg = 45.0
//! alpha = "0.3*sin(v)"
//! domain = [-1.0, 1.0, 0.5, 2.6]
//! grid = "64x64"
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::generators::{BasePoints, Family, GeneratorSpec, ProfileFunction};
use crate::surface::{DerivativeMode, Grid, ParamDomain};
use crate::verify::Tolerances;
use crate::warped_space::{WarpFamily, WarpingFunction};

/// Coordinates used for exported points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordinateModel {
    /// `(t, x, y)` of the warped product.
    #[default]
    Raw,
    /// `(x, y, e^{-t})`, only for `f = e^t`.
    HalfSpace,
}

impl std::str::FromStr for CoordinateModel {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "raw" => Ok(Self::Raw),
            "half_space" => Ok(Self::HalfSpace),
            other => Err(GeometryError::Parse(format!("unknown coordinate model '{other}'"))),
        }
    }
}

/// `"a,b,c"`, `[a, b, c]` or a single number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberList {
    Text(String),
    Numbers(Vec<f64>),
    Number(f64),
}

impl NumberList {
    fn values(&self) -> Result<Vec<f64>> {
        match self {
            NumberList::Numbers(v) => Ok(v.clone()),
            NumberList::Number(x) => Ok(vec![*x]),
            NumberList::Text(s) => s
                .split(|c: char| c == ',' || c == 'x' || c.is_whitespace())
                .filter(|x| !x.is_empty())
                .map(|x| {
                    x.parse::<f64>()
                        .map_err(|e| GeometryError::Parse(format!("'{x}': {e}")))
                })
                .collect(),
        }
    }
}

/// Every setting the CLI understands. Unset keys fall back to defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub family: Option<String>,
    pub warping: Option<String>,
    pub theta_deg: Option<f64>,
    pub m: Option<f64>,
    pub t0: Option<f64>,
    pub alpha: Option<String>,
    /// Two-column `v alpha(v)` file, interpolated monotonically.
    pub alpha_table: Option<PathBuf>,
    pub gamma1: Option<String>,
    pub gamma2: Option<String>,
    pub radius: Option<f64>,
    /// `u0, u1, v0, v1`
    pub domain: Option<NumberList>,
    /// `"NUxNV"`, a single size, or `[nu, nv]`.
    pub grid: Option<NumberList>,
    pub t_base: Option<f64>,
    pub v_base: Option<f64>,
    pub suite: Option<String>,
    pub derivative_mode: Option<DerivativeMode>,
    pub model: Option<CoordinateModel>,
    pub mesh: Option<PathBuf>,
    pub records: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub tol_analytic: Option<f64>,
    pub tol_fd: Option<f64>,
    pub tol_quadrature: Option<f64>,
    /// Immersion written as `(t, x, y)` expressions in `u`, `v`.
    pub immersion: Option<String>,
    /// JSON-lines records, as written by `generate`, to classify.
    pub samples: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:expr, $over:expr, $($field:ident),* $(,)?) => {
        $( if $over.$field.is_some() { $base.$field = $over.$field; } )*
    };
}

impl Settings {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| GeometryError::InvalidParameter(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| GeometryError::Parse(format!("config: {e}")))
    }

    /// `self` with every key set in `over` replaced.
    pub fn overlay(mut self, over: Settings) -> Self {
        overlay!(
            self,
            over,
            family,
            warping,
            theta_deg,
            m,
            t0,
            alpha,
            alpha_table,
            gamma1,
            gamma2,
            radius,
            domain,
            grid,
            t_base,
            v_base,
            suite,
            derivative_mode,
            model,
            mesh,
            records,
            report,
            tol_analytic,
            tol_fd,
            tol_quadrature,
            immersion,
            samples,
        );
        self
    }

    pub fn family(&self) -> Result<Family> {
        self.family
            .as_deref()
            .ok_or_else(|| GeometryError::InvalidParameter("missing 'family'".into()))?
            .parse()
    }

    pub fn warping(&self) -> Result<WarpingFunction> {
        match self.warping.as_deref() {
            Some(w) => WarpingFunction::from_registry(w),
            None => match self.family.as_deref() {
                Some("minimal_power") => WarpingFunction::power(self.m.unwrap_or(f64::NAN)),
                Some("harmonic_exp") => Ok(WarpingFunction::exp()),
                _ => Err(GeometryError::InvalidParameter("missing 'warping'".into())),
            },
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        let Some(g) = &self.grid else {
            return Grid::square(64);
        };
        let v = g.values()?;
        let as_size = |x: f64| -> Result<usize> {
            if x >= 0.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(GeometryError::Parse(format!("grid size {x} is not a whole number")))
            }
        };
        match v.as_slice() {
            [n] => Grid::square(as_size(*n)?),
            [a, b] => Grid::new(as_size(*a)?, as_size(*b)?),
            _ => Err(GeometryError::Parse("grid needs one or two sizes".into())),
        }
    }

    pub fn domain(&self) -> Result<Option<ParamDomain>> {
        let Some(d) = &self.domain else {
            return Ok(None);
        };
        match d.values()?.as_slice() {
            [u0, u1, v0, v1] => Ok(Some(ParamDomain::new(*u0, *u1, *v0, *v1)?)),
            _ => Err(GeometryError::Parse("domain needs u0, u1, v0, v1".into())),
        }
    }

    pub fn theta(&self) -> Option<f64> {
        self.theta_deg.map(f64::to_radians)
    }

    pub fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            analytic: self.tol_analytic.unwrap_or(d.analytic),
            finite_difference: self.tol_fd.unwrap_or(d.finite_difference),
            quadrature: self.tol_quadrature.unwrap_or(d.quadrature),
        }
    }

    pub fn derivative_mode(&self) -> DerivativeMode {
        self.derivative_mode.unwrap_or(DerivativeMode::Analytic)
    }

    /// Coordinate model, rejected unless the warping is `exp`.
    pub fn model(&self, warping: &WarpingFunction) -> Result<CoordinateModel> {
        let model = self.model.unwrap_or_default();
        if model == CoordinateModel::HalfSpace && !matches!(warping.family(), WarpFamily::Exp) {
            return Err(GeometryError::ModelMismatch(format!(
                "half_space model needs warping 'exp', got '{}'",
                warping.name()
            )));
        }
        Ok(model)
    }

    fn alpha(&self) -> Result<Option<ProfileFunction>> {
        match (&self.alpha, &self.alpha_table) {
            (Some(_), Some(_)) => Err(GeometryError::InvalidParameter(
                "set either 'alpha' or 'alpha_table', not both".into(),
            )),
            (Some(e), None) => Ok(Some(ProfileFunction::from_expr(e)?)),
            (None, Some(path)) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    GeometryError::InvalidParameter(format!("cannot read alpha table {}: {e}", path.display()))
                })?;
                let (vs, values) = crate::warped_space::parse_table(&text)?;
                Ok(Some(ProfileFunction::sampled(vs, values)?))
            }
            (None, None) => Ok(None),
        }
    }

    /// The generator spec described by these settings.
    pub fn generator_spec(&self) -> Result<GeneratorSpec> {
        let family = self.family()?;
        let mut spec = match family {
            Family::MinimalPower => {
                let m = self
                    .m
                    .ok_or_else(|| GeometryError::InvalidParameter("minimal_power needs 'm'".into()))?;
                GeneratorSpec::minimal_power(m)?
            }
            Family::HarmonicExp => GeneratorSpec::harmonic_exp(self.require_theta()?),
            Family::TypeIII => {
                let t0 = self
                    .t0
                    .ok_or_else(|| GeometryError::InvalidParameter("type_iii needs 't0'".into()))?;
                GeneratorSpec::type_iii(self.warping()?, t0)
            }
            _ => GeneratorSpec::new(family, self.warping()?, self.require_theta()?),
        };
        spec.alpha = self.alpha()?;
        spec.cylinder = match (&self.gamma1, &self.gamma2) {
            (Some(a), Some(b)) => Some((ProfileFunction::from_expr(a)?, ProfileFunction::from_expr(b)?)),
            (None, None) => None,
            _ => return Err(GeometryError::InvalidParameter("set both 'gamma1' and 'gamma2'".into())),
        };
        if let Some(r) = self.radius {
            spec.radius = r;
        }
        spec.domain = self.domain()?;
        spec.grid = self.grid()?;
        spec.base = BasePoints {
            t: self.t_base,
            v: self.v_base.unwrap_or(0.0),
        };
        Ok(spec)
    }

    fn require_theta(&self) -> Result<f64> {
        self.theta()
            .ok_or_else(|| GeometryError::InvalidParameter("missing 'theta_deg'".into()))
    }
}
