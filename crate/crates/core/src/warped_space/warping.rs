//! Warping functions `f: I -> (0, inf)` and the builtin registry.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::error::{GeometryError, Result};
use crate::interp::MonotoneCubic;
use crate::numdiff;

/// Points closer than this to an endpoint of `I` are rejected.
pub const ENDPOINT_MARGIN: f64 = 1e-9;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(GeometryError::InvalidParameter(format!(
                "interval ({lo}, {hi}) is empty"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, t: f64) -> bool {
        t.is_finite() && t > self.lo + ENDPOINT_MARGIN && t < self.hi - ENDPOINT_MARGIN
    }

    pub fn check(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(GeometryError::Domain {
                t,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }
}

/// `f`, `f'`, `f''` at one point, plus the derived logarithmic derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpValues {
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
}

impl WarpValues {
    /// `(log f)'`
    pub fn log_d1(&self) -> f64 {
        self.df / self.f
    }

    /// `(log f)''`
    pub fn log_d2(&self) -> f64 {
        (self.d2f * self.f - self.df * self.df) / (self.f * self.f)
    }
}

/// Which registry entry (if any) produced a warping function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WarpFamily {
    Constant { a: f64 },
    Linear { a: f64, b: f64 },
    Power { m: f64 },
    Exp,
    Tabulated,
    Custom,
}

#[derive(Clone)]
enum Repr {
    Analytic { f: ScalarFn, df: ScalarFn, d2f: ScalarFn },
    ValueOnly(ScalarFn),
    Tabulated(Arc<MonotoneCubic>),
}

/// A smooth positive function on an open interval.
///
/// Derivatives are either supplied in closed form or obtained from
/// fourth-order central differences of `f`.
#[derive(Clone)]
pub struct WarpingFunction {
    name: String,
    interval: Interval,
    family: WarpFamily,
    repr: Repr,
}

impl fmt::Debug for WarpingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WarpingFunction")
            .field("name", &self.name)
            .field("interval", &self.interval)
            .field("family", &self.family)
            .finish()
    }
}

impl WarpingFunction {
    pub fn analytic<F, D, DD>(name: impl Into<String>, interval: Interval, f: F, df: D, d2f: DD) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        DD: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            interval,
            family: WarpFamily::Custom,
            repr: Repr::Analytic {
                f: Arc::new(f),
                df: Arc::new(df),
                d2f: Arc::new(d2f),
            },
        }
    }

    /// `f` alone; derivatives come from finite differences.
    pub fn value_only<F>(name: impl Into<String>, interval: Interval, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            interval,
            family: WarpFamily::Custom,
            repr: Repr::ValueOnly(Arc::new(f)),
        }
    }

    pub fn constant(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(GeometryError::InvalidParameter(format!(
                "constant warping needs a > 0, got {a}"
            )));
        }
        let mut w = Self::analytic(
            format!("constant:{a}"),
            Interval::REAL_LINE,
            move |_| a,
            |_| 0.0,
            |_| 0.0,
        );
        w.family = WarpFamily::Constant { a };
        Ok(w)
    }

    /// `f(t) = a (t + b)`, on the half line where it is positive.
    pub fn linear(a: f64, b: f64) -> Result<Self> {
        if a == 0.0 || !a.is_finite() || !b.is_finite() {
            return Err(GeometryError::InvalidParameter(format!(
                "linear warping needs finite a != 0, got a = {a}, b = {b}"
            )));
        }
        let interval = if a > 0.0 {
            Interval::new(-b, f64::INFINITY)?
        } else {
            Interval::new(f64::NEG_INFINITY, -b)?
        };
        let mut w = Self::analytic(
            format!("linear:{a},{b}"),
            interval,
            move |t| a * (t + b),
            move |_| a,
            |_| 0.0,
        );
        w.family = WarpFamily::Linear { a, b };
        Ok(w)
    }

    /// `f(t) = t^m` on `(0, inf)`.
    pub fn power(m: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(GeometryError::InvalidParameter(format!("power exponent {m}")));
        }
        let mut w = Self::analytic(
            format!("power:{m}"),
            Interval::new(0.0, f64::INFINITY)?,
            move |t| t.powf(m),
            move |t| m * t.powf(m - 1.0),
            move |t| m * (m - 1.0) * t.powf(m - 2.0),
        );
        w.family = WarpFamily::Power { m };
        Ok(w)
    }

    /// `f(t) = e^t`.
    pub fn exp() -> Self {
        let mut w = Self::analytic("exp", Interval::REAL_LINE, f64::exp, f64::exp, f64::exp);
        w.family = WarpFamily::Exp;
        w
    }

    /// Monotone-cubic interpolant through `(t, f)` samples; the interval is
    /// the open hull of the abscissae.
    pub fn tabulated(name: impl Into<String>, ts: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if let Some(bad) = fs.iter().find(|v| !(**v > 0.0)) {
            return Err(GeometryError::InvalidParameter(format!(
                "tabulated warping has non-positive sample {bad}"
            )));
        }
        let table = MonotoneCubic::new(ts, fs)?;
        let (lo, hi) = table.range();
        Ok(Self {
            name: name.into(),
            interval: Interval::new(lo, hi)?,
            family: WarpFamily::Tabulated,
            repr: Repr::Tabulated(Arc::new(table)),
        })
    }

    /// Reads a two-column `t f` text table; `#` starts a comment, columns may
    /// be separated by whitespace or commas.
    pub fn load_table(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| GeometryError::Parse(format!("{}: {e}", path.display())))?;
        let (ts, fs) = parse_table(&text)?;
        Self::tabulated(format!("table:{}", path.display()), ts, fs)
    }

    /// Parses a registry string: `constant:a`, `linear:a,b`, `power:m`,
    /// `exp`, or `table:<path>`.
    pub fn from_registry(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (head, args) = match spec.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (spec, None),
        };
        let nums = |a: Option<&str>, n: usize| -> Result<Vec<f64>> {
            let a = a.ok_or_else(|| GeometryError::Parse(format!("'{spec}' needs {n} argument(s)")))?;
            let vals = a
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| GeometryError::Parse(format!("'{spec}': {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if vals.len() != n {
                return Err(GeometryError::Parse(format!("'{spec}' needs {n} argument(s)")));
            }
            Ok(vals)
        };
        match head {
            "constant" => Self::constant(nums(args, 1)?[0]),
            "linear" => {
                let v = nums(args, 2)?;
                Self::linear(v[0], v[1])
            }
            "power" => Self::power(nums(args, 1)?[0]),
            "exp" if args.is_none() => Ok(Self::exp()),
            "table" => {
                let path = args.ok_or_else(|| GeometryError::Parse("table: needs a path".into()))?;
                Self::load_table(Path::new(path))
            }
            _ => Err(GeometryError::Parse(format!("unknown warping '{spec}'"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn family(&self) -> WarpFamily {
        self.family
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        !matches!(self.repr, Repr::ValueOnly(_))
    }

    fn raw(&self, t: f64) -> f64 {
        match &self.repr {
            Repr::Analytic { f, .. } | Repr::ValueOnly(f) => f(t),
            Repr::Tabulated(table) => table.eval(t).0,
        }
    }

    fn checked(&self, t: f64) -> Result<f64> {
        self.interval.check(t)?;
        let value = self.raw(t);
        if !(value > 0.0) || !value.is_finite() {
            return Err(GeometryError::NonPositiveWarping { t, value });
        }
        Ok(value)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.checked(t)
    }

    pub fn values(&self, t: f64) -> Result<WarpValues> {
        let f = self.checked(t)?;
        let (df, d2f) = match &self.repr {
            Repr::Analytic { df, d2f, .. } => (df(t), d2f(t)),
            Repr::Tabulated(table) => {
                let (_, d1, d2) = table.eval(t);
                (d1, d2)
            }
            Repr::ValueOnly(_) => (
                numdiff::scalar_d1(|s| self.checked(s), t)?,
                numdiff::scalar_d2(|s| self.checked(s), t)?,
            ),
        };
        Ok(WarpValues { f, df, d2f })
    }

    /// Largest relative discrepancy between the supplied derivatives and
    /// central differences of `f` over `samples`. Scale is `max(1, |value|)`.
    pub fn derivative_discrepancy(&self, samples: &[f64]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &t in samples {
            let w = self.values(t)?;
            let fd1 = numdiff::scalar_d1(|s| self.checked(s), t)?;
            let fd2 = numdiff::scalar_d2(|s| self.checked(s), t)?;
            worst = worst
                .max((w.df - fd1).abs() / w.df.abs().max(1.0))
                .max((w.d2f - fd2).abs() / w.d2f.abs().max(1.0));
        }
        Ok(worst)
    }
}

/// Parses a two-column table of numbers; `#` starts a comment.
pub fn parse_table(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut ts = Vec::new();
    let mut fs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .collect();
        if cols.len() != 2 {
            return Err(GeometryError::Parse(format!(
                "line {}: expected two columns, got {}",
                lineno + 1,
                cols.len()
            )));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| GeometryError::Parse(format!("line {}: {e}", lineno + 1)))
        };
        ts.push(parse(cols[0])?);
        fs.push(parse(cols[1])?);
    }
    Ok((ts, fs))
}
