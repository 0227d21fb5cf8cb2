//! Decides which family of constant angle surfaces an immersion belongs to.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::REGULARITY_TOL;
use crate::error::{GeometryError, Result};
use crate::numdiff;
use crate::quadrature::{integrate_with, QuadratureOptions};
use crate::surface::{Grid, Immersion, Jet};

pub const MIN_GRID: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "NOT_CONSTANT_ANGLE")]
    NotConstantAngle,
    #[serde(rename = "TYPE_I")]
    TypeI,
    #[serde(rename = "TYPE_II")]
    TypeII,
    #[serde(rename = "TYPE_III")]
    TypeIII,
    /// Constant angle, not umbilical, but the recovered `alpha` depends on
    /// the distance along `T`.
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::NotConstantAngle => "NOT_CONSTANT_ANGLE",
            Verdict::TypeI => "TYPE_I",
            Verdict::TypeII => "TYPE_II",
            Verdict::TypeIII => "TYPE_III",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// Largest standard deviation of the measured angle still called constant.
    pub angle_std_tol: f64,
    /// Mean angle below which the surface is a slice.
    pub type_iii_tol: f64,
    /// Bound on `|k1 - k2| / max(1, |H|)` for umbilicity.
    pub umbilic_tol: f64,
    /// Bound on the derivative of the recovered `alpha` along `e1`.
    pub alpha_tol: f64,
    /// Lower limit of `int dtau / f`; `None` uses the generator default rule
    /// applied to the lowest sampled height.
    pub t_base: Option<f64>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            angle_std_tol: 1e-6,
            type_iii_tol: 1e-6,
            umbilic_tol: 1e-6,
            alpha_tol: 1e-4,
            t_base: None,
        }
    }
}

impl ClassifyOptions {
    /// Looser thresholds for immersions interpolated from sampled points.
    pub fn sampled() -> Self {
        Self {
            angle_std_tol: 1e-3,
            type_iii_tol: 1e-3,
            umbilic_tol: 1e-2,
            alpha_tol: 5e-2,
            t_base: None,
        }
    }
}

/// `alpha` recovered at one sample, indexed by the direction angle `v` of
/// the horizontal part of `-xi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaSample {
    pub u: f64,
    pub v: f64,
    pub v_normal: f64,
    pub alpha: f64,
    /// Derivative of the recovered `alpha` along `e1`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub grid: Grid,
    pub samples: usize,
    pub excluded: usize,
    pub theta_mean: f64,
    pub theta_std: f64,
    pub max_umbilic_gap: f64,
    pub t_base: Option<f64>,
    pub alpha_residual: Option<f64>,
    pub alpha: Vec<AlphaSample>,
}

struct PointData {
    u: f64,
    v: f64,
    theta: f64,
    gap: f64,
    e1: [f64; 2],
    t: f64,
}

/// Classifies `s` from its canonical-orientation geometry on `grid`.
///
/// Points where the immersion is singular or leaves `I` are skipped and
/// counted in `excluded`.
pub fn classify(s: &Immersion, grid: Grid, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    if grid.nu < MIN_GRID || grid.nv < MIN_GRID {
        return Err(GeometryError::GridTooSmall {
            nu: grid.nu,
            nv: grid.nv,
            min: MIN_GRID,
        });
    }
    let d = *s.domain();
    let evaluated = grid.map(&d, |u, v| -> Result<PointData> {
        let l = s.local(u, v)?;
        let flip = if l.cos < 0.0 { -1.0 } else { 1.0 };
        let theta = l.sin.atan2(flip * l.cos);
        let [k1, k2] = l.principal();
        let h = l.mean_curvature();
        let e1 = if l.sin > 0.0 {
            [l.t_coords[0] / l.sin, l.t_coords[1] / l.sin]
        } else {
            [0.0, 0.0]
        };
        Ok(PointData {
            u,
            v,
            theta,
            gap: (k2 - k1).abs() / h.abs().max(1.0),
            e1,
            t: l.jet.point[0],
        })
    });
    let mut points = Vec::with_capacity(evaluated.len());
    let mut excluded = 0;
    for r in evaluated {
        match r {
            Ok(p) => points.push(p),
            Err(
                GeometryError::DegenerateImmersion { .. }
                | GeometryError::Domain { .. }
                | GeometryError::NonPositiveWarping { .. },
            ) => excluded += 1,
            Err(e) => return Err(e),
        }
    }
    if points.is_empty() {
        return Err(GeometryError::InvalidParameter("no regular sample points".into()));
    }
    let n = points.len() as f64;
    let theta_mean = points.iter().map(|p| p.theta).sum::<f64>() / n;
    let theta_std = (points.iter().map(|p| (p.theta - theta_mean).powi(2)).sum::<f64>() / n).sqrt();
    let max_umbilic_gap = points.iter().map(|p| p.gap).fold(0.0, f64::max);

    let mut report = ClassificationReport {
        verdict: Verdict::NotConstantAngle,
        grid,
        samples: points.len(),
        excluded,
        theta_mean,
        theta_std,
        max_umbilic_gap,
        t_base: None,
        alpha_residual: None,
        alpha: Vec::new(),
    };
    if theta_std > opts.angle_std_tol {
        return Ok(report);
    }
    if theta_mean < opts.type_iii_tol {
        report.verdict = Verdict::TypeIII;
        return Ok(report);
    }
    if max_umbilic_gap < opts.umbilic_tol {
        report.verdict = Verdict::TypeII;
        return Ok(report);
    }

    let t_base = match opts.t_base {
        Some(t) => t,
        None => {
            let t_min = points.iter().map(|p| p.t).fold(f64::INFINITY, f64::min);
            let lo = s.space().warping().interval().lo;
            if lo.is_finite() {
                0.5 * (lo + t_min)
            } else {
                t_min - 1.0
            }
        }
    };
    report.t_base = Some(t_base);
    let cot = theta_mean.cos() / theta_mean.sin();
    let recover = AlphaRecovery {
        s,
        cot,
        t_base,
        quadrature: QuadratureOptions::default(),
    };
    let samples = points
        .iter()
        .map(|p| recover.sample(p.u, p.v, p.e1))
        .collect::<Vec<_>>();
    let mut alpha = Vec::with_capacity(samples.len());
    let mut worst: f64 = 0.0;
    for r in samples {
        match r {
            Ok(Some(a)) => {
                worst = worst.max(a.residual);
                alpha.push(a);
            }
            Ok(None) => {}
            Err(e) => return Err(e),
        }
    }
    report.alpha_residual = Some(worst);
    report.alpha = alpha;
    report.verdict = if report.alpha.is_empty() || worst > opts.alpha_tol {
        Verdict::Inconclusive
    } else {
        Verdict::TypeI
    };
    Ok(report)
}

struct AlphaRecovery<'a> {
    s: &'a Immersion,
    cot: f64,
    t_base: f64,
    quadrature: QuadratureOptions,
}

impl AlphaRecovery<'_> {
    /// `(v_normal, alpha)` at a parameter point: `B` is the signed radius of
    /// curvature of the horizontal level curve through the point (positive
    /// when the centre lies in the direction of the horizontal part of `xi`),
    /// and `alpha = B - cot(theta) F(t)`.
    fn alpha_at(&self, u: f64, v: f64) -> Result<Option<(f64, f64)>> {
        let l = self.s.raw_local(u, v)?;
        let flip = if l.cos < 0.0 { -1.0 } else { 1.0 };
        let w = [flip * l.normal[1], flip * l.normal[2]];
        let w_len = w[0].hypot(w[1]);
        let Some(kappa) = level_curvature(&l.jet) else {
            return Ok(None);
        };
        if w_len < REGULARITY_TOL {
            return Ok(None);
        }
        let w = [w[0] / w_len, w[1] / w_len];
        let k = kappa[0] * w[0] + kappa[1] * w[1];
        if k.abs() < REGULARITY_TOL {
            return Ok(None);
        }
        let warping = self.s.space().warping();
        let t = l.jet.point[0];
        let big_f = integrate_with(|tau| Ok(1.0 / warping.eval(tau)?), self.t_base, t, &self.quadrature)?;
        Ok(Some(((-w[1]).atan2(-w[0]), 1.0 / k - self.cot * big_f)))
    }

    fn sample(&self, u: f64, v: f64, e1: [f64; 2]) -> Result<Option<AlphaSample>> {
        let Some((v_normal, alpha)) = self.alpha_at(u, v)? else {
            return Ok(None);
        };
        let along = |s: f64| -> Result<f64> {
            match self.alpha_at(u + s * e1[0], v + s * e1[1])? {
                Some((_, a)) => Ok(a),
                None => Err(GeometryError::DegenerateImmersion { u, v }),
            }
        };
        let residual = match numdiff::scalar_d1(along, 0.0) {
            Ok(d) => d.abs(),
            Err(GeometryError::DegenerateImmersion { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        Ok(Some(AlphaSample {
            u,
            v,
            v_normal,
            alpha,
            residual,
        }))
    }
}

/// Euclidean curvature vector, in the `(x, y)` plane, of the curve `t = const`
/// through the jet's base point. `None` where `t` is critical.
fn level_curvature(j: &Jet) -> Option<[f64; 2]> {
    let (tu, tv) = (j.du[0], j.dv[0]);
    if tu.hypot(tv) < REGULARITY_TOL {
        return None;
    }
    let d = [tv, -tu];
    let dd = [d[0] * j.duv[0] + d[1] * j.dvv[0], -(d[0] * j.duu[0] + d[1] * j.duv[0])];
    let mut c1 = [0.0; 2];
    let mut c2 = [0.0; 2];
    for k in 0..2 {
        let m = k + 1;
        c1[k] = j.du[m] * d[0] + j.dv[m] * d[1];
        c2[k] = j.duu[m] * d[0] * d[0]
            + 2.0 * j.duv[m] * d[0] * d[1]
            + j.dvv[m] * d[1] * d[1]
            + j.du[m] * dd[0]
            + j.dv[m] * dd[1];
    }
    let len2 = c1[0] * c1[0] + c1[1] * c1[1];
    if len2 < REGULARITY_TOL * REGULARITY_TOL {
        return None;
    }
    let along = (c2[0] * c1[0] + c2[1] * c1[1]) / len2;
    Some([(c2[0] - along * c1[0]) / len2, (c2[1] - along * c1[1]) / len2])
}
