//! Immersed surfaces `(u, v) -> (t, x, y)` in the warped product and their
//! pointwise geometry.
//!
//! The orientation is fixed everywhere by `xi = (iota_u x_f iota_v) / |.|`
//! and the shape operator follows the Weingarten convention `D_X xi = -A X`.

mod expression;
mod geometry;
mod intrinsic;
pub mod mat2;
mod sampled;

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use geometry::{AdaptedFrame, SurfaceGeometry};
pub use intrinsic::{CurvatureOracles, FrameConnection};
pub use mat2::{Mat2, Vec2};

use crate::error::{GeometryError, Result};
use crate::numdiff;
use crate::warped_space::{AmbientPoint, WarpFamily, WarpedSpace};

/// Closed parameter rectangle `[u0, u1] x [v0, v1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamDomain {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl ParamDomain {
    pub fn new(u0: f64, u1: f64, v0: f64, v1: f64) -> Result<Self> {
        if !(u0 < u1) || !(v0 < v1) || ![u0, u1, v0, v1].iter().all(|x| x.is_finite()) {
            return Err(GeometryError::InvalidParameter(format!(
                "empty parameter domain [{u0}, {u1}] x [{v0}, {v1}]"
            )));
        }
        Ok(Self { u0, u1, v0, v1 })
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        u >= self.u0 && u <= self.u1 && v >= self.v0 && v <= self.v1
    }

    /// True when every finite-difference stencil centred at `(u, v)` stays
    /// inside the rectangle.
    pub fn is_interior(&self, u: f64, v: f64) -> bool {
        let mu = numdiff::footprint(u);
        let mv = numdiff::footprint(v);
        u - mu >= self.u0 && u + mu <= self.u1 && v - mv >= self.v0 && v + mv <= self.v1
    }
}

/// Cell-centred sample grid: `nu x nv` points at the centres of a uniform
/// partition of the parameter rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub nu: usize,
    pub nv: usize,
}

impl Grid {
    pub fn new(nu: usize, nv: usize) -> Result<Self> {
        if nu < 2 || nv < 2 {
            return Err(GeometryError::GridTooSmall { nu, nv, min: 2 });
        }
        Ok(Self { nu, nv })
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(u, v)` of every sample in row-major order (`v` fastest).
    pub fn points(&self, d: &ParamDomain) -> Vec<(f64, f64)> {
        let du = (d.u1 - d.u0) / self.nu as f64;
        let dv = (d.v1 - d.v0) / self.nv as f64;
        (0..self.nu)
            .flat_map(|i| (0..self.nv).map(move |j| (d.u0 + (i as f64 + 0.5) * du, d.v0 + (j as f64 + 0.5) * dv)))
            .collect()
    }

    /// Evaluates `f` at every sample point in parallel; output order matches
    /// [`Grid::points`] regardless of thread count.
    pub fn map<T, F>(&self, d: &ParamDomain, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(f64, f64) -> T + Sync,
    {
        self.points(d).par_iter().map(|&(u, v)| f(u, v)).collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.nu, self.nv)
    }
}

/// Position and first/second parameter derivatives of an immersion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub point: [f64; 3],
    pub du: [f64; 3],
    pub dv: [f64; 3],
    pub duu: [f64; 3],
    pub duv: [f64; 3],
    pub dvv: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference,
}

pub type MapFn = Arc<dyn Fn(f64, f64) -> Result<[f64; 3]> + Send + Sync>;
pub type JetFn = Arc<dyn Fn(f64, f64) -> Result<Jet> + Send + Sync>;

/// A map from a parameter rectangle into `I x_f E^2`.
#[derive(Clone)]
pub struct Immersion {
    space: WarpedSpace,
    domain: ParamDomain,
    map: MapFn,
    jet: Option<JetFn>,
    mode: DerivativeMode,
    label: String,
}

impl fmt::Debug for Immersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Immersion")
            .field("label", &self.label)
            .field("warping", self.space.warping())
            .field("domain", &self.domain)
            .field("mode", &self.mode)
            .finish()
    }
}

impl Immersion {
    /// An immersion whose derivatives are taken by finite differences.
    pub fn new<F>(space: WarpedSpace, domain: ParamDomain, map: F) -> Self
    where
        F: Fn(f64, f64) -> Result<[f64; 3]> + Send + Sync + 'static,
    {
        Self {
            space,
            domain,
            map: Arc::new(map),
            jet: None,
            mode: DerivativeMode::FiniteDifference,
            label: "immersion".into(),
        }
    }

    /// Attaches closed-form first and second derivatives.
    pub fn with_jet<J>(mut self, jet: J) -> Self
    where
        J: Fn(f64, f64) -> Result<Jet> + Send + Sync + 'static,
    {
        self.jet = Some(Arc::new(jet));
        self.mode = DerivativeMode::Analytic;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Same map, derivatives forced to finite differences.
    pub fn finite_difference(&self) -> Self {
        Self {
            mode: DerivativeMode::FiniteDifference,
            ..self.clone()
        }
    }

    pub fn with_domain(&self, domain: ParamDomain) -> Self {
        Self { domain, ..self.clone() }
    }

    pub fn space(&self) -> &WarpedSpace {
        &self.space
    }

    pub fn domain(&self) -> &ParamDomain {
        &self.domain
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_exp_warped(&self) -> bool {
        matches!(self.space.warping().family(), WarpFamily::Exp)
    }

    fn check_inside(&self, u: f64, v: f64) -> Result<()> {
        if self.domain.contains(u, v) {
            Ok(())
        } else {
            Err(GeometryError::OutsideParameterDomain { u, v })
        }
    }

    pub(crate) fn check_interior(&self, u: f64, v: f64) -> Result<()> {
        self.check_inside(u, v)?;
        if self.domain.is_interior(u, v) {
            Ok(())
        } else {
            Err(GeometryError::BoundaryMargin { u, v })
        }
    }

    pub fn point(&self, u: f64, v: f64) -> Result<AmbientPoint> {
        self.check_inside(u, v)?;
        let c = (self.map)(u, v)?;
        self.space.warping().interval().check(c[0])?;
        Ok(AmbientPoint::from_coords(c))
    }

    pub fn jet(&self, u: f64, v: f64) -> Result<Jet> {
        self.check_inside(u, v)?;
        self.raw_jet(u, v)
    }

    /// Jet without the parameter-domain check; stencils may step slightly
    /// outside the rectangle.
    pub(crate) fn raw_jet(&self, u: f64, v: f64) -> Result<Jet> {
        let jet = match (&self.jet, self.mode) {
            (Some(j), DerivativeMode::Analytic) => j(u, v)?,
            _ => {
                let p = numdiff::partials2(|a, b| (self.map)(a, b), u, v)?;
                Jet {
                    point: p.value,
                    du: p.du,
                    dv: p.dv,
                    duu: p.duu,
                    duv: p.duv,
                    dvv: p.dvv,
                }
            }
        };
        self.space.warping().interval().check(jet.point[0])?;
        Ok(jet)
    }
}

/// Image of a point of `I x_exp E^2` in the upper half-space model:
/// `(t, x, y) -> (x, y, e^{-t})`.
pub fn to_half_space(space: &WarpedSpace, p: &AmbientPoint) -> Result<[f64; 3]> {
    if !matches!(space.warping().family(), WarpFamily::Exp) {
        return Err(GeometryError::ModelMismatch(format!(
            "half-space model needs warping 'exp', got '{}'",
            space.warping().name()
        )));
    }
    space.warping().interval().check(p.t)?;
    Ok([p.x, p.y, (-p.t).exp()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warped_space::WarpingFunction;

    #[test]
    fn grid_points_are_cell_centred() {
        let d = ParamDomain::new(0.0, 1.0, 0.0, 2.0).unwrap();
        let pts = Grid::new(2, 4).unwrap().points(&d);
        assert_eq!(pts.len(), 8);
        assert_eq!(pts[0], (0.25, 0.25));
        assert_eq!(pts[7], (0.75, 1.75));
        assert!(Grid::new(1, 5).is_err());
    }

    #[test]
    fn half_space_examples() {
        let hyp = WarpedSpace::new(WarpingFunction::exp());
        assert_eq!(
            to_half_space(&hyp, &AmbientPoint::new(0.0, 2.0, -1.0)).unwrap(),
            [2.0, -1.0, 1.0]
        );
        let mut prev = f64::INFINITY;
        for k in 0..50 {
            let z = to_half_space(&hyp, &AmbientPoint::new(k as f64, 0.0, 0.0)).unwrap()[2];
            assert!(z > 0.0 && z < prev);
            prev = z;
        }
        let flat = WarpedSpace::new(WarpingFunction::constant(1.0).unwrap());
        assert!(matches!(
            to_half_space(&flat, &AmbientPoint::new(0.0, 0.0, 0.0)),
            Err(GeometryError::ModelMismatch(_))
        ));
    }

    #[test]
    fn jet_outside_domain_is_rejected() {
        let space = WarpedSpace::new(WarpingFunction::exp());
        let s = Immersion::new(space, ParamDomain::new(0.0, 1.0, 0.0, 1.0).unwrap(), |u, v| {
            Ok([0.0, u, v])
        });
        assert!(s.jet(0.5, 0.5).is_ok());
        assert!(matches!(
            s.jet(1.5, 0.5),
            Err(GeometryError::OutsideParameterDomain { .. })
        ));
    }
}
