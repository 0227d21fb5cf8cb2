use serde::Serialize;

use super::mat2::{self, Mat2, Vec2};
use super::{Immersion, Jet};
use crate::error::{GeometryError, Result};
use crate::warped_space::{add3, cross_components, AmbientPoint, AmbientVector, WarpValues};

/// Relative threshold on `|iota_u x_f iota_v| / (|iota_u| |iota_v|)`.
pub const REGULARITY_TOL: f64 = 1e-10;
/// Below this `|T|` the adapted frame is undefined.
pub const ANGLE_DEGENERATE_TOL: f64 = 1e-8;

/// Everything computable from the 2-jet at a single point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Local {
    pub jet: Jet,
    pub warp: WarpValues,
    pub first: Mat2,
    pub normal: [f64; 3],
    pub cos: f64,
    /// `|T|`, the length of the tangential part of `d/dt`.
    pub sin: f64,
    /// Coordinates of `T` in the basis `(d_u, d_v)`.
    pub t_coords: Vec2,
    pub shape: Mat2,
}

impl Local {
    pub fn base(&self) -> AmbientPoint {
        AmbientPoint::from_coords(self.jet.point)
    }

    pub fn log_d1(&self) -> f64 {
        self.warp.log_d1()
    }

    pub fn log_d2(&self) -> f64 {
        self.warp.log_d2()
    }

    /// Coordinates `(a, b)` of the tangent vector `a iota_u + b iota_v`.
    pub fn ambient(&self, c: Vec2) -> [f64; 3] {
        let j = &self.jet;
        [0, 1, 2].map(|k| c[0] * j.du[k] + c[1] * j.dv[k])
    }

    /// Unit vectors `(e1, e2)` in coordinates: `e1 = T/|T|`, `e2` its
    /// positive rotation with respect to `(d_u, d_v)`.
    pub fn frame_coords(&self) -> Result<(Vec2, Vec2)> {
        if self.sin < ANGLE_DEGENERATE_TOL {
            return Err(GeometryError::AngleDegenerate);
        }
        let e1 = mat2::scale(1.0 / self.sin, self.t_coords);
        let g = &self.first;
        let root = mat2::det(g).sqrt();
        let e2 = [
            -(g[0][1] * e1[0] + g[1][1] * e1[1]) / root,
            (g[0][0] * e1[0] + g[0][1] * e1[1]) / root,
        ];
        Ok((e1, e2))
    }

    pub fn mean_curvature(&self) -> f64 {
        0.5 * mat2::trace(&self.shape)
    }

    pub fn principal(&self) -> [f64; 2] {
        let h = self.mean_curvature();
        let a = &self.shape;
        // (k2 - k1)^2 = (a - d)^2 + 4 b c avoids cancellation in H^2 - det A
        let gap2 = (a[0][0] - a[1][1]).powi(2) + 4.0 * a[0][1] * a[1][0];
        let disc = 0.5 * gap2.max(0.0).sqrt();
        [h - disc, h + disc]
    }
}

impl Immersion {
    pub(crate) fn local_from_jet(&self, u: f64, v: f64, jet: Jet) -> Result<Local> {
        let t = jet.point[0];
        let warp = self.space.warping().values(t)?;
        let f2 = warp.f * warp.f;
        let g = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + f2 * (a[1] * b[1] + a[2] * b[2]);
        let first = [
            [g(jet.du, jet.du), g(jet.du, jet.dv)],
            [g(jet.dv, jet.du), g(jet.dv, jet.dv)],
        ];
        let n = cross_components(warp.f, jet.du, jet.dv);
        let n_len = g(n, n).max(0.0).sqrt();
        let scale = (first[0][0] * first[1][1]).sqrt();
        if !(n_len > REGULARITY_TOL * scale) || !n_len.is_finite() {
            return Err(GeometryError::DegenerateImmersion { u, v });
        }
        let normal = n.map(|c| c / n_len);
        let cos = normal[0];
        let inv = mat2::inverse(&first);
        let grad_h = [jet.du[0], jet.dv[0]];
        let t_coords = mat2::apply(&inv, grad_h);
        let sin = (t_coords[0] * grad_h[0] + t_coords[1] * grad_h[1]).max(0.0).sqrt();

        let gamma = self.space.christoffel(t)?;
        let second_entry = |dd: [f64; 3], a: [f64; 3], b: [f64; 3]| g(add3(dd, gamma.contract(a, b)), normal);
        let l = second_entry(jet.duu, jet.du, jet.du);
        let m = second_entry(jet.duv, jet.du, jet.dv);
        let nn = second_entry(jet.dvv, jet.dv, jet.dv);
        let second = [[l, m], [m, nn]];
        let shape = mat2::mul(&inv, &second);
        Ok(Local {
            jet,
            warp,
            first,
            normal,
            cos,
            sin,
            t_coords,
            shape,
        })
    }

    /// Local data without the parameter-domain check.
    pub(crate) fn raw_local(&self, u: f64, v: f64) -> Result<Local> {
        let jet = self.raw_jet(u, v)?;
        self.local_from_jet(u, v, jet)
    }

    pub(crate) fn local(&self, u: f64, v: f64) -> Result<Local> {
        let jet = self.jet(u, v)?;
        self.local_from_jet(u, v, jet)
    }

    /// `[[E, F], [F, G]]` with `E = g(iota_u, iota_u)` etc.
    pub fn first_fundamental_form(&self, u: f64, v: f64) -> Result<Mat2> {
        Ok(self.local(u, v)?.first)
    }

    pub fn unit_normal(&self, u: f64, v: f64) -> Result<AmbientVector> {
        let l = self.local(u, v)?;
        Ok(AmbientVector::from_components(l.base(), l.normal))
    }

    /// Angle in `[0, pi]` between `d/dt` and the unit normal.
    pub fn angle(&self, u: f64, v: f64) -> Result<f64> {
        let l = self.local(u, v)?;
        Ok(l.sin.atan2(l.cos))
    }

    /// Shape operator in the basis `(d_u, d_v)`: `A = I^{-1} II`.
    pub fn shape_operator(&self, u: f64, v: f64) -> Result<Mat2> {
        Ok(self.local(u, v)?.shape)
    }

    pub fn adapted_frame(&self, u: f64, v: f64) -> Result<AdaptedFrame> {
        AdaptedFrame::from_local(&self.local(u, v)?)
    }

    /// Full pointwise report. The intrinsic Gauss curvature is filled in
    /// only where the finite-difference stencil fits inside the domain.
    pub fn geometry(&self, u: f64, v: f64) -> Result<SurfaceGeometry> {
        let l = self.local(u, v)?;
        let frame = AdaptedFrame::from_local(&l).ok();
        let gauss_curvature = if self.domain.is_interior(u, v) {
            Some(self.gauss_curvature_intrinsic(u, v)?)
        } else {
            None
        };
        let base = l.base();
        let t_vec = l.ambient(l.t_coords);
        Ok(SurfaceGeometry {
            u,
            v,
            point: base,
            first_form: l.first,
            normal: AmbientVector::from_components(base, l.normal),
            cos_theta: l.cos,
            theta: l.sin.atan2(l.cos),
            tangent_t: AmbientVector::from_components(base, t_vec),
            t_coords: l.t_coords,
            frame,
            shape: l.shape,
            principal: l.principal(),
            mean_curvature: l.mean_curvature(),
            extrinsic_curvature: mat2::det(&l.shape),
            gauss_curvature,
        })
    }
}

/// Orthonormal frame `{e1, e2}` with `e1 = T / |T|`, plus the shape-operator
/// entries along it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdaptedFrame {
    pub e1: AmbientVector,
    pub e2: AmbientVector,
    pub tangent_t: AmbientVector,
    pub theta: f64,
    pub e1_coords: Vec2,
    pub e2_coords: Vec2,
    /// `g(A e1, e1)`
    pub lambda_e1: f64,
    /// `g(A e2, e2)`
    pub lambda_e2: f64,
    /// `g(A e1, e2)`; zero on constant angle surfaces.
    pub off_diagonal: f64,
}

impl AdaptedFrame {
    pub(crate) fn from_local(l: &Local) -> Result<Self> {
        let (e1c, e2c) = l.frame_coords()?;
        let base = l.base();
        let a = |c: Vec2| mat2::apply(&l.shape, c);
        Ok(Self {
            e1: AmbientVector::from_components(base, l.ambient(e1c)),
            e2: AmbientVector::from_components(base, l.ambient(e2c)),
            tangent_t: AmbientVector::from_components(base, l.ambient(l.t_coords)),
            theta: l.sin.atan2(l.cos),
            e1_coords: e1c,
            e2_coords: e2c,
            lambda_e1: mat2::inner(&l.first, a(e1c), e1c),
            lambda_e2: mat2::inner(&l.first, a(e2c), e2c),
            off_diagonal: mat2::inner(&l.first, a(e1c), e2c),
        })
    }

    fn flipped(&self) -> Self {
        Self {
            e2: self.e2.scaled(-1.0),
            e2_coords: mat2::scale(-1.0, self.e2_coords),
            theta: std::f64::consts::PI - self.theta,
            lambda_e1: -self.lambda_e1,
            lambda_e2: -self.lambda_e2,
            off_diagonal: self.off_diagonal,
            ..*self
        }
    }
}

/// Pointwise geometry of an immersion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceGeometry {
    pub u: f64,
    pub v: f64,
    pub point: AmbientPoint,
    pub first_form: Mat2,
    pub normal: AmbientVector,
    pub cos_theta: f64,
    pub theta: f64,
    pub tangent_t: AmbientVector,
    pub t_coords: Vec2,
    pub frame: Option<AdaptedFrame>,
    pub shape: Mat2,
    /// Eigenvalues of the shape operator, ascending.
    pub principal: [f64; 2],
    pub mean_curvature: f64,
    /// `det A`
    pub extrinsic_curvature: f64,
    /// Gauss curvature of the induced metric (Brioschi formula).
    pub gauss_curvature: Option<f64>,
}

impl SurfaceGeometry {
    /// Flips the normal when `cos(theta) < 0`, so that `theta` lies in
    /// `[0, pi/2]`.
    pub fn canonical(self) -> Self {
        if self.cos_theta >= 0.0 {
            return self;
        }
        let shape = self.shape.map(|row| row.map(|x| -x));
        Self {
            normal: self.normal.scaled(-1.0),
            cos_theta: -self.cos_theta,
            theta: std::f64::consts::PI - self.theta,
            frame: self.frame.map(|f| f.flipped()),
            shape,
            principal: [-self.principal[1], -self.principal[0]],
            mean_curvature: -self.mean_curvature,
            ..self
        }
    }
}
