//! The ambient manifold `I x_f E^2` with metric `dt^2 + f(t)^2 (dx^2 + dy^2)`.
//!
//! Coordinates are ordered `(t, x, y)`; index 0 is the `t` direction.

mod warping;

pub use warping::{parse_table, Interval, ScalarFn, WarpFamily, WarpValues, WarpingFunction, ENDPOINT_MARGIN};

use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::numdiff;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmbientPoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

impl AmbientPoint {
    pub fn new(t: f64, x: f64, y: f64) -> Self {
        Self { t, x, y }
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.t, self.x, self.y]
    }

    pub fn from_coords(c: [f64; 3]) -> Self {
        Self::new(c[0], c[1], c[2])
    }
}

/// A tangent vector `dt d/dt + dx d/dx + dy d/dy` attached to `base`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmbientVector {
    pub base: AmbientPoint,
    pub dt: f64,
    pub dx: f64,
    pub dy: f64,
}

impl AmbientVector {
    pub fn new(base: AmbientPoint, dt: f64, dx: f64, dy: f64) -> Self {
        Self { base, dt, dx, dy }
    }

    pub fn from_components(base: AmbientPoint, c: [f64; 3]) -> Self {
        Self::new(base, c[0], c[1], c[2])
    }

    pub fn components(&self) -> [f64; 3] {
        [self.dt, self.dx, self.dy]
    }

    /// The coordinate field `d/dt` at `base`.
    pub fn d_t(base: AmbientPoint) -> Self {
        Self::new(base, 1.0, 0.0, 0.0)
    }

    pub fn d_x(base: AmbientPoint) -> Self {
        Self::new(base, 0.0, 1.0, 0.0)
    }

    pub fn d_y(base: AmbientPoint) -> Self {
        Self::new(base, 0.0, 0.0, 1.0)
    }

    pub fn zero(base: AmbientPoint) -> Self {
        Self::new(base, 0.0, 0.0, 0.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_components(self.base, self.components().map(|c| c * s))
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }

    /// Split into the `d/dt` coefficient and the horizontal part.
    fn split(&self) -> (f64, [f64; 3]) {
        (self.dt, [0.0, self.dx, self.dy])
    }
}

fn same_base(vs: &[&AmbientVector]) -> Result<AmbientPoint> {
    let base = vs[0].base;
    if vs.iter().any(|v| v.base != base) {
        return Err(GeometryError::BaseMismatch);
    }
    Ok(base)
}

pub(crate) fn add3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn scale3(s: f64, a: [f64; 3]) -> [f64; 3] {
    [s * a[0], s * a[1], s * a[2]]
}

/// Christoffel symbols of the warped metric at one height `t`. Only
/// `G^t_xx = G^t_yy = -f f'` and `G^x_tx = G^y_ty = f'/f` (with their
/// symmetric partners) are non-zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffel {
    /// `-f f'`
    pub t_hh: f64,
    /// `f'/f`
    pub h_th: f64,
}

impl Christoffel {
    /// `G^k_ij a^i b^j`.
    pub fn contract(&self, a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [
            self.t_hh * (a[1] * b[1] + a[2] * b[2]),
            self.h_th * (a[0] * b[1] + a[1] * b[0]),
            self.h_th * (a[0] * b[2] + a[2] * b[0]),
        ]
    }

    /// Full table `gamma[k][i][j]`.
    pub fn table(&self) -> [[[f64; 3]; 3]; 3] {
        let mut g = [[[0.0; 3]; 3]; 3];
        g[0][1][1] = self.t_hh;
        g[0][2][2] = self.t_hh;
        g[1][0][1] = self.h_th;
        g[1][1][0] = self.h_th;
        g[2][0][2] = self.h_th;
        g[2][2][0] = self.h_th;
        g
    }
}

/// The warped product `I x_f E^2`.
#[derive(Debug, Clone)]
pub struct WarpedSpace {
    warping: WarpingFunction,
}

impl WarpedSpace {
    pub fn new(warping: WarpingFunction) -> Self {
        Self { warping }
    }

    pub fn warping(&self) -> &WarpingFunction {
        &self.warping
    }

    /// `g(a, b)` at height `t` for raw component triples.
    pub fn metric_at(&self, t: f64, a: [f64; 3], b: [f64; 3]) -> Result<f64> {
        let f = self.warping.eval(t)?;
        Ok(a[0] * b[0] + f * f * (a[1] * b[1] + a[2] * b[2]))
    }

    pub fn metric(&self, a: &AmbientVector, b: &AmbientVector) -> Result<f64> {
        let base = same_base(&[a, b])?;
        self.metric_at(base.t, a.components(), b.components())
    }

    pub fn norm(&self, a: &AmbientVector) -> Result<f64> {
        Ok(self.metric(a, a)?.max(0.0).sqrt())
    }

    pub fn christoffel(&self, t: f64) -> Result<Christoffel> {
        let w = self.warping.values(t)?;
        Ok(Christoffel {
            t_hh: -w.f * w.df,
            h_th: w.log_d1(),
        })
    }

    /// `t`-derivatives of the two Christoffel coefficients.
    fn christoffel_dt(&self, t: f64) -> Result<Christoffel> {
        let w = self.warping.values(t)?;
        Ok(Christoffel {
            t_hh: -(w.df * w.df + w.f * w.d2f),
            h_th: w.log_d2(),
        })
    }

    /// `D_direction field`, where `field` maps points to components in the
    /// coordinate frame. The directional derivative of the components is
    /// taken by central differences along the straight coordinate line.
    pub fn covariant_derivative<F>(&self, field: F, direction: &AmbientVector) -> Result<AmbientVector>
    where
        F: Fn(&AmbientPoint) -> Result<[f64; 3]>,
    {
        let p = direction.base;
        let dir = direction.components();
        let scale = dir.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let value = field(&p)?;
        let gamma = self.christoffel(p.t)?;
        let mut out = gamma.contract(dir, value);
        if scale > 0.0 {
            let along = |s: f64| {
                let q = AmbientPoint::from_coords(add3(p.coords(), scale3(s / scale, dir)));
                field(&q)
            };
            let h = numdiff::first_step(p.t.abs().max(p.x.abs()).max(p.y.abs()));
            let deriv = numdiff::d1(along, 0.0, h)?;
            out = add3(out, scale3(scale, deriv));
        }
        Ok(AmbientVector::from_components(p, out))
    }

    /// `R(U, V) W` from the split of each argument into its `d/dt` and
    /// horizontal parts, using the closed-form curvature of the warped product.
    pub fn curvature(&self, u: &AmbientVector, v: &AmbientVector, w: &AmbientVector) -> Result<AmbientVector> {
        let base = same_base(&[u, v, w])?;
        let wv = self.warping.values(base.t)?;
        let g = |a: [f64; 3], b: [f64; 3]| wv.f * wv.f * (a[1] * b[1] + a[2] * b[2]);
        let ratio2 = wv.d2f / wv.f;
        let lsq = wv.log_d1() * wv.log_d1();
        let (u0, uh) = u.split();
        let (v0, vh) = v.split();
        let (w0, wh) = w.split();
        let dt = [1.0, 0.0, 0.0];

        // R(Uh, Vh) Wh
        let mut out = sub3(scale3(-lsq * g(vh, wh), uh), scale3(-lsq * g(uh, wh), vh));
        // R(Uh, dt) W  (times v0)
        let r_uh_dt_w = add3(scale3(ratio2 * g(uh, wh), dt), scale3(-ratio2 * w0, uh));
        out = add3(out, scale3(v0, r_uh_dt_w));
        // R(dt, Vh) W = -R(Vh, dt) W  (times u0)
        let r_vh_dt_w = add3(scale3(ratio2 * g(vh, wh), dt), scale3(-ratio2 * w0, vh));
        out = sub3(out, scale3(u0, r_vh_dt_w));
        Ok(AmbientVector::from_components(base, out))
    }

    /// `R(U, V) W` assembled from Christoffel symbols and their derivatives:
    /// `R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik`.
    pub fn curvature_from_christoffel(
        &self,
        u: &AmbientVector,
        v: &AmbientVector,
        w: &AmbientVector,
    ) -> Result<AmbientVector> {
        let base = same_base(&[u, v, w])?;
        let gam = self.christoffel(base.t)?.table();
        let dgam = self.christoffel_dt(base.t)?.table();
        // only d_t is non-zero
        let d = |i: usize, l: usize, j: usize, k: usize| if i == 0 { dgam[l][j][k] } else { 0.0 };
        let (uc, vc, wc) = (u.components(), v.components(), w.components());
        let mut out = [0.0; 3];
        for (l, o) in out.iter_mut().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        let coeff = uc[i] * vc[j] * wc[k];
                        if coeff == 0.0 {
                            continue;
                        }
                        let mut r = d(i, l, j, k) - d(j, l, i, k);
                        for m in 0..3 {
                            r += gam[l][i][m] * gam[m][j][k] - gam[l][j][m] * gam[m][i][k];
                        }
                        *o += coeff * r;
                    }
                }
            }
        }
        Ok(AmbientVector::from_components(base, out))
    }

    /// Sectional curvature of the plane spanned by `a` and `b`.
    pub fn sectional_curvature(&self, p: &AmbientPoint, a: &AmbientVector, b: &AmbientVector) -> Result<f64> {
        if a.base != *p {
            return Err(GeometryError::BaseMismatch);
        }
        same_base(&[a, b])?;
        let aa = self.metric(a, a)?;
        let bb = self.metric(b, b)?;
        let ab = self.metric(a, b)?;
        let area2 = aa * bb - ab * ab;
        if area2 <= 1e-14 * (aa * bb).max(f64::MIN_POSITIVE) {
            return Err(GeometryError::DegeneratePlane(area2));
        }
        let r = self.curvature(a, b, b)?;
        Ok(self.metric(&r, a)? / area2)
    }

    /// `a x_f b = (f^2 (a2 b3 - a3 b2), a3 b1 - a1 b3, a1 b2 - a2 b1)`, the
    /// cross product of the warped metric.
    pub fn warped_cross(&self, a: &AmbientVector, b: &AmbientVector) -> Result<AmbientVector> {
        let base = same_base(&[a, b])?;
        let f = self.warping.eval(base.t)?;
        Ok(AmbientVector::from_components(
            base,
            cross_components(f, a.components(), b.components()),
        ))
    }
}

pub(crate) fn cross_components(f: f64, a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        f * f * (a[1] * b[2] - a[2] * b[1]),
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        a.iter().zip(&b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn metric_examples() {
        let flat = WarpedSpace::new(WarpingFunction::constant(1.0).unwrap());
        let p = AmbientPoint::new(0.3, -1.0, 2.0);
        assert_eq!(
            flat.metric(&AmbientVector::d_t(p), &AmbientVector::d_t(p)).unwrap(),
            1.0
        );

        let hyp = WarpedSpace::new(WarpingFunction::exp());
        let q = AmbientPoint::new(1.0, 0.0, 0.0);
        let e2 = hyp.metric(&AmbientVector::d_x(q), &AmbientVector::d_x(q)).unwrap();
        assert!((e2 - 1f64.exp().powi(2)).abs() < 1e-14);

        let lin = WarpedSpace::new(WarpingFunction::linear(1.0, 0.0).unwrap());
        let r = AmbientPoint::new(2.0, 0.0, 0.0);
        assert_eq!(lin.metric(&AmbientVector::d_x(r), &AmbientVector::d_y(r)).unwrap(), 0.0);
    }

    #[test]
    fn metric_rejects_mismatched_bases() {
        let s = WarpedSpace::new(WarpingFunction::exp());
        let a = AmbientVector::d_x(AmbientPoint::new(0.0, 0.0, 0.0));
        let b = AmbientVector::d_x(AmbientPoint::new(0.0, 1.0, 0.0));
        assert_eq!(s.metric(&a, &b), Err(GeometryError::BaseMismatch));
        let pow = WarpedSpace::new(WarpingFunction::power(0.5).unwrap());
        let bad = AmbientVector::d_x(AmbientPoint::new(-1.0, 0.0, 0.0));
        assert!(matches!(pow.metric(&bad, &bad), Err(GeometryError::Domain { .. })));
    }

    #[test]
    fn covariant_derivative_examples() {
        let flat = WarpedSpace::new(WarpingFunction::constant(1.0).unwrap());
        let p = AmbientPoint::new(0.0, 0.0, 0.0);
        let r = flat
            .covariant_derivative(|_| Ok([0.0, 1.0, 0.0]), &AmbientVector::d_t(p))
            .unwrap();
        assert_eq!(r.components(), [0.0; 3]);

        let hyp = WarpedSpace::new(WarpingFunction::exp());
        let r = hyp
            .covariant_derivative(|_| Ok([1.0, 0.0, 0.0]), &AmbientVector::d_x(p))
            .unwrap();
        assert!(close(r.components(), [0.0, 1.0, 0.0], 1e-14));
        let r = hyp
            .covariant_derivative(|_| Ok([0.0, 1.0, 0.0]), &AmbientVector::d_x(p))
            .unwrap();
        assert!(close(r.components(), [-1.0, 0.0, 0.0], 1e-14));
        let r = hyp
            .covariant_derivative(|_| Ok([1.0, 0.0, 0.0]), &AmbientVector::d_t(p))
            .unwrap();
        assert!(close(r.components(), [0.0; 3], 1e-14));
    }

    #[test]
    fn curvature_examples() {
        let flat = WarpedSpace::new(WarpingFunction::constant(1.0).unwrap());
        let p = AmbientPoint::new(0.5, 1.0, 2.0);
        let u = AmbientVector::new(p, 1.0, 2.0, -1.0);
        let v = AmbientVector::new(p, 0.5, -0.3, 0.7);
        let w = AmbientVector::new(p, -2.0, 0.1, 0.4);
        assert_eq!(flat.curvature(&u, &v, &w).unwrap().components(), [0.0; 3]);

        let hyp = WarpedSpace::new(WarpingFunction::exp());
        let q = AmbientPoint::new(0.0, 0.0, 0.0);
        let r = hyp
            .curvature(&AmbientVector::d_x(q), &AmbientVector::d_t(q), &AmbientVector::d_t(q))
            .unwrap();
        assert!(close(r.components(), [0.0, -1.0, 0.0], 1e-14));

        let lin = WarpedSpace::new(WarpingFunction::linear(1.0, 0.0).unwrap());
        let s = AmbientPoint::new(2.0, 0.0, 0.0);
        let r = lin
            .curvature(&AmbientVector::d_x(s), &AmbientVector::d_y(s), &AmbientVector::d_y(s))
            .unwrap();
        assert!(close(r.components(), [0.0, -1.0, 0.0], 1e-14));
        let r2 = lin
            .curvature_from_christoffel(&AmbientVector::d_x(s), &AmbientVector::d_y(s), &AmbientVector::d_y(s))
            .unwrap();
        assert!(close(r2.components(), [0.0, -1.0, 0.0], 1e-14));
    }

    #[test]
    fn sectional_curvature_examples() {
        let hyp = WarpedSpace::new(WarpingFunction::exp());
        let p = AmbientPoint::new(0.8, 0.0, 0.0);
        let a = AmbientVector::new(p, 0.3, 1.0, 0.0);
        let b = AmbientVector::new(p, 1.0, 0.0, -0.4);
        assert!((hyp.sectional_curvature(&p, &a, &b).unwrap() + 1.0).abs() < 1e-12);
        assert!(matches!(
            hyp.sectional_curvature(&p, &a, &a.scaled(2.0)),
            Err(GeometryError::DegeneratePlane(_))
        ));

        let lin = WarpedSpace::new(WarpingFunction::linear(2.0, 0.5).unwrap());
        let q = AmbientPoint::new(1.0, 0.0, 0.0);
        let k = lin
            .sectional_curvature(&q, &AmbientVector::d_x(q), &AmbientVector::d_y(q))
            .unwrap();
        // -(f'/f)^2 = -1/(t+b)^2
        assert!((k + 1.0 / 1.5f64.powi(2)).abs() < 1e-14);
    }

    #[test]
    fn warped_cross_examples() {
        let flat = WarpedSpace::new(WarpingFunction::constant(1.0).unwrap());
        let p = AmbientPoint::new(0.0, 0.0, 0.0);
        let c = flat
            .warped_cross(&AmbientVector::d_x(p), &AmbientVector::d_y(p))
            .unwrap();
        assert_eq!(c.components(), [1.0, 0.0, 0.0]);
        let a = AmbientVector::new(p, 0.3, -2.0, 1.5);
        assert_eq!(flat.warped_cross(&a, &a).unwrap().components(), [0.0; 3]);

        let hyp = WarpedSpace::new(WarpingFunction::exp());
        let q = AmbientPoint::new(1.0, 0.0, 0.0);
        let c = hyp
            .warped_cross(&AmbientVector::d_x(q), &AmbientVector::d_y(q))
            .unwrap();
        assert!(close(c.components(), [1f64.exp().powi(2), 0.0, 0.0], 1e-13));
    }
}
