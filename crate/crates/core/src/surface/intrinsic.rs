//! Quantities that need derivatives of pointwise data: intrinsic curvature,
//! Gauss/Codazzi residuals, the Laplacian of the height function and the
//! connection of the adapted frame. All partials are fourth-order central
//! differences over the parameter plane; the Brioschi curvature uses only
//! the first fundamental form, everything else starts from the 2-jet.

use super::geometry::Local;
use super::mat2::{self, Mat2, Vec2};
use super::{Immersion, Jet};
use crate::error::Result;
use crate::numdiff;
use crate::warped_space::AmbientVector;

type Gamma2 = [[[f64; 2]; 2]; 2];

fn flatten_gamma(g: &Gamma2) -> [f64; 8] {
    let mut out = [0.0; 8];
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                out[4 * k + 2 * i + j] = g[k][i][j];
            }
        }
    }
    out
}

fn unflatten_gamma(a: [f64; 8]) -> Gamma2 {
    let mut g = [[[0.0; 2]; 2]; 2];
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                g[k][i][j] = a[4 * k + 2 * i + j];
            }
        }
    }
    g
}

/// `G(x, y)^k = G^k_ij x^i y^j`
fn contract(g: &Gamma2, x: Vec2, y: Vec2) -> Vec2 {
    let mut out = [0.0; 2];
    for (k, o) in out.iter_mut().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                *o += g[k][i][j] * x[i] * y[j];
            }
        }
    }
    out
}

/// The three independent routes to the Gauss curvature at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureOracles {
    /// Brioschi formula on the induced metric.
    pub brioschi: f64,
    /// `det A - ((log f)')^2 - (log f)'' |T|^2`.
    pub gauss_trace: f64,
    /// Ambient sectional curvature of the tangent plane plus `det A`.
    pub ambient_sectional: f64,
}

impl CurvatureOracles {
    pub fn max_pairwise_difference(&self) -> f64 {
        let d1 = (self.brioschi - self.gauss_trace).abs();
        let d2 = (self.brioschi - self.ambient_sectional).abs();
        let d3 = (self.gauss_trace - self.ambient_sectional).abs();
        d1.max(d2).max(d3)
    }
}

/// Levi-Civita derivatives of the adapted frame, as norms of residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameConnection {
    /// `|nabla_{e1} e1|`
    pub e1_e1: f64,
    /// `|nabla_{e1} e2|`
    pub e1_e2: f64,
    /// `|nabla_{e2} e1 - c e2|` with `c = (lambda cos(theta) + (log f)') / sin(theta)`
    pub e2_e1: f64,
    /// `|nabla_{e2} e2 + c e1|`
    pub e2_e2: f64,
}

impl Immersion {
    fn first_form_entries(&self, u: f64, v: f64) -> Result<[f64; 3]> {
        let l = self.raw_local(u, v)?;
        Ok([l.first[0][0], l.first[0][1], l.first[1][1]])
    }

    fn raw_first_form_only(&self, u: f64, v: f64) -> Result<[f64; 3]> {
        self.first_form_of(&self.raw_jet(u, v)?)
    }

    fn first_form_of(&self, jet: &Jet) -> Result<[f64; 3]> {
        let f = self.space.warping().eval(jet.point[0])?;
        let f2 = f * f;
        let g = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + f2 * (a[1] * b[1] + a[2] * b[2]);
        Ok([g(jet.du, jet.du), g(jet.du, jet.dv), g(jet.dv, jet.dv)])
    }

    /// Induced connection from the 2-jet: `G_lij = g(iota_ij + D(iota_i, iota_j), iota_l)`
    /// is the tangential part of the ambient covariant derivative.
    fn raw_induced_christoffel(&self, u: f64, v: f64) -> Result<Gamma2> {
        let jet = self.raw_jet(u, v)?;
        let w = self.space.warping().eval(jet.point[0])?;
        let f2 = w * w;
        let g = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + f2 * (a[1] * b[1] + a[2] * b[2]);
        let ambient = self.space.christoffel(jet.point[0])?;
        let d = [jet.du, jet.dv];
        let dd = [[jet.duu, jet.duv], [jet.duv, jet.dvv]];
        let metric: Mat2 = [[g(d[0], d[0]), g(d[0], d[1])], [g(d[1], d[0]), g(d[1], d[1])]];
        let inv = mat2::inverse(&metric);
        let mut first = [[[0.0; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let c = ambient.contract(d[i], d[j]);
                let wij = [0, 1, 2].map(|k| dd[i][j][k] + c[k]);
                for (l, fl) in first.iter_mut().enumerate() {
                    fl[i][j] = g(wij, d[l]);
                }
            }
        }
        let mut gamma = [[[0.0; 2]; 2]; 2];
        for (k, gk) in gamma.iter_mut().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    gk[i][j] = inv[k][0] * first[0][i][j] + inv[k][1] * first[1][i][j];
                }
            }
        }
        Ok(gamma)
    }

    /// Christoffel symbols `G^k_ij` of the induced metric.
    pub fn induced_christoffel(&self, u: f64, v: f64) -> Result<[[[f64; 2]; 2]; 2]> {
        self.check_interior(u, v)?;
        self.raw_induced_christoffel(u, v)
    }

    /// Gauss curvature of the induced metric via the Brioschi formula.
    pub fn gauss_curvature_intrinsic(&self, u: f64, v: f64) -> Result<f64> {
        self.check_interior(u, v)?;
        let p = numdiff::partials2(|a, b| self.raw_first_form_only(a, b), u, v)?;
        let [e, f, g] = p.value;
        let (e_u, f_u, g_u) = (p.du[0], p.du[1], p.du[2]);
        let (e_v, f_v, g_v) = (p.dv[0], p.dv[1], p.dv[2]);
        let e_vv = p.dvv[0];
        let f_uv = p.duv[1];
        let g_uu = p.duu[2];
        let det3 = |m: [[f64; 3]; 3]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let m1 = [
            [-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v],
            [f_v - 0.5 * g_u, e, f],
            [0.5 * g_v, f, g],
        ];
        let m2 = [[0.0, 0.5 * e_v, 0.5 * g_u], [0.5 * e_v, e, f], [0.5 * g_u, f, g]];
        let d = e * g - f * f;
        Ok((det3(m1) - det3(m2)) / (d * d))
    }

    /// Intrinsic curvature tensor `r[l][i][j][k]`, `R(d_i, d_j) d_k = r^l_ijk d_l`.
    pub fn intrinsic_riemann(&self, u: f64, v: f64) -> Result<[[[[f64; 2]; 2]; 2]; 2]> {
        self.check_interior(u, v)?;
        let gamma = self.raw_induced_christoffel(u, v)?;
        let (gu, gv) = numdiff::gradient(|a, b| Ok(flatten_gamma(&self.raw_induced_christoffel(a, b)?)), u, v)?;
        let dgamma = [unflatten_gamma(gu), unflatten_gamma(gv)];
        let mut r = [[[[0.0; 2]; 2]; 2]; 2];
        for (l, rl) in r.iter_mut().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        let mut s = dgamma[i][l][j][k] - dgamma[j][l][i][k];
                        for m in 0..2 {
                            s += gamma[l][i][m] * gamma[m][j][k] - gamma[l][j][m] * gamma[m][i][k];
                        }
                        rl[i][j][k] = s;
                    }
                }
            }
        }
        Ok(r)
    }

    /// Left minus right side of the Gauss equation for tangent vectors given
    /// in coordinates.
    pub fn gauss_residual(&self, u: f64, v: f64, x: Vec2, y: Vec2, z: Vec2) -> Result<Vec2> {
        Ok(self.gauss_residuals(u, v, &[[x, y, z]])?[0])
    }

    /// [`Immersion::gauss_residual`] for several triples, sharing one
    /// evaluation of the curvature tensor.
    pub fn gauss_residuals(&self, u: f64, v: f64, triples: &[[Vec2; 3]]) -> Result<Vec<Vec2>> {
        let r = self.intrinsic_riemann(u, v)?;
        let l = self.local(u, v)?;
        Ok(triples
            .iter()
            .map(|&[x, y, z]| {
                let mut lhs = [0.0; 2];
                for (li, out) in lhs.iter_mut().enumerate() {
                    for i in 0..2 {
                        for j in 0..2 {
                            for k in 0..2 {
                                *out += r[li][i][j][k] * x[i] * y[j] * z[k];
                            }
                        }
                    }
                }
                mat2::sub(lhs, gauss_rhs(&l, x, y, z))
            })
            .collect())
    }

    /// Left minus right side of the Codazzi equation for tangent vectors
    /// given in coordinates.
    pub fn codazzi_residual(&self, u: f64, v: f64, x: Vec2, y: Vec2) -> Result<Vec2> {
        self.check_interior(u, v)?;
        let l = self.local(u, v)?;
        let gamma = self.raw_induced_christoffel(u, v)?;
        let (au, av) = numdiff::gradient(|a, b| Ok(mat2::flatten(&self.raw_local(a, b)?.shape)), u, v)?;
        let da = [mat2::unflatten(au), mat2::unflatten(av)];
        let basis = [[1.0, 0.0], [0.0, 1.0]];
        // c[i][j] = (nabla_i A) e_j
        let mut c = [[[0.0; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let a_ej = mat2::apply(&l.shape, basis[j]);
                let term1 = mat2::apply(&da[i], basis[j]);
                let term2 = contract(&gamma, basis[i], a_ej);
                let term3 = mat2::apply(&l.shape, contract(&gamma, basis[i], basis[j]));
                c[i][j] = [0, 1].map(|k| term1[k] + term2[k] - term3[k]);
            }
        }
        let mut lhs = [0.0; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    lhs[k] += x[i] * y[j] * (c[i][j][k] - c[j][i][k]);
                }
            }
        }
        let g = &l.first;
        let t = l.t_coords;
        let rhs_scale = l.cos * l.log_d2();
        let rhs = mat2::sub(
            mat2::scale(rhs_scale * mat2::inner(g, y, t), x),
            mat2::scale(rhs_scale * mat2::inner(g, x, t), y),
        );
        Ok(mat2::sub(lhs, rhs))
    }

    /// `(Delta h, 2 cos(theta) H + (log f)' (1 + cos^2 theta))` where `h` is
    /// the height `t` restricted to the surface. The Laplacian is evaluated
    /// in divergence form on the induced metric.
    pub fn laplacian_height(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        self.check_interior(u, v)?;
        let flux = |a: f64, b: f64| -> Result<[f64; 2]> {
            let jet = self.raw_jet(a, b)?;
            let [e, f, g] = self.first_form_of(&jet)?;
            let d = e * g - f * f;
            let root = d.sqrt();
            let (hu, hv) = (jet.du[0], jet.dv[0]);
            Ok([root * (g * hu - f * hv) / d, root * (-f * hu + e * hv) / d])
        };
        let (du, dv) = numdiff::gradient(flux, u, v)?;
        let [e, f, g] = self.first_form_entries(u, v)?;
        let lhs = (du[0] + dv[1]) / (e * g - f * f).sqrt();
        let l = self.local(u, v)?;
        let rhs = 2.0 * l.cos * l.mean_curvature() + l.log_d1() * (1.0 + l.cos * l.cos);
        Ok((lhs, rhs))
    }

    /// `|A T + cos(theta) (log f)' T|`, zero when `T` is a principal
    /// direction with the predicted eigenvalue.
    pub fn principal_direction_residual(&self, u: f64, v: f64) -> Result<f64> {
        let l = self.local(u, v)?;
        let at = mat2::apply(&l.shape, l.t_coords);
        let r = mat2::axpy(l.cos * l.log_d1(), l.t_coords, at);
        Ok(mat2::norm(&l.first, r))
    }

    pub fn curvature_oracles(&self, u: f64, v: f64) -> Result<CurvatureOracles> {
        let brioschi = self.gauss_curvature_intrinsic(u, v)?;
        let l = self.local(u, v)?;
        let det_a = mat2::det(&l.shape);
        let gauss_trace = det_a - l.log_d1().powi(2) - l.log_d2() * l.sin * l.sin;
        let p = l.base();
        let a = AmbientVector::from_components(p, l.jet.du);
        let b = AmbientVector::from_components(p, l.jet.dv);
        let ambient_sectional = self.space.sectional_curvature(&p, &a, &b)? + det_a;
        Ok(CurvatureOracles {
            brioschi,
            gauss_trace,
            ambient_sectional,
        })
    }

    /// Covariant derivatives of the adapted frame along itself.
    pub fn frame_connection(&self, u: f64, v: f64) -> Result<FrameConnection> {
        self.check_interior(u, v)?;
        let l = self.local(u, v)?;
        let (e1, e2) = l.frame_coords()?;
        let gamma = self.raw_induced_christoffel(u, v)?;
        let field = |a: f64, b: f64| -> Result<[f64; 4]> {
            let (x, y) = self.raw_local(a, b)?.frame_coords()?;
            Ok([x[0], x[1], y[0], y[1]])
        };
        let (du, dv) = numdiff::gradient(field, u, v)?;
        let nabla = |dir: Vec2, which: usize, value: Vec2| -> Vec2 {
            let o = 2 * which;
            let deriv = [dir[0] * du[o] + dir[1] * dv[o], dir[0] * du[o + 1] + dir[1] * dv[o + 1]];
            let c = contract(&gamma, dir, value);
            [deriv[0] + c[0], deriv[1] + c[1]]
        };
        let lambda = mat2::inner(&l.first, mat2::apply(&l.shape, e2), e2);
        let coeff = (lambda * l.cos + l.log_d1()) / l.sin;
        let g = &l.first;
        Ok(FrameConnection {
            e1_e1: mat2::norm(g, nabla(e1, 0, e1)),
            e1_e2: mat2::norm(g, nabla(e1, 1, e2)),
            e2_e1: mat2::norm(g, mat2::axpy(-coeff, e2, nabla(e2, 0, e1))),
            e2_e2: mat2::norm(g, mat2::axpy(coeff, e1, nabla(e2, 1, e2))),
        })
    }
}

/// Right side of the Gauss equation for a warped product.
fn gauss_rhs(l: &Local, x: Vec2, y: Vec2, z: Vec2) -> Vec2 {
    let g = |a: Vec2, b: Vec2| mat2::inner(&l.first, a, b);
    let a = |w: Vec2| mat2::apply(&l.shape, w);
    let t = l.t_coords;
    let a1 = l.log_d1();
    let a2 = l.log_d2();
    let mut out = mat2::sub(mat2::scale(g(a(y), z), a(x)), mat2::scale(g(a(x), z), a(y)));
    out = mat2::sub(
        out,
        mat2::scale(a1 * a1, mat2::sub(mat2::scale(g(y, z), x), mat2::scale(g(x, z), y))),
    );
    let tt = mat2::sub(
        mat2::sub(mat2::scale(g(y, t) * g(z, t), x), mat2::scale(g(x, t) * g(z, t), y)),
        mat2::sub(mat2::scale(g(y, t) * g(x, z), t), mat2::scale(g(x, t) * g(y, z), t)),
    );
    mat2::sub(out, mat2::scale(a2, tt))
}
