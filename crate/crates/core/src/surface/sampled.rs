//! Immersions interpolated from point samples on a grid.

use std::sync::Arc;

use super::{Grid, Immersion, Jet, ParamDomain};
use crate::error::{GeometryError, Result};
use crate::interp::CubicSpline;
use crate::warped_space::WarpedSpace;

/// Tensor-product not-a-knot cubic spline through samples at the points of
/// `grid` (row-major, `v` fastest).
struct TensorSpline {
    us: Vec<f64>,
    /// `rows[k][i]`: spline in `v` of coordinate `k` along row `i`.
    rows: [Vec<CubicSpline>; 3],
}

impl TensorSpline {
    fn new(d: &ParamDomain, grid: Grid, points: &[[f64; 3]]) -> Result<Self> {
        if points.len() != grid.len() {
            return Err(GeometryError::InvalidParameter(format!(
                "{} samples do not fill a {grid} grid",
                points.len()
            )));
        }
        let coords = grid.points(d);
        let us: Vec<f64> = (0..grid.nu).map(|i| coords[i * grid.nv].0).collect();
        let vs: Vec<f64> = (0..grid.nv).map(|j| coords[j].1).collect();
        let build = |k: usize| -> Result<Vec<CubicSpline>> {
            (0..grid.nu)
                .map(|i| {
                    let ys = (0..grid.nv).map(|j| points[i * grid.nv + j][k]).collect();
                    CubicSpline::not_a_knot(vs.clone(), ys)
                })
                .collect()
        };
        Ok(Self {
            us,
            rows: [build(0)?, build(1)?, build(2)?],
        })
    }

    fn jet(&self, u: f64, v: f64) -> Result<Jet> {
        let mut jet = Jet {
            point: [0.0; 3],
            du: [0.0; 3],
            dv: [0.0; 3],
            duu: [0.0; 3],
            duv: [0.0; 3],
            dvv: [0.0; 3],
        };
        for k in 0..3 {
            let n = self.us.len();
            let (mut val, mut dv, mut dvv) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
            for row in &self.rows[k] {
                let (a, b, c) = row.eval(v);
                val.push(a);
                dv.push(b);
                dvv.push(c);
            }
            let (p, pu, puu) = CubicSpline::not_a_knot(self.us.clone(), val)?.eval(u);
            let (q, qu, _) = CubicSpline::not_a_knot(self.us.clone(), dv)?.eval(u);
            let (r, _, _) = CubicSpline::not_a_knot(self.us.clone(), dvv)?.eval(u);
            jet.point[k] = p;
            jet.du[k] = pu;
            jet.duu[k] = puu;
            jet.dv[k] = q;
            jet.duv[k] = qu;
            jet.dvv[k] = r;
        }
        Ok(jet)
    }
}

impl Immersion {
    /// Interpolates ambient points `(t, x, y)` sampled at the cell centres
    /// of `grid` over `domain`. Derivatives come from the spline itself.
    pub fn from_samples(space: WarpedSpace, domain: ParamDomain, grid: Grid, points: &[[f64; 3]]) -> Result<Self> {
        if grid.nu < 4 || grid.nv < 4 {
            return Err(GeometryError::GridTooSmall {
                nu: grid.nu,
                nv: grid.nv,
                min: 4,
            });
        }
        let spline = Arc::new(TensorSpline::new(&domain, grid, points)?);
        let for_map = spline.clone();
        Ok(Immersion::new(space, domain, move |u, v| Ok(for_map.jet(u, v)?.point))
            .with_jet(move |u, v| spline.jet(u, v))
            .with_label("sampled"))
    }
}
