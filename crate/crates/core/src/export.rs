//! Mesh and per-vertex record output.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::config::CoordinateModel;
use crate::error::{GeometryError, Result};
use crate::surface::{to_half_space, Grid, Immersion, ParamDomain};
use crate::warped_space::AmbientPoint;

/// Triangle mesh over a sample grid. Vertices are stored as `(x, y, t)` in
/// the raw model so that `t` is the vertical axis, or `(x, y, z)` in the
/// half-space model.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
    pub excluded: usize,
}

fn is_excluded(e: &GeometryError) -> bool {
    matches!(
        e,
        GeometryError::DegenerateImmersion { .. } | GeometryError::Regularity { .. }
    )
}

fn model_point(s: &Immersion, p: &AmbientPoint, model: CoordinateModel) -> Result<[f64; 3]> {
    match model {
        CoordinateModel::Raw => Ok([p.x, p.y, p.t]),
        CoordinateModel::HalfSpace => to_half_space(s.space(), p),
    }
}

/// Two triangles per grid cell, wound so that the mesh normal agrees with
/// the unit normal `xi`. Grid points where the immersion is singular are
/// dropped together with the triangles touching them.
pub fn build_mesh(s: &Immersion, grid: Grid, model: CoordinateModel) -> Result<Mesh> {
    let d = s.domain();
    let evaluated = grid.map(d, |u, v| -> Result<Option<[f64; 3]>> {
        match s.point(u, v).and_then(|p| s.unit_normal(u, v).map(|_| p)) {
            Ok(p) => Ok(Some(model_point(s, &p, model)?)),
            Err(e) if is_excluded(&e) => Ok(None),
            Err(e) => Err(e),
        }
    });
    let mut index = vec![None; grid.len()];
    let mut vertices = Vec::with_capacity(grid.len());
    let mut excluded = 0;
    for (k, r) in evaluated.into_iter().enumerate() {
        match r? {
            Some(p) => {
                index[k] = Some(vertices.len());
                vertices.push(p);
            }
            None => excluded += 1,
        }
    }
    // (x, y, e^{-t}) reverses orientation, so the winding flips with it
    let flip = model == CoordinateModel::HalfSpace;
    let mut triangles = Vec::with_capacity(2 * (grid.nu - 1) * (grid.nv - 1));
    let at = |i: usize, j: usize| index[i * grid.nv + j];
    for i in 0..grid.nu - 1 {
        for j in 0..grid.nv - 1 {
            let (a, b, c, e) = (at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
            for tri in [[a, b, c], [a, c, e]] {
                if let [Some(p), Some(q), Some(r)] = tri {
                    triangles.push(if flip { [p, r, q] } else { [p, q, r] });
                }
            }
        }
    }
    Ok(Mesh {
        vertices,
        triangles,
        excluded,
    })
}

/// Wavefront OBJ with 1-based indices. `header` lines become comments.
pub fn write_obj<W: Write>(mesh: &Mesh, header: &[String], mut w: W) -> io::Result<()> {
    for line in header {
        writeln!(w, "# {line}")?;
    }
    for v in &mesh.vertices {
        writeln!(w, "v {} {} {}", v[0], v[1], v[2])?;
    }
    for t in &mesh.triangles {
        writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointResiduals {
    /// `|A T + cos(theta) (log f)' T|`
    pub principal_direction: f64,
    /// `|Delta h - 2 cos(theta) H - (log f)' (1 + cos^2 theta)|`
    pub laplacian: Option<f64>,
    /// Largest pairwise gap between the three Gauss curvature computations.
    pub curvature_oracles: Option<f64>,
}

/// One line of the JSON-lines geometry output. Angle and mean curvature
/// refer to the orientation with `cos(theta) >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub u: f64,
    pub v: f64,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    /// Half-space coordinates when that model was requested.
    pub model: Option<[f64; 3]>,
    pub theta: f64,
    #[serde(rename = "H")]
    pub mean_curvature: f64,
    /// Intrinsic Gauss curvature; absent where the stencil leaves the domain.
    #[serde(rename = "K")]
    pub gauss_curvature: Option<f64>,
    pub residuals: PointResiduals,
}

fn optional(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(GeometryError::BoundaryMargin { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Geometry records at every regular grid point, in grid order.
pub fn vertex_records(s: &Immersion, grid: Grid, model: CoordinateModel) -> Result<Vec<VertexRecord>> {
    let records = grid.map(s.domain(), |u, v| -> Result<Option<VertexRecord>> {
        let g = match s.geometry(u, v) {
            Ok(g) => g.canonical(),
            Err(e) if is_excluded(&e) => return Ok(None),
            Err(e) => return Err(e),
        };
        let laplacian = optional(s.laplacian_height(u, v).map(|(l, r)| (l - r).abs()))?;
        let oracles = optional(s.curvature_oracles(u, v).map(|o| o.max_pairwise_difference()))?;
        let model = match model {
            CoordinateModel::Raw => None,
            CoordinateModel::HalfSpace => Some(model_point(s, &g.point, model)?),
        };
        Ok(Some(VertexRecord {
            u,
            v,
            t: g.point.t,
            x: g.point.x,
            y: g.point.y,
            model,
            theta: g.theta,
            mean_curvature: g.mean_curvature,
            gauss_curvature: g.gauss_curvature,
            residuals: PointResiduals {
                principal_direction: s.principal_direction_residual(u, v)?,
                laplacian,
                curvature_oracles: oracles,
            },
        }))
    });
    let mut out = Vec::with_capacity(records.len());
    for r in records {
        if let Some(rec) = r? {
            out.push(rec);
        }
    }
    Ok(out)
}

pub fn write_jsonl<W: Write>(records: &[VertexRecord], mut w: W) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        writeln!(w)?;
    }
    Ok(())
}

/// Ambient samples read back from JSON-lines records, with the grid and
/// parameter rectangle they were taken on.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledGrid {
    pub domain: ParamDomain,
    pub grid: Grid,
    pub points: Vec<[f64; 3]>,
}

#[derive(Deserialize)]
struct SampleLine {
    u: f64,
    v: f64,
    t: f64,
    x: f64,
    y: f64,
}

/// Reads records written by [`write_jsonl`] for a complete cell-centred
/// grid (no excluded points).
pub fn read_samples<R: BufRead>(r: R) -> Result<SampledGrid> {
    let mut lines = Vec::new();
    for (k, line) in r.lines().enumerate() {
        let line = line.map_err(|e| GeometryError::Parse(format!("samples line {}: {e}", k + 1)))?;
        if line.trim().is_empty() {
            continue;
        }
        let s: SampleLine =
            serde_json::from_str(&line).map_err(|e| GeometryError::Parse(format!("samples line {}: {e}", k + 1)))?;
        lines.push(s);
    }
    let nv = lines.iter().take_while(|s| s.u == lines[0].u).count();
    if nv == 0 || lines.len() % nv != 0 {
        return Err(GeometryError::Parse("samples do not form a complete grid".into()));
    }
    let nu = lines.len() / nv;
    let grid = Grid::new(nu, nv)?;
    let du = if nu > 1 { lines[nv].u - lines[0].u } else { 0.0 };
    let dv = if nv > 1 { lines[1].v - lines[0].v } else { 0.0 };
    let domain = ParamDomain::new(
        lines[0].u - 0.5 * du,
        lines[0].u + (nu as f64 - 0.5) * du,
        lines[0].v - 0.5 * dv,
        lines[0].v + (nv as f64 - 0.5) * dv,
    )?;
    Ok(SampledGrid {
        domain,
        grid,
        points: lines.iter().map(|s| [s.t, s.x, s.y]).collect(),
    })
}
