//! Shared oracles for the integration tests. Everything here is written
//! from closed forms so that it does not route through the code under test.
#![allow(dead_code)]

use warped_cas::generators::{GeneratorSpec, ProfileFunction};
use warped_cas::surface::{Grid, Immersion, ParamDomain};
use warped_cas::warped_space::WarpingFunction;

/// Builtin registry entries exercised by the matrix tests.
pub const WARPINGS: [&str; 4] = ["constant:1", "linear:1,1", "power:0.5", "exp"];

pub const THETAS_DEG: [f64; 6] = [15.0, 30.0, 45.0, 60.0, 75.0, 90.0];

/// `(f, f', f'')` from the registry string, in closed form.
pub fn warp_oracle(name: &str, t: f64) -> (f64, f64, f64) {
    match name {
        "constant:1" => (1.0, 0.0, 0.0),
        "linear:1,1" => (t + 1.0, 1.0, 0.0),
        "linear:2,0.5" => (2.0 * (t + 0.5), 2.0, 0.0),
        "power:0.5" => (t.sqrt(), 0.5 / t.sqrt(), -0.25 * t.powf(-1.5)),
        "exp" => (t.exp(), t.exp(), t.exp()),
        other => {
            if let Some(m) = other.strip_prefix("power:") {
                let m: f64 = m.parse().unwrap();
                return (t.powf(m), m * t.powf(m - 1.0), m * (m - 1.0) * t.powf(m - 2.0));
            }
            panic!("no oracle for warping {other}")
        }
    }
}

/// `(log f)'`
pub fn log_d1(name: &str, t: f64) -> f64 {
    let (f, df, _) = warp_oracle(name, t);
    df / f
}

/// `(log f)''`
pub fn log_d2(name: &str, t: f64) -> f64 {
    let (f, df, d2f) = warp_oracle(name, t);
    d2f / f - (df / f).powi(2)
}

/// A height strictly inside the warping interval.
pub fn slice_height(name: &str) -> f64 {
    match name {
        "power:0.5" => 1.0,
        _ => 0.5,
    }
}

pub fn warping(name: &str) -> WarpingFunction {
    WarpingFunction::from_registry(name).unwrap()
}

pub fn rad(deg: f64) -> f64 {
    deg.to_radians()
}

/// Type (i) with `alpha = 0.3 sin v` on `v` in `[0.5, 2.6]`, where `alpha`
/// stays away from zero so the cylinder at `theta = pi/2` is regular.
pub fn type_i_spec(w: &str, theta_deg: f64) -> GeneratorSpec {
    let spec = GeneratorSpec::type_i(
        warping(w),
        rad(theta_deg),
        ProfileFunction::from_expr("0.3*sin(v)").unwrap(),
    );
    let d = spec.default_domain().unwrap();
    spec.with_domain(ParamDomain::new(d.u0, d.u1, 0.5, 2.6).unwrap())
}

/// A labelled generator spec.
pub struct Case {
    pub label: String,
    pub warping: String,
    pub spec: GeneratorSpec,
}

impl Case {
    fn new(label: String, warping: &str, spec: GeneratorSpec) -> Self {
        Self {
            label,
            warping: warping.to_string(),
            spec,
        }
    }

    pub fn theta(&self) -> f64 {
        self.spec.theta
    }
}

/// Every family, over every builtin warping and every admissible angle.
pub fn full_matrix() -> Vec<Case> {
    let mut out = Vec::new();
    for w in WARPINGS {
        for th in THETAS_DEG {
            out.push(Case::new(format!("type_i {w} {th}"), w, type_i_spec(w, th)));
            out.push(Case::new(
                format!("type_ii {w} {th}"),
                w,
                GeneratorSpec::type_ii(warping(w), rad(th)),
            ));
            out.push(Case::new(
                format!("rotational {w} {th}"),
                w,
                GeneratorSpec::rotational(warping(w), rad(th)),
            ));
        }
        out.push(Case::new(
            format!("type_iii {w}"),
            w,
            GeneratorSpec::type_iii(warping(w), slice_height(w)),
        ));
    }
    for m in MINIMAL_EXPONENTS {
        let w = format!("power:{m}");
        out.push(Case::new(
            format!("minimal_power {m}"),
            &w,
            GeneratorSpec::minimal_power(m).unwrap(),
        ));
    }
    for th in [15.0, 30.0, 45.0, 60.0, 75.0] {
        out.push(Case::new(
            format!("harmonic_exp {th}"),
            "exp",
            GeneratorSpec::harmonic_exp(rad(th)),
        ));
    }
    out
}

pub const MINIMAL_EXPONENTS: [f64; 4] = [0.2, 1.0 / 3.0, 0.5, 0.8];

pub fn grid(n: usize) -> Grid {
    Grid::square(n).unwrap()
}

/// Symmetric 2x2 inverse.
pub fn inv2(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]
}

pub fn apply2(m: [[f64; 2]; 2], x: [f64; 2]) -> [f64; 2] {
    [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]]
}

/// `sqrt(x^T g x)`
pub fn gnorm(g: [[f64; 2]; 2], x: [f64; 2]) -> f64 {
    (x[0] * (g[0][0] * x[0] + g[0][1] * x[1]) + x[1] * (g[1][0] * x[0] + g[1][1] * x[1]))
        .max(0.0)
        .sqrt()
}

/// Eigenvalues of a 2x2 matrix with real spectrum, ascending.
pub fn eig2(a: [[f64; 2]; 2]) -> [f64; 2] {
    let tr = a[0][0] + a[1][1];
    let gap = ((a[0][0] - a[1][1]).powi(2) + 4.0 * a[0][1] * a[1][0]).max(0.0).sqrt();
    [0.5 * (tr - gap), 0.5 * (tr + gap)]
}

/// Gram-Schmidt basis of the parameter plane, orthonormal for `g`.
pub fn orthonormal(g: [[f64; 2]; 2]) -> ([f64; 2], [f64; 2]) {
    let a = [1.0 / g[0][0].sqrt(), 0.0];
    let w = [-g[0][1] / g[0][0], 1.0];
    let n = gnorm(g, w);
    (a, [w[0] / n, w[1] / n])
}

/// Canonical orientation data at a point: `(cos(theta), A)` with the normal
/// flipped when `cos(theta) < 0`.
pub fn canonical_shape(s: &Immersion, u: f64, v: f64) -> (f64, [[f64; 2]; 2]) {
    let c = s.unit_normal(u, v).unwrap().dt;
    let a = s.shape_operator(u, v).unwrap();
    if c < 0.0 {
        (-c, a.map(|r| r.map(|x| -x)))
    } else {
        (c, a)
    }
}

/// Coordinates of the tangential part of `d/dt`: `I^{-1} (iota_u^t, iota_v^t)`.
pub fn t_coords(s: &Immersion, u: f64, v: f64) -> [f64; 2] {
    let jet = s.jet(u, v).unwrap();
    let g = s.first_fundamental_form(u, v).unwrap();
    apply2(inv2(g), [jet.du[0], jet.dv[0]])
}

/// Grid points whose finite-difference stencils fit in the domain.
pub fn interior_points(s: &Immersion, g: Grid) -> Vec<(f64, f64)> {
    let d = *s.domain();
    g.points(&d).into_iter().filter(|&(u, v)| d.is_interior(u, v)).collect()
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}
