//! Adaptive Gauss-Kronrod (7/15) quadrature.

use crate::error::{GeometryError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-14,
            max_depth: 40,
        }
    }
}

fn kronrod<F: Fn(f64) -> Result<f64>>(g: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = g(c)?;
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = g(c - dx)? + g(c + dx)?;
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok((kron * h, ((kron - gauss) * h).abs()))
}

fn adapt<F: Fn(f64) -> Result<f64>>(
    g: &F,
    a: f64,
    b: f64,
    whole: (f64, f64),
    tol: f64,
    depth: u32,
    opts: &QuadratureOptions,
) -> Result<f64> {
    let (value, err) = whole;
    if err <= tol || (b - a).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0) {
        return Ok(value);
    }
    if depth >= opts.max_depth {
        return Err(GeometryError::NonConvergence { a, b, estimate: err });
    }
    let m = 0.5 * (a + b);
    let left = kronrod(g, a, m)?;
    let right = kronrod(g, m, b)?;
    Ok(adapt(g, a, m, left, 0.5 * tol, depth + 1, opts)? + adapt(g, m, b, right, 0.5 * tol, depth + 1, opts)?)
}

/// `integral_a^b g`, with `integrate(g, b, a) = -integrate(g, a, b)`.
pub fn integrate_with<F: Fn(f64) -> Result<f64>>(g: F, a: f64, b: f64, opts: &QuadratureOptions) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(GeometryError::InvalidParameter(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return Ok(-integrate_with(g, b, a, opts)?);
    }
    let whole = kronrod(&g, a, b)?;
    let tol = opts.abs_tol.max(opts.rel_tol * whole.0.abs());
    adapt(&g, a, b, whole, tol, 0, opts)
}

pub fn integrate<F: Fn(f64) -> Result<f64>>(g: F, a: f64, b: f64) -> Result<f64> {
    integrate_with(g, a, b, &QuadratureOptions::default())
}

/// Antiderivative `x -> int_base^x g`, tabulated at uniform nodes over the
/// window `[lo, hi]` so that each evaluation only integrates over half a
/// panel. Outside the window it integrates directly from `base`.
#[derive(Debug, Clone)]
pub struct Primitive<G> {
    g: G,
    base: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
    opts: QuadratureOptions,
}

impl<G: Fn(f64) -> Result<f64>> Primitive<G> {
    pub fn new(g: G, base: f64, lo: f64, hi: f64, panels: usize, opts: QuadratureOptions) -> Result<Self> {
        if !(lo < hi) {
            return Err(GeometryError::InvalidParameter(format!("empty window [{lo}, {hi}]")));
        }
        let (a, b) = (lo, hi);
        let n = panels.max(1);
        let nodes: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
        let mut values = Vec::with_capacity(nodes.len());
        let mut acc = integrate_with(&g, base, nodes[0], &opts)?;
        values.push(acc);
        for w in nodes.windows(2) {
            acc += integrate_with(&g, w[0], w[1], &opts)?;
            values.push(acc);
        }
        Ok(Self {
            g,
            base,
            nodes,
            values,
            opts,
        })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (a, b) = (self.nodes[0], self.nodes[self.nodes.len() - 1]);
        if !(x >= a && x <= b) {
            return integrate_with(&self.g, self.base, x, &self.opts);
        }
        let h = (b - a) / (self.nodes.len() - 1) as f64;
        let k = (((x - a) / h).round() as usize).min(self.nodes.len() - 1);
        Ok(self.values[k] + integrate_with(&self.g, self.nodes[k], x, &self.opts)?)
    }
}
