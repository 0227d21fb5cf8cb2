//! Fourth-order central finite-difference stencils.
//!
//! First derivatives use the five-point stencil with step `eps^(1/5) * max(1, |x|)`;
//! second and mixed derivatives use step `eps^(1/6) * max(1, |x|)`. Both steps
//! balance truncation against rounding for the respective stencil order.

use crate::error::Result;

/// Step for five-point first derivatives at `x`.
pub fn first_step(x: f64) -> f64 {
    f64::EPSILON.powf(0.2) * x.abs().max(1.0)
}

/// Step for five-point second derivatives (and nested mixed derivatives) at `x`.
pub fn second_step(x: f64) -> f64 {
    f64::EPSILON.powf(1.0 / 6.0) * x.abs().max(1.0)
}

/// Reach of a second-derivative stencil followed by one more first-derivative
/// layer, the deepest nesting used on analytic jets.
pub fn footprint(x: f64) -> f64 {
    2.0 * (second_step(x) + first_step(x))
}

fn combine<const N: usize>(terms: &[(f64, [f64; N])], scale: f64) -> [f64; N] {
    let mut out = [0.0; N];
    for (w, vals) in terms {
        for (o, v) in out.iter_mut().zip(vals) {
            *o += w * v;
        }
    }
    out.map(|o| o / scale)
}

pub fn d1<const N: usize, F>(f: F, x: f64, h: f64) -> Result<[f64; N]>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let terms = [
        (1.0, f(x - 2.0 * h)?),
        (-8.0, f(x - h)?),
        (8.0, f(x + h)?),
        (-1.0, f(x + 2.0 * h)?),
    ];
    Ok(combine(&terms, 12.0 * h))
}

pub fn d2<const N: usize, F>(f: F, x: f64, h: f64) -> Result<[f64; N]>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let terms = [
        (-1.0, f(x - 2.0 * h)?),
        (16.0, f(x - h)?),
        (-30.0, f(x)?),
        (16.0, f(x + h)?),
        (-1.0, f(x + 2.0 * h)?),
    ];
    Ok(combine(&terms, 12.0 * h * h))
}

pub fn scalar_d1<F: Fn(f64) -> Result<f64>>(f: F, x: f64) -> Result<f64> {
    Ok(d1(|s| Ok([f(s)?]), x, first_step(x))?[0])
}

pub fn scalar_d2<F: Fn(f64) -> Result<f64>>(f: F, x: f64) -> Result<f64> {
    Ok(d2(|s| Ok([f(s)?]), x, second_step(x))?[0])
}

/// First partial derivatives of a field on the (u, v) plane.
pub fn gradient<const N: usize, F>(f: F, u: f64, v: f64) -> Result<([f64; N], [f64; N])>
where
    F: Fn(f64, f64) -> Result<[f64; N]>,
{
    let du = d1(|s| f(s, v), u, first_step(u))?;
    let dv = d1(|s| f(u, s), v, first_step(v))?;
    Ok((du, dv))
}

#[derive(Debug, Clone, Copy)]
pub struct Partials2<const N: usize> {
    pub value: [f64; N],
    pub du: [f64; N],
    pub dv: [f64; N],
    pub duu: [f64; N],
    pub duv: [f64; N],
    pub dvv: [f64; N],
}

/// Value, first and second partials of a field on the (u, v) plane.
pub fn partials2<const N: usize, F>(f: F, u: f64, v: f64) -> Result<Partials2<N>>
where
    F: Fn(f64, f64) -> Result<[f64; N]>,
{
    let value = f(u, v)?;
    let (du, dv) = gradient(&f, u, v)?;
    let (hu, hv) = (second_step(u), second_step(v));
    let duu = d2(|s| f(s, v), u, hu)?;
    let dvv = d2(|s| f(u, s), v, hv)?;
    let duv = d1(|s| d1(|r| f(s, r), v, hv), u, hu)?;
    Ok(Partials2 {
        value,
        du,
        dv,
        duu,
        duv,
        dvv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives_are_exact_to_rounding() {
        let f = |x: f64| Ok(x.powi(4) - 3.0 * x * x + 2.0);
        assert!((scalar_d1(f, 1.5).unwrap() - (4.0 * 1.5f64.powi(3) - 9.0)).abs() < 1e-10);
        assert!((scalar_d2(f, 1.5).unwrap() - (12.0 * 2.25 - 6.0)).abs() < 1e-8);
    }

    #[test]
    fn mixed_partial_of_product() {
        let p = partials2(|u, v| Ok([(u * v).sin()]), 0.3, 0.7).unwrap();
        let (u, v) = (0.3f64, 0.7f64);
        let exact = (u * v).cos() - u * v * (u * v).sin();
        assert!((p.duv[0] - exact).abs() < 1e-8);
        assert!((p.duu[0] + v * v * (u * v).sin()).abs() < 1e-8);
    }
}
