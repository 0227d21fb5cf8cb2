//! 2x2 helpers for forms and operators in the coordinate basis `(d_u, d_v)`.

pub type Mat2 = [[f64; 2]; 2];
pub type Vec2 = [f64; 2];

pub fn det(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn inverse(m: &Mat2) -> Mat2 {
    let d = det(m);
    [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
}

pub fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, o) in row.iter_mut().enumerate() {
            *o = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn apply(m: &Mat2, x: Vec2) -> Vec2 {
    [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]]
}

pub fn trace(m: &Mat2) -> f64 {
    m[0][0] + m[1][1]
}

/// `x^T g y`
pub fn inner(g: &Mat2, x: Vec2, y: Vec2) -> f64 {
    let gy = apply(g, y);
    x[0] * gy[0] + x[1] * gy[1]
}

pub fn norm(g: &Mat2, x: Vec2) -> f64 {
    inner(g, x, x).max(0.0).sqrt()
}

pub fn axpy(a: f64, x: Vec2, y: Vec2) -> Vec2 {
    [a * x[0] + y[0], a * x[1] + y[1]]
}

pub fn sub(x: Vec2, y: Vec2) -> Vec2 {
    [x[0] - y[0], x[1] - y[1]]
}

pub fn scale(a: f64, x: Vec2) -> Vec2 {
    [a * x[0], a * x[1]]
}

pub fn flatten(m: &Mat2) -> [f64; 4] {
    [m[0][0], m[0][1], m[1][0], m[1][1]]
}

pub fn unflatten(a: [f64; 4]) -> Mat2 {
    [[a[0], a[1]], [a[2], a[3]]]
}
