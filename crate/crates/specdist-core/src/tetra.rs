//! Embedding of the four-point state simplex into the cube `[-1,1]^3` and
//! the projection of a joint state of two bits onto the product of its
//! marginals.
//!
//! The four simplex vertices land on alternating cube corners, the product
//! states of two segment parameters trace out the quadric `z = x*y`, and the
//! marginal projection is the vertical projection onto that surface: it
//! preserves the first two embedded coordinates exactly.

/// Images of the four simplex vertices: alternating corners of the cube.
pub fn cube_vertex_map() -> [[f64; 3]; 4] {
    [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ]
}

/// Linear extension of the vertex map to weight vectors.
pub fn tetra_embed(p: &[f64; 4]) -> [f64; 3] {
    let f = cube_vertex_map();
    let mut out = [0.0f64; 3];
    for (w, corner) in p.iter().zip(&f) {
        for (o, c) in out.iter_mut().zip(corner) {
            *o += w * c;
        }
    }
    out
}

/// Joint weights of the product of two segment states with parameters
/// `t, s` in `[-1, 1]` (first factor indexes pairs of entries).
pub fn square_embedding(t: f64, s: f64) -> [f64; 4] {
    [
        (1.0 + t) * (1.0 + s) / 4.0,
        (1.0 + t) * (1.0 - s) / 4.0,
        (1.0 - t) * (1.0 + s) / 4.0,
        (1.0 - t) * (1.0 - s) / 4.0,
    ]
}

/// Segment parameters of the two marginals of a joint weight vector.
pub fn marginal_split(p: &[f64; 4]) -> (f64, f64) {
    let t = (p[0] + p[1]) - (p[2] + p[3]);
    let s = (p[0] + p[2]) - (p[1] + p[3]);
    (t, s)
}

/// Product of the marginals of a joint weight vector.
pub fn marginal_projection(p: &[f64; 4]) -> [f64; 4] {
    let (t, s) = marginal_split(p);
    square_embedding(t, s)
}

/// How far the marginal projection moves the first two embedded
/// coordinates (zero up to rounding: the projection is vertical).
pub fn projection_residual(p: &[f64; 4]) -> f64 {
    let original = tetra_embed(p);
    let projected = tetra_embed(&marginal_projection(p));
    (original[0] - projected[0])
        .abs()
        .max((original[1] - projected[1]).abs())
}
