//! Reference triangulations for the shipped surfaces.
//!
//! * `S0_n` (n ≥ 5): the double of an n-gon, each face fan-triangulated from
//!   polygon vertex 0. Punctures are the polygon vertices, numbered in order.
//! * `S0_4`: the pillowcase, the quotient of the plane by the lattice and
//!   `x ↦ -x`, triangulated by horizontal, vertical and slope-one segments
//!   through the half-lattice. Edges 0,1 are horizontal, 2,3 vertical, 4,5
//!   diagonal, so the curve of slope p/q has weights
//!   `(|p|,|p|,|q|,|q|,|p-q|,|p-q|)`.
//! * `S1_1`: the square torus with one diagonal. Edges are horizontal,
//!   vertical, diagonal; slope p/q has weights `(|p|,|q|,|p-q|)`.
//! * `Sg_1`: the standard 4g-gon fan-triangulated from one vertex.
//! * `S1_2`: `S1_1` with an extra puncture in the first triangle.

use crate::error::{Error, Result};
use crate::triangulation::{Label, Triangulation};

pub const NAMES: [&str; 7] = ["S0_4", "S0_5", "S0_6", "S0_8", "S1_1", "S1_2", "S2_1"];

pub fn named(name: &str) -> Result<Triangulation> {
    match name {
        "S0_4" => pillowcase(),
        "S0_5" => double_polygon(5),
        "S0_6" => double_polygon(6),
        "S0_8" => double_polygon(8),
        "S1_1" => polygon_surface(1),
        "S1_2" => stellar_subdivide(&polygon_surface(1)?, 0),
        "S2_1" => polygon_surface(2),
        other => Err(Error::Lookup(format!("unknown surface {other}"))),
    }
}

fn pillowcase() -> Result<Triangulation> {
    let f = Label::forward;
    let r = Label::backward;
    Triangulation::new(vec![[f(0), f(3), r(4)], [f(4), r(1), f(2)], [f(1), r(3), r(5)], [f(5), r(0), r(2)]])
}

/// Sphere with `n` punctures as the double of an n-gon.
pub fn double_polygon(n: usize) -> Result<Triangulation> {
    if n < 4 {
        return Err(Error::Precondition(format!("double polygon needs n >= 4, got {n}")));
    }
    // Equator edge i joins i -> i+1 (mod n); top/bottom diagonals join 0 -> i.
    let top = |i: usize| n + i - 2;
    let bottom = |i: usize| n + (n - 3) + i - 2;
    let mut triangles = Vec::with_capacity(2 * (n - 2));
    for i in 1..n - 1 {
        let s0 = if i == 1 { Label::forward(0) } else { Label::forward(top(i)) };
        let s1 = Label::forward(i);
        let s2 = if i + 1 == n - 1 { Label::forward(n - 1) } else { Label::backward(top(i + 1)) };
        triangles.push([s0, s1, s2]);
    }
    for i in 1..n - 1 {
        let s0 = if i + 1 == n - 1 { Label::backward(n - 1) } else { Label::forward(bottom(i + 1)) };
        let s1 = Label::backward(i);
        let s2 = if i == 1 { Label::backward(0) } else { Label::backward(bottom(i)) };
        triangles.push([s0, s1, s2]);
    }
    Triangulation::new(triangles)
}

/// Genus `g` with one puncture: the 4g-gon `a1 b1 a1^-1 b1^-1 ...`.
pub fn polygon_surface(g: usize) -> Result<Triangulation> {
    if g == 0 {
        return Err(Error::Precondition("polygon surface needs genus >= 1".into()));
    }
    let m = 4 * g;
    // Polygon side k runs from vertex k to k+1.
    let side = |k: usize| {
        let block = k / 4;
        match k % 4 {
            0 => Label::forward(2 * block),
            1 => Label::forward(2 * block + 1),
            2 => Label::backward(2 * block),
            _ => Label::backward(2 * block + 1),
        }
    };
    let diagonal = |k: usize| 2 * g + k - 2;
    let mut triangles = Vec::with_capacity(m - 2);
    for k in 1..m - 1 {
        let s0 = if k == 1 { side(0) } else { Label::forward(diagonal(k)) };
        let s1 = side(k);
        let s2 = if k + 1 == m - 1 { side(m - 1) } else { Label::backward(diagonal(k + 1)) };
        triangles.push([s0, s1, s2]);
    }
    Triangulation::new(triangles)
}

/// Adds a puncture inside `triangle`, coned off to its three corners.
pub fn stellar_subdivide(tri: &Triangulation, triangle: usize) -> Result<Triangulation> {
    let n = tri.num_edges();
    let sides = tri.triangles()[triangle];
    // New edge n + k runs from corner k to the new puncture.
    let spoke = |k: usize| n + k;
    let mut triangles: Vec<[Label; 3]> = tri.triangles().to_vec();
    let mut replacement = Vec::with_capacity(3);
    for k in 0..3 {
        replacement.push([sides[k], Label::forward(spoke((k + 1) % 3)), Label::backward(spoke(k))]);
    }
    triangles[triangle] = replacement[0];
    triangles.push(replacement[1]);
    triangles.push(replacement[2]);
    Triangulation::new(triangles)
}
