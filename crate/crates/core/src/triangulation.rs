//! Ideal triangulations of punctured surfaces.
//!
//! Edges are numbered `0..n`. Each edge has two oriented labels; a triangle
//! is the cyclic (counterclockwise) triple of labels of its sides, and the
//! side carrying label `l` is glued to the side carrying `l.inverse()`.
//! Every label occurs exactly once, so the gluing is orientable and every
//! edge borders two triangle sides.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::surface::SurfaceType;

/// An oriented edge.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(u32);

impl Label {
    pub fn new(edge: usize, reversed: bool) -> Self {
        Label(((edge as u32) << 1) | reversed as u32)
    }

    pub fn forward(edge: usize) -> Self {
        Self::new(edge, false)
    }

    pub fn backward(edge: usize) -> Self {
        Self::new(edge, true)
    }

    pub fn edge(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_reversed(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Label(self.0 ^ 1)
    }

    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }

    /// `i` for edge `i`, `-i - 1` (that is `~i`) for its reverse.
    pub fn to_signed(self) -> i64 {
        if self.is_reversed() {
            -(self.edge() as i64) - 1
        } else {
            self.edge() as i64
        }
    }

    pub fn from_signed(value: i64) -> Self {
        if value >= 0 {
            Self::forward(value as usize)
        } else {
            Self::backward((-value - 1) as usize)
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_reversed() {
            write!(f, "~{}", self.edge())
        } else {
            write!(f, "{}", self.edge())
        }
    }
}

/// A triangle corner: `(triangle, k)` is the vertex where side `k` starts.
pub type Corner = (usize, usize);

#[derive(Clone, Debug)]
pub struct Triangulation {
    surface: SurfaceType,
    triangles: Vec<[Label; 3]>,
    /// Indexed by label: the triangle and side carrying it.
    sides: Vec<(usize, usize)>,
    /// Indexed by `3 * triangle + k`.
    corner_puncture: Vec<usize>,
    orbits: Vec<Vec<usize>>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.triangles == other.triangles
    }
}

impl Eq for Triangulation {}

impl Triangulation {
    pub fn new(triangles: Vec<[Label; 3]>) -> Result<Self> {
        let t = triangles.len();
        if t == 0 || !(3 * t).is_multiple_of(2) {
            return Err(Error::InvalidTriangulation(format!("{t} triangles cannot close up into a surface")));
        }
        let edges = 3 * t / 2;
        let mut sides = vec![(usize::MAX, 0); 2 * edges];
        for (ti, tri) in triangles.iter().enumerate() {
            for (k, label) in tri.iter().enumerate() {
                if label.edge() >= edges {
                    return Err(Error::InvalidTriangulation(format!(
                        "edge {} out of range for {edges} edges",
                        label.edge()
                    )));
                }
                if sides[label.index()].0 != usize::MAX {
                    return Err(Error::InvalidTriangulation(format!("label {label:?} used twice")));
                }
                sides[label.index()] = (ti, k);
            }
        }

        // Connectivity of the dual graph.
        let mut seen = vec![false; t];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(ti) = queue.pop_front() {
            for label in triangles[ti] {
                let (other, _) = sides[label.inverse().index()];
                if !seen[other] {
                    seen[other] = true;
                    queue.push_back(other);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidTriangulation("surface is disconnected".into()));
        }

        let mut corner_puncture = vec![usize::MAX; 3 * t];
        let mut orbits = Vec::new();
        for start in 0..3 * t {
            if corner_puncture[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut orbit = Vec::new();
            let mut corner = start;
            while corner_puncture[corner] == usize::MAX {
                corner_puncture[corner] = id;
                orbit.push(corner);
                let label = triangles[corner / 3][corner % 3];
                let (t2, k2) = sides[label.inverse().index()];
                corner = 3 * t2 + (k2 + 1) % 3;
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }

        let punctures = orbits.len() as u32;
        let euler = t as i64 - edges as i64;
        let surface = SurfaceType::from_euler(euler, punctures, 0).ok_or_else(|| {
            Error::InvalidTriangulation(format!("Euler characteristic {euler} incompatible with {punctures} punctures"))
        })?;

        Ok(Self { surface, triangles, sides, corner_puncture, orbits })
    }

    pub fn surface(&self) -> SurfaceType {
        self.surface
    }

    pub fn triangles(&self) -> &[[Label; 3]] {
        &self.triangles
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_edges(&self) -> usize {
        self.sides.len() / 2
    }

    pub fn num_punctures(&self) -> usize {
        self.orbits.len()
    }

    pub fn label(&self, triangle: usize, side: usize) -> Label {
        self.triangles[triangle][side]
    }

    /// Triangle and side index carrying `label`.
    pub fn side_of(&self, label: Label) -> (usize, usize) {
        self.sides[label.index()]
    }

    /// The side glued to `(triangle, side)`.
    pub fn across(&self, triangle: usize, side: usize) -> (usize, usize) {
        self.side_of(self.triangles[triangle][side].inverse())
    }

    pub fn corner_puncture(&self, corner: Corner) -> usize {
        self.corner_puncture[3 * corner.0 + corner.1]
    }

    /// Corners at each puncture, as `3 * triangle + k`.
    pub fn vertex_orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// Punctures at the tail and head of an edge, following its forward label.
    pub fn edge_ends(&self, edge: usize) -> [usize; 2] {
        let (t, k) = self.side_of(Label::forward(edge));
        [self.corner_puncture((t, k)), self.corner_puncture((t, (k + 1) % 3))]
    }

    /// Number of ends of each edge at `puncture`: the normal coordinates of
    /// the curve encircling that puncture.
    pub fn puncture_link(&self, puncture: usize) -> Vec<u64> {
        let mut weights = vec![0; self.num_edges()];
        for e in 0..self.num_edges() {
            for end in self.edge_ends(e) {
                if end == puncture {
                    weights[e] += 1;
                }
            }
        }
        weights
    }

    pub fn is_flippable(&self, edge: usize) -> bool {
        edge < self.num_edges() && self.side_of(Label::forward(edge)).0 != self.side_of(Label::backward(edge)).0
    }

    /// The four sides of the square around `edge`, as edges `[a, b, c, d]`,
    /// where `a`/`c` and `b`/`d` are opposite sides.
    pub fn square(&self, edge: usize) -> Result<[usize; 4]> {
        if !self.is_flippable(edge) {
            return Err(Error::NotFlippable(edge));
        }
        let (t1, k1) = self.side_of(Label::forward(edge));
        let (t2, k2) = self.side_of(Label::backward(edge));
        let a = self.triangles[t1][(k1 + 1) % 3].edge();
        let b = self.triangles[t1][(k1 + 2) % 3].edge();
        let c = self.triangles[t2][(k2 + 1) % 3].edge();
        let d = self.triangles[t2][(k2 + 2) % 3].edge();
        Ok([a, b, c, d])
    }

    /// Replaces `edge` by the other diagonal of its square. The new diagonal
    /// keeps the edge index.
    pub fn flip(&self, edge: usize) -> Result<Triangulation> {
        if !self.is_flippable(edge) {
            return Err(Error::NotFlippable(edge));
        }
        let l = Label::forward(edge);
        let (t1, k1) = self.side_of(l);
        let (t2, k2) = self.side_of(l.inverse());
        let a = self.triangles[t1][(k1 + 1) % 3];
        let b = self.triangles[t1][(k1 + 2) % 3];
        let c = self.triangles[t2][(k2 + 1) % 3];
        let d = self.triangles[t2][(k2 + 2) % 3];
        let mut triangles = self.triangles.clone();
        triangles[t1] = [b, c, l.inverse()];
        triangles[t2] = [d, a, l];
        Triangulation::new(triangles)
    }

    /// All combinatorial isomorphisms onto `other`, orientation preserving or
    /// reversing, in a deterministic order.
    pub fn isomorphisms_to(&self, other: &Triangulation) -> Vec<Isomorphism> {
        let mut out = Vec::new();
        if self.num_triangles() != other.num_triangles() {
            return out;
        }
        for preserving in [true, false] {
            for target in 0..other.num_triangles() {
                for rotation in 0..3 {
                    if let Some(iso) = self.extend_isomorphism(other, target, rotation, preserving) {
                        out.push(iso);
                    }
                }
            }
        }
        out
    }

    pub fn is_isomorphic_to(&self, other: &Triangulation) -> bool {
        !self.isomorphisms_to(other).is_empty()
    }

    fn extend_isomorphism(
        &self,
        other: &Triangulation,
        target: usize,
        rotation: usize,
        preserving: bool,
    ) -> Option<Isomorphism> {
        let t = self.num_triangles();
        // Per triangle: (image triangle, rotation parameter).
        let mut image: Vec<Option<(usize, usize)>> = vec![None; t];
        let mut used = vec![false; t];
        let mut edge_map = vec![usize::MAX; self.num_edges()];
        let side_image = |r: usize, k: usize| {
            if preserving {
                (k + r) % 3
            } else {
                (r + 3 - k) % 3
            }
        };
        image[0] = Some((target, rotation));
        used[target] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(ti) = queue.pop_front() {
            let (ui, r) = image[ti].unwrap();
            for k in 0..3 {
                let j = side_image(r, k);
                let e = self.triangles[ti][k].edge();
                let f = other.triangles[ui][j].edge();
                if edge_map[e] == usize::MAX {
                    edge_map[e] = f;
                } else if edge_map[e] != f {
                    return None;
                }
                let (tn, kn) = self.across(ti, k);
                let (un, jn) = other.across(ui, j);
                let rn = if preserving { (jn + 3 - kn) % 3 } else { (jn + kn) % 3 };
                match image[tn] {
                    Some(existing) => {
                        if existing != (un, rn) {
                            return None;
                        }
                    }
                    None => {
                        if used[un] {
                            return None;
                        }
                        used[un] = true;
                        image[tn] = Some((un, rn));
                        queue.push_back(tn);
                    }
                }
            }
        }
        let mut hit = vec![false; other.num_edges()];
        for &f in &edge_map {
            if f == usize::MAX || hit[f] {
                return None;
            }
            hit[f] = true;
        }
        Some(Isomorphism { edge_map, orientation_preserving: preserving })
    }

    /// Stable fingerprint of the triangle list.
    pub fn hash_hex(&self) -> String {
        let mut hasher = Sha256::new();
        for tri in &self.triangles {
            for label in tri {
                hasher.update(label.to_signed().to_le_bytes());
            }
        }
        let digest = hasher.finalize();
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_file(&self) -> TriangulationFile {
        TriangulationFile {
            surface: self.surface,
            triangles: self.triangles.iter().map(|tri| tri.map(Label::to_signed)).collect(),
            vertex_orbits: Some(self.orbits.clone()),
        }
    }

    pub fn from_file(file: &TriangulationFile) -> Result<Self> {
        let triangles = file.triangles.iter().map(|tri| tri.map(Label::from_signed)).collect();
        let tri = Triangulation::new(triangles)?;
        if tri.surface != file.surface {
            return Err(Error::InvalidTriangulation(format!(
                "declared surface {} but triangles describe {}",
                file.surface, tri.surface
            )));
        }
        if let Some(orbits) = &file.vertex_orbits {
            let mut declared: Vec<Vec<usize>> = orbits
                .iter()
                .map(|o| {
                    let mut o = o.clone();
                    o.sort_unstable();
                    o
                })
                .collect();
            declared.sort();
            let mut computed = tri.orbits.clone();
            computed.sort();
            if declared != computed {
                return Err(Error::InvalidTriangulation("declared vertex orbits do not match the gluing".into()));
            }
        }
        Ok(tri)
    }
}

/// A simplicial isomorphism between triangulations, recorded on edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub edge_map: Vec<usize>,
    pub orientation_preserving: bool,
}

/// JSON form of a triangulation. Labels use `i` / `-i-1` for the two
/// orientations of edge `i`; corners are numbered `3 * triangle + side`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TriangulationFile {
    pub surface: SurfaceType,
    pub triangles: Vec<[i64; 3]>,
    #[serde(rename = "vertexOrbits", default, skip_serializing_if = "Option::is_none")]
    pub vertex_orbits: Option<Vec<Vec<usize>>>,
}
