//! Cutting a surface along a normal multicurve.
//!
//! The corner arcs of the multicurve split each triangle into regions (the
//! central region plus, per corner, a tip and the strips between parallel
//! arcs). Regions glued across edge segments form the pieces. Each piece is
//! a union of discs, so its Euler characteristic is read off the cell counts:
//! copies of curve/edge crossing points, minus edge segments and arc copies,
//! plus regions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal::{sum, CurveKind, NormalCurve, Trace};
use crate::surface::SurfaceType;
use crate::triangulation::{Label, Triangulation};

/// A connected component of the cut surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub surface: SurfaceType,
    pub punctures: Vec<usize>,
    /// Input curve index for each boundary circle, sorted. A curve with
    /// the piece on both sides appears twice.
    pub boundary: Vec<usize>,
}

impl Piece {
    pub fn boundary_count(&self, curve: usize) -> usize {
        self.boundary.iter().filter(|&&c| c == curve).count()
    }
}

#[derive(Clone, Debug)]
pub struct Cut {
    pub pieces: Vec<Piece>,
    /// For each input curve, the pieces on its two sides.
    pub sides: Vec<[usize; 2]>,
}

impl Cut {
    /// Pieces that have every listed curve on their boundary.
    pub fn pieces_bounded_by<'a>(&'a self, curves: &'a [usize]) -> impl Iterator<Item = (usize, &'a Piece)> + 'a {
        self.pieces.iter().enumerate().filter(move |(_, p)| curves.iter().all(|c| p.boundary.contains(c)))
    }

    /// Reglues the pieces along the listed curves.
    pub fn glue(&self, curves: &[usize]) -> Vec<GluedPiece> {
        let mut uf = UnionFind::new(self.pieces.len());
        for &c in curves {
            let [a, b] = self.sides[c];
            uf.union(a, b);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.pieces.len() {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        let mut out: Vec<GluedPiece> = groups
            .into_values()
            .map(|members| {
                let euler: i64 = members.iter().map(|&m| self.pieces[m].surface.euler_characteristic()).sum();
                let mut punctures: Vec<usize> =
                    members.iter().flat_map(|&m| self.pieces[m].punctures.iter().copied()).collect();
                punctures.sort_unstable();
                let mut boundary: Vec<usize> = members
                    .iter()
                    .flat_map(|&m| self.pieces[m].boundary.iter().copied())
                    .filter(|c| !curves.contains(c))
                    .collect();
                boundary.sort_unstable();
                let surface = SurfaceType::from_euler(euler, punctures.len() as u32, boundary.len() as u32)
                    .expect("regluing preserves orientability");
                GluedPiece { members, piece: Piece { surface, punctures, boundary } }
            })
            .collect();
        out.sort_by_key(|g| g.members[0]);
        out
    }
}

#[derive(Clone, Debug)]
pub struct GluedPiece {
    /// Indices into `Cut::pieces`.
    pub members: Vec<usize>,
    pub piece: Piece,
}

/// Cuts `tri` along pairwise disjoint, pairwise distinct essential curves.
pub fn cut_along(tri: &Triangulation, curves: &[NormalCurve]) -> Result<Cut> {
    let weights = sum(curves, tri.num_edges());
    let trace = Trace::new(tri, &weights)?;

    let mut index_of: BTreeMap<&[u64], usize> = BTreeMap::new();
    for (i, c) in curves.iter().enumerate() {
        if index_of.insert(c.weights(), i).is_some() {
            return Err(Error::Precondition(format!("curve {i} is repeated")));
        }
    }
    let mut matched = vec![None; curves.len()];
    for (ci, comp) in trace.components.iter().enumerate() {
        if let CurveKind::Peripheral(p) = comp.kind {
            return Err(Error::Precondition(format!("a curve is parallel to puncture {p}")));
        }
        match index_of.get(comp.weights.as_slice()) {
            Some(&i) if matched[i].is_none() => matched[i] = Some(ci),
            _ => return Err(Error::Precondition("curves are not pairwise disjoint".into())),
        }
    }
    if matched.iter().any(Option::is_none) {
        return Err(Error::Precondition("curves are not pairwise disjoint".into()));
    }

    let regions = RegionMap::new(&trace);
    let mut uf = UnionFind::new(regions.count);
    for e in 0..tri.num_edges() {
        let (t1, k1) = tri.side_of(Label::forward(e));
        let (t2, k2) = tri.side_of(Label::backward(e));
        let w = weights[e];
        for s in 0..=w {
            uf.union(regions.segment(tri, &trace, t1, k1, s), regions.segment(tri, &trace, t2, k2, w - s));
        }
    }

    // Piece ids in order of smallest region.
    let mut piece_of_root = BTreeMap::new();
    let mut piece_of_region = vec![0; regions.count];
    for r in 0..regions.count {
        let root = uf.find(r);
        let next = piece_of_root.len();
        piece_of_region[r] = *piece_of_root.entry(root).or_insert(next);
    }
    let n = piece_of_root.len();

    let mut regions_in = vec![0i64; n];
    for &p in &piece_of_region {
        regions_in[p] += 1;
    }
    // Edge segments and the crossing-point copies at their ends.
    let mut segments = vec![0i64; n];
    let mut points = vec![0i64; n];
    for e in 0..tri.num_edges() {
        let (t, k) = tri.side_of(Label::forward(e));
        let w = weights[e];
        for s in 0..=w {
            let p = piece_of_region[regions.segment(tri, &trace, t, k, s)];
            segments[p] += 1;
            points[p] += (s >= 1) as i64 + (s < w) as i64;
        }
    }
    let mut arc_copies = vec![0i64; n];
    for (t, c) in trace.corners.iter().enumerate() {
        for k in 0..3 {
            for j in 0..c[k] {
                let (inner, outer) = regions.arc_sides(&trace, t, k, j);
                arc_copies[piece_of_region[inner]] += 1;
                arc_copies[piece_of_region[outer]] += 1;
            }
        }
    }
    let mut punctures = vec![Vec::new(); n];
    for (p, orbit) in tri.vertex_orbits().iter().enumerate() {
        let c = orbit[0];
        punctures[piece_of_region[regions.tip(&trace, c / 3, c % 3)]].push(p);
    }
    let mut boundary = vec![Vec::new(); n];
    let mut sides = vec![[0, 0]; curves.len()];
    for (i, m) in matched.iter().enumerate() {
        let (t, k, j) = trace.components[m.unwrap()].first_arc;
        let (inner, outer) = regions.arc_sides(&trace, t, k, j);
        let (a, b) = (piece_of_region[inner], piece_of_region[outer]);
        boundary[a].push(i);
        boundary[b].push(i);
        sides[i] = [a, b];
    }

    let mut pieces = Vec::with_capacity(n);
    for p in 0..n {
        let euler = points[p] - segments[p] - arc_copies[p] + regions_in[p];
        boundary[p].sort_unstable();
        let surface = SurfaceType::from_euler(euler, punctures[p].len() as u32, boundary[p].len() as u32)
            .ok_or_else(|| Error::Inconsistent(format!("piece {p} has Euler characteristic {euler}")))?;
        pieces.push(Piece {
            surface,
            punctures: std::mem::take(&mut punctures[p]),
            boundary: std::mem::take(&mut boundary[p]),
        });
    }
    Ok(Cut { pieces, sides })
}

/// Region numbering inside each triangle: the central region, then for each
/// corner `k` the regions `R(k, 0..c_k)`, where `R(k, 0)` is the tip at the
/// vertex and `R(k, j)` lies between arcs `j-1` and `j`.
struct RegionMap {
    offsets: Vec<usize>,
    count: usize,
}

impl RegionMap {
    fn new(trace: &Trace) -> Self {
        let mut offsets = Vec::with_capacity(trace.corners.len());
        let mut count = 0;
        for c in &trace.corners {
            offsets.push(count);
            count += 1 + (c[0] + c[1] + c[2]) as usize;
        }
        Self { offsets, count }
    }

    fn central(&self, t: usize) -> usize {
        self.offsets[t]
    }

    fn corner_region(&self, trace: &Trace, t: usize, k: usize, j: u64) -> usize {
        let c = trace.corners[t];
        let before: u64 = c[..k].iter().sum();
        self.offsets[t] + 1 + (before + j) as usize
    }

    fn tip(&self, trace: &Trace, t: usize, k: usize) -> usize {
        if trace.corners[t][k] > 0 {
            self.corner_region(trace, t, k, 0)
        } else {
            self.central(t)
        }
    }

    /// Region on the two sides of arc `j` at corner `k` of triangle `t`:
    /// towards the vertex, and away from it.
    fn arc_sides(&self, trace: &Trace, t: usize, k: usize, j: u64) -> (usize, usize) {
        let inner = self.corner_region(trace, t, k, j);
        let outer = if j + 1 < trace.corners[t][k] { self.corner_region(trace, t, k, j + 1) } else { self.central(t) };
        (inner, outer)
    }

    /// Region containing segment `s` of side `k` of triangle `t`, counting
    /// segments from the start vertex of the side.
    fn segment(&self, tri: &Triangulation, trace: &Trace, t: usize, k: usize, s: u64) -> usize {
        let c = trace.corners[t];
        let x = trace.weights[tri.label(t, k).edge()];
        if s < c[k] {
            self.corner_region(trace, t, k, s)
        } else if s == c[k] {
            self.central(t)
        } else {
            self.corner_region(trace, t, (k + 1) % 3, x - s)
        }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Topological kind of an essential curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SeparationClass {
    Nonseparating,
    /// Separating, and bounds a twice-punctured disc.
    Outer,
    NonouterSeparating,
}

impl std::fmt::Display for SeparationClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SeparationClass::Nonseparating => "nonseparating",
            SeparationClass::Outer => "outer",
            SeparationClass::NonouterSeparating => "nonouterSeparating",
        })
    }
}

pub fn classify_separation(tri: &Triangulation, curve: &NormalCurve) -> Result<SeparationClass> {
    let cut = cut_along(tri, std::slice::from_ref(curve))?;
    Ok(match cut.pieces.as_slice() {
        [_] => SeparationClass::Nonseparating,
        [a, b] if a.surface.is_twice_punctured_disc() || b.surface.is_twice_punctured_disc() => SeparationClass::Outer,
        [_, _] => SeparationClass::NonouterSeparating,
        other => return Err(Error::Inconsistent(format!("cutting along one curve gave {} pieces", other.len()))),
    })
}

/// Types of the complementary pieces, sorted.
pub fn piece_types(tri: &Triangulation, curves: &[NormalCurve]) -> Result<Vec<SurfaceType>> {
    let mut types: Vec<SurfaceType> = cut_along(tri, curves)?.pieces.iter().map(|p| p.surface).collect();
    types.sort();
    Ok(types)
}
