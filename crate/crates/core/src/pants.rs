//! Pants decompositions, adjacency graphs and the curve classifiers built
//! on them.

use rayon::prelude::*;
use serde::Serialize;

use crate::cut::{classify_separation, cut_along, SeparationClass};
use crate::error::{Error, Result};
use crate::graphs::{Graph, GraphSlice};
use crate::normal::NormalCurve;
use crate::surface::SurfaceType;
use crate::triangulation::Triangulation;
use crate::universe::CurveUniverse;

/// A pants decomposition as sorted curve ids of a universe.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PantsDecomposition {
    pub curves: Vec<usize>,
}

/// A(P): vertices are the curves of P, labelled by curve id.
#[derive(Clone, Debug)]
pub struct AdjacencyGraph {
    pub graph: Graph,
    /// Curves that appear twice on the boundary of one pair of pants.
    pub self_adjacent: Vec<bool>,
}

impl AdjacencyGraph {
    pub fn vertex(&self, id: usize) -> Option<usize> {
        self.graph.index_of(id)
    }
}

fn curves_of(u: &CurveUniverse, ids: &[usize]) -> Result<Vec<NormalCurve>> {
    ids.iter().map(|&id| u.curve_by_id(id).cloned()).collect()
}

/// Every complementary piece is a pair of pants.
pub fn is_pants_decomposition_topological(tri: &Triangulation, curves: &[NormalCurve]) -> Result<bool> {
    let cut = cut_along(tri, curves)?;
    Ok(cut.pieces.iter().all(|p| p.surface.is_pair_of_pants()))
}

/// Pairwise disjoint, and no other universe curve misses all of them.
pub fn is_pants_decomposition_simplicial(slice: &GraphSlice, ids: &[usize]) -> Result<bool> {
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            if a == b || !slice.disjoint(a, b) {
                return Ok(false);
            }
        }
    }
    if ids.is_empty() {
        return Ok(slice.is_empty());
    }
    Ok(slice.common_link(ids)?.is_empty())
}

/// All sets of `size` pairwise disjoint curves, in lexicographic order.
pub fn cliques(slice: &GraphSlice, size: usize) -> Vec<Vec<usize>> {
    let n = slice.len();
    if size == 0 {
        return vec![Vec::new()];
    }
    let per_start: Vec<Vec<Vec<usize>>> = (0..n)
        .into_par_iter()
        .map(|v| {
            let mut out = Vec::new();
            let mut candidates = slice.neighbors(v).clone();
            candidates.set_range(..v + 1, false);
            let mut current = vec![v];
            grow(slice, &candidates, size, &mut current, &mut out);
            out
        })
        .collect();
    per_start.into_iter().flatten().collect()
}

fn grow(
    slice: &GraphSlice,
    candidates: &fixedbitset::FixedBitSet,
    size: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == size {
        out.push(current.clone());
        return;
    }
    if current.len() + candidates.count_ones(..) < size {
        return;
    }
    for w in candidates.ones() {
        let mut next = candidates.clone();
        next.intersect_with(slice.neighbors(w));
        next.set_range(..w + 1, false);
        current.push(w);
        grow(slice, &next, size, current, out);
        current.pop();
    }
}

/// All pants decompositions among the universe curves.
pub fn enumerate_pants_decompositions(u: &CurveUniverse, slice: &GraphSlice) -> Result<Vec<PantsDecomposition>> {
    let xi = u.triangulation().surface().complexity();
    if xi <= 0 {
        return Ok(Vec::new());
    }
    let tri = u.triangulation();
    let found: Vec<Option<PantsDecomposition>> = cliques(slice, xi as usize)
        .into_par_iter()
        .map(|ids| {
            let curves = curves_of(u, &ids)?;
            Ok(is_pants_decomposition_topological(tri, &curves)?.then_some(PantsDecomposition { curves: ids }))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// A(P) from the complementary pieces.
pub fn adjacency_graph(u: &CurveUniverse, p: &PantsDecomposition) -> Result<AdjacencyGraph> {
    let curves = curves_of(u, &p.curves)?;
    let cut = cut_along(u.triangulation(), &curves)?;
    let mut graph = Graph::new(p.curves.clone());
    let mut self_adjacent = vec![false; p.curves.len()];
    for piece in &cut.pieces {
        let b = &piece.boundary;
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                if b[i] == b[j] {
                    self_adjacent[b[i]] = true;
                } else {
                    graph.add_edge(b[i], b[j]);
                }
            }
        }
    }
    Ok(AdjacencyGraph { graph, self_adjacent })
}

/// A universe curve meeting `a` and `b` and missing the rest of P; the
/// lowest id is returned.
pub fn adjacency_witness(slice: &GraphSlice, p: &PantsDecomposition, a: usize, b: usize) -> Result<Option<usize>> {
    if !p.curves.contains(&a) || !p.curves.contains(&b) {
        return Err(Error::Precondition("witness curves must belong to the decomposition".into()));
    }
    let others: Vec<usize> = p.curves.iter().copied().filter(|&x| x != a && x != b).collect();
    let missing_others = slice.common_link(&others)?;
    Ok(missing_others.into_iter().find(|&g| g != a && g != b && !slice.disjoint(g, a) && !slice.disjoint(g, b)))
}

/// A(P) with edges exactly where an adjacency witness exists in the
/// universe.
pub fn simplicial_adjacency_graph(slice: &GraphSlice, p: &PantsDecomposition) -> Result<Graph> {
    let mut graph = Graph::new(p.curves.clone());
    for i in 0..p.curves.len() {
        for j in i + 1..p.curves.len() {
            if adjacency_witness(slice, p, p.curves[i], p.curves[j])?.is_some() {
                graph.add_edge(i, j);
            }
        }
    }
    Ok(graph)
}

/// Classifies curve `id` from the adjacency graphs of the decompositions
/// containing it: a cut vertex in all of them is nonouter separating,
/// degree at most two in all of them is outer, anything else is
/// nonseparating.
pub fn classify_simplicial(containing: &[&Graph], id: usize) -> Result<SeparationClass> {
    if containing.is_empty() {
        return Err(Error::InsufficientData(format!("curve {id} lies in no enumerated pants decomposition")));
    }
    let mut all_cut = true;
    let mut all_low = true;
    for g in containing {
        let v = g
            .index_of(id)
            .ok_or_else(|| Error::Precondition(format!("curve {id} is not a vertex of every given graph")))?;
        all_cut &= g.is_cut_vertex(v);
        all_low &= g.degree(v) <= 2;
    }
    Ok(if all_cut {
        SeparationClass::NonouterSeparating
    } else if all_low {
        SeparationClass::Outer
    } else {
        SeparationClass::Nonseparating
    })
}

/// `genus(S)` disjoint curves, each cutting off a one-holed torus. The
/// search runs over universes of increasing bound and returns the
/// lexicographically first family.
pub fn genus_capture_multicurve(tri: &Triangulation) -> Result<Vec<NormalCurve>> {
    let s = tri.surface();
    let g = s.genus as usize;
    if g == 0 {
        return Ok(Vec::new());
    }
    if s.punctures + s.boundary <= 1 && g == 1 {
        return Err(Error::Precondition("a once-punctured torus has no separating essential curve".into()));
    }
    let torus = SurfaceType::new(1, 0, 1);
    for bound in (2..=48).step_by(2) {
        let u = CurveUniverse::enumerate(tri, bound)?;
        let candidates: Vec<usize> = (0..u.len())
            .filter(|&i| {
                cut_along(tri, std::slice::from_ref(&u.curves()[i]))
                    .map(|c| c.pieces.iter().any(|p| p.surface == torus))
                    .unwrap_or(false)
            })
            .collect();
        if candidates.len() < g {
            continue;
        }
        let chosen = CurveUniverse::from_curves(tri, candidates.iter().map(|&i| u.curves()[i].clone()).collect())?;
        let slice = GraphSlice::build(&chosen)?;
        if let Some(ids) = cliques(&slice, g).into_iter().next() {
            return curves_of(&chosen, &ids);
        }
    }
    Err(Error::Resource("no genus-capturing family found up to weight 48".into()))
}

/// `a` and `b` cobound a once-punctured annulus.
pub fn is_peripheral_pair_topological(tri: &Triangulation, a: &NormalCurve, b: &NormalCurve) -> Result<bool> {
    if a == b {
        return Err(Error::Precondition("a peripheral pair needs two distinct curves".into()));
    }
    let cut = cut_along(tri, &[a.clone(), b.clone()])?;
    Ok(cut.pieces.iter().any(|p| p.surface == SurfaceType::new(0, 1, 2) && p.boundary == [0, 1]))
}

/// Number of components of `(L(a) ∩ L(b))*` within the slice.
pub fn common_link_components(slice: &GraphSlice, a: usize, b: usize) -> Result<usize> {
    let common = slice.common_link(&[a, b])?;
    Ok(slice.complement_graph(&common).component_count())
}

/// The two-component criterion for disjoint nonouter separating curves.
pub fn is_peripheral_pair_simplicial(u: &CurveUniverse, slice: &GraphSlice, a: usize, b: usize) -> Result<bool> {
    if a == b {
        return Err(Error::Precondition("a peripheral pair needs two distinct curves".into()));
    }
    if !slice.disjoint(a, b) {
        return Err(Error::Precondition(format!("curves {a} and {b} intersect")));
    }
    let tri = u.triangulation();
    for id in [a, b] {
        let class = classify_separation(tri, u.curve_by_id(id)?)?;
        if class != SeparationClass::NonouterSeparating {
            return Err(Error::Precondition(format!("curve {id} is {class}, not nonouter separating")));
        }
    }
    Ok(common_link_components(slice, a, b)? == 2)
}

/// Some complementary pair of pants has `a`, `b`, `c` as its boundary.
pub fn bounds_pair_of_pants(tri: &Triangulation, a: &NormalCurve, b: &NormalCurve, c: &NormalCurve) -> Result<bool> {
    if a == b || b == c || a == c {
        return Err(Error::Precondition("a pants triple needs three distinct curves".into()));
    }
    let cut = cut_along(tri, &[a.clone(), b.clone(), c.clone()])?;
    Ok(cut.pieces.iter().any(|p| p.surface.is_pair_of_pants() && p.boundary == [0, 1, 2]))
}

/// Pants decompositions of a universe with their adjacency graphs and the
/// per-curve classifications derived from them.
#[derive(Clone, Debug)]
pub struct PantsFamily {
    pub decompositions: Vec<PantsDecomposition>,
    pub adjacency: Vec<AdjacencyGraph>,
    /// For each curve id, the decompositions containing it.
    pub containing: Vec<Vec<usize>>,
}

impl PantsFamily {
    pub fn build(u: &CurveUniverse, slice: &GraphSlice) -> Result<Self> {
        let decompositions = enumerate_pants_decompositions(u, slice)?;
        let adjacency = decompositions.par_iter().map(|p| adjacency_graph(u, p)).collect::<Result<Vec<_>>>()?;
        let mut containing = vec![Vec::new(); u.len()];
        for (i, p) in decompositions.iter().enumerate() {
            for &c in &p.curves {
                containing[c].push(i);
            }
        }
        Ok(Self { decompositions, adjacency, containing })
    }

    pub fn graphs_containing(&self, id: usize) -> Vec<&Graph> {
        self.containing[id].iter().map(|&i| &self.adjacency[i].graph).collect()
    }

    pub fn classify_simplicial(&self, id: usize) -> Result<SeparationClass> {
        classify_simplicial(&self.graphs_containing(id), id)
    }

    /// Curves lying in at least one decomposition.
    pub fn covered(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.containing.len()).filter(|&c| !self.containing[c].is_empty())
    }

    /// Witness-based adjacency graphs, with witnesses drawn from a larger
    /// universe. Vertex labels stay the ids of `u`.
    pub fn witness_graphs(
        &self,
        u: &CurveUniverse,
        witnesses: &CurveUniverse,
        witness_slice: &GraphSlice,
    ) -> Result<Vec<Graph>> {
        self.decompositions
            .par_iter()
            .map(|p| {
                let mapped =
                    p.curves.iter().map(|&c| witnesses.id_by_curve(u.curve_by_id(c)?)).collect::<Result<Vec<_>>>()?;
                let wp = PantsDecomposition { curves: mapped };
                let mut g = Graph::new(p.curves.clone());
                for i in 0..p.curves.len() {
                    for j in i + 1..p.curves.len() {
                        if adjacency_witness(witness_slice, &wp, wp.curves[i], wp.curves[j])?.is_some() {
                            g.add_edge(i, j);
                        }
                    }
                }
                Ok(g)
            })
            .collect()
    }
}
