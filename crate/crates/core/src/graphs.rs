//! Curve-graph slices and small-graph utilities.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intersection::{are_disjoint, CurvePath};
use crate::universe::CurveUniverse;

/// Largest graph accepted by [`are_isomorphic`].
pub const ISOMORPHISM_LIMIT: usize = 64;

/// A simple undirected graph whose vertices carry integer labels
/// (curve ids). Vertex indices are local; labels are what gets exported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<usize>,
    adj: Vec<FixedBitSet>,
}

impl Graph {
    pub fn new(labels: Vec<usize>) -> Self {
        let n = labels.len();
        Self { labels, adj: vec![FixedBitSet::with_capacity(n); n] }
    }

    pub fn from_edges(labels: Vec<usize>, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new(labels);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn index_of(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a].insert(b);
            self.adj[b].insert(a);
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].ones()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones(..)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in self.adj[a].ones().filter(|&b| b > a) {
                out.push((a, b));
            }
        }
        out
    }

    /// Induced subgraph on the given local vertices, in that order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::new(vertices.iter().map(|&v| self.labels[v]).collect());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Same vertices, edges exactly where this graph has none.
    pub fn complement(&self) -> Graph {
        let n = self.len();
        let mut g = Graph::new(self.labels.clone());
        for a in 0..n {
            for b in a + 1..n {
                if !self.has_edge(a, b) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    /// Connected components as sorted local vertex lists, ordered by their
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_without(None)
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    fn components_without(&self, removed: Option<usize>) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = FixedBitSet::with_capacity(n);
        if let Some(r) = removed {
            seen.insert(r);
        }
        let mut out = Vec::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            seen.insert(start);
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for w in self.adj[v].ones() {
                    if !seen.contains(w) {
                        seen.insert(w);
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Whether removing `v` increases the number of components.
    pub fn is_cut_vertex(&self, v: usize) -> bool {
        self.components_without(Some(v)).len() > self.component_count()
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph {name} {{\n");
        for l in &self.labels {
            let _ = writeln!(s, "  {l};");
        }
        for (a, b) in self.edges() {
            let _ = writeln!(s, "  {} -- {};", self.labels[a], self.labels[b]);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_adjacency(&self) -> Adjacency {
        Adjacency {
            vertices: self.labels.clone(),
            adjacency: (0..self.len())
                .map(|v| (self.labels[v], self.neighbors(v).map(|w| self.labels[w]).collect()))
                .collect(),
        }
    }
}

/// JSON adjacency export, keyed by vertex label.
#[derive(Clone, Debug, Serialize)]
pub struct Adjacency {
    pub vertices: Vec<usize>,
    pub adjacency: BTreeMap<usize, Vec<usize>>,
}

/// The disjointness graph of a curve universe.
#[derive(Clone, Debug)]
pub struct GraphSlice {
    graph: Graph,
    bound: u64,
}

impl GraphSlice {
    pub fn build(universe: &CurveUniverse) -> Result<Self> {
        let tri = universe.triangulation();
        let paths: Vec<CurvePath> =
            universe.curves().par_iter().map(|c| CurvePath::new(tri, c)).collect::<Result<_>>()?;
        let n = paths.len();
        let rows: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|i| (i + 1..n).filter(|&j| are_disjoint(&paths[i], &paths[j])).collect())
            .collect();
        let mut graph = Graph::new((0..n).collect());
        for (i, row) in rows.into_iter().enumerate() {
            for j in row {
                graph.add_edge(i, j);
            }
        }
        Ok(Self { graph, bound: universe.bound() })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    fn check(&self, id: usize) -> Result<()> {
        if id < self.len() {
            Ok(())
        } else {
            Err(Error::Lookup(format!("curve id {id} is not in the slice")))
        }
    }

    pub fn disjoint(&self, a: usize, b: usize) -> bool {
        self.graph.has_edge(a, b)
    }

    pub fn neighbors(&self, id: usize) -> &FixedBitSet {
        &self.graph.adj[id]
    }

    pub fn link(&self, id: usize) -> Result<Vec<usize>> {
        self.check(id)?;
        Ok(self.graph.neighbors(id).collect())
    }

    /// Curves disjoint from every listed curve, excluding the listed ones.
    pub fn common_link(&self, ids: &[usize]) -> Result<Vec<usize>> {
        let mut set = FixedBitSet::with_capacity(self.len());
        set.insert_range(..);
        for &id in ids {
            self.check(id)?;
            set.intersect_with(&self.graph.adj[id]);
        }
        Ok(set.ones().collect())
    }

    pub fn induced(&self, ids: &[usize]) -> Graph {
        self.graph.induced(ids)
    }

    /// Graph on `ids` with an edge exactly where the curves intersect.
    pub fn complement_graph(&self, ids: &[usize]) -> Graph {
        self.graph.induced(ids).complement()
    }

    /// Maximum clique size, by straightforward branch and bound.
    pub fn max_clique(&self) -> usize {
        fn grow(g: &Graph, candidates: FixedBitSet, size: usize, best: &mut usize) {
            let c = candidates.count_ones(..);
            if size + c <= *best {
                return;
            }
            if c == 0 {
                *best = size;
                return;
            }
            let mut rest = candidates;
            while let Some(v) = rest.ones().next() {
                if size + rest.count_ones(..) <= *best {
                    return;
                }
                let mut next = rest.clone();
                next.intersect_with(&g.adj[v]);
                grow(g, next, size + 1, best);
                rest.set(v, false);
            }
        }
        let mut best = 0;
        let mut all = FixedBitSet::with_capacity(self.len());
        all.insert_range(..);
        grow(&self.graph, all, 0, &mut best);
        best
    }
}

/// A vertex bijection `g1 → g2` preserving edges and non-edges, if any.
pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> Result<Option<Vec<usize>>> {
    let n = g1.len();
    if n > ISOMORPHISM_LIMIT || g2.len() > ISOMORPHISM_LIMIT {
        return Err(Error::Resource(format!("isomorphism search is limited to {ISOMORPHISM_LIMIT} vertices")));
    }
    if n != g2.len() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let signature = |g: &Graph, v: usize| {
        let mut nd: Vec<usize> = g.neighbors(v).map(|w| g.degree(w)).collect();
        nd.sort_unstable();
        (g.degree(v), nd)
    };
    let sig1: Vec<_> = (0..n).map(|v| signature(g1, v)).collect();
    let sig2: Vec<_> = (0..n).map(|v| signature(g2, v)).collect();
    let mut s1 = sig1.clone();
    let mut s2 = sig2.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return Ok(None);
    }
    // Map high-degree vertices first; ties by index.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g1.degree(v)), v));

    #[allow(clippy::too_many_arguments)]
    fn extend(
        g1: &Graph,
        g2: &Graph,
        order: &[usize],
        sig1: &[(usize, Vec<usize>)],
        sig2: &[(usize, Vec<usize>)],
        map: &mut Vec<usize>,
        used: &mut FixedBitSet,
        depth: usize,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for w in 0..g2.len() {
            if used.contains(w) || sig1[v] != sig2[w] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&u| g1.has_edge(u, v) == g2.has_edge(map[u], w));
            if !consistent {
                continue;
            }
            map[v] = w;
            used.insert(w);
            if extend(g1, g2, order, sig1, sig2, map, used, depth + 1) {
                return true;
            }
            used.set(w, false);
        }
        map[v] = usize::MAX;
        false
    }

    let mut map = vec![usize::MAX; n];
    let mut used = FixedBitSet::with_capacity(n);
    Ok(extend(g1, g2, &order, &sig1, &sig2, &mut map, &mut used, 0).then_some(map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intersection::intersection_number;
    use crate::normal::curve_enclosing;
    use crate::reference;

    fn path3() -> Graph {
        Graph::from_edges(vec![0, 1, 2], &[(0, 1), (1, 2)])
    }

    #[test]
    fn path_basics() {
        let g = path3();
        assert!(g.is_cut_vertex(1));
        assert!(!g.is_cut_vertex(0));
        assert_eq!(g.degree(0), 1);
        assert_eq!(Graph::new(vec![7]).component_count(), 1);
        assert!(!Graph::new(vec![7]).is_cut_vertex(0));
    }

    #[test]
    fn complement_is_an_involution() {
        let g = path3();
        assert_eq!(g.complement().complement(), g);
        let empty = Graph::new(vec![0, 1, 2, 3]);
        assert_eq!(empty.complement().edge_count(), 6);
    }

    #[test]
    fn isomorphism_search() {
        let triangle = Graph::from_edges(vec![0, 1, 2], &[(0, 1), (1, 2), (0, 2)]);
        let other = Graph::from_edges(vec![5, 6, 7], &[(2, 0), (0, 1)]);
        let map = are_isomorphic(&path3(), &other).unwrap().unwrap();
        assert_eq!(map[1], 0);
        assert!(are_isomorphic(&path3(), &triangle).unwrap().is_none());
        assert!(are_isomorphic(&triangle, &triangle).unwrap().is_some());
        let big = Graph::new((0..65).collect());
        assert!(matches!(are_isomorphic(&big, &big), Err(Error::Resource(_))));
    }

    #[test]
    fn slice_edges_are_zero_intersection_pairs() {
        let tri = reference::named("S0_5").unwrap();
        let u = CurveUniverse::enumerate(&tri, 12).unwrap();
        let s = GraphSlice::build(&u).unwrap();
        for a in 0..u.len() {
            for b in a + 1..u.len() {
                let i = intersection_number(&tri, &u.curves()[a], &u.curves()[b]).unwrap();
                assert_eq!(s.disjoint(a, b), i == 0);
            }
        }
        // Complexity two: no three pairwise disjoint curves.
        assert_eq!(s.max_clique(), 2);
    }

    #[test]
    fn link_in_five_punctured_sphere() {
        let tri = reference::named("S0_5").unwrap();
        let u = CurveUniverse::enumerate(&tri, 12).unwrap();
        let s = GraphSlice::build(&u).unwrap();
        let a = u.id_by_curve(&curve_enclosing(&tri, &[0, 1]).unwrap()).unwrap();
        let b = u.id_by_curve(&curve_enclosing(&tri, &[3, 4]).unwrap()).unwrap();
        assert!(s.link(a).unwrap().contains(&b));
        assert!(s.link(u.len()).is_err());
    }

    #[test]
    fn exports_are_stable() {
        let g = path3();
        assert_eq!(g.to_dot("g"), "graph g {\n  0;\n  1;\n  2;\n  0 -- 1;\n  1 -- 2;\n}\n");
        let json = serde_json::to_string(&g.to_adjacency()).unwrap();
        assert_eq!(json, r#"{"vertices":[0,1,2],"adjacency":{"0":[1],"1":[0,2],"2":[1]}}"#);
    }
}
