//! Mod-2 homology classes of curves in the filled-in surface.
//!
//! A basis of `H1(S̄; Z/2)` is taken from edge cycles of the 1-skeleton
//! modulo triangle boundaries. A normal curve pairs with an edge cycle by
//! the parity of its total weight on that cycle.

use crate::cut::UnionFind;
use crate::normal::NormalCurve;
use crate::triangulation::Triangulation;

/// Edge cycles forming a basis of first homology mod 2.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    cycles: Vec<Vec<bool>>,
}

impl HomologyBasis {
    pub fn new(tri: &Triangulation) -> Self {
        let n = tri.num_edges();
        let mut reducer = Reducer::default();
        for tri_sides in tri.triangles() {
            let mut v = vec![false; n];
            for l in tri_sides {
                v[l.edge()] ^= true;
            }
            reducer.insert(v);
        }
        // Fundamental cycles of a spanning tree of the vertex graph.
        let mut uf = UnionFind::new(tri.num_punctures());
        let mut tree = vec![Vec::new(); tri.num_punctures()];
        let mut extra = Vec::new();
        for e in 0..n {
            let [a, b] = tri.edge_ends(e);
            if uf.find(a) != uf.find(b) {
                uf.union(a, b);
                tree[a].push((b, e));
                tree[b].push((a, e));
            } else {
                extra.push(e);
            }
        }
        let mut cycles = Vec::new();
        for e in extra {
            let [a, b] = tri.edge_ends(e);
            let mut v = tree_path(&tree, a, b, n);
            v[e] ^= true;
            if reducer.insert(v.clone()) {
                cycles.push(v);
            }
        }
        Self { cycles }
    }

    pub fn rank(&self) -> usize {
        self.cycles.len()
    }

    pub fn class_of(&self, curve: &NormalCurve) -> Vec<bool> {
        self.class_of_weights(curve.weights())
    }

    pub fn class_of_weights(&self, weights: &[u64]) -> Vec<bool> {
        self.cycles
            .iter()
            .map(|z| z.iter().zip(weights).filter(|(&on, _)| on).map(|(_, &w)| w).sum::<u64>() % 2 == 1)
            .collect()
    }
}

/// Whether the curve is zero in mod-2 homology, i.e. separating.
pub fn is_null_homologous(tri: &Triangulation, curve: &NormalCurve) -> bool {
    HomologyBasis::new(tri).class_of(curve).iter().all(|b| !b)
}

fn tree_path(tree: &[Vec<(usize, usize)>], from: usize, to: usize, n: usize) -> Vec<bool> {
    let mut parent = vec![None; tree.len()];
    let mut seen = vec![false; tree.len()];
    let mut queue = std::collections::VecDeque::from([from]);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &tree[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((v, e));
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![false; n];
    let mut v = to;
    while let Some((p, e)) = parent[v] {
        path[e] ^= true;
        v = p;
    }
    path
}

/// Incremental GF(2) row echelon form.
#[derive(Default)]
struct Reducer {
    rows: Vec<(usize, Vec<bool>)>,
}

impl Reducer {
    /// Adds `v` if independent of the rows so far.
    fn insert(&mut self, mut v: Vec<bool>) -> bool {
        for (pivot, row) in &self.rows {
            if v[*pivot] {
                for (a, b) in v.iter_mut().zip(row) {
                    *a ^= b;
                }
            }
        }
        match v.iter().position(|&b| b) {
            Some(pivot) => {
                self.rows.push((pivot, v));
                true
            }
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cut::{classify_separation, SeparationClass};
    use crate::normal::curve_enclosing;
    use crate::reference;

    #[test]
    fn rank_is_twice_the_genus() {
        for name in reference::NAMES {
            let tri = reference::named(name).unwrap();
            assert_eq!(HomologyBasis::new(&tri).rank(), 2 * tri.surface().genus as usize, "{name}");
        }
    }

    #[test]
    fn torus_slopes_are_nonzero() {
        let tri = reference::named("S1_1").unwrap();
        let basis = HomologyBasis::new(&tri);
        for w in [[1, 0, 1], [0, 1, 1], [1, 1, 0], [2, 1, 1]] {
            let c = NormalCurve::new(&tri, w.to_vec()).unwrap();
            assert!(basis.class_of(&c).iter().any(|&b| b));
            assert_eq!(classify_separation(&tri, &c).unwrap(), SeparationClass::Nonseparating);
        }
    }

    #[test]
    fn enclosing_curves_are_null() {
        let tri = reference::named("S1_2").unwrap();
        let c = curve_enclosing(&tri, &[0, 1]).unwrap();
        assert!(is_null_homologous(&tri, &c));
    }
}
