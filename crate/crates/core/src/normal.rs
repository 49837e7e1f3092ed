//! Normal coordinates of curves on an ideal triangulation.
//!
//! A normal multicurve meets every triangle in corner arcs. Its weight
//! vector (intersection count with each edge) determines it up to normal
//! isotopy, and for essential curves it is a complete isotopy invariant, so
//! curves are identified with their weight vectors throughout the crate.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::triangulation::{Label, Triangulation};

/// A weight vector indexed by edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalCurve {
    weights: Vec<u64>,
}

impl NormalCurve {
    /// Wraps a weight vector without checking it.
    pub fn from_weights_unchecked(weights: Vec<u64>) -> Self {
        Self { weights }
    }

    /// Accepts a weight vector that is a single essential curve on `tri`.
    pub fn new(tri: &Triangulation, weights: Vec<u64>) -> Result<Self> {
        let report = validate(tri, &weights)?;
        if let Some(v) = report.first() {
            return Err(Error::InvalidWeights(v.to_string()));
        }
        let trace = Trace::new(tri, &weights)?;
        match trace.components.as_slice() {
            [only] if only.kind == CurveKind::Essential => Ok(Self { weights }),
            [only] => Err(Error::Precondition(format!("curve is {:?}", only.kind))),
            parts => {
                Err(Error::Precondition(format!("weights describe {} components, expected one curve", parts.len())))
            }
        }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, edge: usize) -> u64 {
        self.weights[edge]
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(|&w| w == 0)
    }

    pub fn to_file(&self) -> CurveFile {
        CurveFile { weights: self.weights.iter().enumerate().map(|(e, &w)| (e.to_string(), w)).collect() }
    }

    pub fn from_file(tri: &Triangulation, file: &CurveFile) -> Result<Self> {
        Ok(Self { weights: weights_from_map(tri, &file.weights)? })
    }
}

/// Componentwise sum; the normal coordinates of a union of disjoint curves.
pub fn sum<'a>(curves: impl IntoIterator<Item = &'a NormalCurve>, edges: usize) -> Vec<u64> {
    let mut out = vec![0; edges];
    for c in curves {
        for (o, w) in out.iter_mut().zip(&c.weights) {
            *o += w;
        }
    }
    out
}

/// JSON form: `{"weights": {"edgeId": w, ...}}`. Missing edges carry weight 0.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CurveFile {
    pub weights: BTreeMap<String, u64>,
}

pub fn weights_from_map(tri: &Triangulation, map: &BTreeMap<String, u64>) -> Result<Vec<u64>> {
    let mut weights = vec![0; tri.num_edges()];
    for (key, &w) in map {
        let edge: usize = key.parse().map_err(|_| Error::Malformed(format!("edge key {key:?} is not an integer")))?;
        if edge >= weights.len() {
            return Err(Error::UnknownEdge(edge));
        }
        weights[edge] = w;
    }
    Ok(weights)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// The three weights around a triangle have odd sum.
    Parity { triangle: usize, weights: [u64; 3] },
    /// One weight exceeds the sum of the other two.
    TriangleInequality { triangle: usize, weights: [u64; 3] },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Parity { triangle, weights } => {
                write!(f, "triangle {triangle}: weights {weights:?} have odd sum")
            }
            Violation::TriangleInequality { triangle, weights } => {
                write!(f, "triangle {triangle}: weights {weights:?} violate the triangle inequality")
            }
        }
    }
}

/// Checks that every triangle can be filled with corner arcs. An empty
/// report means the weights describe a normal multicurve.
pub fn validate(tri: &Triangulation, weights: &[u64]) -> Result<Vec<Violation>> {
    if weights.len() != tri.num_edges() {
        return Err(Error::WeightLength { expected: tri.num_edges(), got: weights.len() });
    }
    let mut out = Vec::new();
    for (t, labels) in tri.triangles().iter().enumerate() {
        let w = labels.map(|l| weights[l.edge()]);
        let total = w[0] + w[1] + w[2];
        if total % 2 == 1 {
            out.push(Violation::Parity { triangle: t, weights: w });
        } else if w.iter().any(|&x| 2 * x > total) {
            out.push(Violation::TriangleInequality { triangle: t, weights: w });
        }
    }
    Ok(out)
}

/// One step of a curve through a triangle: entering through side `enter`,
/// leaving through side `exit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Passage {
    pub triangle: u32,
    pub enter: u8,
    pub exit: u8,
}

impl Passage {
    fn reversed(self) -> Self {
        Passage { triangle: self.triangle, enter: self.exit, exit: self.enter }
    }
}

/// Reverses the direction of travel along a closed passage sequence.
pub fn reverse_path(path: &[Passage]) -> Vec<Passage> {
    path.iter().rev().map(|p| p.reversed()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    Essential,
    /// Encircles the given puncture.
    Peripheral(usize),
}

/// A corner arc: triangle, corner (vertex at the start of that side), and
/// its index counted outward from the vertex.
pub type Arc = (usize, usize, u64);

#[derive(Clone, Debug)]
pub struct Component {
    pub passages: Vec<Passage>,
    pub weights: Vec<u64>,
    pub kind: CurveKind,
    pub first_arc: Arc,
}

impl Component {
    pub fn curve(&self) -> NormalCurve {
        NormalCurve { weights: self.weights.clone() }
    }
}

/// The realisation of a normal multicurve: corner-arc counts and the
/// connected components obtained by following arcs through triangles.
#[derive(Clone, Debug)]
pub struct Trace {
    pub weights: Vec<u64>,
    /// Arcs around corner `k` of each triangle.
    pub corners: Vec<[u64; 3]>,
    pub components: Vec<Component>,
}

impl Trace {
    pub fn new(tri: &Triangulation, weights: &[u64]) -> Result<Self> {
        let report = validate(tri, weights)?;
        if let Some(v) = report.first() {
            return Err(Error::InvalidWeights(v.to_string()));
        }
        let corners: Vec<[u64; 3]> = tri
            .triangles()
            .iter()
            .map(|labels| {
                let x = labels.map(|l| weights[l.edge()]);
                // Corner k sits between sides k-1 and k.
                [0, 1, 2].map(|k| (x[(k + 2) % 3] + x[k] - x[(k + 1) % 3]) / 2)
            })
            .collect();

        let mut visited: Vec<Vec<bool>> = weights.iter().map(|&w| vec![false; w as usize]).collect();
        let links: Vec<Vec<u64>> = (0..tri.num_punctures()).map(|p| tri.puncture_link(p)).collect();
        let mut components = Vec::new();
        for edge in 0..tri.num_edges() {
            for start in 0..weights[edge] {
                if visited[edge][start as usize] {
                    continue;
                }
                let (t0, k0) = tri.side_of(Label::forward(edge));
                let (mut t, mut k, mut p) = (t0, k0, start);
                let mut passages = Vec::new();
                let mut comp_weights = vec![0u64; tri.num_edges()];
                let mut first_arc = None;
                loop {
                    let labels = tri.triangles()[t];
                    let x = labels.map(|l| weights[l.edge()]);
                    let c = corners[t];
                    let (exit, exit_pos, arc) = if p < c[k] {
                        let exit = (k + 2) % 3;
                        (exit, x[exit] - 1 - p, (t, k, p))
                    } else {
                        let j = x[k] - 1 - p;
                        ((k + 1) % 3, j, (t, (k + 1) % 3, j))
                    };
                    first_arc.get_or_insert(arc);
                    passages.push(Passage { triangle: t as u32, enter: k as u8, exit: exit as u8 });
                    let label = labels[exit];
                    let w = weights[label.edge()];
                    let global = if label.is_reversed() { w - 1 - exit_pos } else { exit_pos };
                    visited[label.edge()][global as usize] = true;
                    comp_weights[label.edge()] += 1;
                    let (tn, kn) = tri.across(t, exit);
                    t = tn;
                    k = kn;
                    p = w - 1 - exit_pos;
                    if (t, k, p) == (t0, k0, start) {
                        break;
                    }
                }
                let kind = links
                    .iter()
                    .position(|link| *link == comp_weights)
                    .map_or(CurveKind::Essential, CurveKind::Peripheral);
                components.push(Component { passages, weights: comp_weights, kind, first_arc: first_arc.unwrap() });
            }
        }
        Ok(Self { weights: weights.to_vec(), corners, components })
    }
}

/// Splits a normal multicurve into its components, in tracing order.
pub fn trace_components(tri: &Triangulation, weights: &[u64]) -> Result<Vec<Component>> {
    Ok(Trace::new(tri, weights)?.components)
}

/// Passage sequence of a single connected curve.
pub fn passages(tri: &Triangulation, curve: &NormalCurve) -> Result<Vec<Passage>> {
    let mut comps = trace_components(tri, curve.weights())?;
    if comps.len() != 1 {
        return Err(Error::Precondition(format!("expected a connected curve, found {} components", comps.len())));
    }
    Ok(comps.pop().unwrap().passages)
}

/// Freely and cyclically reduces a closed sequence of crossed labels.
pub fn reduce_cyclic(labels: &[Label]) -> Vec<Label> {
    let mut stack: Vec<Label> = Vec::with_capacity(labels.len());
    for &l in labels {
        if stack.last() == Some(&l.inverse()) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    let mut lo = 0;
    let mut hi = stack.len();
    while hi - lo >= 2 && stack[lo] == stack[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    stack[lo..hi].to_vec()
}

/// Normal coordinates of a closed dual path given by its crossed labels.
pub fn weights_of_labels(tri: &Triangulation, labels: &[Label]) -> Vec<u64> {
    let mut w = vec![0; tri.num_edges()];
    for l in labels {
        w[l.edge()] += 1;
    }
    w
}

/// Boundary curves of a regular neighbourhood of the subcomplex spanned by
/// `edges` and `punctures` (plus the endpoints of those edges).
///
/// Each boundary circle is walked around as a closed dual path and reduced,
/// so the returned weight vectors are normal. Null-homotopic circles are
/// dropped; the rest are returned in a deterministic order without
/// duplicates.
pub fn neighborhood_boundary(tri: &Triangulation, edges: &[usize], punctures: &[usize]) -> Result<Vec<Vec<u64>>> {
    let mut in_complex = vec![false; tri.num_edges()];
    let mut vertices: BTreeSet<usize> = punctures.iter().copied().collect();
    for &e in edges {
        if e >= tri.num_edges() {
            return Err(Error::UnknownEdge(e));
        }
        in_complex[e] = true;
        vertices.extend(tri.edge_ends(e));
    }
    if let Some(&p) = vertices.iter().find(|&&p| p >= tri.num_punctures()) {
        return Err(Error::Lookup(format!("puncture {p} does not exist")));
    }
    let corners: Vec<(usize, usize)> =
        vertices.iter().flat_map(|&p| tri.vertex_orbits()[p].iter().map(|&c| (c / 3, c % 3))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut found = BTreeSet::new();
    for &start in &corners {
        if seen.contains(&start) {
            continue;
        }
        let mut labels = Vec::new();
        let mut corner = start;
        loop {
            seen.insert(corner);
            let (t, k) = corner;
            let label = tri.label(t, k);
            corner = if in_complex[label.edge()] {
                (t, (k + 1) % 3)
            } else {
                labels.push(label);
                let (tn, kn) = tri.across(t, k);
                (tn, (kn + 1) % 3)
            };
            if corner == start {
                break;
            }
        }
        let reduced = reduce_cyclic(&labels);
        if reduced.is_empty() {
            continue;
        }
        let w = weights_of_labels(tri, &reduced);
        if found.insert(w.clone()) {
            out.push(w);
        }
    }
    Ok(out)
}

/// The curve bounding a disc around the given punctures, built from a
/// breadth-first spanning tree of the edges joining them.
pub fn curve_enclosing(tri: &Triangulation, punctures: &[usize]) -> Result<NormalCurve> {
    let set: BTreeSet<usize> = punctures.iter().copied().collect();
    let Some(&root) = set.iter().next() else {
        return Err(Error::Precondition("empty puncture set".into()));
    };
    let mut reached = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    let mut tree = Vec::new();
    while let Some(p) = queue.pop_front() {
        for e in 0..tri.num_edges() {
            let [a, b] = tri.edge_ends(e);
            if a == b || !set.contains(&a) || !set.contains(&b) {
                continue;
            }
            let other = if a == p {
                b
            } else if b == p {
                a
            } else {
                continue;
            };
            if reached.insert(other) {
                tree.push(e);
                queue.push_back(other);
            }
        }
    }
    if reached != set {
        return Err(Error::Precondition(format!(
            "punctures {punctures:?} are not joined by edges of the triangulation"
        )));
    }
    let mut boundary = neighborhood_boundary(tri, &tree, &[root])?;
    if boundary.len() != 1 {
        return Err(Error::Inconsistent(format!("tree neighbourhood has {} boundary curves", boundary.len())));
    }
    NormalCurve::new(tri, boundary.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    fn tri(name: &str) -> Triangulation {
        reference::named(name).unwrap()
    }

    #[test]
    fn zero_is_valid_and_empty() {
        let t = tri("S0_5");
        let zero = vec![0; t.num_edges()];
        assert!(validate(&t, &zero).unwrap().is_empty());
        assert!(trace_components(&t, &zero).unwrap().is_empty());
    }

    #[test]
    fn parity_and_inequality_violations() {
        let t = tri("S0_5");
        let labels = t.triangles()[0];
        let mut w = vec![0; t.num_edges()];
        for l in labels {
            w[l.edge()] = 1;
        }
        let report = validate(&t, &w).unwrap();
        assert!(matches!(report[0], Violation::Parity { triangle: 0, .. }));

        let mut w = vec![0; t.num_edges()];
        w[labels[0].edge()] = 4;
        w[labels[1].edge()] = 1;
        w[labels[2].edge()] = 1;
        let report = validate(&t, &w).unwrap();
        assert!(matches!(report[0], Violation::TriangleInequality { triangle: 0, .. }));
    }

    #[test]
    fn unknown_edge_key_is_an_input_error() {
        let t = tri("S0_5");
        let map = BTreeMap::from([("99".to_string(), 1u64)]);
        assert!(matches!(weights_from_map(&t, &map), Err(Error::UnknownEdge(99))));
    }

    #[test]
    fn puncture_links_are_peripheral() {
        for name in reference::NAMES {
            let t = tri(name);
            for p in 0..t.num_punctures() {
                let comps = trace_components(&t, &t.puncture_link(p)).unwrap();
                assert_eq!(comps.len(), 1, "{name} puncture {p}");
                assert_eq!(comps[0].kind, CurveKind::Peripheral(p));
            }
        }
    }

    #[test]
    fn single_curve_traces_to_itself() {
        let t = tri("S0_5");
        let c = curve_enclosing(&t, &[1, 2]).unwrap();
        let comps = trace_components(&t, c.weights()).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].curve(), c);
        assert_eq!(comps[0].passages.len() as u64, c.total_weight());
    }

    #[test]
    fn disjoint_sum_traces_to_both_curves() {
        let t = tri("S0_5");
        let c1 = curve_enclosing(&t, &[0, 1]).unwrap();
        let c2 = curve_enclosing(&t, &[2, 3]).unwrap();
        let both = sum([&c1, &c2], t.num_edges());
        let found: BTreeSet<NormalCurve> = trace_components(&t, &both).unwrap().iter().map(Component::curve).collect();
        assert_eq!(found, BTreeSet::from([c1, c2]));
    }

    #[test]
    fn reduction_cancels_backtracks_cyclically() {
        let a = Label::forward(0);
        let b = Label::forward(1);
        let c = Label::backward(2);
        assert_eq!(reduce_cyclic(&[a, b, b.inverse(), c]), vec![a, c]);
        assert_eq!(reduce_cyclic(&[a.inverse(), b, c, a]), vec![b, c]);
        assert!(reduce_cyclic(&[a, a.inverse()]).is_empty());
    }

    #[test]
    fn rejects_peripheral_and_multicurves() {
        let t = tri("S0_5");
        assert!(NormalCurve::new(&t, t.puncture_link(0)).is_err());
        let c = curve_enclosing(&t, &[0, 1]).unwrap();
        let doubled: Vec<u64> = c.weights().iter().map(|w| 2 * w).collect();
        assert!(NormalCurve::new(&t, doubled).is_err());
    }
}
