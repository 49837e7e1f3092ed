//! Mapping classes as flip sequences followed by a relabeling.
//!
//! Flipping the listed edges of `T` in order gives a triangulation `T'`;
//! the relabeling sends each edge of `T'` to an edge of `T` and must be the
//! edge map of a combinatorial isomorphism `T' → T`. Orientation reversing
//! isomorphisms are allowed, so the group is the extended mapping class
//! group.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal::NormalCurve;
use crate::triangulation::Triangulation;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MappingClass {
    pub flips: Vec<usize>,
    /// `relabeling[e]` is the image in `T` of edge `e` of the flipped
    /// triangulation.
    pub relabeling: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MappingClassFile {
    pub flips: Vec<usize>,
    pub relabeling: BTreeMap<String, usize>,
}

impl MappingClass {
    pub fn identity(edges: usize) -> Self {
        Self { flips: Vec::new(), relabeling: (0..edges).collect() }
    }

    pub fn from_file(file: &MappingClassFile, edges: usize) -> Result<Self> {
        let mut relabeling = vec![usize::MAX; edges];
        for (k, &v) in &file.relabeling {
            let e: usize =
                k.parse().map_err(|_| Error::InvalidMappingClass(format!("relabeling key {k:?} is not an edge id")))?;
            if e >= edges || v >= edges {
                return Err(Error::InvalidMappingClass(format!("relabeling {e} -> {v} is out of range")));
            }
            relabeling[e] = v;
        }
        if let Some(e) = relabeling.iter().position(|&v| v == usize::MAX) {
            return Err(Error::InvalidMappingClass(format!("relabeling misses edge {e}")));
        }
        Ok(Self { flips: file.flips.clone(), relabeling })
    }

    pub fn to_file(&self) -> MappingClassFile {
        MappingClassFile {
            flips: self.flips.clone(),
            relabeling: self.relabeling.iter().enumerate().map(|(e, &v)| (e.to_string(), v)).collect(),
        }
    }

    /// Checks the flips and the relabeling against `tri`.
    pub fn prepare(&self, tri: &Triangulation) -> Result<PreparedMappingClass> {
        let n = tri.num_edges();
        if self.relabeling.len() != n {
            return Err(Error::InvalidMappingClass(format!(
                "relabeling has {} entries for {n} edges",
                self.relabeling.len()
            )));
        }
        let mut current = tri.clone();
        let mut steps = Vec::with_capacity(self.flips.len());
        for (i, &e) in self.flips.iter().enumerate() {
            if e >= n {
                return Err(Error::InvalidMappingClass(format!("flip {i} names unknown edge {e}")));
            }
            let square = current
                .square(e)
                .map_err(|_| Error::InvalidMappingClass(format!("flip {i}: edge {e} is not flippable")))?;
            steps.push((e, square));
            current = current.flip(e)?;
        }
        let iso =
            current.isomorphisms_to(tri).into_iter().find(|iso| iso.edge_map == self.relabeling).ok_or_else(|| {
                Error::InvalidMappingClass("relabeling is not an isomorphism onto the triangulation".into())
            })?;
        Ok(PreparedMappingClass {
            steps,
            relabeling: self.relabeling.clone(),
            orientation_preserving: iso.orientation_preserving,
        })
    }

    pub fn apply(&self, tri: &Triangulation, curve: &NormalCurve) -> Result<NormalCurve> {
        Ok(self.prepare(tri)?.apply(curve))
    }

    /// `self` followed by `then`.
    pub fn compose(&self, then: &MappingClass) -> MappingClass {
        let n = self.relabeling.len();
        let mut inverse = vec![0; n];
        for (e, &v) in self.relabeling.iter().enumerate() {
            inverse[v] = e;
        }
        let mut flips = self.flips.clone();
        flips.extend(then.flips.iter().map(|&f| inverse[f]));
        let relabeling = (0..n).map(|e| then.relabeling[self.relabeling[e]]).collect();
        MappingClass { flips, relabeling }
    }

    pub fn inverse(&self) -> MappingClass {
        let n = self.relabeling.len();
        let flips = self.flips.iter().rev().map(|&f| self.relabeling[f]).collect();
        let mut relabeling = vec![0; n];
        for (e, &v) in self.relabeling.iter().enumerate() {
            relabeling[v] = e;
        }
        MappingClass { flips, relabeling }
    }
}

/// A validated mapping class with its flip squares precomputed.
#[derive(Clone, Debug)]
pub struct PreparedMappingClass {
    steps: Vec<(usize, [usize; 4])>,
    relabeling: Vec<usize>,
    orientation_preserving: bool,
}

impl PreparedMappingClass {
    pub fn orientation_preserving(&self) -> bool {
        self.orientation_preserving
    }

    pub fn apply_weights(&self, weights: &[u64]) -> Vec<u64> {
        let mut w = weights.to_vec();
        for &(e, [a, b, c, d]) in &self.steps {
            w[e] = (w[a] + w[c]).max(w[b] + w[d]) - w[e];
        }
        let mut out = vec![0; w.len()];
        for (e, &v) in self.relabeling.iter().enumerate() {
            out[v] = w[e];
        }
        out
    }

    pub fn apply(&self, curve: &NormalCurve) -> NormalCurve {
        NormalCurve::from_weights_unchecked(self.apply_weights(curve.weights()))
    }
}

/// Mapping classes realised by flip sequences of length at most `depth`
/// that return to a triangulation isomorphic to `tri`, including the
/// automorphisms of `tri` itself. Immediate backtracking is skipped.
pub fn flip_cycles(tri: &Triangulation, depth: usize) -> Vec<MappingClass> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    walk(tri, tri, depth, &mut path, &mut out);
    out
}

fn walk(
    home: &Triangulation,
    current: &Triangulation,
    depth: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<MappingClass>,
) {
    for iso in current.isomorphisms_to(home) {
        out.push(MappingClass { flips: path.clone(), relabeling: iso.edge_map });
    }
    if depth == 0 {
        return;
    }
    for e in 0..current.num_edges() {
        if path.last() == Some(&e) || !current.is_flippable(e) {
            continue;
        }
        let next = current.flip(e).expect("flippable edge");
        path.push(e);
        walk(home, &next, depth - 1, path, out);
        path.pop();
    }
}

/// Keeps the first mapping class of each distinct action on `probes`.
pub fn dedupe_by_action(
    tri: &Triangulation,
    classes: Vec<MappingClass>,
    probes: &[NormalCurve],
) -> Result<Vec<MappingClass>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mc in classes {
        let prepared = mc.prepare(tri)?;
        let action: Vec<Vec<u64>> = probes.iter().map(|c| prepared.apply_weights(c.weights())).collect();
        if seen.insert(action) {
            out.push(mc);
        }
    }
    Ok(out)
}

/// Deterministic pseudo-random words in `generators` of length `1..=max_len`.
pub fn random_words(generators: &[MappingClass], count: usize, max_len: usize, seed: u64) -> Vec<MappingClass> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    if generators.is_empty() {
        return out;
    }
    for _ in 0..count {
        let len = rng.gen_range(1..=max_len.max(1));
        let mut word = generators[rng.gen_range(0..generators.len())].clone();
        for _ in 1..len {
            let g = &generators[rng.gen_range(0..generators.len())];
            word = if rng.gen_bool(0.5) { word.compose(g) } else { word.compose(&g.inverse()) };
        }
        out.push(word);
    }
    out
}
