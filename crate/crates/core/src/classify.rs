//! Per-curve classification over a universe, with the topological answer
//! alongside the one read off pants adjacency graphs.

use rayon::prelude::*;
use serde::Serialize;

use crate::cut::{classify_separation, SeparationClass};
use crate::error::Result;
use crate::graphs::GraphSlice;
use crate::normal::CurveFile;
use crate::pants::PantsFamily;
use crate::universe::CurveUniverse;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveClassification {
    pub id: usize,
    pub weight: u64,
    #[serde(flatten)]
    pub curve: CurveFile,
    pub topological: SeparationClass,
    /// `None` when the curve lies in no enumerated decomposition.
    pub simplicial: Option<SeparationClass>,
    /// Largest degree of the curve over the adjacency graphs containing it.
    pub max_degree: Option<usize>,
    /// Whether the curve is a cut vertex of every adjacency graph containing it.
    pub cut_vertex_everywhere: Option<bool>,
}

impl CurveClassification {
    pub fn agrees(&self) -> bool {
        self.simplicial == Some(self.topological)
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub slice: GraphSlice,
    pub family: PantsFamily,
    pub curves: Vec<CurveClassification>,
}

/// Classifies the curves of `u` of weight at most `core_bound`.
pub fn classify_universe(u: &CurveUniverse, core_bound: u64) -> Result<Classification> {
    let slice = GraphSlice::build(u)?;
    let family = PantsFamily::build(u, &slice)?;
    let ids: Vec<usize> = (0..u.len()).filter(|&i| u.curves()[i].total_weight() <= core_bound).collect();
    let curves = ids
        .par_iter()
        .map(|&id| {
            let c = &u.curves()[id];
            let graphs = family.graphs_containing(id);
            let (max_degree, cut) = if graphs.is_empty() {
                (None, None)
            } else {
                let v = |g: &crate::graphs::Graph| g.index_of(id).expect("curve is a vertex");
                (graphs.iter().map(|g| g.degree(v(g))).max(), Some(graphs.iter().all(|g| g.is_cut_vertex(v(g)))))
            };
            Ok(CurveClassification {
                id,
                weight: c.total_weight(),
                curve: c.to_file(),
                topological: classify_separation(u.triangulation(), c)?,
                simplicial: family.classify_simplicial(id).ok(),
                max_degree,
                cut_vertex_everywhere: cut,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Classification { slice, family, curves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    #[test]
    fn sphere_with_five_punctures_agrees() {
        let tri = reference::named("S0_5").unwrap();
        let u = CurveUniverse::enumerate(&tri, 12).unwrap();
        let c = classify_universe(&u, 7).unwrap();
        assert!(!c.curves.is_empty());
        assert!(c.curves.iter().all(|x| x.weight <= 7 && x.agrees()));
        // On S0,5 every curve is outer: it cuts off two punctures.
        assert!(c.curves.iter().all(|x| x.topological == SeparationClass::Outer));
    }
}
