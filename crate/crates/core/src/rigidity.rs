//! Checks that vertex bijections between curve-graph slices behave like maps
//! induced by homeomorphisms.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cut::{classify_separation, cut_along, Cut, SeparationClass};
use crate::error::{Error, Result};
use crate::graphs::{are_isomorphic, Graph, GraphSlice};
use crate::mapping_class::MappingClass;
use crate::normal::NormalCurve;
use crate::pants::{
    bounds_pair_of_pants, is_pants_decomposition_topological, is_peripheral_pair_topological, PantsFamily,
};
use crate::surface::SurfaceType;
use crate::universe::CurveUniverse;

/// Invariant checks, in the order they are run and reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Check {
    Edges,
    Class,
    Peripheral,
    Pants,
    Adjacency,
    PantsTriple,
    Genus,
}

impl Check {
    pub const INVARIANTS: [Check; 6] =
        [Check::Class, Check::Peripheral, Check::Pants, Check::Adjacency, Check::PantsTriple, Check::Genus];

    pub fn name(self) -> &'static str {
        match self {
            Check::Edges => "edges",
            Check::Class => "class",
            Check::Peripheral => "peripheral",
            Check::Pants => "pants",
            Check::Adjacency => "adjacency",
            Check::PantsTriple => "pantsTriple",
            Check::Genus => "genus",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: Check,
    pub detail: String,
}

/// A bijection between the vertex sets of two slices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateIso {
    map: Vec<usize>,
}

impl CandidateIso {
    pub fn new(map: Vec<usize>, target_len: usize) -> Result<Self> {
        if map.len() != target_len {
            return Err(Error::Malformed(format!(
                "map has {} entries but the target has {target_len} vertices",
                map.len()
            )));
        }
        let mut hit = vec![false; target_len];
        for (i, &v) in map.iter().enumerate() {
            if v >= target_len || std::mem::replace(&mut hit[v], true) {
                return Err(Error::Malformed(format!("map is not a bijection at vertex {i}")));
            }
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    pub fn image(&self, id: usize) -> usize {
        self.map[id]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `self` followed by `then`.
    pub fn compose(&self, then: &CandidateIso) -> CandidateIso {
        CandidateIso { map: self.map.iter().map(|&v| then.map[v]).collect() }
    }
}

/// Offending pairs: edges or non-edges not carried to edges or non-edges.
pub fn check_simplicial_iso(source: &GraphSlice, target: &GraphSlice, iso: &CandidateIso) -> Vec<Violation> {
    let n = source.len();
    if iso.len() != n || target.len() != n {
        return vec![Violation {
            check: Check::Edges,
            detail: format!("slices have {} and {} vertices, map has {}", n, target.len(), iso.len()),
        }];
    }
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let here = source.disjoint(a, b);
            let there = target.disjoint(iso.image(a), iso.image(b));
            if here != there {
                out.push(Violation {
                    check: Check::Edges,
                    detail: format!(
                        "{}({a},{b}) maps to {}({},{})",
                        if here { "edge " } else { "non-edge " },
                        if there { "edge " } else { "non-edge " },
                        iso.image(a),
                        iso.image(b)
                    ),
                });
            }
        }
    }
    out
}

/// The image universe `mc(u)`, in the order of `u`, and the map `c ↦ mc(c)`.
pub fn induced_iso(mc: &MappingClass, u: &CurveUniverse) -> Result<(CurveUniverse, CandidateIso)> {
    let prepared = mc.prepare(u.triangulation())?;
    let images: Vec<NormalCurve> = u.curves().par_iter().map(|c| prepared.apply(c)).collect();
    let target = CurveUniverse::from_curves(u.triangulation(), images)?;
    let iso = CandidateIso::identity(u.len());
    Ok((target, iso))
}

/// The map `c ↦ mc(c)` into a given universe; curves whose image is missing
/// are reported as a partiality error.
pub fn induced_iso_into(mc: &MappingClass, u: &CurveUniverse, target: &CurveUniverse) -> Result<CandidateIso> {
    let prepared = mc.prepare(u.triangulation())?;
    let mut map = Vec::with_capacity(u.len());
    let mut escapees = Vec::new();
    for (id, c) in u.curves().iter().enumerate() {
        match target.id_by_curve(&prepared.apply(c)) {
            Ok(t) => map.push(t),
            Err(_) => escapees.push(id),
        }
    }
    if !escapees.is_empty() {
        return Err(Error::Partiality { count: escapees.len(), escapees });
    }
    CandidateIso::new(map, target.len())
}

/// A universe with everything the invariant checks need.
#[derive(Clone, Debug)]
pub struct SliceContext {
    pub universe: CurveUniverse,
    pub slice: GraphSlice,
    pub family: PantsFamily,
    pub classes: Vec<SeparationClass>,
    /// Topologically peripheral disjoint pairs.
    pub peripheral_pairs: Vec<(usize, usize)>,
    /// Boundary triples of complementary pants with a separating member.
    pub pants_triples: Vec<[usize; 3]>,
    /// Ids of a genus-capturing family inside the universe, if one exists.
    pub genus_capture: Option<Vec<usize>>,
}

impl SliceContext {
    pub fn build(universe: CurveUniverse) -> Result<Self> {
        let slice = GraphSlice::build(&universe)?;
        let family = PantsFamily::build(&universe, &slice)?;
        let tri = universe.triangulation();
        let classes = universe.curves().par_iter().map(|c| classify_separation(tri, c)).collect::<Result<Vec<_>>>()?;
        let n = universe.len();
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| slice.disjoint(a, b)).collect();
        let peripheral_pairs = pairs
            .into_par_iter()
            .map(|(a, b)| {
                Ok(is_peripheral_pair_topological(tri, &universe.curves()[a], &universe.curves()[b])?.then_some((a, b)))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let mut triples = BTreeSet::new();
        for p in &family.decompositions {
            let curves: Vec<NormalCurve> = p.curves.iter().map(|&c| universe.curves()[c].clone()).collect();
            for piece in cut_along(tri, &curves)?.pieces {
                let b = &piece.boundary;
                if b.len() == 3 && b[0] != b[1] && b[1] != b[2] {
                    let t = [p.curves[b[0]], p.curves[b[1]], p.curves[b[2]]];
                    if t.iter().any(|&c| classes[c] != SeparationClass::Nonseparating) {
                        triples.insert(t);
                    }
                }
            }
        }
        let genus_capture = find_genus_capture(&universe, &slice)?;
        Ok(Self {
            universe,
            slice,
            family,
            classes,
            peripheral_pairs,
            pants_triples: triples.into_iter().collect(),
            genus_capture,
        })
    }

    pub fn simplicial_class(&self, id: usize) -> Option<SeparationClass> {
        self.family.classify_simplicial(id).ok()
    }
}

fn cuts_off_torus(tri: &crate::Triangulation, c: &NormalCurve) -> Result<bool> {
    let torus = SurfaceType::new(1, 0, 1);
    Ok(cut_along(tri, std::slice::from_ref(c))?.pieces.iter().any(|p| p.surface == torus))
}

fn find_genus_capture(u: &CurveUniverse, slice: &GraphSlice) -> Result<Option<Vec<usize>>> {
    let tri = u.triangulation();
    let g = tri.surface().genus as usize;
    if g == 0 {
        return Ok(Some(Vec::new()));
    }
    let mut candidates = Vec::new();
    for (i, c) in u.curves().iter().enumerate() {
        if cuts_off_torus(tri, c)? {
            candidates.push(i);
        }
    }
    fn pick(slice: &GraphSlice, cands: &[usize], g: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == g {
            return true;
        }
        for (k, &c) in cands.iter().enumerate() {
            if chosen.iter().all(|&d| slice.disjoint(c, d)) {
                chosen.push(c);
                if pick(slice, &cands[k + 1..], g, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    Ok(pick(slice, &candidates, g, &mut chosen).then_some(chosen))
}

/// Runs every invariant check on a map that already passed
/// [`check_simplicial_iso`]. Violations are listed in check order.
pub fn verify_invariant_preservation(
    source: &SliceContext,
    target: &SliceContext,
    iso: &CandidateIso,
) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    let phi = |c: usize| iso.image(c);
    let ttri = target.universe.triangulation();
    let image_curves =
        |ids: &[usize]| -> Vec<NormalCurve> { ids.iter().map(|&c| target.universe.curves()[phi(c)].clone()).collect() };

    for c in 0..source.universe.len() {
        if source.classes[c] != target.classes[phi(c)] {
            out.push(Violation {
                check: Check::Class,
                detail: format!(
                    "curve {c} is {} but its image {} is {}",
                    source.classes[c],
                    phi(c),
                    target.classes[phi(c)]
                ),
            });
        } else if source.simplicial_class(c) != target.simplicial_class(phi(c)) {
            out.push(Violation {
                check: Check::Class,
                detail: format!("simplicial class of curve {c} differs from that of its image {}", phi(c)),
            });
        }
    }

    for &(a, b) in &source.peripheral_pairs {
        let img = image_curves(&[a, b]);
        if !is_peripheral_pair_topological(ttri, &img[0], &img[1])? {
            out.push(Violation {
                check: Check::Peripheral,
                detail: format!("peripheral pair ({a},{b}) maps to ({},{}), which is not peripheral", phi(a), phi(b)),
            });
        }
    }

    let target_pants: BTreeSet<Vec<usize>> = target.family.decompositions.iter().map(|p| p.curves.clone()).collect();
    let mut mapped_pants = Vec::new();
    for (i, p) in source.family.decompositions.iter().enumerate() {
        let mut image: Vec<usize> = p.curves.iter().map(|&c| phi(c)).collect();
        image.sort_unstable();
        let ok = target_pants.contains(&image) && is_pants_decomposition_topological(ttri, &image_curves(&p.curves))?;
        if ok {
            mapped_pants.push((i, image));
        } else {
            out.push(Violation {
                check: Check::Pants,
                detail: format!("image of pants decomposition {:?} is not one", p.curves),
            });
        }
    }

    let target_index: BTreeMap<&Vec<usize>, usize> =
        target.family.decompositions.iter().enumerate().map(|(i, p)| (&p.curves, i)).collect();
    for (i, image) in &mapped_pants {
        let a = &source.family.adjacency[*i].graph;
        let b = &target.family.adjacency[target_index[image]].graph;
        if !adjacency_respected(a, b, iso) || are_isomorphic(a, b)?.is_none() {
            out.push(Violation {
                check: Check::Adjacency,
                detail: format!(
                    "adjacency graph of {:?} is not carried to that of its image",
                    source.family.decompositions[*i].curves
                ),
            });
        }
    }

    for t in &source.pants_triples {
        let img = image_curves(t);
        if !bounds_pair_of_pants(ttri, &img[0], &img[1], &img[2])? {
            out.push(Violation {
                check: Check::PantsTriple,
                detail: format!("triple {t:?} bounds a pair of pants but its image does not"),
            });
        }
    }

    let genus = source.universe.triangulation().surface().genus;
    match &source.genus_capture {
        Some(ids) => {
            let images = image_curves(ids);
            let disjoint = ids
                .iter()
                .enumerate()
                .all(|(k, &a)| ids[k + 1..].iter().all(|&b| target.slice.disjoint(phi(a), phi(b))));
            let tori = images.iter().map(|c| cuts_off_torus(ttri, c)).collect::<Result<Vec<_>>>()?;
            let captured = if disjoint && tori.iter().all(|&t| t) { ids.len() as u32 } else { 0 };
            if captured != genus || ttri.surface().genus != genus {
                out.push(Violation {
                    check: Check::Genus,
                    detail: format!("genus {genus} is not captured by the image family"),
                });
            }
        }
        None => out.push(Violation {
            check: Check::Genus,
            detail: format!("no genus-capturing family of size {genus} in the source universe"),
        }),
    }
    Ok(out)
}

fn adjacency_respected(a: &Graph, b: &Graph, iso: &CandidateIso) -> bool {
    let local: Vec<usize> = a.labels().iter().map(|&c| b.index_of(iso.image(c)).unwrap()).collect();
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| a.has_edge(i, j) == b.has_edge(local[i], local[j])))
}

/// Whether `c` lies in the complementary piece of `inner` that has the given
/// type and all of `inner` on its boundary. Returns the piece index.
fn distinguished_piece(cut: &Cut, surface: SurfaceType, curves: usize) -> Option<usize> {
    let all: Vec<usize> = (0..curves).collect();
    let found = cut.pieces_bounded_by(&all).find(|(_, p)| p.surface == surface).map(|(i, _)| i);
    found
}

fn piece_containing(
    tri: &crate::Triangulation,
    inner: &[NormalCurve],
    c: &NormalCurve,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let mut curves = inner.to_vec();
    curves.push(c.clone());
    let cut = cut_along(tri, &curves)?;
    let glued = cut.glue(&[inner.len()]);
    let side = cut.sides[inner.len()][0];
    Ok(glued.into_iter().find(|g| g.members.contains(&side)).map(|g| (g.piece.punctures, g.piece.boundary)))
}

/// Curves inside the inner piece map to curves inside the corresponding
/// piece of the image.
pub fn check_restriction(
    source: &SliceContext,
    target: &SliceContext,
    iso: &CandidateIso,
    inner: &[usize],
    inner_surface: SurfaceType,
) -> Result<bool> {
    let stri = source.universe.triangulation();
    let ttri = target.universe.triangulation();
    let inner_curves: Vec<NormalCurve> = inner.iter().map(|&c| source.universe.curves()[c].clone()).collect();
    let image_inner: Vec<NormalCurve> = inner.iter().map(|&c| target.universe.curves()[iso.image(c)].clone()).collect();
    let scut = cut_along(stri, &inner_curves)?;
    let tcut = cut_along(ttri, &image_inner)?;
    let Some(sp) = distinguished_piece(&scut, inner_surface, inner.len()) else {
        return Err(Error::Precondition(format!(
            "no piece of type {inner_surface} is bounded by the inner multicurve"
        )));
    };
    let Some(tp) = distinguished_piece(&tcut, inner_surface, inner.len()) else {
        return Ok(false);
    };
    let key = |p: &crate::cut::Piece| (p.punctures.clone(), p.boundary.clone());
    let (skey, tkey) = (key(&scut.pieces[sp]), key(&tcut.pieces[tp]));
    for c in 0..source.universe.len() {
        if inner.contains(&c) || !inner.iter().all(|&b| source.slice.disjoint(c, b)) {
            continue;
        }
        if piece_containing(stri, &inner_curves, &source.universe.curves()[c])? != Some(skey.clone()) {
            continue;
        }
        let img = iso.image(c);
        if !inner.iter().all(|&b| target.slice.disjoint(img, iso.image(b)))
            || inner.iter().any(|&b| iso.image(b) == img)
        {
            return Ok(false);
        }
        if piece_containing(ttri, &image_inner, &target.universe.curves()[img])? != Some(tkey.clone()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceMatch {
    pub boundary: Vec<usize>,
    pub source: SurfaceType,
    pub target: Option<SurfaceType>,
    pub matched: bool,
}

/// For each complementary piece of `decomposition`, compares its type with
/// the corresponding piece of the image. Pieces correspond through a curve
/// lying inside them; pieces without one fall back to the first unused
/// image piece with the same boundary curves.
pub fn boundary_match(
    source: &SliceContext,
    target: &SliceContext,
    iso: &CandidateIso,
    decomposition: &[usize],
) -> Result<Vec<PieceMatch>> {
    let images: Vec<usize> = decomposition.iter().map(|&c| iso.image(c)).collect();
    for (k, &a) in images.iter().enumerate() {
        for &b in &images[k + 1..] {
            if !target.slice.disjoint(a, b) {
                return Err(Error::Inconsistent(format!("image curves {a} and {b} intersect")));
            }
        }
    }
    let (stri, ttri) = (source.universe.triangulation(), target.universe.triangulation());
    let scurves: Vec<NormalCurve> = decomposition.iter().map(|&c| source.universe.curves()[c].clone()).collect();
    let tcurves: Vec<NormalCurve> = images.iter().map(|&c| target.universe.curves()[c].clone()).collect();
    let scut = cut_along(stri, &scurves)?;
    let tcut = cut_along(ttri, &tcurves)?;
    let key = |p: &crate::cut::Piece| (p.punctures.clone(), p.boundary.clone());

    // Source piece -> target piece, via curves inside the piece.
    let mut assigned: Vec<Option<usize>> = vec![None; scut.pieces.len()];
    let mut witnessed = vec![false; scut.pieces.len()];
    for c in 0..source.universe.len() {
        if witnessed.iter().all(|&w| w) {
            break;
        }
        if decomposition.contains(&c) || !decomposition.iter().all(|&d| source.slice.disjoint(c, d)) {
            continue;
        }
        let Some(k) = piece_containing(stri, &scurves, &source.universe.curves()[c])? else { continue };
        let Some(si) = scut.pieces.iter().position(|p| key(p) == k) else { continue };
        if witnessed[si] {
            continue;
        }
        witnessed[si] = true;
        let img = iso.image(c);
        if images.contains(&img) || !images.iter().all(|&d| target.slice.disjoint(img, d)) {
            continue;
        }
        if let Some(tk) = piece_containing(ttri, &tcurves, &target.universe.curves()[img])? {
            assigned[si] = tcut.pieces.iter().position(|p| key(p) == tk);
        }
    }
    let mut used: BTreeSet<usize> = assigned.iter().flatten().copied().collect();
    let mut out = Vec::new();
    for (si, piece) in scut.pieces.iter().enumerate() {
        let ti = if witnessed[si] {
            assigned[si]
        } else {
            let found =
                (0..tcut.pieces.len()).find(|i| !used.contains(i) && tcut.pieces[*i].boundary == piece.boundary);
            if let Some(i) = found {
                used.insert(i);
            }
            found
        };
        let target_type = ti.map(|i| tcut.pieces[i].surface);
        out.push(PieceMatch {
            boundary: piece.boundary.iter().map(|&k| decomposition[k]).collect(),
            source: piece.surface,
            target: target_type,
            matched: target_type == Some(piece.surface),
        });
    }
    Ok(out)
}

/// One stage of a nested family of subsurfaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExhaustionStage {
    pub surface: SurfaceType,
    pub boundary_curves: Vec<usize>,
    pub complement_pieces: Vec<SurfaceType>,
    pub infinite_type_flags: Vec<bool>,
    /// A puncture inside the stage, used to pick the stage among the
    /// complementary pieces of its boundary.
    pub anchor_puncture: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustionDescriptor {
    pub stages: Vec<ExhaustionStage>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ConditionStatus {
    Pass,
    Fail,
    Symbolic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub condition: u8,
    pub status: ConditionStatus,
    pub details: Vec<String>,
}

/// The set of fine pieces making up a stage, plus its glued type.
fn stage_region(cut: &Cut, glue_along: &[usize], anchor: usize) -> Option<(Vec<usize>, SurfaceType)> {
    cut.glue(glue_along).into_iter().find(|g| g.piece.punctures.contains(&anchor)).map(|g| (g.members, g.piece.surface))
}

/// Checks conditions 1 to 4 of a nested family and reports condition 5
/// from the declared flags only.
pub fn validate_exhaustion(u: &CurveUniverse, e: &ExhaustionDescriptor) -> Result<Vec<ConditionReport>> {
    let tri = u.triangulation();
    if e.stages.is_empty() {
        return Err(Error::Malformed("descriptor has no stages".into()));
    }
    for (i, s) in e.stages.iter().enumerate() {
        if s.anchor_puncture >= tri.num_punctures() {
            return Err(Error::Malformed(format!("stage {i} anchors at a missing puncture")));
        }
        if s.infinite_type_flags.len() != s.complement_pieces.len() {
            return Err(Error::Malformed(format!("stage {i} has one flag per complementary piece")));
        }
        for &c in &s.boundary_curves {
            u.curve_by_id(c)?;
        }
    }
    let curves = |ids: &[usize]| -> Vec<NormalCurve> { ids.iter().map(|&c| u.curves()[c].clone()).collect() };
    let mut details: [Vec<String>; 5] = Default::default();

    // Condition 3 first: later conditions cut along the boundaries.
    let mut cuttable = vec![true; e.stages.len()];
    for (i, s) in e.stages.iter().enumerate() {
        let ids = &s.boundary_curves;
        let distinct: BTreeSet<_> = ids.iter().collect();
        if distinct.len() != ids.len() {
            details[2].push(format!("stage {i} repeats a boundary curve"));
            cuttable[i] = false;
            continue;
        }
        if cut_along(tri, &curves(ids)).is_err() {
            details[2].push(format!("stage {i} boundary curves are not pairwise disjoint"));
            cuttable[i] = false;
            continue;
        }
        for &c in ids {
            if classify_separation(tri, &u.curves()[c])? == SeparationClass::Nonseparating {
                details[2].push(format!("stage {i} boundary curve {c} is nonseparating"));
            }
        }
    }

    // Condition 1: declared types against the computed stage and its
    // complementary pieces.
    for (i, s) in e.stages.iter().enumerate() {
        if !cuttable[i] {
            continue;
        }
        let cut = cut_along(tri, &curves(&s.boundary_curves))?;
        let Some((members, surface)) = stage_region(&cut, &[], s.anchor_puncture) else { continue };
        if surface != s.surface {
            details[0].push(format!("stage {i} is declared {} but is {surface}", s.surface));
        }
        let mut outside: Vec<SurfaceType> =
            (0..cut.pieces.len()).filter(|p| !members.contains(p)).map(|p| cut.pieces[p].surface).collect();
        let mut declared = s.complement_pieces.clone();
        outside.sort();
        declared.sort();
        if outside != declared {
            details[0].push(format!("stage {i} complementary pieces are {outside:?}, declared {declared:?}"));
        }
    }

    // Conditions 2 and 4 for consecutive stages.
    for i in 0..e.stages.len().saturating_sub(1) {
        let (a, b) = (&e.stages[i], &e.stages[i + 1]);
        if !cuttable[i] || !cuttable[i + 1] {
            continue;
        }
        if let Some(c) = a.boundary_curves.iter().find(|c| b.boundary_curves.contains(c)) {
            details[1].push(format!("stages {i} and {} share boundary curve {c}", i + 1));
            continue;
        }
        let all: Vec<usize> = a.boundary_curves.iter().chain(&b.boundary_curves).copied().collect();
        let Ok(cut) = cut_along(tri, &curves(&all)) else {
            details[1].push(format!("boundaries of stages {i} and {} intersect", i + 1));
            continue;
        };
        let ka = a.boundary_curves.len();
        let along_b: Vec<usize> = (ka..all.len()).collect();
        let along_a: Vec<usize> = (0..ka).collect();
        let (Some((inner, _)), Some((outer, _))) =
            (stage_region(&cut, &along_b, a.anchor_puncture), stage_region(&cut, &along_a, b.anchor_puncture))
        else {
            continue;
        };
        let inside = inner.iter().all(|p| outer.contains(p))
            && (0..ka).all(|k| cut.sides[k].iter().all(|p| outer.contains(p)))
            && (ka..all.len()).all(|k| cut.sides[k].iter().all(|p| !inner.contains(p)));
        if !inside {
            details[1].push(format!("stage {i} is not contained in the interior of stage {}", i + 1));
            continue;
        }
        for p in outer.iter().filter(|p| !inner.contains(p)) {
            let piece = &cut.pieces[*p];
            if piece.surface.complexity() < 4 {
                details[3].push(format!(
                    "piece {} between stages {i} and {} has complexity {}",
                    piece.surface,
                    i + 1,
                    piece.surface.complexity()
                ));
            }
        }
    }

    let flags_ok = e.stages.iter().all(|s| s.infinite_type_flags.iter().all(|&f| f));
    if !flags_ok {
        details[4].push("a complementary piece is declared of finite type".into());
    }
    Ok(details
        .into_iter()
        .enumerate()
        .map(|(k, d)| ConditionReport {
            condition: k as u8 + 1,
            status: if k == 4 {
                if d.is_empty() {
                    ConditionStatus::Symbolic
                } else {
                    ConditionStatus::Fail
                }
            } else if d.is_empty() {
                ConditionStatus::Pass
            } else {
                ConditionStatus::Fail
            },
            details: d,
        })
        .collect())
}

/// Automorphisms of a small slice that break some invariant. At finite
/// bound these come from truncation, not from the surface.
pub fn truncation_artifacts(ctx: &SliceContext, cap: usize) -> Result<Vec<(CandidateIso, Vec<Violation>)>> {
    let g = ctx.slice.graph();
    let mut out = Vec::new();
    for map in slice_automorphisms(g, cap)? {
        let iso = CandidateIso::new(map, g.len())?;
        let report = verify_invariant_preservation(ctx, ctx, &iso)?;
        if !report.is_empty() {
            out.push((iso, report));
        }
    }
    Ok(out)
}

/// Up to `cap` automorphisms of a graph with at most 64 vertices, in
/// lexicographic order of the vertex map.
pub fn slice_automorphisms(g: &Graph, cap: usize) -> Result<Vec<Vec<usize>>> {
    if g.len() > crate::graphs::ISOMORPHISM_LIMIT {
        return Err(Error::Resource("automorphism search is limited to 64 vertices".into()));
    }
    fn extend(g: &Graph, map: &mut Vec<usize>, used: &mut Vec<bool>, cap: usize, out: &mut Vec<Vec<usize>>) {
        if out.len() >= cap {
            return;
        }
        let v = map.len();
        if v == g.len() {
            out.push(map.clone());
            return;
        }
        for w in 0..g.len() {
            if used[w] || g.degree(v) != g.degree(w) {
                continue;
            }
            if (0..v).all(|u| g.has_edge(u, v) == g.has_edge(map[u], w)) {
                used[w] = true;
                map.push(w);
                extend(g, map, used, cap, out);
                map.pop();
                used[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(g, &mut Vec::new(), &mut vec![false; g.len()], cap, &mut out);
    Ok(out)
}
