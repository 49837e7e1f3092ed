//! Shipped data: reference triangulations, bounds, mapping-class fixtures,
//! negative fixtures and exhaustion descriptors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mapping_class::{dedupe_by_action, flip_cycles, random_words, MappingClass, MappingClassFile};
use crate::normal::{curve_enclosing, weights_from_map, NormalCurve};
use crate::reference;
use crate::rigidity::{
    check_simplicial_iso, induced_iso, validate_exhaustion, verify_invariant_preservation, CandidateIso, Check,
    ConditionReport, ConditionStatus, ExhaustionDescriptor, ExhaustionStage, SliceContext,
};
use crate::surface::SurfaceType;
use crate::triangulation::{Triangulation, TriangulationFile};
use crate::universe::CurveUniverse;

pub const DATA_DIR_VAR: &str = "CURVEKIT_DATA_DIR";

/// `$CURVEKIT_DATA_DIR`, or the `data` directory of the source tree.
pub fn data_dir() -> PathBuf {
    match std::env::var_os(DATA_DIR_VAR) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).ancestors().nth(2).expect("workspace root").join("data"),
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SurfaceConfig {
    /// Universe bound used when classifying curves.
    pub classify_bound: u64,
    /// Curves up to this weight are reported; heavier ones may lack the
    /// decompositions that decide their class.
    pub core_bound: u64,
    pub harness_bound: u64,
    pub mapping_classes: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Config {
    pub surfaces: BTreeMap<String, SurfaceConfig>,
    pub peripheral_surface: String,
    pub peripheral_bound: u64,
    pub farey_max_entry: i64,
}

impl Config {
    pub fn load(dir: &Path) -> Result<Self> {
        read_json(&dir.join("config.json"))
    }

    pub fn surface(&self, name: &str) -> Result<&SurfaceConfig> {
        self.surfaces.get(name).ok_or_else(|| Error::Lookup(format!("no configuration for surface {name}")))
    }
}

/// Loads `surfaces/<name>.json` from the data directory.
pub fn load_triangulation(dir: &Path, name: &str) -> Result<Triangulation> {
    let file: TriangulationFile = read_json(&dir.join("surfaces").join(format!("{name}.json")))?;
    Triangulation::from_file(&file)
}

/// A curve given by weights, optionally with the punctures it encloses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecipe {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enclose: Option<Vec<usize>>,
    pub weights: BTreeMap<String, u64>,
}

impl CurveRecipe {
    pub fn enclosing(tri: &Triangulation, punctures: &[usize]) -> Result<Self> {
        let c = curve_enclosing(tri, punctures)?;
        Ok(Self { enclose: Some(punctures.to_vec()), weights: c.to_file().weights })
    }

    pub fn of(c: &NormalCurve) -> Self {
        Self { enclose: None, weights: c.to_file().weights }
    }

    /// The curve, checking that weights and recipe agree.
    pub fn curve(&self, tri: &Triangulation) -> Result<NormalCurve> {
        let c = NormalCurve::new(tri, weights_from_map(tri, &self.weights)?)?;
        if let Some(p) = &self.enclose {
            if curve_enclosing(tri, p)? != c {
                return Err(Error::Inconsistent(format!("weights do not enclose punctures {p:?}")));
            }
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NamedMappingClass {
    pub name: String,
    #[serde(flatten)]
    pub mapping_class: MappingClassFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MappingClassSet {
    pub surface: String,
    pub seed: u64,
    pub mapping_classes: Vec<NamedMappingClass>,
}

impl MappingClassSet {
    pub fn load(dir: &Path, surface: &str) -> Result<Self> {
        read_json(&dir.join("mapping_classes").join(format!("{surface}.json")))
    }

    pub fn get(&self, tri: &Triangulation, name: &str) -> Result<MappingClass> {
        let entry = self
            .mapping_classes
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::Lookup(format!("no mapping class {name} for {}", self.surface)))?;
        MappingClass::from_file(&entry.mapping_class, tri.num_edges())
    }
}

/// Flip cycles of length at most two, distinct by action, followed by
/// pseudo-random words of length at most three in them.
pub fn generate_mapping_classes(tri: &Triangulation, count: usize, seed: u64) -> Result<Vec<MappingClass>> {
    let probes = CurveUniverse::enumerate(tri, 8)?.curves().to_vec();
    let generators = dedupe_by_action(tri, flip_cycles(tri, 2), &probes)?;
    let mut pool: Vec<MappingClass> = generators.iter().take(count / 2).cloned().collect();
    pool.extend(random_words(&generators[1..], 4 * count, 3, seed));
    let mut out = dedupe_by_action(tri, pool, &probes)?;
    if out.len() < count {
        return Err(Error::InsufficientData(format!("only {} distinct mapping classes", out.len())));
    }
    out.truncate(count);
    Ok(out)
}

pub fn generate_mapping_class_set(tri: &Triangulation, surface: &str, cfg: &SurfaceConfig) -> Result<MappingClassSet> {
    let classes = generate_mapping_classes(tri, cfg.mapping_classes, cfg.seed)?;
    Ok(MappingClassSet {
        surface: surface.to_string(),
        seed: cfg.seed,
        mapping_classes: classes
            .iter()
            .enumerate()
            .map(|(i, m)| NamedMappingClass { name: format!("mc{i:02}"), mapping_class: m.to_file() })
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum UniverseSpec {
    Bound(u64),
    Curves(Vec<CurveRecipe>),
}

impl UniverseSpec {
    pub fn build(&self, tri: &Triangulation) -> Result<CurveUniverse> {
        match self {
            UniverseSpec::Bound(b) => CurveUniverse::enumerate(tri, *b),
            UniverseSpec::Curves(list) => {
                CurveUniverse::from_curves(tri, list.iter().map(|r| r.curve(tri)).collect::<Result<_>>()?)
            }
        }
    }
}

/// A vertex map built from transpositions, meant to fail one check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NegativeFixture {
    pub name: String,
    pub surface: String,
    pub designated_check: Check,
    pub universe: UniverseSpec,
    pub swaps: Vec<[CurveRecipe; 2]>,
}

impl NegativeFixture {
    pub fn load(dir: &Path, name: &str) -> Result<Self> {
        read_json(&dir.join("negative").join(format!("{name}.json")))
    }

    pub fn iso(&self, u: &CurveUniverse) -> Result<CandidateIso> {
        let mut map: Vec<usize> = (0..u.len()).collect();
        for [a, b] in &self.swaps {
            let a = u.id_by_curve(&a.curve(u.triangulation())?)?;
            let b = u.id_by_curve(&b.curve(u.triangulation())?)?;
            map.swap(a, b);
        }
        CandidateIso::new(map, u.len())
    }
}

pub const NEGATIVE_FIXTURES: [&str; 3] = ["negative_edge", "negative_swap", "negative_peripheral"];

pub fn generate_negative_fixtures(dir: &Path) -> Result<Vec<NegativeFixture>> {
    let s6 = load_triangulation(dir, "S0_6")?;
    let s8 = load_triangulation(dir, "S0_8")?;
    let e6 = |p: &[usize]| CurveRecipe::enclosing(&s6, p);
    let e8 = |p: &[usize]| CurveRecipe::enclosing(&s8, p);
    Ok(vec![
        NegativeFixture {
            name: "negative_edge".into(),
            surface: "S0_6".into(),
            designated_check: Check::Edges,
            universe: UniverseSpec::Bound(10),
            swaps: vec![[e6(&[0, 1])?, e6(&[0, 1, 2])?]],
        },
        NegativeFixture {
            name: "negative_swap".into(),
            surface: "S0_6".into(),
            designated_check: Check::Class,
            universe: UniverseSpec::Curves(vec![e6(&[0, 1])?, e6(&[0, 1, 2])?]),
            swaps: vec![[e6(&[0, 1])?, e6(&[0, 1, 2])?]],
        },
        NegativeFixture {
            name: "negative_peripheral".into(),
            surface: "S0_8".into(),
            designated_check: Check::Peripheral,
            universe: UniverseSpec::Curves(vec![e8(&[0, 1, 2])?, e8(&[0, 1, 2, 3])?, e8(&[0, 1, 2, 3, 4])?]),
            swaps: vec![[e8(&[0, 1, 2, 3])?, e8(&[0, 1, 2, 3, 4])?]],
        },
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExhaustionFixture {
    pub name: String,
    pub surface: String,
    /// Boundary curve ids in the descriptor index this list.
    pub curves: Vec<CurveRecipe>,
    pub descriptor: ExhaustionDescriptor,
    /// The one condition this descriptor breaks, if any.
    pub violates: Option<u8>,
}

impl ExhaustionFixture {
    pub fn load(dir: &Path, name: &str) -> Result<Self> {
        read_json(&dir.join("exhaustion").join(format!("{name}.json")))
    }

    pub fn validate(&self, tri: &Triangulation) -> Result<Vec<ConditionReport>> {
        let u = UniverseSpec::Curves(self.curves.clone()).build(tri)?;
        validate_exhaustion(&u, &self.descriptor)
    }
}

pub const EXHAUSTION_FIXTURES: [&str; 5] = [
    "exhaustion_valid",
    "exhaustion_condition1",
    "exhaustion_condition2",
    "exhaustion_condition3",
    "exhaustion_condition4",
];

pub fn generate_exhaustion_fixtures(dir: &Path) -> Result<Vec<ExhaustionFixture>> {
    let s8 = load_triangulation(dir, "S0_8")?;
    let s21 = load_triangulation(dir, "S2_1")?;
    let stage = |surface, boundary: Vec<usize>, complement: Vec<SurfaceType>| ExhaustionStage {
        surface,
        boundary_curves: boundary,
        infinite_type_flags: vec![true; complement.len()],
        complement_pieces: complement,
        anchor_puncture: 0,
    };
    let whole8 = stage(SurfaceType::punctured(0, 8), vec![], vec![]);
    let disc2 = stage(SurfaceType::new(0, 2, 1), vec![0], vec![SurfaceType::new(0, 6, 1)]);
    let pair = vec![CurveRecipe::enclosing(&s8, &[0, 1])?];
    let fixture = |name: &str, surface: &str, curves: Vec<CurveRecipe>, stages: Vec<ExhaustionStage>, violates| {
        ExhaustionFixture {
            name: name.into(),
            surface: surface.into(),
            curves,
            descriptor: ExhaustionDescriptor { stages },
            violates,
        }
    };

    let mut misdeclared = disc2.clone();
    misdeclared.surface = SurfaceType::new(0, 3, 1);

    let nonseparating = CurveUniverse::enumerate(&s21, 4)?
        .curves()
        .iter()
        .find(|c| crate::cut::classify_separation(&s21, c).ok() == Some(crate::cut::SeparationClass::Nonseparating))
        .cloned()
        .ok_or_else(|| Error::InsufficientData("no short nonseparating curve".into()))?;

    Ok(vec![
        fixture("exhaustion_valid", "S0_8", pair.clone(), vec![disc2.clone(), whole8.clone()], None),
        fixture("exhaustion_condition1", "S0_8", pair.clone(), vec![misdeclared, whole8.clone()], Some(1)),
        fixture("exhaustion_condition2", "S0_8", pair, vec![disc2.clone(), disc2, whole8.clone()], Some(2)),
        fixture(
            "exhaustion_condition3",
            "S2_1",
            vec![CurveRecipe::of(&nonseparating)],
            vec![
                stage(SurfaceType::new(1, 1, 2), vec![0], vec![]),
                stage(SurfaceType::punctured(2, 1), vec![], vec![]),
            ],
            Some(3),
        ),
        fixture(
            "exhaustion_condition4",
            "S0_8",
            vec![CurveRecipe::enclosing(&s8, &[0, 1, 2])?],
            vec![stage(SurfaceType::new(0, 3, 1), vec![0], vec![SurfaceType::new(0, 5, 1)]), whole8],
            Some(4),
        ),
    ])
}

/// Outcome of one check on one fixture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub fixture: String,
    pub status: Status,
    pub details: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Status {
    Pass,
    Fail,
    Symbolic,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Edge check followed by every invariant check, one report each.
pub fn check_map(
    fixture: &str,
    source: &SliceContext,
    target: &SliceContext,
    iso: &CandidateIso,
) -> Result<Vec<Report>> {
    let edges = check_simplicial_iso(&source.slice, &target.slice, iso);
    let mut reports = vec![report(Check::Edges, fixture, edges.iter().map(|v| v.detail.clone()).collect())];
    if !edges.is_empty() {
        return Ok(reports);
    }
    let violations = verify_invariant_preservation(source, target, iso)?;
    for check in Check::INVARIANTS {
        let details = violations.iter().filter(|v| v.check == check).map(|v| v.detail.clone()).collect();
        reports.push(report(check, fixture, details));
    }
    Ok(reports)
}

fn report(check: Check, fixture: &str, details: Vec<String>) -> Report {
    let status = if details.is_empty() { Status::Pass } else { Status::Fail };
    Report { check: check.name().into(), fixture: fixture.into(), status, details }
}

pub fn verify_mapping_class(fixture: &str, source: &SliceContext, mc: &MappingClass) -> Result<Vec<Report>> {
    let (image, iso) = induced_iso(mc, &source.universe)?;
    let target = SliceContext::build(image)?;
    check_map(fixture, source, &target, &iso)
}

pub fn verify_negative(fixture: &NegativeFixture, tri: &Triangulation) -> Result<Vec<Report>> {
    let ctx = SliceContext::build(fixture.universe.build(tri)?)?;
    let iso = fixture.iso(&ctx.universe)?;
    check_map(&fixture.name, &ctx, &ctx, &iso)
}

pub fn exhaustion_reports(fixture: &ExhaustionFixture, tri: &Triangulation) -> Result<Vec<Report>> {
    Ok(fixture
        .validate(tri)?
        .into_iter()
        .map(|c| Report {
            check: format!("condition{}", c.condition),
            fixture: fixture.name.clone(),
            status: match c.status {
                ConditionStatus::Pass => Status::Pass,
                ConditionStatus::Fail => Status::Fail,
                ConditionStatus::Symbolic => Status::Symbolic,
            },
            details: c.details,
        })
        .collect())
}

/// Writes every generated data file under `dir`. Triangulations come from
/// the built-in constructions.
pub fn write_all(dir: &Path, config: &Config) -> Result<()> {
    for sub in ["surfaces", "mapping_classes", "negative", "exhaustion"] {
        std::fs::create_dir_all(dir.join(sub))?;
    }
    for name in reference::NAMES {
        let tri = reference::named(name)?;
        std::fs::write(dir.join("surfaces").join(format!("{name}.json")), to_json(&tri.to_file()))?;
    }
    for (name, cfg) in &config.surfaces {
        let tri = load_triangulation(dir, name)?;
        let set = generate_mapping_class_set(&tri, name, cfg)?;
        std::fs::write(dir.join("mapping_classes").join(format!("{name}.json")), to_json(&set))?;
    }
    for f in generate_negative_fixtures(dir)? {
        std::fs::write(dir.join("negative").join(format!("{}.json", f.name)), to_json(&f))?;
    }
    for f in generate_exhaustion_fixtures(dir)? {
        std::fs::write(dir.join("exhaustion").join(format!("{}.json", f.name)), to_json(&f))?;
    }
    Ok(())
}
