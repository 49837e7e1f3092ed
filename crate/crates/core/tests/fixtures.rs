use curvekit_core::fixtures::*;
use curvekit_core::rigidity::SliceContext;
use curvekit_core::universe::CurveUniverse;

fn files_under(dir: &std::path::Path) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for sub in ["surfaces", "mapping_classes", "negative", "exhaustion"] {
        let mut names: Vec<_> = std::fs::read_dir(dir.join(sub)).unwrap().map(|e| e.unwrap().path()).collect();
        names.sort();
        for p in names {
            out.push((
                format!("{sub}/{}", p.file_name().unwrap().to_string_lossy()),
                std::fs::read_to_string(&p).unwrap(),
            ));
        }
    }
    out
}

#[test]
fn shipped_data_matches_regeneration() {
    let shipped = data_dir();
    let config = Config::load(&shipped).unwrap();
    let fresh = tempfile::tempdir().unwrap();
    write_all(fresh.path(), &config).unwrap();
    assert_eq!(files_under(&shipped), files_under(fresh.path()));
}

#[test]
fn every_surface_has_enough_mapping_classes() {
    let dir = data_dir();
    let config = Config::load(&dir).unwrap();
    for (name, cfg) in &config.surfaces {
        let set = MappingClassSet::load(&dir, name).unwrap();
        assert!(set.mapping_classes.len() >= 20, "{name}");
        assert_eq!(set.mapping_classes.len(), cfg.mapping_classes);
        let tri = load_triangulation(&dir, name).unwrap();
        for m in &set.mapping_classes {
            set.get(&tri, &m.name).unwrap();
        }
    }
}

#[test]
fn small_surface_mapping_classes_pass() {
    let dir = data_dir();
    let tri = load_triangulation(&dir, "S0_5").unwrap();
    let set = MappingClassSet::load(&dir, "S0_5").unwrap();
    let source = SliceContext::build(CurveUniverse::enumerate(&tri, 10).unwrap()).unwrap();
    for m in &set.mapping_classes {
        let mc = set.get(&tri, &m.name).unwrap();
        let reports = verify_mapping_class(&m.name, &source, &mc).unwrap();
        assert_eq!(reports.len(), 7);
        assert!(reports.iter().all(|r| r.passed() && r.details.is_empty()), "{reports:?}");
    }
}

#[test]
fn negative_fixtures_fail_exactly_their_check() {
    let dir = data_dir();
    for name in NEGATIVE_FIXTURES {
        let f = NegativeFixture::load(&dir, name).unwrap();
        let tri = load_triangulation(&dir, &f.surface).unwrap();
        let reports = verify_negative(&f, &tri).unwrap();
        let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.check.as_str()).collect();
        assert_eq!(failed, vec![f.designated_check.name()], "{name}: {reports:?}");
    }
}

#[test]
fn exhaustion_descriptors_break_one_condition_each() {
    let dir = data_dir();
    for name in EXHAUSTION_FIXTURES {
        let f = ExhaustionFixture::load(&dir, name).unwrap();
        let tri = load_triangulation(&dir, &f.surface).unwrap();
        let reports = exhaustion_reports(&f, &tri).unwrap();
        let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.check.clone()).collect();
        let expected: Vec<String> = f.violates.map(|c| format!("condition{c}")).into_iter().collect();
        assert_eq!(failed, expected, "{name}: {reports:?}");
        assert_eq!(reports[4].status, Status::Symbolic);
    }
}

#[test]
fn geometric_maps_respect_the_exhaustion_boundary() {
    use curvekit_core::rigidity::{boundary_match, check_restriction, induced_iso};
    let dir = data_dir();
    let f = ExhaustionFixture::load(&dir, "exhaustion_valid").unwrap();
    let tri = load_triangulation(&dir, &f.surface).unwrap();
    let inner = f.curves[0].curve(&tri).unwrap();
    let u = CurveUniverse::enumerate(&tri, inner.total_weight()).unwrap();
    let inner_id = u.id_by_curve(&inner).unwrap();
    let source = SliceContext::build(u).unwrap();
    let set = MappingClassSet::load(&dir, &f.surface).unwrap();
    for m in &set.mapping_classes {
        let mc = set.get(&tri, &m.name).unwrap();
        let (image, iso) = induced_iso(&mc, &source.universe).unwrap();
        let target = SliceContext::build(image).unwrap();
        let stage = f.descriptor.stages[0].surface;
        assert!(check_restriction(&source, &target, &iso, &[inner_id], stage).unwrap(), "{}", m.name);
        assert!(boundary_match(&source, &target, &iso, &[inner_id]).unwrap().iter().all(|p| p.matched));
    }
}

#[test]
fn truncated_slices_have_artifact_automorphisms() {
    use curvekit_core::rigidity::{slice_automorphisms, truncation_artifacts};
    let tri = load_triangulation(&data_dir(), "S0_6").unwrap();
    let ctx = SliceContext::build(CurveUniverse::enumerate(&tri, 8).unwrap()).unwrap();
    let autos = slice_automorphisms(ctx.slice.graph(), 10_000).unwrap();
    let artifacts = truncation_artifacts(&ctx, 10_000).unwrap();
    assert!(autos.len() > artifacts.len());
    assert!(artifacts.iter().all(|(_, report)| !report.is_empty()));
}
