use criterion::{black_box, criterion_group, criterion_main, Criterion};

use curvekit_core::fixtures::{data_dir, verify_mapping_class, MappingClassSet};
use curvekit_core::graphs::GraphSlice;
use curvekit_core::intersection::intersection_number;
use curvekit_core::pants::PantsFamily;
use curvekit_core::reference;
use curvekit_core::rigidity::SliceContext;
use curvekit_core::universe::CurveUniverse;
use curvekit_core::NormalCurve;

fn enumerate(c: &mut Criterion) {
    let tri = reference::named("S2_1").unwrap();
    c.bench_function("enumerate S2_1 L=14", |b| b.iter(|| CurveUniverse::enumerate(&tri, black_box(14)).unwrap()));
}

fn intersection(c: &mut Criterion) {
    let tri = reference::named("S1_1").unwrap();
    let a = NormalCurve::new(&tri, vec![7, 10, 3]).unwrap();
    let b = NormalCurve::new(&tri, vec![9, 4, 5]).unwrap();
    c.bench_function("intersection S1_1 7/10 vs 9/4", |bch| {
        bch.iter(|| intersection_number(&tri, black_box(&a), black_box(&b)).unwrap())
    });
}

fn slice_and_pants(c: &mut Criterion) {
    let tri = reference::named("S0_6").unwrap();
    let u = CurveUniverse::enumerate(&tri, 14).unwrap();
    c.bench_function("slice S0_6 L=14", |b| b.iter(|| GraphSlice::build(black_box(&u)).unwrap()));
    let slice = GraphSlice::build(&u).unwrap();
    c.bench_function("pants family S0_6 L=14", |b| b.iter(|| PantsFamily::build(&u, black_box(&slice)).unwrap()));
}

fn harness(c: &mut Criterion) {
    let dir = data_dir();
    let tri = reference::named("S1_2").unwrap();
    let set = MappingClassSet::load(&dir, "S1_2").unwrap();
    let mc = set.get(&tri, "mc05").unwrap();
    let source = SliceContext::build(CurveUniverse::enumerate(&tri, 12).unwrap()).unwrap();
    c.bench_function("verify mapping class S1_2 L=12", |b| {
        b.iter(|| verify_mapping_class("mc05", black_box(&source), &mc).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = enumerate, intersection, slice_and_pants, harness
}
criterion_main!(benches);
