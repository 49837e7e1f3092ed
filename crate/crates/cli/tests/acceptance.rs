//! Acceptance suite. Prints one PASS/FAIL line per criterion and surface,
//! then exits nonzero if anything outside `KNOWN_UNATTAINABLE` failed.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use clap::Parser;
use rayon::prelude::*;

use curvekit_cli::{run, Cli};
use curvekit_core::classify::classify_universe;
use curvekit_core::cut::{cut_along, SeparationClass};
use curvekit_core::fixtures::*;
use curvekit_core::graphs::GraphSlice;
use curvekit_core::intersection::intersection_number;
use curvekit_core::pants::{
    cliques, common_link_components, is_pants_decomposition_simplicial, is_pants_decomposition_topological,
    is_peripheral_pair_topological, PantsFamily,
};
use curvekit_core::rigidity::SliceContext;
use curvekit_core::universe::CurveUniverse;
use curvekit_core::{NormalCurve, Triangulation};

const FAREY_LIMIT: Duration = Duration::from_secs(60);
const PANTS_LIMIT: Duration = Duration::from_secs(300);
const HARNESS_LIMIT: Duration = Duration::from_secs(600);
const MIN_MAPPING_CLASSES: usize = 20;
const CLASSIFIED_SURFACES: [&str; 4] = ["S0_5", "S0_6", "S1_2", "S2_1"];

/// (criterion, surface) pairs that cannot pass at any finite bound with
/// this classifier. They still run and must still fail.
const KNOWN_UNATTAINABLE: [(u8, &str); 1] = [(4, "S1_2")];

struct Line {
    criterion: u8,
    scope: String,
    pass: bool,
    detail: String,
}

struct Suite {
    lines: Vec<Line>,
    dir: std::path::PathBuf,
    config: Config,
}

impl Suite {
    fn record(&mut self, criterion: u8, scope: &str, pass: bool, detail: String) {
        println!("{} criterion {criterion} [{scope}] {detail}", if pass { "PASS" } else { "FAIL" });
        self.lines.push(Line { criterion, scope: scope.into(), pass, detail });
    }

    fn tri(&self, name: &str) -> Triangulation {
        load_triangulation(&self.dir, name).unwrap()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Reduced slopes p/q with |p|, |q| at most `max`, q ≥ 0, and 1/0 once.
fn slopes(max: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for p in -max..=max {
        for q in 0..=max {
            if gcd(p, q) == 1 && (q != 0 || p == 1) {
                out.push((p, q));
            }
        }
    }
    out
}

type Weights = dyn Fn(i64, i64) -> Vec<u64>;

fn farey(s: &mut Suite) {
    let max = s.config.farey_max_entry;
    let sl = slopes(max);
    let torus = |p: i64, q: i64| vec![p.unsigned_abs(), q.unsigned_abs(), (p - q).unsigned_abs()];
    let pillow = |p: i64, q: i64| {
        let (a, b, c) = (p.unsigned_abs(), q.unsigned_abs(), (p - q).unsigned_abs());
        vec![a, a, b, b, c, c]
    };
    let cases: [(&str, u64, &Weights); 2] = [("S0_4", 2, &pillow), ("S1_1", 1, &torus)];
    for (name, factor, weights) in cases {
        let t = Instant::now();
        let tri = s.tri(name);
        let curves: Vec<NormalCurve> =
            sl.iter().map(|&(p, q)| NormalCurve::new(&tri, weights(p, q)).unwrap()).collect();
        let pairs: Vec<(usize, usize)> = (0..sl.len()).flat_map(|i| (i..sl.len()).map(move |j| (i, j))).collect();
        let wrong: Vec<String> = pairs
            .par_iter()
            .filter_map(|&(i, j)| {
                let ((p, q), (r, u)) = (sl[i], sl[j]);
                let expect = factor * (p * u - q * r).unsigned_abs();
                let got = intersection_number(&tri, &curves[i], &curves[j]).unwrap();
                (got != expect).then(|| format!("{p}/{q} {r}/{u}: {got} != {expect}"))
            })
            .collect();
        let el = t.elapsed();
        let pass = wrong.is_empty() && el < FAREY_LIMIT;
        s.record(
            1,
            name,
            pass,
            format!(
                "{} slope pairs, entries <= {max}, {} mismatches, {:.1}s (limit {}s){}",
                pairs.len(),
                wrong.len(),
                el.as_secs_f64(),
                FAREY_LIMIT.as_secs(),
                wrong.first().map(|w| format!(", first {w}")).unwrap_or_default()
            ),
        );
    }
}

fn pants_pieces(s: &mut Suite) {
    for name in CLASSIFIED_SURFACES {
        let t = Instant::now();
        let tri = s.tri(name);
        let bound = s.config.surface(name).unwrap().classify_bound;
        let u = CurveUniverse::enumerate(&tri, bound).unwrap();
        let slice = GraphSlice::build(&u).unwrap();
        let family = PantsFamily::build(&u, &slice).unwrap();
        let surface = tri.surface();
        let expected_pieces = (-surface.euler_characteristic()) as usize;
        let bad: Vec<Vec<usize>> = family
            .decompositions
            .par_iter()
            .filter(|p| {
                let curves: Vec<NormalCurve> = p.curves.iter().map(|&c| u.curves()[c].clone()).collect();
                let cut = cut_along(&tri, &curves).unwrap();
                let pants = cut.pieces.iter().all(|x| x.surface.genus == 0 && x.surface.holes() == 3);
                let punctures: usize = cut.pieces.iter().map(|x| x.punctures.len()).sum();
                let twice =
                    (0..curves.len()).all(|c| cut.pieces.iter().map(|x| x.boundary_count(c)).sum::<usize>() == 2);
                !(pants && cut.pieces.len() == expected_pieces && punctures == surface.punctures as usize && twice)
            })
            .map(|p| p.curves.clone())
            .collect();
        let el = t.elapsed();
        let pass = bad.is_empty() && !family.decompositions.is_empty() && el < PANTS_LIMIT;
        s.record(
            2,
            name,
            pass,
            format!(
                "L={bound}: {} decompositions, {} with a non-pants piece, {:.1}s (limit {}s)",
                family.decompositions.len(),
                bad.len(),
                el.as_secs_f64(),
                PANTS_LIMIT.as_secs()
            ),
        );
    }
}

fn pants_predicates(s: &mut Suite) {
    for name in CLASSIFIED_SURFACES {
        let t = Instant::now();
        let tri = s.tri(name);
        let bound = s.config.surface(name).unwrap().harness_bound;
        let u = CurveUniverse::enumerate(&tri, bound).unwrap();
        let slice = GraphSlice::build(&u).unwrap();
        let xi = tri.surface().complexity() as usize;
        let bases = cliques(&slice, xi - 1);
        let (candidates, pants, disagreements) = bases
            .par_iter()
            .map(|k| {
                let mut out = (0usize, 0usize, 0usize);
                for c in (0..u.len()).filter(|c| !k.contains(c)) {
                    let mut ids = k.clone();
                    ids.push(c);
                    ids.sort_unstable();
                    let curves: Vec<NormalCurve> = ids.iter().map(|&i| u.curves()[i].clone()).collect();
                    let top = is_pants_decomposition_topological(&tri, &curves).unwrap_or(false);
                    let simp = is_pants_decomposition_simplicial(&slice, &ids).unwrap();
                    out.0 += 1;
                    out.1 += top as usize;
                    out.2 += (top != simp) as usize;
                }
                out
            })
            .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
        s.record(
            3,
            name,
            disagreements == 0 && candidates > 0,
            format!(
                "L={bound}: {candidates} candidates (clique K, curve c), {pants} of them pants, {disagreements} disagreements, {:.1}s",
                t.elapsed().as_secs_f64()
            ),
        );
    }
}

fn classification(s: &mut Suite) {
    for name in CLASSIFIED_SURFACES {
        let t = Instant::now();
        let tri = s.tri(name);
        let cfg = s.config.surface(name).unwrap().clone();
        let u = CurveUniverse::enumerate(&tri, cfg.classify_bound).unwrap();
        let c = classify_universe(&u, cfg.core_bound).unwrap();
        let covered: Vec<_> = c.curves.iter().filter(|r| r.simplicial.is_some()).collect();
        let mut confusion: BTreeMap<(String, String), usize> = BTreeMap::new();
        for r in &covered {
            *confusion.entry((r.topological.to_string(), r.simplicial.unwrap().to_string())).or_default() += 1;
        }
        let mismatched = covered.iter().filter(|r| !r.agrees()).count();
        let outer_degree =
            covered.iter().filter(|r| r.topological == SeparationClass::Outer && r.max_degree.unwrap() > 2).count();
        let cut_vertex = covered
            .iter()
            .filter(|r| (r.topological == SeparationClass::NonouterSeparating) != r.cut_vertex_everywhere.unwrap())
            .count();
        let off_diagonal: Vec<String> =
            confusion.iter().filter(|((a, b), _)| a != b).map(|((a, b), n)| format!("{a} read as {b}: {n}")).collect();
        let pass = mismatched == 0 && outer_degree == 0 && cut_vertex == 0 && !covered.is_empty();
        s.record(
            4,
            name,
            pass,
            format!(
                "L={} core={}: {} curves classified, {mismatched} disagree, {outer_degree} outer with degree > 2, \
                 {cut_vertex} cut-vertex mismatches, {:.1}s{}",
                cfg.classify_bound,
                cfg.core_bound,
                covered.len(),
                t.elapsed().as_secs_f64(),
                if off_diagonal.is_empty() { String::new() } else { format!(" ({})", off_diagonal.join(", ")) }
            ),
        );
    }
}

fn peripheral(s: &mut Suite) {
    let t = Instant::now();
    let name = s.config.peripheral_surface.clone();
    let bound = s.config.peripheral_bound;
    let tri = s.tri(&name);
    let u = CurveUniverse::enumerate(&tri, bound).unwrap();
    let slice = GraphSlice::build(&u).unwrap();
    let classes: Vec<SeparationClass> =
        u.curves().par_iter().map(|c| curvekit_core::cut::classify_separation(&tri, c).unwrap()).collect();
    let nonouter: Vec<usize> = (0..u.len()).filter(|&i| classes[i] == SeparationClass::NonouterSeparating).collect();
    let pairs: Vec<(usize, usize)> = nonouter
        .iter()
        .enumerate()
        .flat_map(|(k, &a)| nonouter[k + 1..].iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| slice.disjoint(a, b))
        .collect();
    let tally: BTreeMap<(bool, usize), usize> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let top = is_peripheral_pair_topological(&tri, &u.curves()[a], &u.curves()[b]).unwrap();
            let comps = common_link_components(&slice, a, b).unwrap();
            ((top, comps), 1usize)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(BTreeMap::new(), |mut m, (k, n)| {
            *m.entry(k).or_default() += n;
            m
        });
    let wrong: usize = tally.iter().filter(|((top, comps), _)| *top != (*comps == 2)).map(|(_, n)| n).sum();
    s.record(
        5,
        &name,
        wrong == 0 && !pairs.is_empty(),
        format!(
            "L={bound}: {} disjoint nonouter pairs, (peripheral, components) counts {:?}, {wrong} wrong, {:.1}s",
            pairs.len(),
            tally,
            t.elapsed().as_secs_f64()
        ),
    );
}

fn mapping_classes(s: &mut Suite) {
    let t = Instant::now();
    let mut total = 0;
    let names: Vec<String> = s.config.surfaces.keys().cloned().collect();
    for name in names {
        let ts = Instant::now();
        let tri = s.tri(&name);
        let bound = s.config.surface(&name).unwrap().harness_bound;
        let set = MappingClassSet::load(&s.dir, &name).unwrap();
        let source = SliceContext::build(CurveUniverse::enumerate(&tri, bound).unwrap()).unwrap();
        let mut failing = Vec::new();
        for m in &set.mapping_classes {
            let mc = set.get(&tri, &m.name).unwrap();
            let reports = verify_mapping_class(&m.name, &source, &mc).unwrap();
            if reports.iter().any(|r| !r.details.is_empty() || !r.passed()) {
                failing.push(m.name.clone());
            }
        }
        total += set.mapping_classes.len();
        let pass = failing.is_empty() && set.mapping_classes.len() >= MIN_MAPPING_CLASSES;
        s.record(
            6,
            &name,
            pass,
            format!(
                "L={bound}: {} mapping classes on {} curves, {} with a nonempty report {:?}, {:.1}s",
                set.mapping_classes.len(),
                source.universe.len(),
                failing.len(),
                failing,
                ts.elapsed().as_secs_f64()
            ),
        );
    }
    let el = t.elapsed();
    s.record(
        6,
        "time",
        el < HARNESS_LIMIT,
        format!("{total} mapping classes in {:.1}s (limit {}s)", el.as_secs_f64(), HARNESS_LIMIT.as_secs()),
    );
}

fn negatives(s: &mut Suite) {
    for name in NEGATIVE_FIXTURES {
        let f = NegativeFixture::load(&s.dir, name).unwrap();
        let tri = s.tri(&f.surface);
        let reports = verify_negative(&f, &tri).unwrap();
        let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.check.clone()).collect();
        let pass = failed == vec![f.designated_check.name().to_string()];
        s.record(7, name, pass, format!("designated {}, failed {:?}", f.designated_check.name(), failed));
    }
}

fn exhaustion(s: &mut Suite) {
    for name in EXHAUSTION_FIXTURES {
        let f = ExhaustionFixture::load(&s.dir, name).unwrap();
        let tri = s.tri(&f.surface);
        let reports = exhaustion_reports(&f, &tri).unwrap();
        let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.check.clone()).collect();
        let expected: Vec<String> = f.violates.map(|c| format!("condition{c}")).into_iter().collect();
        let symbolic = reports.iter().find(|r| r.check == "condition5").map(|r| r.status) == Some(Status::Symbolic);
        s.record(
            8,
            name,
            failed == expected && symbolic,
            format!("expected {expected:?}, failed {failed:?}, condition 5 symbolic: {symbolic}"),
        );
    }
}

fn run_cli(args: &[&str]) -> (Vec<u8>, bool) {
    let cli = Cli::parse_from(std::iter::once("curvekit").chain(args.iter().copied()));
    let out = run(&cli).unwrap();
    (out.stdout, out.success)
}

fn determinism(s: &mut Suite) {
    let tmp = tempfile::tempdir().unwrap();
    let mut caches = Vec::new();
    let mut stdouts = Vec::new();
    for (k, jobs) in ["1", "4", "1"].iter().enumerate() {
        let path = tmp.path().join(format!("run{k}.jsonl"));
        let p = path.to_str().unwrap();
        let (out, _) = run_cli(&["--jobs", jobs, "enumerate", "--surface", "S2_1", "--bound", "14", "--out", p]);
        stdouts.push(out);
        caches.push(std::fs::read(&path).unwrap());
    }
    let same = caches.windows(2).all(|w| w[0] == w[1]) && stdouts.windows(2).all(|w| w[0] == w[1]);
    s.record(9, "enumerate", same, format!("S2_1 L=14 cache of {} bytes, jobs 1/4/1", caches[0].len()));

    let mut reports = Vec::new();
    for jobs in ["1", "4", "1"] {
        reports.push(run_cli(&["--jobs", jobs, "verify", "--all"]));
    }
    let same = reports.windows(2).all(|w| w[0] == w[1]);
    let ok = reports.iter().all(|r| r.1);
    s.record(
        9,
        "verify",
        same && ok,
        format!("verify --all report of {} bytes, jobs 1/4/1, all fixtures as expected: {ok}", reports[0].0.len()),
    );

    let seeded: Vec<_> = (0..2).map(|_| run_cli(&["verify", "--surface", "S0_6", "--seed", "42"])).collect();
    s.record(9, "seed", seeded[0] == seeded[1], "verify --seed 42 twice on S0_6".into());
}

fn main() {
    let dir = data_dir();
    let config = Config::load(&dir).expect("shipped config");
    let mut s = Suite { lines: Vec::new(), dir, config };
    farey(&mut s);
    pants_pieces(&mut s);
    pants_predicates(&mut s);
    classification(&mut s);
    peripheral(&mut s);
    mapping_classes(&mut s);
    negatives(&mut s);
    exhaustion(&mut s);
    determinism(&mut s);

    let mut unexpected = Vec::new();
    for l in &s.lines {
        let known = KNOWN_UNATTAINABLE.contains(&(l.criterion, l.scope.as_str()));
        if l.pass == known {
            unexpected.push(format!(
                "criterion {} [{}] {}: {}",
                l.criterion,
                l.scope,
                if known { "passed but is listed as unattainable" } else { "failed" },
                l.detail
            ));
        }
    }
    let failed = s.lines.iter().filter(|l| !l.pass).count();
    println!(
        "acceptance: {} lines, {} failed, {} of them known unattainable",
        s.lines.len(),
        failed,
        failed - unexpected.iter().filter(|u| u.contains("failed")).count()
    );
    if !unexpected.is_empty() {
        for u in &unexpected {
            eprintln!("unexpected: {u}");
        }
        std::process::exit(1);
    }
}
