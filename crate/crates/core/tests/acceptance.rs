//! Acceptance suite: one test per criterion, each printing a pass line.
//! Every tolerance here is exact (rational equality or containment); the
//! only numeric thresholds are the runtime ceilings.

mod common;

use std::time::Instant;

use indexsys::analysis::{analyze, AnalysisOptions};
use indexsys::cocyclic::{
    detect_orbit, word_allowed, EntropyBound, EventuallyPeriodicWord, HomGraph, OrbitDetection,
};
use indexsys::construct;
use indexsys::dynamics::orbits::{orbits_following, periodic_points};
use indexsys::dynamics::ProductMap;
use indexsys::fixtures;
use indexsys::format;
use indexsys::geometry::{GridSet, Label, RegionSet, Space, SquareBase};
use indexsys::homology::{induced_map, induced_map_unchecked, pair_homology, Matrix};
use indexsys::index::{inv_m, verify, Verdict};
use indexsys::scalar::{int, rat, Scalar};

fn label(s: &str) -> Label {
    Label::new(s)
}

fn pass(criterion: u32, message: &str) {
    println!("ACCEPTANCE {criterion}: PASS — {message}");
}

#[test]
fn criterion_1_doubling_fixture() {
    let start = Instant::now();
    let eps = fixtures::default_eps();
    let system = fixtures::doubling_system(&eps);
    let f = fixtures::doubling_map();

    assert_eq!(system.len(), 10, "exactly ten pairs");
    assert_eq!(system.edge_count(), 30, "exactly thirty edges");
    for i in 0..10i64 {
        for j in 0..10i64 {
            let expected = [2 * i - 1, 2 * i, 2 * i + 1]
                .iter()
                .any(|t| t.rem_euclid(10) == j);
            assert_eq!(
                system.has_edge(&label(&i.to_string()), &label(&j.to_string())),
                expected,
                "edge rule at ({i},{j})"
            );
        }
    }
    let report = verify(&system, &f).unwrap();
    assert_eq!(report.verdict, Verdict::Verified);

    let analysis = analyze(
        &system,
        &f,
        &AnalysisOptions {
            max_len: 6,
            ..Default::default()
        },
    )
    .unwrap();
    for l in analysis.graph.labels() {
        assert_eq!(analysis.graph.vertex(l).unwrap().dims, vec![0, 1]);
    }
    for (_, map) in analysis.graph.edges() {
        assert_eq!(map.degree(1).get(0, 0), &int(1));
    }
    let third_log_two = EntropyBound::new(2, 3);
    assert!(analysis.best_entropy >= third_log_two);
    let cert = analysis.best_certificate.as_ref().unwrap();
    assert_eq!(cert.power, 3);
    // The two-word certificate itself goes through.
    let words = vec![
        vec![label("1"), label("1"), label("1")],
        vec![label("1"), label("3"), label("5")],
    ];
    let two_word = indexsys::cocyclic::shift_factor(&analysis.graph, 3, &words).unwrap();
    assert_eq!(two_word.entropy, third_log_two);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 5, "runtime {elapsed:?} exceeds 5 s");
    pass(
        1,
        &format!(
            "doubling: VERIFIED, 10 pairs, 30 edges, all H1 maps (1), entropy ≥ log(2)/3 ({elapsed:?})"
        ),
    );
}

#[test]
fn criterion_2_tent_fixture() {
    let start = Instant::now();
    let eps = fixtures::default_eps();
    let system = fixtures::tent_system(&eps);
    let f = fixtures::tent_map();

    assert_eq!(system.len(), 4);
    assert_eq!(system.edge_count(), 8);
    let expected_edges = [
        ("1", "1"), ("1", "2"), ("4", "1"), ("4", "2"),
        ("2", "3"), ("2", "4"), ("3", "3"), ("3", "4"),
    ];
    for (a, b) in expected_edges {
        assert!(system.has_edge(&label(a), &label(b)));
    }
    let report = verify(&system, &f).unwrap();
    assert_eq!(report.verdict, Verdict::Verified);

    let signs = [
        (("1", "1"), 1), (("1", "2"), 1), (("2", "3"), 1), (("2", "4"), 1),
        (("3", "3"), -1), (("3", "4"), -1), (("4", "1"), -1), (("4", "2"), -1),
    ];
    for ((a, b), sign) in signs {
        let m = induced_map(
            system.pair(&label(a)).unwrap(),
            system.pair(&label(b)).unwrap(),
            &f,
        )
        .unwrap();
        assert_eq!(m.degree(1).get(0, 0), &int(sign), "edge ({a},{b})");
    }

    let analysis = analyze(&system, &f, &AnalysisOptions::default()).unwrap();
    assert_eq!(analysis.disjoint_vertices.len(), 4, "all four cores disjoint");
    assert!(analysis.best_entropy >= EntropyBound::new(2, 1));

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 5, "runtime {elapsed:?} exceeds 5 s");
    pass(
        2,
        &format!("tent: VERIFIED, expected sign table, disjoint subgraph = 4 vertices, entropy ≥ log 2 ({elapsed:?})"),
    );
}

#[test]
fn criterion_3_trivial_tent_pair() {
    let start = Instant::now();
    let eps = fixtures::default_eps();
    let system = fixtures::trivial_tent_system(&eps);
    let f = fixtures::tent_map();
    let pair = system.pair(&label("0")).unwrap();

    let (graded, _) = pair_homology(pair).unwrap();
    assert_eq!(graded.dims, vec![0, 2]);
    let m = induced_map(pair, pair, &f).unwrap();
    let expect = Matrix::from_rows(vec![vec![int(1), int(-1)], vec![int(1), int(-1)]]);
    assert_eq!(m.degree(1), &expect);
    assert!(m.degree(1).pow(2).is_zero());

    let analysis = analyze(
        &system,
        &f,
        &AnalysisOptions {
            max_len: 3,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(analysis.empty_at_bound, "cocyclic subshift empty at bound 3");

    let elapsed = start.elapsed();
    assert!(elapsed.as_millis() < 1000, "runtime {elapsed:?} exceeds 1 s");
    pass(
        3,
        &format!("trivial pair: dims [0,2], square of [[1,-1],[1,-1]] vanishes, subshift empty at bound 3 ({elapsed:?})"),
    );
}

#[test]
fn criterion_4_inv_m_nesting() {
    let eps = fixtures::default_eps();
    for (name, system, f) in [
        ("doubling", fixtures::doubling_system(&eps), fixtures::doubling_map()),
        ("tent", fixtures::tent_system(&eps), fixtures::tent_map()),
    ] {
        let mut previous = inv_m(&system, &f, 0).unwrap();
        for m in 1..=8 {
            let current = inv_m(&system, &f, m).unwrap();
            for l in system.labels() {
                assert!(
                    current[l].is_subset_of(&previous[l]).unwrap(),
                    "{name}: nesting fails at m={m}, label {l}"
                );
            }
            previous = current;
        }
    }

    // Doubling: m=8 strictly below m=4 in total length until stabilization.
    let system = fixtures::doubling_system(&eps);
    let f = fixtures::doubling_map();
    let at4 = inv_m(&system, &f, 4).unwrap();
    let at8 = inv_m(&system, &f, 8).unwrap();
    for l in system.labels() {
        assert!(at8[l].is_subset_of(&at4[l]).unwrap());
        if at8[l] != at4[l] {
            assert!(
                at8[l].total_length() < at4[l].total_length(),
                "label {l}: refinement must strictly shrink until stabilization"
            );
        }
    }
    assert!(
        system
            .labels()
            .any(|l| at8[l].total_length() < at4[l].total_length()),
        "refinement still strictly active at m=8"
    );
    pass(4, "inv_m enclosures nested for m=0..8; doubling m=8 strictly inside m=4");
}

#[test]
fn criterion_5_construct_pipeline() {
    let start = Instant::now();
    let f = fixtures::tent_map();
    let pair = construct::strip_template(&f, &rat(2, 27), &rat(1, 27), 27).unwrap();
    let (family, report) = construct::construct_system(&pair, &f).unwrap();

    assert!(family.distinct_count() > 0, "finitely many distinct slices, reported");

    // Independent pass through the file format and the verifier.
    let text = format::system_to_string(&report.system);
    let reparsed = format::system_from_str(&text).unwrap();
    let verdict = verify(&reparsed, &f).unwrap().verdict;
    assert_eq!(verdict, Verdict::Verified);

    // Oracle: the exact fixed points of the tent map.
    let fixed = periodic_points(&f, 1).unwrap();
    assert_eq!(fixed.points, vec![int(0), rat(3, 4)]);

    let refined = inv_m(&reparsed, &f, 8).unwrap();
    for point in &fixed.points {
        assert!(
            refined.values().any(|set| set.contains_point(point)),
            "fixed point {point} must stay in the m=8 enclosure"
        );
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "runtime {elapsed:?} exceeds 60 s");
    pass(
        5,
        &format!(
            "construct(tent, w=2/27, c=1/27, δ=1/27): {} distinct slices, re-verified from file, fixed points 0 and 3/4 inside m=8 enclosure ({elapsed:?})",
            family.distinct_count()
        ),
    );
}

#[test]
fn criterion_6_orbit_detection() {
    let eps = fixtures::default_eps();
    let system = fixtures::doubling_system(&eps);
    let f = fixtures::doubling_map();
    let graph = HomGraph::from_system(&system, &f).unwrap();
    let word = EventuallyPeriodicWord {
        preperiod: vec![],
        period: vec![label("1"), label("3"), label("5")],
    };
    match detect_orbit(&graph, &word).unwrap() {
        OrbitDetection::Certificate(_) => {}
        OrbitDetection::NoCertificate { reason } => panic!("expected certificate: {reason}"),
    }
    let cores: Vec<RegionSet> = word
        .period
        .iter()
        .map(|l| system.core(l).unwrap().clone())
        .collect();
    let (orbits, plateau) = orbits_following(&f, &cores, 3).unwrap();
    assert!(!plateau);
    assert_eq!(orbits.len(), 1, "exactly one orbit inside the word cores");
    assert_eq!(orbits[0].points, vec![rat(1, 7), rat(2, 7), rat(4, 7)]);

    let trivial = fixtures::trivial_tent_system(&eps);
    let tf = fixtures::tent_map();
    let tgraph = HomGraph::from_system(&trivial, &tf).unwrap();
    let zero_word = EventuallyPeriodicWord {
        preperiod: vec![],
        period: vec![label("0")],
    };
    assert!(matches!(
        detect_orbit(&tgraph, &zero_word).unwrap(),
        OrbitDetection::NoCertificate { .. }
    ));
    pass(6, "doubling (1,3,5): certificate plus unique exact orbit 1/7 → 2/7 → 4/7; trivial (0)^∞: NO-CERTIFICATE");
}

#[test]
fn criterion_7_oracle_equivalence() {
    let eps = fixtures::default_eps();
    let mut checked = 0;
    for system in [
        fixtures::doubling_system(&eps),
        fixtures::tent_system(&eps),
        fixtures::trivial_tent_system(&eps),
    ] {
        for pair in system.pairs() {
            let (graded, _) = pair_homology(pair).unwrap();
            let oracle = common::cubical_homology_oracle(pair);
            assert_eq!(graded.dims, oracle, "pair {}", pair.label);
            checked += 1;
        }
    }
    assert_eq!(checked, 15, "10 doubling + 4 tent + 1 trivial pairs");

    // Functoriality: degree counting f² along composable tent edges equals
    // the matrix product, exactly.
    let system = fixtures::tent_system(&eps);
    let f = fixtures::tent_map();
    let f2 = f.iterate(2).unwrap();
    let mut composable = 0;
    for (a, b) in system.edges() {
        for c in system.labels() {
            if !system.has_edge(b, c) {
                continue;
            }
            let m_ab = induced_map(system.pair(a).unwrap(), system.pair(b).unwrap(), &f).unwrap();
            let m_bc = induced_map(system.pair(b).unwrap(), system.pair(c).unwrap(), &f).unwrap();
            let direct =
                induced_map_unchecked(system.pair(a).unwrap(), system.pair(c).unwrap(), &f2)
                    .unwrap();
            assert_eq!(
                direct.degree(1),
                &m_bc.degree(1).mul(m_ab.degree(1)),
                "functoriality along {a}->{b}->{c}"
            );
            composable += 1;
        }
    }
    assert!(composable >= 16, "all composable tent pairs checked");
    pass(
        7,
        &format!("pair homology matches the chain/SNF oracle on 15 pairs; f² functoriality on {composable} tent paths"),
    );
}

#[test]
fn criterion_8_property_suites_headless() {
    let eps = fixtures::default_eps();

    // Subword closure on 10^3 random allowable words.
    let system = fixtures::tent_system(&eps);
    let f = fixtures::tent_map();
    let graph = HomGraph::from_system(&system, &f).unwrap();
    let labels: Vec<Label> = system.labels().cloned().collect();
    let mut rng = common::Lcg::new(7);
    for _ in 0..1000 {
        let mut word = vec![labels[rng.below(labels.len() as u64) as usize].clone()];
        let len = 2 + rng.below(7) as usize;
        for _ in 1..len {
            let succs: Vec<Label> = system.successors(word.last().unwrap()).cloned().collect();
            word.push(succs[rng.below(succs.len() as u64) as usize].clone());
        }
        if word_allowed(&graph, &word).unwrap() {
            // Every contiguous subword stays allowed.
            for s in 0..word.len() {
                for e in (s + 1)..=word.len() {
                    assert!(word_allowed(&graph, &word[s..e]).unwrap());
                }
            }
        }
    }

    // box_image soundness on 10^4 exact sample points.
    let product = ProductMap::new(fixtures::tent_map());
    let a = GridSet::from_boxes(
        SquareBase::Line,
        27,
        (0..6).flat_map(|i| (0..6).map(move |j| (i, j))),
    )
    .unwrap();
    let enclosure = product.box_image(&a).unwrap();
    let step = rat(1, 27);
    let mut sampled = 0;
    'outer: for trial in 0..20000 {
        let (bi, bj) = (trial % 6, (trial / 6) % 6);
        let fx = rng.below(1000) as i64;
        let fy = rng.below(1000) as i64;
        let x = (int(bi) + rat(fx, 1000)) * &step;
        let y = (int(bj) + rat(fy, 1000)) * &step;
        let (ix, iy) = product.point_image(&(x, y)).unwrap();
        // The exact image point lies in some closed box of the enclosure.
        let candidates = |v: &Scalar| -> Vec<i64> {
            let scaled = v * int(27);
            let f = indexsys::scalar::floor_i64(&scaled);
            if indexsys::scalar::is_integer(&scaled) {
                vec![f - 1, f]
            } else {
                vec![f]
            }
        };
        let covered = candidates(&ix)
            .into_iter()
            .any(|p| candidates(&iy).into_iter().any(|q| enclosure.contains((p, q))));
        assert!(covered, "image point escaped the enclosure");
        sampled += 1;
        if sampled >= 10000 {
            break 'outer;
        }
    }
    assert_eq!(sampled, 10000);

    // Normalize idempotence and order independence on 10^3 raw cell lists.
    for _ in 0..1000 {
        let mut cells = Vec::new();
        for _ in 0..(1 + rng.below(6)) {
            let a = rat(rng.below(2000) as i64 - 1000, 1 + rng.below(40) as i64);
            let w = rat(rng.below(200) as i64, 1 + rng.below(40) as i64);
            cells.push((a.clone(), a + w));
        }
        let once = RegionSet::normalize(&Space::Line, cells.clone()).unwrap();
        let again = RegionSet::normalize(&Space::Line, once.cells()).unwrap();
        assert_eq!(once, again, "idempotence");
        let mut reversed = cells.clone();
        reversed.reverse();
        let permuted = RegionSet::normalize(&Space::Line, reversed).unwrap();
        assert_eq!(once, permuted, "order independence");
    }
    pass(8, "subword closure (10^3 words), box_image soundness (10^4 points), normalize idempotence (10^3 lists): zero failures");
}
