use super::*;
use crate::fixtures;
use crate::scalar::{int, rat};

fn eps() -> crate::scalar::Scalar {
    fixtures::default_eps()
}

fn label(s: &str) -> Label {
    Label::new(s)
}

#[test]
fn doubling_system_verifies_with_thirty_edges() {
    let system = fixtures::doubling_system(&eps());
    let f = fixtures::doubling_map();
    assert_eq!(system.edge_count(), 30);
    let report = verify(&system, &f).unwrap();
    assert_eq!(report.verdict, Verdict::Verified);
    assert!(report.degenerate_pairs.is_empty());
}

#[test]
fn tent_system_verifies_with_eight_edges() {
    let system = fixtures::tent_system(&eps());
    let f = fixtures::tent_map();
    assert_eq!(system.edge_count(), 8);
    let report = verify(&system, &f).unwrap();
    assert_eq!(report.verdict, Verdict::Verified);
}

#[test]
fn trivial_tent_pair_verifies() {
    let system = fixtures::trivial_tent_system(&eps());
    let f = fixtures::tent_map();
    let report = verify(&system, &f).unwrap();
    assert_eq!(report.verdict, Verdict::Verified);
}

#[test]
fn doubling_precedes_matches_edge_rule() {
    let system = fixtures::doubling_system(&eps());
    let f = fixtures::doubling_map();
    let p0 = system.pair(&label("0")).unwrap();
    for good in ["9", "0", "1"] {
        let check = check_precedes(p0, system.pair(&label(good)).unwrap(), &f).unwrap();
        assert!(check.pass(), "0 -> {good} should precede");
    }
    let check = check_precedes(p0, system.pair(&label("2")).unwrap(), &f).unwrap();
    assert!(!check.pass(), "0 -> 2 must fail");
}

#[test]
fn tent_precedes_follows_block_structure() {
    let system = fixtures::tent_system(&eps());
    let f = fixtures::tent_map();
    let p1 = system.pair(&label("1")).unwrap();
    assert!(check_precedes(p1, p1, &f).unwrap().pass());
    assert!(check_precedes(p1, system.pair(&label("2")).unwrap(), &f)
        .unwrap()
        .pass());
    assert!(!check_precedes(p1, system.pair(&label("3")).unwrap(), &f)
        .unwrap()
        .pass());
}

#[test]
fn shrunken_l_fails_with_witness_in_expected_region() {
    // Shrink L_1 to only its left collar: condition (a) must fail with a
    // witness reaching beyond the interior of N_1.
    let e = eps();
    let n1 = crate::geometry::RegionSet::normalize(
        &crate::geometry::Space::Line,
        vec![(int(0) - int(4) * &e, rat(1, 3) + int(4) * &e)],
    )
    .unwrap();
    let l1 = crate::geometry::RegionSet::normalize(
        &crate::geometry::Space::Line,
        vec![(int(0) - int(4) * &e, int(0) - &e)],
    )
    .unwrap();
    let bad = crate::geometry::CompactPair::new(label("1"), n1, l1).unwrap();
    let system = fixtures::tent_system(&e);
    let f = fixtures::tent_map();
    let check = check_precedes(&bad, system.pair(&label("1")).unwrap(), &f).unwrap();
    assert!(!check.condition_a.pass);
    let witness = check.condition_a.witness.unwrap();
    assert!(!witness.is_empty());
    // The escaping image comes from core points in [1/9 + ε, 1/3 + 4ε].
    let hull = witness.hull().unwrap();
    assert!(hull.1 > rat(1, 3) + int(4) * &e);
}

#[test]
fn exit_set_matches_affine_solve() {
    let e = eps();
    let system = fixtures::tent_system(&e);
    let f = fixtures::tent_map();
    let p1 = system.pair(&label("1")).unwrap();
    let exit = exit_set(p1, p1.n(), &f).unwrap();
    let four_eps_third = int(4) * &e / int(3);
    assert_eq!(
        exit.cells(),
        vec![
            (int(0) - int(4) * &e, int(0) - &four_eps_third),
            (rat(1, 9) + &four_eps_third, rat(1, 3) + int(4) * &e),
        ]
    );
    // Empty target: the whole N_a exits.
    let empty = crate::geometry::RegionSet::empty(&crate::geometry::Space::Line);
    assert_eq!(&exit_set(p1, &empty, &f).unwrap(), p1.n());
    // Core image strictly inside: empty exit set against a huge target.
    let big = crate::geometry::RegionSet::normalize(
        &crate::geometry::Space::Line,
        vec![(int(-2), int(2))],
    )
    .unwrap();
    let exit_all_in = exit_set(p1, &big, &f).unwrap();
    assert!(exit_all_in.is_empty());
}

#[test]
fn precedes_equivalence_with_exit_sets() {
    // image(f, core_a) ⊆ Int N_b iff exit_set(P_a, N_b) ∩ core_a = ∅.
    let e = eps();
    for (system, f) in [
        (fixtures::tent_system(&e), fixtures::tent_map()),
        (fixtures::doubling_system(&e), fixtures::doubling_map()),
    ] {
        for a in system.labels() {
            for b in system.labels() {
                let pa = system.pair(a).unwrap();
                let pb = system.pair(b).unwrap();
                let core_a = pa.core();
                let via_image = f
                    .image(&core_a)
                    .unwrap()
                    .subset_of_interior(pb.n())
                    .unwrap();
                let exit = exit_set(pa, pb.n(), &f).unwrap();
                let via_exit = exit.intersect(&core_a).unwrap().is_empty();
                assert_eq!(via_image, via_exit, "mismatch at ({a}, {b})");
            }
        }
    }
}

#[test]
fn chain_criterion_fails_without_isolation() {
    // Single pair with I = the whole space: I ∩ f⁻¹(I) = I ⊄ Int I.
    let n = crate::geometry::RegionSet::normalize(
        &crate::geometry::Space::Line,
        vec![(int(0), int(1))],
    )
    .unwrap();
    let f = crate::dynamics::PLMap::from_vertices(
        crate::dynamics::MapSpace::Line,
        vec![(int(0), int(0)), (int(1), int(1))],
    )
    .unwrap();
    let core = n.clone();
    let check = check_chain_edge(&core, &core, &f).unwrap();
    assert!(!check.pass);
}

#[test]
fn contraction_pair_is_undecided_not_failed() {
    // f(x) = x/2 on [-2, 2] with N = [-1, 1], L = ∅: both precedes
    // conditions hold, but the boundary points survive the pullback, so the
    // sufficient chain criterion fails. The orbit condition itself is true,
    // hence UNDECIDED.
    let f = crate::dynamics::PLMap::from_vertices(
        crate::dynamics::MapSpace::Line,
        vec![(int(-2), int(-1)), (int(2), int(1))],
    )
    .unwrap();
    let n = crate::geometry::RegionSet::normalize(
        &crate::geometry::Space::Line,
        vec![(int(-1), int(1))],
    )
    .unwrap();
    let l = crate::geometry::RegionSet::empty(&crate::geometry::Space::Line);
    let pair = crate::geometry::CompactPair::new(label("c"), n, l).unwrap();
    let system = IndexSystem::new(vec![pair], vec![(label("c"), label("c"))]).unwrap();
    let report = verify(&system, &f).unwrap();
    assert_eq!(report.verdict, Verdict::Undecided);
}

#[test]
fn inv_m_level_zero_is_the_core() {
    let e = eps();
    let system = fixtures::doubling_system(&e);
    let f = fixtures::doubling_map();
    let level0 = inv_m(&system, &f, 0).unwrap();
    for l in system.labels() {
        assert_eq!(&level0[l], system.core(l).unwrap());
    }
}

#[test]
fn inv_m_is_nested_and_keeps_fixed_points() {
    let e = eps();
    let system = fixtures::doubling_system(&e);
    let f = fixtures::doubling_map();
    let mut previous = inv_m(&system, &f, 0).unwrap();
    for m in 1..=6 {
        let current = inv_m(&system, &f, m).unwrap();
        for l in system.labels() {
            assert!(
                current[l].is_subset_of(&previous[l]).unwrap(),
                "nesting fails at m={m}, label {l}"
            );
        }
        previous = current;
    }
    // The fixed point 0 persists at label 0.
    assert!(previous[&label("0")].contains_point(&int(0)));

    let tent = fixtures::tent_system(&e);
    let tf = fixtures::tent_map();
    let refined = inv_m(&tent, &tf, 6).unwrap();
    assert!(refined[&label("1")].contains_point(&int(0)));
    assert!(refined[&label("3")].contains_point(&rat(3, 4)));
}

#[test]
fn word_core_examples() {
    let e = eps();
    let system = fixtures::doubling_system(&e);
    let f = fixtures::doubling_map();
    // Length-1 word: exactly the core.
    let w1 = word_core(&system, &f, &[label("1")], 0).unwrap();
    assert_eq!(&w1, system.core(&label("1")).unwrap());
    // (1,1,1) hugs the fixed point 0; (1,3,5) hugs the period-3 orbit.
    let w111 = word_core(&system, &f, &[label("1"), label("1"), label("1")], 0).unwrap();
    assert!(w111.contains_point(&int(0)));
    assert!(w111.is_subset_of(system.core(&label("1")).unwrap()).unwrap());
    let w135 = word_core(
        &system,
        &f,
        &[label("1"), label("3"), label("5")],
        0,
    )
    .unwrap();
    assert!(w135.contains_point(&rat(1, 7)));
    assert!(w111.disjoint(&w135).unwrap());
    // Non-allowable word is rejected.
    assert!(matches!(
        word_core(&system, &f, &[label("1"), label("5")], 0),
        Err(IndexError::NonAllowableWord { .. })
    ));
}

#[test]
fn word_core_concatenation_containment() {
    // word_core(w·w') ⊆ word_core(w) ∩ f^{-|w|}(word_core(w')).
    let e = eps();
    let system = fixtures::tent_system(&e);
    let f = fixtures::tent_map();
    let w = [label("1"), label("2"), label("4")];
    let w2 = [label("1"), label("2"), label("4"), label("1"), label("2"), label("4")];
    let long = word_core(&system, &f, &w2, 0).unwrap();
    let short = word_core(&system, &f, &w, 0).unwrap();
    assert!(long.is_subset_of(&short).unwrap());
    let mut pulled = word_core(&system, &f, &w, 0).unwrap();
    for _ in 0..w.len() {
        pulled = f.preimage(&pulled).unwrap();
    }
    let bound = short.intersect(&pulled).unwrap();
    assert!(long.is_subset_of(&bound).unwrap());
}

#[test]
fn verify_flags_missing_out_edge() {
    let e = eps();
    let base = fixtures::tent_system(&e);
    let pairs: Vec<_> = base.pairs().cloned().collect();
    let edges = vec![
        (label("1"), label("1")),
        (label("2"), label("3")),
        (label("3"), label("3")),
        // "4" has no outgoing edge.
    ];
    let system = IndexSystem::new(pairs, edges).unwrap();
    let report = verify(&system, &fixtures::tent_map()).unwrap();
    assert_eq!(report.verdict, Verdict::Failed);
    assert!(report
        .structural_issues
        .iter()
        .any(|m| m.contains('4')));
}

#[test]
fn dangling_edge_rejected_at_construction() {
    let e = eps();
    let base = fixtures::tent_system(&e);
    let pairs: Vec<_> = base.pairs().cloned().collect();
    let err = IndexSystem::new(pairs, vec![(label("1"), label("9"))]);
    assert!(matches!(err, Err(IndexError::DanglingEdge { .. })));
}

#[test]
fn degenerate_pair_precedes_degenerate_pair_vacuously() {
    // L = N: the core is empty, so condition (b) reduces to
    // f(N_a) ∩ ∅ = ∅ and both conditions hold vacuously.
    let n = crate::geometry::RegionSet::normalize(
        &crate::geometry::Space::Line,
        vec![(int(0), rat(1, 4))],
    )
    .unwrap();
    let p = crate::geometry::CompactPair::new(label("d"), n.clone(), n).unwrap();
    let f = fixtures::tent_map();
    let check = check_precedes(&p, &p, &f).unwrap();
    assert!(check.pass());
    let system = IndexSystem::new(vec![p], vec![(label("d"), label("d"))]).unwrap();
    let report = verify(&system, &f).unwrap();
    assert_eq!(report.verdict, Verdict::Verified);
    assert_eq!(report.degenerate_pairs, vec![label("d")]);
}

#[test]
fn chain_isolation_over_all_edges() {
    let e = eps();
    let system = fixtures::tent_system(&e);
    let f = fixtures::tent_map();
    let results = check_chain_isolation(&system, &f).unwrap();
    assert_eq!(results.len(), 8);
    assert!(results.iter().all(|(_, check)| check.pass));
    let system = fixtures::doubling_system(&e);
    let f = fixtures::doubling_map();
    let results = check_chain_isolation(&system, &f).unwrap();
    assert_eq!(results.len(), 30);
    assert!(results.iter().all(|(_, check)| check.pass));
}

#[test]
fn exit_sets_along_edges_stay_in_l() {
    // Condition 1(a) in its original form: along every declared edge the
    // exit set relative to the successor's N lies in L_a, away from the
    // core.
    let e = eps();
    let system = fixtures::doubling_system(&e);
    let f = fixtures::doubling_map();
    for (a, b) in system.edges() {
        let pa = system.pair(a).unwrap();
        let pb = system.pair(b).unwrap();
        let exit = exit_set(pa, pb.n(), &f).unwrap();
        assert!(!exit.is_empty(), "collars always exit somewhere");
        assert!(
            exit.is_subset_of(pa.l()).unwrap(),
            "exit set escapes L along ({a}, {b})"
        );
        assert!(exit.intersect(&pa.core()).unwrap().is_empty());
    }
}
