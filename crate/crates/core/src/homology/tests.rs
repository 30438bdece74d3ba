use super::*;
use crate::fixtures;
use crate::geometry::Label;
use crate::scalar::rat;

fn eps() -> Scalar {
    fixtures::default_eps()
}

fn label(s: &str) -> Label {
    Label::new(s)
}

#[test]
fn doubling_pairs_are_pointed_circles() {
    let system = fixtures::doubling_system(&eps());
    for pair in system.pairs() {
        let (graded, basis) = pair_homology(pair).unwrap();
        assert_eq!(graded.dims, vec![0, 1]);
        assert_eq!(basis.components.len(), 1);
        assert_eq!(basis.components[0].class, ComponentClass::Circle);
    }
}

#[test]
fn tent_pairs_are_pointed_circles() {
    let system = fixtures::tent_system(&eps());
    for pair in system.pairs() {
        let (graded, _) = pair_homology(pair).unwrap();
        assert_eq!(graded.dims, vec![0, 1]);
    }
}

#[test]
fn trivial_pair_has_rank_two() {
    let system = fixtures::trivial_tent_system(&eps());
    let pair = system.pair(&label("0")).unwrap();
    let (graded, basis) = pair_homology(pair).unwrap();
    assert_eq!(graded.dims, vec![0, 2]);
    assert_eq!(basis.degree1().len(), 2);
}

#[test]
fn interval_without_l_is_a_point_class() {
    let n = crate::geometry::RegionSet::normalize(
        &crate::geometry::Space::Line,
        vec![(int(0), int(1))],
    )
    .unwrap();
    let l = crate::geometry::RegionSet::empty(&crate::geometry::Space::Line);
    let pair = crate::geometry::CompactPair::new(label("p"), n, l).unwrap();
    let (graded, _) = pair_homology(&pair).unwrap();
    assert_eq!(graded.dims, vec![1, 0]);
}

#[test]
fn full_circle_pair_has_both_degrees() {
    let pair = crate::geometry::CompactPair::new(
        label("c"),
        crate::geometry::RegionSet::full_circle(),
        crate::geometry::RegionSet::empty(&crate::geometry::Space::Circle),
    )
    .unwrap();
    let (graded, _) = pair_homology(&pair).unwrap();
    assert_eq!(graded.dims, vec![1, 1]);
}

#[test]
fn doubling_induced_maps_are_all_one() {
    let system = fixtures::doubling_system(&eps());
    let f = fixtures::doubling_map();
    for (a, b) in system.edges() {
        let m = induced_map(system.pair(a).unwrap(), system.pair(b).unwrap(), &f).unwrap();
        assert_eq!(m.degree(1).rows(), 1);
        assert_eq!(m.degree(1).cols(), 1);
        assert_eq!(m.degree(1).get(0, 0), &int(1), "edge ({a},{b})");
        assert_eq!(m.degree(0).rows(), 0);
    }
}

#[test]
fn tent_sign_table_matches() {
    let system = fixtures::tent_system(&eps());
    let f = fixtures::tent_map();
    let expected = [
        (("1", "1"), 1),
        (("1", "2"), 1),
        (("2", "3"), 1),
        (("2", "4"), 1),
        (("3", "3"), -1),
        (("3", "4"), -1),
        (("4", "1"), -1),
        (("4", "2"), -1),
    ];
    for ((a, b), sign) in expected {
        let m = induced_map(
            system.pair(&label(a)).unwrap(),
            system.pair(&label(b)).unwrap(),
            &f,
        )
        .unwrap();
        assert_eq!(m.degree(1).get(0, 0), &int(sign), "edge ({a},{b})");
    }
}

#[test]
fn trivial_pair_self_map_matrix() {
    let system = fixtures::trivial_tent_system(&eps());
    let f = fixtures::tent_map();
    let pair = system.pair(&label("0")).unwrap();
    let m = induced_map(pair, pair, &f).unwrap();
    let expect = Matrix::from_rows(vec![vec![int(1), int(-1)], vec![int(1), int(-1)]]);
    assert_eq!(m.degree(1), &expect);
    assert!(m.degree(1).pow(2).is_zero());
}

#[test]
fn induced_map_requires_precedes() {
    let system = fixtures::tent_system(&eps());
    let f = fixtures::tent_map();
    let err = induced_map(
        system.pair(&label("1")).unwrap(),
        system.pair(&label("3")).unwrap(),
        &f,
    );
    assert!(matches!(err, Err(HomologyError::PrecedesViolation { .. })));
}

#[test]
fn degree_count_cases() {
    // Increasing full crossing.
    let img = (rat(-3, 100), rat(1, 3) + rat(3, 100));
    let comp = (rat(2, 9) - rat(1, 100), rat(1, 3) + rat(1, 100));
    assert_eq!(degree_count(&img, 1, &comp, false).unwrap(), 1);
    // Decreasing mirror.
    assert_eq!(degree_count(&img, -1, &comp, false).unwrap(), -1);
    // Image strictly inside a gap: no crossing.
    let inside = (rat(1, 2), rat(6, 10));
    let far = (rat(8, 10), rat(9, 10));
    assert_eq!(degree_count(&inside, 1, &far, false).unwrap(), 0);
    // Exact boundary contact is refused.
    let touching = (rat(2, 9) - rat(1, 100), rat(1, 2));
    assert!(matches!(
        degree_count(&touching, 1, &comp, false),
        Err(HomologyError::Undecided { .. })
    ));
}

#[test]
fn degree_count_winds_on_the_circle() {
    // Image spanning two full turns across a small component counts twice.
    let img = (rat(1, 100), rat(201, 100));
    let comp = (rat(2, 10), rat(3, 10));
    assert_eq!(degree_count(&img, 1, &comp, true).unwrap(), 2);
}

#[test]
fn functoriality_on_fixture_edges() {
    // Degree-counting f² along composable edges equals the matrix product.
    let e = eps();
    for (system, f) in [
        (fixtures::tent_system(&e), fixtures::tent_map()),
        (fixtures::doubling_system(&e), fixtures::doubling_map()),
    ] {
        let f2 = f.iterate(2).unwrap();
        for (a, b) in system.edges() {
            let m_ab = induced_map(system.pair(a).unwrap(), system.pair(b).unwrap(), &f).unwrap();
            for c in system.labels() {
                if !system.has_edge(b, c) {
                    continue;
                }
                let m_bc =
                    induced_map(system.pair(b).unwrap(), system.pair(c).unwrap(), &f).unwrap();
                let product = m_bc.degree(1).mul(m_ab.degree(1));
                let direct = induced_map_unchecked(
                    system.pair(a).unwrap(),
                    system.pair(c).unwrap(),
                    &f2,
                )
                .unwrap();
                assert_eq!(
                    direct.degree(1),
                    &product,
                    "functoriality fails along {a}->{b}->{c}"
                );
            }
        }
    }
}

#[test]
fn doubling_branch_sum_equals_degree() {
    // Sum over targets of degree-1 entries from one source equals the
    // degree of the map across the fundamental domain.
    let system = fixtures::doubling_system(&eps());
    let f = fixtures::doubling_map();
    for a in system.labels() {
        let mut total = int(0);
        for b in system.labels() {
            if !system.has_edge(a, b) {
                continue;
            }
            let m = induced_map(system.pair(a).unwrap(), system.pair(b).unwrap(), &f).unwrap();
            total += m.degree(1).get(0, 0);
        }
        // Three successor cores overlap pairwise; the crossing spans cover
        // the image with multiplicity one plus the degree-2 overlap layout.
        assert_eq!(total, int(3));
    }
    // The honest degree statement: preimage branch orientations of a small
    // arc sum to the degree.
    let arc = crate::geometry::RegionSet::normalize(
        &crate::geometry::Space::Circle,
        vec![(rat(41, 100), rat(42, 100))],
    )
    .unwrap();
    let pre = f.preimage(&arc).unwrap();
    assert_eq!(pre.cell_count(), 2);
    assert_eq!(f.circle_degree(), Some(2));
}

#[test]
fn scaling_invariance_of_homology_data() {
    let fine = rat(1, 1000);
    let coarse = eps();
    for (mk_system, f) in [
        (
            fixtures::tent_system as fn(&Scalar) -> crate::index::IndexSystem,
            fixtures::tent_map(),
        ),
        (fixtures::doubling_system, fixtures::doubling_map()),
    ] {
        let sys_a = mk_system(&coarse);
        let sys_b = mk_system(&fine);
        for (a, b) in sys_a.edges() {
            let ma = induced_map(sys_a.pair(a).unwrap(), sys_a.pair(b).unwrap(), &f).unwrap();
            let mb = induced_map(sys_b.pair(a).unwrap(), sys_b.pair(b).unwrap(), &f).unwrap();
            assert_eq!(ma.matrices, mb.matrices);
        }
    }
}

#[test]
fn full_circle_pair_self_map_is_the_degree() {
    // The tripling circle map on the pair (circle, ∅): one generator in
    // each degree, H1 multiplies by the degree.
    let f = crate::dynamics::PLMap::from_vertices(
        crate::dynamics::MapSpace::Circle,
        vec![(int(0), int(0)), (int(1), int(3))],
    )
    .unwrap();
    let pair = crate::geometry::CompactPair::new(
        label("c"),
        crate::geometry::RegionSet::full_circle(),
        crate::geometry::RegionSet::empty(&crate::geometry::Space::Circle),
    )
    .unwrap();
    let m = induced_map(&pair, &pair, &f).unwrap();
    assert_eq!(m.degree(1).get(0, 0), &int(3));
    assert_eq!(m.degree(0).get(0, 0), &int(1));
}
