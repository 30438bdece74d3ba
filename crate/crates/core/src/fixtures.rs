//! Worked example systems shipped with the crate: the doubling map on the
//! circle, the slope-3 tent map, and the single trivial tent pair whose
//! induced matrix squares to zero.
//!
//! All fixtures take the margin `eps` as a parameter; the repository
//! default is `1/100`. Any margin small enough for the containments to
//! hold produces the same homology data.

use crate::dynamics::{MapSpace, PLMap};
use crate::geometry::{CompactPair, Label, RegionSet, Space};
use crate::index::IndexSystem;
use crate::scalar::{int, rat, Scalar};

/// Default margin used by the shipped fixture files.
pub fn default_eps() -> Scalar {
    rat(1, 100)
}

/// Doubling map on the circle, as the lift `x ↦ 2x`.
pub fn doubling_map() -> PLMap {
    PLMap::from_vertices(MapSpace::Circle, vec![(int(0), int(0)), (int(1), int(2))])
        .expect("static fixture")
}

/// Slope-3 tent map on a generous domain `[-2, 2]`.
pub fn tent_map() -> PLMap {
    PLMap::from_vertices(
        MapSpace::Line,
        vec![(int(-2), int(-6)), (rat(1, 2), rat(3, 2)), (int(2), int(-3))],
    )
    .expect("static fixture")
}

fn circle_pair(label: &str, n: Vec<(Scalar, Scalar)>, l: Vec<(Scalar, Scalar)>) -> CompactPair {
    CompactPair::new(
        Label::new(label),
        RegionSet::normalize(&Space::Circle, n).expect("fixture cells"),
        RegionSet::normalize(&Space::Circle, l).expect("fixture cells"),
    )
    .expect("fixture pair")
}

fn line_pair(label: &str, n: Vec<(Scalar, Scalar)>, l: Vec<(Scalar, Scalar)>) -> CompactPair {
    CompactPair::new(
        Label::new(label),
        RegionSet::normalize(&Space::Line, n).expect("fixture cells"),
        RegionSet::normalize(&Space::Line, l).expect("fixture cells"),
    )
    .expect("fixture pair")
}

/// Ten pairs around the circle: `N_i = [(i-3-3ε)/10, (i+3+3ε)/10]` with
/// side collars `L_i`, and edges `i → 2i-1, 2i, 2i+1 (mod 10)`.
pub fn doubling_system(eps: &Scalar) -> IndexSystem {
    let ten = int(10);
    let at = |i: i64, off: i64, margin: Scalar| (int(i + off) + margin) / &ten;
    let mut pairs = Vec::new();
    let mut edges = Vec::new();
    for i in 0..10i64 {
        let n_lo = at(i, -3, int(-3) * eps);
        let n_hi = at(i, 3, int(3) * eps);
        let l_inner_lo = at(i, -1, -eps.clone());
        let l_inner_hi = at(i, 1, eps.clone());
        pairs.push(circle_pair(
            &i.to_string(),
            vec![(n_lo.clone(), n_hi.clone())],
            vec![(n_lo, l_inner_lo), (l_inner_hi, n_hi)],
        ));
        for j in [2 * i - 1, 2 * i, 2 * i + 1] {
            edges.push((
                Label::new(i.to_string()),
                Label::new(j.rem_euclid(10).to_string()),
            ));
        }
    }
    IndexSystem::new(pairs, edges).expect("fixture system")
}

/// Four pairs over the two invariant blocks of the tent map, and the eight
/// edges `1,4 → 1,2` and `2,3 → 3,4`.
pub fn tent_system(eps: &Scalar) -> IndexSystem {
    let e = eps;
    let pairs = vec![
        line_pair(
            "1",
            vec![(int(0) - int(4) * e, rat(1, 3) + int(4) * e)],
            vec![
                (int(0) - int(4) * e, int(0) - e),
                (rat(1, 9) + e, rat(1, 3) + int(4) * e),
            ],
        ),
        line_pair(
            "2",
            vec![(int(0) - int(4) * e, rat(1, 3) + int(4) * e)],
            vec![
                (int(0) - int(4) * e, rat(2, 9) - e),
                (rat(1, 3) + e, rat(1, 3) + int(4) * e),
            ],
        ),
        line_pair(
            "3",
            vec![(rat(2, 3) - int(4) * e, int(1) + int(4) * e)],
            vec![
                (rat(2, 3) - int(4) * e, rat(2, 3) - e),
                (rat(7, 9) + e, int(1) + int(4) * e),
            ],
        ),
        line_pair(
            "4",
            vec![(rat(2, 3) - int(4) * e, int(1) + int(4) * e)],
            vec![
                (rat(2, 3) - int(4) * e, rat(8, 9) - e),
                (int(1) + e, int(1) + int(4) * e),
            ],
        ),
    ];
    let edges = [("1", "1"), ("1", "2"), ("4", "1"), ("4", "2"),
                 ("2", "3"), ("2", "4"), ("3", "3"), ("3", "4")]
        .into_iter()
        .map(|(a, b)| (Label::new(a), Label::new(b)))
        .collect();
    IndexSystem::new(pairs, edges).expect("fixture system")
}

/// The single trivial pair for the tent map: `N_0 = [-4ε, 1+4ε]` with `L_0`
/// covering both outer collars and the middle gap.
pub fn trivial_tent_system(eps: &Scalar) -> IndexSystem {
    let e = eps;
    let pair = line_pair(
        "0",
        vec![(int(0) - int(4) * e, int(1) + int(4) * e)],
        vec![
            (int(0) - int(4) * e, int(0) - e),
            (rat(1, 3) + e, rat(2, 3) - e),
            (int(1) + e, int(1) + int(4) * e),
        ],
    );
    IndexSystem::new(vec![pair], vec![(Label::new("0"), Label::new("0"))])
        .expect("fixture system")
}
