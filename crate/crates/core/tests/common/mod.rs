#![allow(dead_code)] // shared between integration test binaries

//! Test-only oracles, kept independent of the implementation paths they
//! check.
//!
//! The homology oracle builds the relative cubical chain complex of a pair
//! on a common subdivision grid and reads the graded dimensions off the
//! exact rank of the boundary matrix (its Smith normal form over the
//! rationals). It never looks at core components or endpoint
//! classifications.

use indexsys::geometry::{CompactPair, RegionSet, Space};
use indexsys::scalar::Scalar;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

/// Least common multiple of all endpoint denominators.
fn common_denominator(sets: &[&RegionSet]) -> i64 {
    let mut lcm = BigInt::one();
    for set in sets {
        for (a, b) in set.cells() {
            lcm = lcm.lcm(a.denom());
            lcm = lcm.lcm(b.denom());
        }
    }
    lcm.to_i64().expect("desk-scale denominators")
}

fn scaled(x: &Scalar, d: i64) -> i64 {
    let v = x * indexsys::scalar::int(d);
    assert!(
        indexsys::scalar::is_integer(&v),
        "endpoint off the common grid"
    );
    indexsys::scalar::floor_i64(&v)
}

/// Sparse exact rank by integer Gaussian elimination. The boundary matrix
/// of a graph is totally unimodular, so entries stay within machine range.
fn matrix_rank(mut rows: Vec<std::collections::BTreeMap<usize, i64>>) -> usize {
    let mut rank = 0;
    let mut used = vec![false; rows.len()];
    let ncols = rows
        .iter()
        .flat_map(|r| r.keys().copied())
        .max()
        .map(|c| c + 1)
        .unwrap_or(0);
    for col in 0..ncols {
        let Some(pivot_row) = (0..rows.len())
            .find(|&r| !used[r] && rows[r].get(&col).is_some_and(|v| *v != 0))
        else {
            continue;
        };
        used[pivot_row] = true;
        rank += 1;
        let pivot_val = rows[pivot_row][&col];
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == pivot_row || used[r] {
                continue;
            }
            let Some(&v) = row.get(&col) else { continue };
            if v == 0 {
                continue;
            }
            // row <- pivot_val * row - v * pivot, exactly.
            let mut next = std::collections::BTreeMap::new();
            for (c, &val) in row.iter() {
                next.insert(*c, val.checked_mul(pivot_val).expect("rank overflow"));
            }
            for (c, &pval) in pivot.iter() {
                let e = next.entry(*c).or_insert(0);
                *e = e
                    .checked_sub(pval.checked_mul(v).expect("rank overflow"))
                    .expect("rank overflow");
            }
            next.retain(|_, val| *val != 0);
            *row = next;
        }
    }
    rank
}

/// Graded dimensions `[H0, H1]` of the relative homology of `(N, L)` by the
/// brute-force chain computation.
pub fn cubical_homology_oracle(pair: &CompactPair) -> Vec<usize> {
    let n = pair.n();
    let l = pair.l();
    let circle = pair.space() == Space::Circle;
    let d = common_denominator(&[n, l]);

    // 1-cells of N on the grid 1/d, as oriented integer segments.
    let mut edges: Vec<(i64, i64)> = Vec::new();
    for (a, b) in n.cells() {
        let (ga, gb) = (scaled(&a, d), scaled(&b, d));
        for g in ga..gb {
            if circle {
                edges.push((g.rem_euclid(d), (g + 1).rem_euclid(d)));
            } else {
                edges.push((g, g + 1));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();

    let midpoint_in = |set: &RegionSet, u: i64| -> bool {
        // Sample the open cell at its midpoint: (u + 1/2)/d.
        let x = indexsys::scalar::rat(2 * u + 1, 2 * d);
        set.contains_point(&x)
    };
    let vertex_in = |set: &RegionSet, v: i64| -> bool {
        set.contains_point(&indexsys::scalar::rat(v, d))
    };

    // Relative cells: cells of N not in L.
    let rel_edges: Vec<(i64, i64)> = edges
        .iter()
        .copied()
        .filter(|(u, _)| {
            let key = if circle { *u } else { *u };
            !midpoint_in(l, key)
        })
        .collect();
    let mut rel_vertices: Vec<i64> = Vec::new();
    for (u, v) in &edges {
        for w in [*u, *v] {
            if vertex_in(n, w) && !vertex_in(l, w) {
                rel_vertices.push(w);
            }
        }
    }
    rel_vertices.sort_unstable();
    rel_vertices.dedup();
    let vertex_index: std::collections::BTreeMap<i64, usize> = rel_vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (*v, i))
        .collect();

    // Boundary matrix rows indexed by relative vertices.
    let mut rows = vec![std::collections::BTreeMap::new(); rel_vertices.len()];
    for (col, (u, v)) in rel_edges.iter().enumerate() {
        if let Some(&r) = vertex_index.get(v) {
            *rows[r].entry(col).or_insert(0) += 1;
        }
        if let Some(&r) = vertex_index.get(u) {
            *rows[r].entry(col).or_insert(0) -= 1;
        }
    }
    for row in rows.iter_mut() {
        row.retain(|_, v| *v != 0);
    }
    let rank = matrix_rank(rows);
    let h1 = rel_edges.len() - rank;
    let h0 = rel_vertices.len() - rank;
    vec![h0, h1]
}

/// Small deterministic generator for headless sampling suites.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        // SplitMix64 step.
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}
