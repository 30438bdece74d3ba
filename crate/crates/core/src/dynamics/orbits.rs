//! Exact periodic-orbit solver for piecewise-linear maps.
//!
//! Fixed points of `f^p` are found branch-by-branch: on an affine piece with
//! slope `m ≠ 1` the equation `m·x + c = x + j` has the single solution
//! `x = (j - c)/(m - 1)` (with `j` ranging over the integer lifts on the
//! circle and `j = 0` on the line). Unit-slope pieces contribute whole
//! intervals of fixed points and are reported separately.

use crate::dynamics::{DynamicsError, MapSpace, PLMap};
use crate::geometry::RegionSet;
use crate::scalar::{int, mod1, Scalar};

/// Fixed-point set of an iterated map, up to the representation split
/// between isolated points and unit-slope intervals.
#[derive(Clone, Debug, Default)]
pub struct FixedPoints {
    pub points: Vec<Scalar>,
    pub intervals: Vec<(Scalar, Scalar)>,
}

/// All fixed points of `f^p` (period-`p` points of `f`, including points of
/// lower period). Points are reported in base coordinates.
pub fn periodic_points(f: &PLMap, p: u32) -> Result<FixedPoints, DynamicsError> {
    let fp = f.iterate(p)?;
    let circle = f.space() == MapSpace::Circle;
    let mut out = FixedPoints::default();
    let one = int(1);
    for piece in fp.pieces() {
        let (x0, x1) = (&piece.x0, &piece.x1);
        if piece.slope == one {
            // x + c = x + j: either the whole piece is fixed or nothing is.
            let fixed = if circle {
                crate::scalar::is_integer(&piece.intercept)
            } else {
                piece.intercept == int(0)
            };
            if fixed {
                out.intervals.push((x0.clone(), x1.clone()));
            }
            continue;
        }
        let denom = &piece.slope - &one;
        let js: Vec<Scalar> = if circle {
            // j must satisfy x = (j - c)/(m - 1) ∈ [x0, x1].
            let a = x0 * &denom + &piece.intercept;
            let b = x1 * &denom + &piece.intercept;
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let j_lo = crate::scalar::floor_i64(&lo);
            let j_hi = crate::scalar::floor_i64(&hi) + 1;
            (j_lo..=j_hi).map(int).collect()
        } else {
            vec![int(0)]
        };
        for j in js {
            let x = (&j - &piece.intercept) / &denom;
            if &x >= x0 && &x <= x1 {
                out.points.push(if circle { mod1(&x) } else { x });
            }
        }
    }
    out.points.sort();
    out.points.dedup();
    Ok(out)
}

/// A periodic orbit as the forward itinerary of its starting point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PeriodicOrbit {
    pub points: Vec<Scalar>,
}

impl PeriodicOrbit {
    /// Canonical key: the sorted point set, deduplicated.
    fn key(&self) -> Vec<Scalar> {
        let mut k = self.points.clone();
        k.sort();
        k.dedup();
        k
    }
}

/// Periodic orbits of `f` with period dividing `p` whose itinerary visits
/// the given cores slot-by-slot: `f^i(x) ∈ cores[i mod p]` for all `i`.
/// Only isolated fixed points of `f^p` are searched; unit-slope plateaus
/// are reported through the boolean flag.
pub fn orbits_following(
    f: &PLMap,
    cores: &[RegionSet],
    p: u32,
) -> Result<(Vec<PeriodicOrbit>, bool), DynamicsError> {
    assert_eq!(cores.len() as u32, p);
    let fixed = periodic_points(f, p)?;
    let mut orbits: Vec<PeriodicOrbit> = Vec::new();
    'candidates: for x in fixed.points {
        let mut points = Vec::with_capacity(p as usize);
        let mut current = x.clone();
        for slot in cores {
            if !slot.contains_point(&current) {
                continue 'candidates;
            }
            points.push(current.clone());
            current = f
                .eval(&current)
                .ok_or(DynamicsError::DomainEscape { witness: current })?;
        }
        let orbit = PeriodicOrbit { points };
        if !orbits.iter().any(|o| o.key() == orbit.key()) {
            orbits.push(orbit);
        }
    }
    Ok((orbits, !fixed.intervals.is_empty()))
}
