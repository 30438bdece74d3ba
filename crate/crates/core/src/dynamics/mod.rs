//! Exact piecewise-linear map specifications on the interval and circle,
//! with exact forward images, preimages and monotone branch decomposition.
//!
//! A map is a list of affine pieces with rational breakpoints and slopes.
//! Line maps may have a multi-interval domain (gaps arise under
//! composition); circle maps always cover the full circle and are stored
//! through their lift on `[0, 1]`.

use thiserror::Error;

pub mod orbits;
pub mod product;

pub use product::ProductMap;

use crate::geometry::{GeometryError, RegionSet, Space};
use crate::scalar::{int, is_integer, mod1, Scalar};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MapSpace {
    Line,
    Circle,
}

impl MapSpace {
    pub fn region_space(&self) -> Space {
        match self {
            MapSpace::Line => Space::Line,
            MapSpace::Circle => Space::Circle,
        }
    }
}

/// One affine piece `x ↦ slope·x + intercept` on the closed cell `[x0, x1]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Piece {
    pub x0: Scalar,
    pub x1: Scalar,
    pub slope: Scalar,
    pub intercept: Scalar,
}

impl Piece {
    fn value(&self, x: &Scalar) -> Scalar {
        &self.slope * x + &self.intercept
    }

    /// Image interval, ordered.
    fn image(&self) -> (Scalar, Scalar) {
        let a = self.value(&self.x0);
        let b = self.value(&self.x1);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("map vertices must have strictly increasing x coordinates")]
    NonIncreasingBreakpoints,
    #[error("constant piece at [{x0}, {x1}]: zero slopes are not allowed")]
    ZeroSlope { x0: Scalar, x1: Scalar },
    #[error("map is discontinuous at {at}")]
    Discontinuity { at: Scalar },
    #[error("circle map must be given by a lift over exactly [0, 1]")]
    BadCircleDomain,
    #[error("circle map lift must change by an integer over a full turn, got {delta}")]
    NonIntegerDegree { delta: Scalar },
    #[error("map must have at least one piece")]
    NoPieces,
    #[error("argument escapes the map domain near {witness}")]
    DomainEscape { witness: Scalar },
    #[error("set lives in {found} but the map acts on {expected}")]
    SpaceMismatch { expected: Space, found: Space },
    #[error("cannot compose maps over different spaces")]
    ComposeMismatch,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Continuous piecewise-affine map with rational data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PLMap {
    space: MapSpace,
    /// Sorted by `x0`, interiors disjoint; line maps may leave gaps.
    pieces: Vec<Piece>,
    /// Lift increment over a full turn; 0 for line maps.
    degree: i64,
}

impl PLMap {
    /// Build from the vertex list of the graph of `f`. Consecutive vertices
    /// define the affine pieces, so the map is continuous by construction.
    /// A circle map is given by its lift over `[0, 1]` and must close up to
    /// an integer degree.
    pub fn from_vertices(
        space: MapSpace,
        vertices: Vec<(Scalar, Scalar)>,
    ) -> Result<Self, DynamicsError> {
        if vertices.len() < 2 {
            return Err(DynamicsError::NoPieces);
        }
        for w in vertices.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(DynamicsError::NonIncreasingBreakpoints);
            }
        }
        if space == MapSpace::Circle {
            let first = &vertices.first().unwrap().0;
            let last = &vertices.last().unwrap().0;
            if *first != int(0) || *last != int(1) {
                return Err(DynamicsError::BadCircleDomain);
            }
        }
        let mut pieces = Vec::with_capacity(vertices.len() - 1);
        for w in vertices.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            let slope = (y1 - y0) / (x1 - x0);
            if slope == int(0) {
                return Err(DynamicsError::ZeroSlope {
                    x0: x0.clone(),
                    x1: x1.clone(),
                });
            }
            let intercept = y0 - &slope * x0;
            pieces.push(Piece {
                x0: x0.clone(),
                x1: x1.clone(),
                slope,
                intercept,
            });
        }
        let degree = if space == MapSpace::Circle {
            let delta = &vertices.last().unwrap().1 - &vertices.first().unwrap().1;
            if !is_integer(&delta) {
                return Err(DynamicsError::NonIntegerDegree { delta });
            }
            crate::scalar::floor_i64(&delta)
        } else {
            0
        };
        Ok(PLMap {
            space,
            pieces,
            degree,
        })
    }

    /// Assemble from explicit pieces (used by composition). Adjacent pieces
    /// sharing an endpoint must agree there; non-adjacent pieces leave a
    /// domain gap.
    fn from_pieces(
        space: MapSpace,
        mut pieces: Vec<Piece>,
        degree: i64,
    ) -> Result<Self, DynamicsError> {
        if pieces.is_empty() {
            return Err(DynamicsError::NoPieces);
        }
        pieces.sort_by(|p, q| p.x0.cmp(&q.x0));
        // Merge collinear neighbors to keep piece counts in check.
        let mut merged: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if p.x0 == p.x1 {
                continue;
            }
            if let Some(last) = merged.last_mut() {
                if last.x1 == p.x0 {
                    if last.value(&p.x0) != p.value(&p.x0) {
                        return Err(DynamicsError::Discontinuity { at: p.x0.clone() });
                    }
                    if last.slope == p.slope && last.intercept == p.intercept {
                        last.x1 = p.x1;
                        continue;
                    }
                } else if last.x1 > p.x0 {
                    return Err(DynamicsError::NonIncreasingBreakpoints);
                }
            }
            merged.push(p);
        }
        if merged.is_empty() {
            return Err(DynamicsError::NoPieces);
        }
        for p in &merged {
            if p.slope == int(0) {
                return Err(DynamicsError::ZeroSlope {
                    x0: p.x0.clone(),
                    x1: p.x1.clone(),
                });
            }
        }
        if space == MapSpace::Circle {
            let first = &merged.first().unwrap().x0;
            let last = &merged.last().unwrap().x1;
            if *first != int(0) || *last != int(1) {
                return Err(DynamicsError::BadCircleDomain);
            }
            for w in merged.windows(2) {
                if w[0].x1 != w[1].x0 {
                    return Err(DynamicsError::BadCircleDomain);
                }
            }
            let wrap =
                merged.last().unwrap().value(&int(1)) - merged.first().unwrap().value(&int(0));
            if !is_integer(&wrap) {
                return Err(DynamicsError::NonIntegerDegree { delta: wrap });
            }
        }
        Ok(PLMap {
            space,
            pieces: merged,
            degree,
        })
    }

    pub fn space(&self) -> MapSpace {
        self.space
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Degree of a circle map (lift increment over one turn).
    pub fn circle_degree(&self) -> Option<i64> {
        match self.space {
            MapSpace::Circle => Some(self.degree),
            MapSpace::Line => None,
        }
    }

    /// Domain as a region set: piece cells on the line, the full circle
    /// otherwise.
    pub fn domain(&self) -> RegionSet {
        match self.space {
            MapSpace::Circle => RegionSet::full_circle(),
            MapSpace::Line => {
                let cells = self
                    .pieces
                    .iter()
                    .map(|p| (p.x0.clone(), p.x1.clone()))
                    .collect();
                RegionSet::normalize(&Space::Line, cells).expect("pieces are valid cells")
            }
        }
    }

    /// Vertex list of the graph of the map (inverse of `from_vertices` when
    /// the domain is connected).
    pub fn vertices(&self) -> Vec<(Scalar, Scalar)> {
        let mut out = Vec::new();
        for p in &self.pieces {
            if out
                .last()
                .map(|(x, _): &(Scalar, Scalar)| *x != p.x0)
                .unwrap_or(true)
            {
                out.push((p.x0.clone(), p.value(&p.x0)));
            }
            out.push((p.x1.clone(), p.value(&p.x1)));
        }
        out
    }

    /// Evaluate the lift at `x`. Line maps require `x` in the domain; the
    /// circle lift extends periodically to all of `Q`.
    pub fn eval_lift(&self, x: &Scalar) -> Option<Scalar> {
        match self.space {
            MapSpace::Line => self
                .pieces
                .iter()
                .find(|p| p.x0 <= *x && *x <= p.x1)
                .map(|p| p.value(x)),
            MapSpace::Circle => {
                let frac = mod1(x);
                let turns = x - &frac;
                let piece = self
                    .pieces
                    .iter()
                    .find(|p| p.x0 <= frac && frac <= p.x1)
                    .expect("circle pieces cover [0,1]");
                Some(piece.value(&frac) + turns * int(self.degree))
            }
        }
    }

    /// Evaluate in the target space (values mod 1 on the circle).
    pub fn eval(&self, x: &Scalar) -> Option<Scalar> {
        self.eval_lift(x).map(|y| match self.space {
            MapSpace::Line => y,
            MapSpace::Circle => mod1(&y),
        })
    }

    fn check_space(&self, set: &RegionSet) -> Result<(), DynamicsError> {
        if set.space() != self.space.region_space() {
            return Err(DynamicsError::SpaceMismatch {
                expected: self.space.region_space(),
                found: set.space(),
            });
        }
        Ok(())
    }

    /// Affine sub-cells of the closed cell `[a, b]` (given in lift
    /// coordinates, `b - a ≤ 1` on the circle) together with their exact
    /// lift image intervals.
    pub(crate) fn lift_branches(
        &self,
        a: &Scalar,
        b: &Scalar,
    ) -> Result<Vec<LiftBranch>, DynamicsError> {
        debug_assert!(a <= b);
        let mut out = Vec::new();
        match self.space {
            MapSpace::Line => {
                let mut covered = a.clone();
                for p in &self.pieces {
                    let lo = p.x0.clone().max(a.clone());
                    let hi = p.x1.clone().min(b.clone());
                    if lo > hi {
                        continue;
                    }
                    if lo > covered {
                        return Err(DynamicsError::DomainEscape { witness: covered });
                    }
                    if lo < hi || (a == b && lo == hi) {
                        out.push(LiftBranch {
                            x0: lo,
                            x1: hi.clone(),
                            y0: None,
                            slope: p.slope.clone(),
                            intercept: p.intercept.clone(),
                        });
                    }
                    if hi > covered {
                        covered = hi;
                    }
                    if covered >= *b {
                        break;
                    }
                }
                if covered < *b {
                    return Err(DynamicsError::DomainEscape { witness: covered });
                }
            }
            MapSpace::Circle => {
                // Work on the lift: translate each piece by every integer
                // shift meeting [a, b].
                let deg = int(self.degree);
                let m_lo = crate::scalar::floor_i64(a) - 1;
                let m_hi = crate::scalar::floor_i64(b) + 1;
                for m in m_lo..=m_hi {
                    let shift = int(m);
                    for p in &self.pieces {
                        let px0 = &p.x0 + &shift;
                        let px1 = &p.x1 + &shift;
                        let lo = px0.max(a.clone());
                        let hi = px1.min(b.clone());
                        if lo > hi || (lo == hi && a != b) {
                            continue;
                        }
                        // Lifted rule: f~(x) = slope·(x - m) + intercept + m·deg.
                        let intercept = &p.intercept - &p.slope * &shift + &shift * &deg;
                        out.push(LiftBranch {
                            x0: lo,
                            x1: hi,
                            y0: None,
                            slope: p.slope.clone(),
                            intercept,
                        });
                    }
                }
                out.sort_by(|p, q| p.x0.cmp(&q.x0));
                out.dedup_by(|p, q| p.x0 == q.x0 && p.x1 == q.x1);
            }
        }
        Ok(out)
    }

    /// Exact forward image `f(A)`.
    pub fn image(&self, set: &RegionSet) -> Result<RegionSet, DynamicsError> {
        self.check_space(set)?;
        let mut raw: Vec<(Scalar, Scalar)> = Vec::new();
        for (a, b) in set.cells() {
            for br in self.lift_branches(&a, &b)? {
                raw.push(br.image());
            }
        }
        Ok(RegionSet::normalize(&self.space.region_space(), raw)?)
    }

    /// Exact preimage `f⁻¹(B) ∩ domain(f)`.
    pub fn preimage(&self, set: &RegionSet) -> Result<RegionSet, DynamicsError> {
        self.check_space(set)?;
        let mut raw: Vec<(Scalar, Scalar)> = Vec::new();
        let cells = set.cells();
        let full_circle = set.is_full_circle();
        for p in &self.pieces {
            let (plo, phi) = p.image();
            if full_circle {
                raw.push((p.x0.clone(), p.x1.clone()));
                continue;
            }
            for (blo, bhi) in &cells {
                let translates: Vec<Scalar> = match self.space {
                    MapSpace::Line => vec![int(0)],
                    MapSpace::Circle => {
                        let m_lo = crate::scalar::floor_i64(&(&plo - bhi)) - 1;
                        let m_hi = crate::scalar::floor_i64(&(&phi - blo)) + 1;
                        (m_lo..=m_hi).map(int).collect()
                    }
                };
                for t in translates {
                    let lo = (blo + &t).max(plo.clone());
                    let hi = (bhi + &t).min(phi.clone());
                    if lo > hi {
                        continue;
                    }
                    // Pull back through the affine rule.
                    let xa = (&lo - &p.intercept) / &p.slope;
                    let xb = (&hi - &p.intercept) / &p.slope;
                    let (xa, xb) = if xa <= xb { (xa, xb) } else { (xb, xa) };
                    raw.push((xa, xb));
                }
            }
        }
        Ok(RegionSet::normalize(&self.space.region_space(), raw)?)
    }

    /// Maximal affine branches of the map over a single closed cell, with
    /// orientation signs.
    pub fn monotone_branches(
        &self,
        cell: &(Scalar, Scalar),
    ) -> Result<Vec<MonotoneBranch>, DynamicsError> {
        Ok(self
            .lift_branches(&cell.0, &cell.1)?
            .into_iter()
            .map(|br| {
                let orientation = if br.slope > int(0) { 1 } else { -1 };
                MonotoneBranch {
                    cell: (br.x0.clone(), br.x1.clone()),
                    image: br.image(),
                    orientation,
                }
            })
            .collect())
    }

    /// Exact composition `outer ∘ self`.
    pub fn compose(&self, outer: &PLMap) -> Result<PLMap, DynamicsError> {
        if self.space != outer.space {
            return Err(DynamicsError::ComposeMismatch);
        }
        let mut pieces: Vec<Piece> = Vec::new();
        for p in &self.pieces {
            // Cut this piece at preimages of the outer map's breakpoints.
            let (ylo, yhi) = p.image();
            let mut cuts: Vec<Scalar> = vec![p.x0.clone(), p.x1.clone()];
            let outer_breaks: Vec<Scalar> = match outer.space {
                MapSpace::Line => outer
                    .pieces
                    .iter()
                    .flat_map(|q| [q.x0.clone(), q.x1.clone()])
                    .collect(),
                MapSpace::Circle => {
                    let m_lo = crate::scalar::floor_i64(&ylo) - 1;
                    let m_hi = crate::scalar::floor_i64(&yhi) + 1;
                    let mut out = Vec::new();
                    for m in m_lo..=m_hi {
                        for q in &outer.pieces {
                            out.push(&q.x0 + int(m));
                        }
                    }
                    out
                }
            };
            for b in outer_breaks {
                if b > ylo && b < yhi {
                    cuts.push((&b - &p.intercept) / &p.slope);
                }
            }
            cuts.sort();
            cuts.dedup();
            for w in cuts.windows(2) {
                let (u, v) = (&w[0], &w[1]);
                if u >= v {
                    continue;
                }
                let mid = (u + v) / int(2);
                let y_mid = p.value(&mid);
                let Some(branch) = outer.branch_at_lift(&y_mid) else {
                    continue; // outer domain gap
                };
                let slope = &branch.0 * &p.slope;
                let intercept = &branch.0 * &p.intercept + &branch.1;
                pieces.push(Piece {
                    x0: u.clone(),
                    x1: v.clone(),
                    slope,
                    intercept,
                });
            }
        }
        PLMap::from_pieces(self.space, pieces, self.degree * outer.degree)
    }

    /// `f^n` by repeated composition; `n ≥ 1`.
    pub fn iterate(&self, n: u32) -> Result<PLMap, DynamicsError> {
        assert!(n >= 1, "iterate requires n >= 1");
        let mut out = self.clone();
        for _ in 1..n {
            out = out.compose(self)?;
        }
        Ok(out)
    }

    /// Affine rule `(slope, intercept)` of the lift at `y` (None in a line
    /// domain gap). At a breakpoint either adjacent rule is valid.
    fn branch_at_lift(&self, y: &Scalar) -> Option<(Scalar, Scalar)> {
        match self.space {
            MapSpace::Line => self
                .pieces
                .iter()
                .find(|p| p.x0 <= *y && *y <= p.x1)
                .map(|p| (p.slope.clone(), p.intercept.clone())),
            MapSpace::Circle => {
                let frac = mod1(y);
                let shift = y - &frac;
                let p = self
                    .pieces
                    .iter()
                    .find(|p| p.x0 <= frac && frac <= p.x1)
                    .expect("circle pieces cover [0,1]");
                let deg = int(self.degree);
                let intercept = &p.intercept - &p.slope * &shift + &shift * &deg;
                Some((p.slope.clone(), intercept))
            }
        }
    }
}

/// Affine branch over a sub-cell, in lift coordinates.
#[derive(Clone, Debug)]
pub(crate) struct LiftBranch {
    pub x0: Scalar,
    pub x1: Scalar,
    #[allow(dead_code)]
    pub y0: Option<Scalar>,
    pub slope: Scalar,
    pub intercept: Scalar,
}

impl LiftBranch {
    pub fn value(&self, x: &Scalar) -> Scalar {
        &self.slope * x + &self.intercept
    }

    pub fn image(&self) -> (Scalar, Scalar) {
        let a = self.value(&self.x0);
        let b = self.value(&self.x1);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

/// A maximal affine branch of `f` over a cell: sub-cell, exact image
/// interval (lift coordinates) and slope sign.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonotoneBranch {
    pub cell: (Scalar, Scalar),
    pub image: (Scalar, Scalar),
    pub orientation: i32,
}


#[cfg(test)]
mod degree_tests {
    use super::*;
    use crate::geometry::RegionSet;
    use crate::scalar::rat;

    #[test]
    fn orientation_reversing_circle_map() {
        // x ↦ -2x mod 1 has degree -2: two preimage branches, both
        // reversing.
        let f = PLMap::from_vertices(
            MapSpace::Circle,
            vec![(int(0), int(0)), (int(1), int(-2))],
        )
        .unwrap();
        assert_eq!(f.circle_degree(), Some(-2));
        assert!(f.image(&RegionSet::full_circle()).unwrap().is_full_circle());
        let arc = RegionSet::normalize(
            &crate::geometry::Space::Circle,
            vec![(rat(1, 5), rat(23, 100))],
        )
        .unwrap();
        let pre = f.preimage(&arc).unwrap();
        let mut orientation_sum = 0;
        for cell in pre.cells() {
            for branch in f.monotone_branches(&cell).unwrap() {
                orientation_sum += branch.orientation;
            }
        }
        assert_eq!(orientation_sum, -2);
    }
}
