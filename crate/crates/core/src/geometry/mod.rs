//! Exact set algebra for finite unions of closed rational intervals on the
//! line and circle, and of axis-aligned grid boxes in the square.

use thiserror::Error;

pub mod circle;
pub(crate) mod grid;
pub(crate) mod line;

pub use grid::{GridBox, GridSet, Rect, SquareBase};

use crate::scalar::{int, is_integer, mod1, Scalar};
use circle::CircleSet;

/// The ambient space a region lives in.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Space {
    Line,
    /// The circle `R/Z` (period 1).
    Circle,
    /// The square over a 1-D base, quantized at grid step `1/k`.
    Square { base: SquareBase, k: u64 },
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Space::Line => write!(f, "line"),
            Space::Circle => write!(f, "circle"),
            Space::Square { base, k } => write!(
                f,
                "square({}, 1/{k})",
                match base {
                    SquareBase::Line => "line",
                    SquareBase::Circle => "circle",
                }
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("empty cell: lower endpoint {lo} exceeds upper endpoint {hi}")]
    EmptyCell { lo: Scalar, hi: Scalar },
    #[error("operands live in different spaces")]
    SpaceMismatch,
    #[error("endpoint {value} is not aligned to the grid of step 1/{k}")]
    GridMisaligned { value: Scalar, k: u64 },
    #[error("invalid grid resolution k = {k}")]
    BadGrid { k: u64 },
    #[error("degenerate cell [{at}, {at}] not allowed in a compact pair")]
    DegenerateCell { at: Scalar },
    #[error("L is not a subset of N in pair `{label}`")]
    LNotContained { label: String },
    #[error("operation `{op}` is not defined for space {space}")]
    UnsupportedSpace { op: &'static str, space: Space },
}

/// A finite union of closed cells in one of the three spaces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RegionSet {
    Line(Vec<(Scalar, Scalar)>),
    Circle(CircleSet),
    Square(GridSet),
}

impl RegionSet {
    pub fn empty(space: &Space) -> RegionSet {
        match space {
            Space::Line => RegionSet::Line(Vec::new()),
            Space::Circle => RegionSet::Circle(CircleSet::empty()),
            Space::Square { base, k } => {
                RegionSet::Square(GridSet::empty(*base, *k).expect("validated space"))
            }
        }
    }

    pub fn full_circle() -> RegionSet {
        RegionSet::Circle(CircleSet::Full)
    }

    /// Canonicalize a raw cell list: merge overlaps and abutting closed
    /// cells, reduce circle endpoints mod 1, reject inverted cells.
    pub fn normalize(space: &Space, raw: Vec<(Scalar, Scalar)>) -> Result<RegionSet, GeometryError> {
        match space {
            Space::Line => Ok(RegionSet::Line(line::normalize_cells(raw)?)),
            Space::Circle => Ok(RegionSet::Circle(circle::normalize_arcs(raw)?)),
            Space::Square { .. } => Err(GeometryError::UnsupportedSpace {
                op: "normalize(cells)",
                space: space.clone(),
            }),
        }
    }

    pub fn from_boxes<I: IntoIterator<Item = GridBox>>(
        base: SquareBase,
        k: u64,
        boxes: I,
    ) -> Result<RegionSet, GeometryError> {
        Ok(RegionSet::Square(GridSet::from_boxes(base, k, boxes)?))
    }

    pub fn space(&self) -> Space {
        match self {
            RegionSet::Line(_) => Space::Line,
            RegionSet::Circle(_) => Space::Circle,
            RegionSet::Square(g) => Space::Square {
                base: g.base(),
                k: g.k(),
            },
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            RegionSet::Line(cells) => cells.is_empty(),
            RegionSet::Circle(set) => set.is_empty(),
            RegionSet::Square(g) => g.is_empty(),
        }
    }

    /// Endpoint pairs of the 1-D cells. Circle arcs are reported as
    /// `[start, start + len]` with canonical start in `[0, 1)`.
    pub fn cells(&self) -> Vec<(Scalar, Scalar)> {
        match self {
            RegionSet::Line(cells) => cells.clone(),
            RegionSet::Circle(set) => set.endpoint_pairs(),
            RegionSet::Square(_) => panic!("cells() is 1-D only"),
        }
    }

    pub fn grid(&self) -> Option<&GridSet> {
        match self {
            RegionSet::Square(g) => Some(g),
            _ => None,
        }
    }

    pub fn contains_point(&self, x: &Scalar) -> bool {
        match self {
            RegionSet::Line(cells) => line::contains_point(cells, x),
            RegionSet::Circle(set) => circle::contains_point(set, x),
            RegionSet::Square(_) => panic!("contains_point(scalar) is 1-D only"),
        }
    }

    pub fn union(&self, other: &RegionSet) -> Result<RegionSet, GeometryError> {
        match (self, other) {
            (RegionSet::Line(a), RegionSet::Line(b)) => {
                let mut raw = a.clone();
                raw.extend(b.iter().cloned());
                Ok(RegionSet::Line(line::normalize_cells(raw)?))
            }
            (RegionSet::Circle(a), RegionSet::Circle(b)) => {
                Ok(RegionSet::Circle(circle::union(a, b)))
            }
            (RegionSet::Square(a), RegionSet::Square(b)) => Ok(RegionSet::Square(a.union(b)?)),
            _ => Err(GeometryError::SpaceMismatch),
        }
    }

    /// Closed intersection. In square space this is the shared-box set; the
    /// closed point sets may additionally touch along faces, which
    /// [`RegionSet::disjoint`] does account for.
    pub fn intersect(&self, other: &RegionSet) -> Result<RegionSet, GeometryError> {
        match (self, other) {
            (RegionSet::Line(a), RegionSet::Line(b)) => {
                Ok(RegionSet::Line(line::intersect_cells(a, b)))
            }
            (RegionSet::Circle(a), RegionSet::Circle(b)) => {
                Ok(RegionSet::Circle(circle::intersect(a, b)))
            }
            (RegionSet::Square(a), RegionSet::Square(b)) => {
                Ok(RegionSet::Square(a.shared_boxes(b)?))
            }
            _ => Err(GeometryError::SpaceMismatch),
        }
    }

    pub fn is_subset_of(&self, other: &RegionSet) -> Result<bool, GeometryError> {
        match (self, other) {
            (RegionSet::Line(a), RegionSet::Line(b)) => Ok(line::is_subset(a, b)),
            (RegionSet::Circle(a), RegionSet::Circle(b)) => Ok(circle::is_subset(a, b)),
            (RegionSet::Square(a), RegionSet::Square(b)) => Ok(a.is_subset(b)),
            _ => Err(GeometryError::SpaceMismatch),
        }
    }

    /// `A ∩ B = ∅` for the closed point sets; a shared endpoint (or a shared
    /// box face in the square) counts as intersection.
    pub fn disjoint(&self, other: &RegionSet) -> Result<bool, GeometryError> {
        match (self, other) {
            (RegionSet::Square(a), RegionSet::Square(b)) => Ok(!a.closed_intersects(b)?),
            _ => Ok(self.intersect(other)?.is_empty()),
        }
    }

    /// `A ⊆ Int(B)`, decided exactly. Empty `A` passes vacuously.
    pub fn subset_of_interior(&self, other: &RegionSet) -> Result<bool, GeometryError> {
        if self.is_empty() {
            return Ok(true);
        }
        match (self, other) {
            (RegionSet::Line(a), RegionSet::Line(b)) => {
                if b.is_empty() {
                    return Ok(false);
                }
                let lo = a[0].0.clone().min(b[0].0.clone());
                let hi = a
                    .last()
                    .unwrap()
                    .1
                    .clone()
                    .max(b.last().unwrap().1.clone());
                let complement = line::complement_of_interior(b, &lo, &hi);
                Ok(line::intersect_cells(a, &complement).is_empty())
            }
            (RegionSet::Circle(a), RegionSet::Circle(b)) => {
                if b.is_full() {
                    return Ok(true);
                }
                if b.is_empty() {
                    return Ok(false);
                }
                let complement = circle::complement_of_interior(b);
                Ok(circle::intersect(a, &complement).is_empty())
            }
            (RegionSet::Square(a), RegionSet::Square(b)) => {
                if a.base() != b.base() || a.k() != b.k() {
                    return Err(GeometryError::SpaceMismatch);
                }
                Ok(a.boxes().all(|bx| b.deep_inside(bx)))
            }
            _ => Err(GeometryError::SpaceMismatch),
        }
    }

    /// Closed complement of `Int(self)` within a window covering `within`
    /// and `self`. 1-D only; on the circle the window is the whole circle.
    pub fn complement_of_interior_within(
        &self,
        within: &RegionSet,
    ) -> Result<RegionSet, GeometryError> {
        match (self, within) {
            (RegionSet::Line(b), RegionSet::Line(a)) => {
                let mut endpoints: Vec<&Scalar> = Vec::new();
                for (x, y) in a.iter().chain(b.iter()) {
                    endpoints.push(x);
                    endpoints.push(y);
                }
                if endpoints.is_empty() {
                    return Ok(RegionSet::Line(Vec::new()));
                }
                let lo = (*endpoints.iter().min().unwrap()).clone();
                let hi = (*endpoints.iter().max().unwrap()).clone();
                Ok(RegionSet::Line(line::complement_of_interior(b, &lo, &hi)))
            }
            (RegionSet::Circle(b), RegionSet::Circle(_)) => {
                Ok(RegionSet::Circle(circle::complement_of_interior(b)))
            }
            _ => Err(GeometryError::SpaceMismatch),
        }
    }

    pub fn total_length(&self) -> Scalar {
        match self {
            RegionSet::Line(cells) => line::total_length(cells),
            RegionSet::Circle(set) => set.total_length(),
            RegionSet::Square(_) => panic!("total_length is 1-D only"),
        }
    }

    /// Product of two grid-aligned 1-D sets, as a union of grid boxes.
    pub fn product(&self, other: &RegionSet, k: u64) -> Result<RegionSet, GeometryError> {
        let base = match (self, other) {
            (RegionSet::Line(_), RegionSet::Line(_)) => SquareBase::Line,
            (RegionSet::Circle(_), RegionSet::Circle(_)) => SquareBase::Circle,
            _ => return Err(GeometryError::SpaceMismatch),
        };
        let xs = aligned_index_ranges(self, k)?;
        let ys = aligned_index_ranges(other, k)?;
        let mut out = GridSet::empty(base, k)?;
        for &(x0, x1) in &xs {
            for &(y0, y1) in &ys {
                for i in x0..x1 {
                    for j in y0..y1 {
                        out.insert((i, j));
                    }
                }
            }
        }
        Ok(RegionSet::Square(out))
    }

    /// Exact cross-section `π₂(({x} × X) ∩ A)` of a square-space set.
    pub fn slice_at(&self, x: &Scalar) -> Result<RegionSet, GeometryError> {
        let g = match self {
            RegionSet::Square(g) => g,
            _ => {
                return Err(GeometryError::UnsupportedSpace {
                    op: "slice",
                    space: self.space(),
                })
            }
        };
        let k = g.k();
        let kq = int(k as i64);
        let xk = match g.base() {
            SquareBase::Line => x * &kq,
            SquareBase::Circle => mod1(x) * &kq,
        };
        let mut slabs = Vec::new();
        let i0 = crate::scalar::floor_i64(&xk);
        slabs.push(i0);
        if is_integer(&xk) {
            slabs.push(i0 - 1);
        }
        let mut raw = Vec::new();
        for i in slabs {
            for j in g.column(i) {
                raw.push(g.index_cell(j));
            }
        }
        match g.base() {
            SquareBase::Line => Ok(RegionSet::Line(line::normalize_cells(raw)?)),
            SquareBase::Circle => Ok(RegionSet::Circle(circle::normalize_arcs(raw)?)),
        }
    }

    /// Hull interval of a 1-D line set.
    pub fn hull(&self) -> Option<(Scalar, Scalar)> {
        match self {
            RegionSet::Line(cells) => {
                if cells.is_empty() {
                    None
                } else {
                    Some((cells[0].0.clone(), cells.last().unwrap().1.clone()))
                }
            }
            _ => None,
        }
    }

    /// Number of connected cells (1-D).
    pub fn cell_count(&self) -> usize {
        match self {
            RegionSet::Line(cells) => cells.len(),
            RegionSet::Circle(set) => {
                if set.is_full() {
                    1
                } else {
                    set.arcs().len()
                }
            }
            RegionSet::Square(_) => panic!("cell_count is 1-D only"),
        }
    }

    pub fn is_full_circle(&self) -> bool {
        matches!(self, RegionSet::Circle(set) if set.is_full())
    }
}

/// Index ranges `[i0, i1)` of the grid cells covered by a grid-aligned 1-D
/// set. Errors if any endpoint is off-grid.
fn aligned_index_ranges(
    set: &RegionSet,
    k: u64,
) -> Result<Vec<(i64, i64)>, GeometryError> {
    let kq = int(k as i64);
    let mut out = Vec::new();
    let pairs = match set {
        RegionSet::Line(cells) => cells.clone(),
        RegionSet::Circle(circle_set) => {
            if circle_set.is_full() {
                return Ok(vec![(0, k as i64)]);
            }
            circle_set.endpoint_pairs()
        }
        RegionSet::Square(_) => return Err(GeometryError::SpaceMismatch),
    };
    for (a, b) in pairs {
        let ak = &a * &kq;
        let bk = &b * &kq;
        for v in [(&ak, &a), (&bk, &b)] {
            if !is_integer(v.0) {
                return Err(GeometryError::GridMisaligned {
                    value: v.1.clone(),
                    k,
                });
            }
        }
        out.push((crate::scalar::floor_i64(&ak), crate::scalar::floor_i64(&bk)));
    }
    Ok(out)
}

/// Identifier of a compact pair within an index system.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Label(pub String);

impl Label {
    pub fn new(s: impl Into<String>) -> Self {
        Label(s.into())
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_string())
    }
}

/// A compact pair `(N, L)` with `L ⊆ N`, both closures of their interiors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompactPair {
    pub label: Label,
    n: RegionSet,
    l: RegionSet,
}

impl CompactPair {
    pub fn new(label: Label, n: RegionSet, l: RegionSet) -> Result<Self, GeometryError> {
        if n.space() != l.space() {
            return Err(GeometryError::SpaceMismatch);
        }
        for set in [&n, &l] {
            check_regular(set)?;
        }
        if !l.is_subset_of(&n)? {
            return Err(GeometryError::LNotContained {
                label: label.0.clone(),
            });
        }
        Ok(CompactPair { label, n, l })
    }

    pub fn n(&self) -> &RegionSet {
        &self.n
    }

    pub fn l(&self) -> &RegionSet {
        &self.l
    }

    pub fn space(&self) -> Space {
        self.n.space()
    }

    /// The core `cl(N \ L)`: the part of `N` carrying the invariant dynamics.
    pub fn core(&self) -> RegionSet {
        match (&self.n, &self.l) {
            (RegionSet::Line(n), RegionSet::Line(l)) => {
                RegionSet::Line(line::closure_of_difference(n, l))
            }
            (RegionSet::Circle(n), RegionSet::Circle(l)) => {
                RegionSet::Circle(circle::closure_of_difference(n, l))
            }
            (RegionSet::Square(n), RegionSet::Square(l)) => {
                RegionSet::Square(n.difference(l).expect("same space by invariant"))
            }
            _ => unreachable!("space checked at construction"),
        }
    }

    /// Same sets under a different label.
    pub fn relabeled(&self, label: Label) -> CompactPair {
        CompactPair {
            label,
            n: self.n.clone(),
            l: self.l.clone(),
        }
    }
}

/// The closure-of-interior invariant: no degenerate cells.
fn check_regular(set: &RegionSet) -> Result<(), GeometryError> {
    match set {
        RegionSet::Line(cells) => {
            for (a, b) in cells {
                if a == b {
                    return Err(GeometryError::DegenerateCell { at: a.clone() });
                }
            }
        }
        RegionSet::Circle(circle_set) => {
            if !circle_set.is_full() {
                for arc in circle_set.arcs() {
                    if arc.len == int(0) {
                        return Err(GeometryError::DegenerateCell {
                            at: arc.start.clone(),
                        });
                    }
                }
            }
        }
        RegionSet::Square(_) => {}
    }
    Ok(())
}

/// The core of a pair; free-function form of [`CompactPair::core`].
pub fn pair_core(pair: &CompactPair) -> RegionSet {
    pair.core()
}
