//! Grid-quantized subsets of the square.
//!
//! Square-space sets are unions of closed axis-aligned boxes on a uniform
//! grid of step `1/k`. The square may sit over the line (indices in `Z`) or
//! over the circle (indices in `Z/k`, boxes wrap). Quantization guarantees
//! that cross-sections take finitely many distinct values.

use std::collections::{BTreeMap, BTreeSet};

use crate::geometry::GeometryError;
use crate::scalar::{int, is_integer, Scalar};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum SquareBase {
    Line,
    Circle,
}

pub type GridBox = (i64, i64);

/// Closed rectangle with rational corners, used for exact image geometry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rect {
    pub x: (Scalar, Scalar),
    pub y: (Scalar, Scalar),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GridSet {
    base: SquareBase,
    k: u64,
    boxes: BTreeSet<GridBox>,
}

impl GridSet {
    pub fn empty(base: SquareBase, k: u64) -> Result<Self, GeometryError> {
        if k == 0 || (base == SquareBase::Circle && k < 3) {
            return Err(GeometryError::BadGrid { k });
        }
        Ok(GridSet {
            base,
            k,
            boxes: BTreeSet::new(),
        })
    }

    pub fn from_boxes<I: IntoIterator<Item = GridBox>>(
        base: SquareBase,
        k: u64,
        iter: I,
    ) -> Result<Self, GeometryError> {
        let mut set = Self::empty(base, k)?;
        for b in iter {
            set.insert(b);
        }
        Ok(set)
    }

    pub fn base(&self) -> SquareBase {
        self.base
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn step(&self) -> Scalar {
        crate::scalar::rat(1, self.k as i64)
    }

    pub fn canon(&self, b: GridBox) -> GridBox {
        match self.base {
            SquareBase::Line => b,
            SquareBase::Circle => {
                let k = self.k as i64;
                (b.0.rem_euclid(k), b.1.rem_euclid(k))
            }
        }
    }

    pub fn insert(&mut self, b: GridBox) {
        let b = self.canon(b);
        self.boxes.insert(b);
    }

    pub fn contains(&self, b: GridBox) -> bool {
        self.boxes.contains(&self.canon(b))
    }

    pub fn boxes(&self) -> impl Iterator<Item = GridBox> + '_ {
        self.boxes.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    fn check_compatible(&self, other: &GridSet) -> Result<(), GeometryError> {
        if self.base != other.base || self.k != other.k {
            return Err(GeometryError::SpaceMismatch);
        }
        Ok(())
    }

    pub fn union(&self, other: &GridSet) -> Result<GridSet, GeometryError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.boxes.extend(other.boxes.iter().copied());
        Ok(out)
    }

    pub fn difference(&self, other: &GridSet) -> Result<GridSet, GeometryError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.boxes = out.boxes.difference(&other.boxes).copied().collect();
        Ok(out)
    }

    pub fn shared_boxes(&self, other: &GridSet) -> Result<GridSet, GeometryError> {
        self.check_compatible(other)?;
        let mut out = GridSet::empty(self.base, self.k)?;
        out.boxes = self.boxes.intersection(&other.boxes).copied().collect();
        Ok(out)
    }

    pub fn is_subset(&self, other: &GridSet) -> bool {
        self.base == other.base && self.k == other.k && self.boxes.is_subset(&other.boxes)
    }

    /// The 3x3 neighborhood of a box (including itself), wrapped on the circle.
    pub fn neighborhood(&self, b: GridBox) -> Vec<GridBox> {
        let mut out = Vec::with_capacity(9);
        for di in -1..=1 {
            for dj in -1..=1 {
                out.push(self.canon((b.0 + di, b.1 + dj)));
            }
        }
        out
    }

    /// Closed box `b` lies in the interior of the union: true iff the whole
    /// 3x3 neighborhood belongs to the set.
    pub fn deep_inside(&self, b: GridBox) -> bool {
        self.neighborhood(b).into_iter().all(|nb| self.contains(nb))
    }

    /// The closed point sets intersect: some box of `self` is equal or
    /// adjacent (sharing a face or corner) to a box of `other`.
    pub fn closed_intersects(&self, other: &GridSet) -> Result<bool, GeometryError> {
        self.check_compatible(other)?;
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        Ok(small
            .boxes()
            .any(|b| small.neighborhood(b).into_iter().any(|nb| big.contains(nb))))
    }

    /// One-box dilation (Chebyshev ball of radius `layers`).
    pub fn fatten(&self, layers: u32) -> GridSet {
        let mut out = self.clone();
        for _ in 0..layers {
            let mut next = out.clone();
            for b in out.boxes() {
                for nb in out.neighborhood(b) {
                    next.insert(nb);
                }
            }
            out = next;
        }
        out
    }

    /// Dilation by face-adjacent boxes only (von Neumann ball). Widens a
    /// diagonal band by one box per layer where the Chebyshev ball widens
    /// it by two.
    pub fn fatten_faces(&self, layers: u32) -> GridSet {
        let mut out = self.clone();
        for _ in 0..layers {
            let mut next = out.clone();
            for (i, j) in out.boxes() {
                for nb in [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)] {
                    next.insert(out.canon(nb));
                }
            }
            out = next;
        }
        out
    }

    /// Box indices per column, sorted.
    pub fn columns(&self) -> BTreeMap<i64, Vec<i64>> {
        let mut out: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for (i, j) in self.boxes() {
            out.entry(i).or_default().push(j);
        }
        out
    }

    pub fn column(&self, i: i64) -> Vec<i64> {
        let i = match self.base {
            SquareBase::Line => i,
            SquareBase::Circle => i.rem_euclid(self.k as i64),
        };
        self.boxes()
            .filter(|(bi, _)| *bi == i)
            .map(|(_, j)| j)
            .collect()
    }

    /// The closed cell `[i/k, (i+1)/k]` of a 1-D grid index.
    pub fn index_cell(&self, i: i64) -> (Scalar, Scalar) {
        let step = self.step();
        (&step * int(i), step * int(i + 1))
    }
}

/// 1-D grid indices whose closed cell `[i/k, (i+1)/k]` meets the closed
/// interval `[lo, hi]`.
pub(crate) fn touching_indices(
    lo: &Scalar,
    hi: &Scalar,
    k: u64,
    base: SquareBase,
) -> Vec<i64> {
    debug_assert!(lo <= hi);
    let kq = int(k as i64);
    let lo_k = lo * &kq;
    let hi_k = hi * &kq;
    let i_min = if is_integer(&lo_k) {
        crate::scalar::floor_i64(&lo_k) - 1
    } else {
        crate::scalar::floor_i64(&lo_k)
    };
    let i_max = crate::scalar::floor_i64(&hi_k);
    collect_indices(i_min, i_max, k, base)
}

/// 1-D grid indices whose open cell `(i/k, (i+1)/k)` meets `[lo, hi]`.
pub(crate) fn interior_indices(
    lo: &Scalar,
    hi: &Scalar,
    k: u64,
    base: SquareBase,
) -> Vec<i64> {
    debug_assert!(lo <= hi);
    let kq = int(k as i64);
    let lo_k = lo * &kq;
    let hi_k = hi * &kq;
    if lo == hi {
        return if is_integer(&lo_k) {
            Vec::new()
        } else {
            collect_indices(
                crate::scalar::floor_i64(&lo_k),
                crate::scalar::floor_i64(&lo_k),
                k,
                base,
            )
        };
    }
    let i_min = crate::scalar::floor_i64(&lo_k);
    let i_max = if is_integer(&hi_k) {
        crate::scalar::floor_i64(&hi_k) - 1
    } else {
        crate::scalar::floor_i64(&hi_k)
    };
    collect_indices(i_min, i_max, k, base)
}

fn collect_indices(i_min: i64, i_max: i64, k: u64, base: SquareBase) -> Vec<i64> {
    match base {
        SquareBase::Line => (i_min..=i_max).collect(),
        SquareBase::Circle => {
            let k = k as i64;
            if i_max - i_min + 1 >= k {
                (0..k).collect()
            } else {
                let mut out: Vec<i64> = (i_min..=i_max).map(|i| i.rem_euclid(k)).collect();
                out.sort_unstable();
                out.dedup();
                out
            }
        }
    }
}

/// All boxes whose closed box meets the closed rectangle.
pub(crate) fn boxes_touching_rect(rect: &Rect, k: u64, base: SquareBase) -> Vec<GridBox> {
    let xs = touching_indices(&rect.x.0, &rect.x.1, k, base);
    let ys = touching_indices(&rect.y.0, &rect.y.1, k, base);
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &i in &xs {
        for &j in &ys {
            out.push((i, j));
        }
    }
    out
}

/// All boxes whose interior meets the closed rectangle.
pub(crate) fn boxes_meeting_rect_interior(rect: &Rect, k: u64, base: SquareBase) -> Vec<GridBox> {
    let xs = interior_indices(&rect.x.0, &rect.x.1, k, base);
    let ys = interior_indices(&rect.y.0, &rect.y.1, k, base);
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &i in &xs {
        for &j in &ys {
            out.push((i, j));
        }
    }
    out
}
